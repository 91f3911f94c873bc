//! Multivector products, rotors, sandwiches and rotation composition.

use std::f64::consts::FRAC_PI_2;

use geocorr::ga3::{
    compose_rotation, exp_bivector, project_parallel, rotor_log, sandwich, vector_product,
    Bivector3, Multivector3,
};

fn main() -> geocorr::Result<()> {
    let uv = vector_product([1.0, 2.0, 0.0], [0.0, 1.0, 3.0]);
    println!("(e1 + 2e2)(e2 + 3e3) = {uv}");
    println!("e12 e12 = {}", Multivector3::E12 * Multivector3::E12);

    // a quarter turn in the e12 plane carries e1 to e2
    let r = exp_bivector(Bivector3::E12, FRAC_PI_2 / 2.0)?;
    let v = sandwich(&r, &Multivector3::E1)?;
    println!("quarter turn of e1 in e12: {v}");

    let polar = rotor_log(&r)?;
    println!(
        "log: half-angle {:.6} in plane {:?}",
        polar.angle,
        polar.plane.to_array()
    );

    let both = compose_rotation(FRAC_PI_2, Bivector3::E12, FRAC_PI_2, Bivector3::E13)?;
    println!(
        "two quarter turns (e12 after e13): angle {:.6}, plane {:?}",
        both.angle,
        both.plane.to_array()
    );

    let w = Multivector3::from_vec3([1.0, 1.0, 1.0]);
    println!(
        "(1,1,1) projected onto e12: {}",
        project_parallel(&w, &Bivector3::E12)?
    );
    Ok(())
}
