//! The two piecewise-constant examples where a single correlation gets the
//! rotation wrong, and how the iteration fixes it.

use std::f64::consts::FRAC_PI_2;

use geocorr::corr::correlate_origin;
use geocorr::detect::{algorithm1, DetectorConfig};
use geocorr::field::{apply_outer_rotation, RotationSpec, VectorField};
use geocorr::ga3::Bivector3;

fn main() -> geocorr::Result<()> {
    let rot = RotationSpec::new(Bivector3::E13, FRAC_PI_2)?;

    // e1 on the half x1 >= 0, e2 on the other half
    let v = VectorField::half_split(16, [1.0, 0.0, 0.0], [0.0, 1.0, 0.0])?;
    let u = apply_outer_rotation(&v, &rot);
    let c = correlate_origin(&u, &v)?;
    println!(
        "half angle: raw {}  angle {:.6}  plane {:?}",
        c.raw,
        c.angle,
        c.plane.to_array()
    );

    let v = VectorField::half_split(16, [1.0, 1.0, 0.0], [0.0, 1.0, 0.0])?;
    let u = apply_outer_rotation(&v, &rot);
    let c = correlate_origin(&u, &v)?;
    println!(
        "wrong plane: raw {}  angle {:.6}  plane {:?}",
        c.raw,
        c.angle,
        c.plane.to_array()
    );

    let res = algorithm1(&v, &u, &DetectorConfig::default())?;
    let d = res.distortion();
    println!(
        "iterated: angle {:.10} plane {:?} after {} iterations",
        d.angle,
        d.plane.to_array(),
        res.iterations
    );
    Ok(())
}
