//! Write two fields in the text format, read them back and detect the
//! rotation between them.

use geocorr::detect::{Algorithm, DetectorConfig};
use geocorr::experiment::{cmd_detect, detection_summary};
use geocorr::field::{apply_outer_rotation, RotationSpec, VectorField};
use geocorr::ga3::Bivector3;

fn main() -> geocorr::Result<()> {
    let dir = std::env::temp_dir().join("geocorr-fields");
    std::fs::create_dir_all(&dir).map_err(|e| geocorr::Error::Io {
        path: dir.clone(),
        source: e,
    })?;

    let v = VectorField::cube(6, |x| [x[0] + 0.3 * x[2], x[1] * x[1], 1.0 - x[0] * x[1]])?;
    let axis = Bivector3::from_axis([1.0, -2.0, 0.5])
        .normalized()
        .expect("nonzero axis");
    let u = apply_outer_rotation(&v, &RotationSpec::new(axis, 2.2)?);

    let (a, b) = (dir.join("rotated.vf"), dir.join("reference.vf"));
    u.write(&a)?;
    v.write(&b)?;
    println!("{}", v.to_text().lines().next().unwrap_or_default());

    for alg in [Algorithm::Plain, Algorithm::Accelerated] {
        let res = cmd_detect(&a, &b, alg, &DetectorConfig::default())?;
        print!("algorithm {}\n{}", alg.number(), detection_summary(&res));
    }
    println!("true plane {:?}, angle 2.2", axis.to_array());
    Ok(())
}
