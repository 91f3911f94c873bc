//! Rotate the colors of a synthetic picture about the red axis and restore
//! it. Output goes to the directory given as the first argument, or a
//! subdirectory of the system temp dir.

use std::path::PathBuf;

use geocorr::detect::Algorithm;
use geocorr::experiment::{cmd_image, default_checkpoints, ImageParams};
use geocorr::ga3::Bivector3;
use geocorr::imageio::synthetic_image;

fn main() -> geocorr::Result<()> {
    let outdir = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("geocorr-color"));
    std::fs::create_dir_all(&outdir).map_err(|e| geocorr::Error::Io {
        path: outdir.clone(),
        source: e,
    })?;
    let input = outdir.join("original.ppm");
    synthetic_image(256, 256, 0)?.write_ppm(&input)?;

    for alg in [Algorithm::Plain, Algorithm::Accelerated] {
        let p = ImageParams {
            input: input.clone(),
            plane: Bivector3::E23,
            angle: 1.7,
            checkpoints: default_checkpoints(alg),
            algorithm: alg,
            epsilon: 1e-10,
            max_iterations: 5000,
            outdir: outdir.join(format!("alg{}", alg.number())),
            timing: true,
        };
        let out = cmd_image(&p)?;
        let d = out.detection.distortion();
        println!(
            "algorithm {}: angle {:.8}, plane {:?}",
            alg.number(),
            d.angle,
            d.plane.to_array()
        );
        println!("{}", out.report.to_csv());
    }
    println!("images written to {}", outdir.display());
    Ok(())
}
