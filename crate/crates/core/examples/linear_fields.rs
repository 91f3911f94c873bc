//! Random linear fields on a cube: coefficient error of both detectors after
//! a few checkpoints, for a handful of seeds.

use geocorr::detect::{misalignment, Algorithm};
use geocorr::experiment::{cmd_synth, SynthParams};

fn main() -> geocorr::Result<()> {
    for alg in [Algorithm::Plain, Algorithm::Accelerated] {
        let mut p = SynthParams::new(40, 8, alg);
        p.seed = 7;
        let report = cmd_synth(&p)?;
        println!("algorithm {}:\n{}", alg.number(), report.to_csv());
    }

    // one run in detail
    let (field, rot) = geocorr::experiment::synth_trial(7, 0, None, None)?;
    let v = field.sample(8)?;
    let u = field.rotated(&rot).sample(8)?;
    let cfg = geocorr::detect::DetectorConfig::default();
    let res = Algorithm::Accelerated.run(&v, &u, &cfg)?;
    for rec in &res.trace {
        println!(
            "iteration {:2}: step {:.3e}, remaining {:.3e}",
            rec.iteration,
            rec.applied_angle,
            misalignment(&rot, &rec.total)
        );
    }
    Ok(())
}
