//! Acceptance suite. Runs every criterion, prints one line each and fails
//! the process if any criterion fails.

mod common;

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use geocorr::corr::correlate_origin;
use geocorr::detect::{
    algorithm1, algorithm2, misalignment, residual_error, Algorithm, DetectorConfig,
};
use geocorr::experiment::{cmd_synth, synth_trial, SynthParams};
use geocorr::field::{apply_outer_rotation, RotationSpec, VectorField};
use geocorr::ga3::{exp_bivector, sandwich, Bivector3, Multivector3};
use geocorr::imageio::{distort_color_space, field_to_image, image_to_field, synthetic_image};

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn closed_form() -> Outcome {
    let start = Instant::now();
    let expect = Multivector3::ONE * 4.0 - Multivector3::E13 * 4.0;
    let rot = RotationSpec::new(Bivector3::E13, FRAC_PI_2).unwrap();
    let mut worst: f64 = 0.0;
    for res in [8, 16, 32] {
        let v = VectorField::half_split(res, [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]).unwrap();
        let c = correlate_origin(&apply_outer_rotation(&v, &rot), &v).unwrap();
        worst = worst
            .max(c.raw.max_abs_diff(&expect))
            .max((c.angle - FRAC_PI_4).abs())
            .max((c.plane + Bivector3::E13).norm());
    }
    let t = start.elapsed();
    check(
        worst <= 1e-12 && t < Duration::from_secs(1),
        format!("max deviation {worst:.1e} at resolutions 8/16/32, {t:.2?}"),
    )
}

fn wrong_plane() -> Outcome {
    let v = VectorField::half_split(16, [1.0, 1.0, 0.0], [0.0, 1.0, 0.0]).unwrap();
    let rot = RotationSpec::new(Bivector3::E13, FRAC_PI_2).unwrap();
    let c = correlate_origin(&apply_outer_rotation(&v, &rot), &v).unwrap();
    let diag = common::unit_plane([1.0, 1.0, 1.0]).unwrap();
    let plane_err = (c.plane - diag).norm().min((c.plane + diag).norm());
    let angle_err = (c.angle - (3f64.sqrt() / 2.0).atan()).abs();
    check(
        plane_err <= 1e-10 && angle_err <= 1e-10,
        format!(
            "plane {:?}, angle {:.12} (errors {plane_err:.1e}, {angle_err:.1e})",
            c.plane.to_array(),
            c.angle
        ),
    )
}

fn table1() -> Outcome {
    const REFERENCE: [f64; 4] = [0.436, 0.102, 0.004, 1e-5];
    let start = Instant::now();
    let p = SynthParams::new(1000, 32, Algorithm::Plain);
    let report = cmd_synth(&p).map_err(|e| e.to_string())?;
    let t = start.elapsed();
    let got: Vec<f64> = report.rows.iter().map(|r| r.relative_error).collect();
    let within = REFERENCE
        .iter()
        .zip(&got)
        .all(|(p, g)| (0.1..=10.0).contains(&(g / p)));
    let last = got[4] <= 1e-10;
    let text: Vec<String> = got.iter().map(|g| format!("{g:.2e}")).collect();
    check(
        within && last && t <= Duration::from_secs(300),
        format!(
            "1000 trials, resolution 32: error per coefficient [{}], {t:.1?}",
            text.join(", ")
        ),
    )
}

/// Random (field, rotation) pairs at resolution 4 with the angle drawn from
/// `[0, π - 0.01]`, detected by algorithm 1 at ε = 1e-10.
fn lemma_and_theorem_runs() -> Vec<(RotationSpec, geocorr::detect::DetectionResult)> {
    let cfg = DetectorConfig::default()
        .with_epsilon(1e-10)
        .with_max_iterations(5000);
    (0..200)
        .map(|t| {
            let (field, random) = synth_trial(2024, t, None, None).unwrap();
            let angle = random.angle * (PI - 0.01) / PI;
            let rot = RotationSpec::new(random.plane, angle).unwrap();
            let v = field.sample(4).unwrap();
            let u = field.rotated(&rot).sample(4).unwrap();
            (rot, algorithm1(&v, &u, &cfg).unwrap())
        })
        .collect()
}

fn monotonicity(runs: &[(RotationSpec, geocorr::detect::DetectionResult)]) -> Outcome {
    let mut violations = 0;
    let mut steps = 0;
    for (rot, res) in runs {
        let mut prev = rot.angle;
        for rec in &res.trace {
            let m = misalignment(rot, &rec.total);
            if m > prev + 1e-8 {
                violations += 1;
            }
            prev = m;
            steps += 1;
        }
    }
    check(
        violations == 0,
        format!("{violations} increases over {steps} iterations of 200 seeds"),
    )
}

fn convergence(runs: &[(RotationSpec, geocorr::detect::DetectionResult)]) -> Outcome {
    let failures = runs.iter().filter(|(_, r)| !r.converged).count();
    let worst = runs.iter().map(|(_, r)| r.iterations).max().unwrap_or(0);
    let max_alpha = runs.iter().map(|(r, _)| r.angle).fold(0.0, f64::max);
    check(
        failures == 0,
        format!(
            "{failures} failures of 200, worst {worst} iterations, largest angle {max_alpha:.4}"
        ),
    )
}

fn half_turn() -> Outcome {
    let v = VectorField::cube(4, |x| [1.0, 0.0, x[2]]).unwrap();
    let rot = RotationSpec::new(Bivector3::E12, PI).unwrap();
    let u = apply_outer_rotation(&v, &rot);
    let res = algorithm1(&v, &u, &DetectorConfig::default().with_epsilon(1e-8)).unwrap();
    let disturbed = res.trace.first().is_some_and(|r| r.disturbed);
    let d = res.distortion();
    let angle_err = (d.angle - PI).abs();
    let left = misalignment(&rot, &res.correction());
    check(
        disturbed && res.converged && angle_err <= 1e-8 && left <= 1e-8,
        format!(
            "disturbed {disturbed}, converged {} in {} iterations, angle error {angle_err:.1e}, residual rotation {left:.1e}",
            res.converged, res.iterations
        ),
    )
}

fn planar() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst: f64 = 0.0;
    let mut most = 0;
    for _ in 0..50 {
        let c: [f64; 6] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        let v = VectorField::cube(6, |x| {
            [
                c[0] * x[0] + c[1] * x[1] + c[2] * x[2],
                c[3] * x[0] + c[4] * x[1] + c[5] * x[2],
                0.0,
            ]
        })
        .unwrap();
        let rot = RotationSpec::new(Bivector3::E12, rng.gen_range(0.0..PI - 0.01)).unwrap();
        let u = apply_outer_rotation(&v, &rot);
        let res = algorithm1(&v, &u, &DetectorConfig::default()).unwrap();
        worst = worst.max(misalignment(&rot, &res.trace[0].total));
        most = most.max(res.iterations);
    }
    check(
        worst <= 1e-8 && most <= 2,
        format!("angle error after the first iteration {worst:.1e} over 50 fields; at most {most} correlations"),
    )
}

fn first_at(errors: &[f64], bar: f64) -> Option<usize> {
    errors.iter().position(|&e| e <= bar).map(|i| i + 1)
}

fn acceleration() -> Outcome {
    let img = synthetic_image(256, 256, 0).unwrap();
    let v = image_to_field(&img).unwrap();
    let u = distort_color_space(&v, &RotationSpec::new(Bivector3::E23, 1.7).unwrap());
    let n = v.len() as f64;
    let cfg = DetectorConfig::default().with_epsilon(1e-12);
    let per_pixel = |r: &geocorr::detect::DetectionResult| -> Vec<f64> {
        r.trace.iter().map(|t| t.residual / n).collect()
    };
    let e2 = per_pixel(&algorithm2(&v, &u, &cfg).unwrap());
    let e1 = per_pixel(&algorithm1(&v, &u, &cfg).unwrap());
    let at4 = e2.iter().take(4).copied().fold(f64::INFINITY, f64::min);
    let (n2, n1) = (first_at(&e2, 1e-4), first_at(&e1, 1e-4));
    let ratio_ok = matches!((n2, n1), (Some(a), Some(b)) if 10 * a <= b);
    check(
        at4 <= 1e-6 && ratio_ok,
        format!("algorithm 2 per-pixel error by iteration 4: {at4:.1e}; iterations to 1e-4: algorithm 2 {n2:?}, algorithm 1 {n1:?}"),
    )
}

fn algebra_oracles() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut prod: f64 = 0.0;
    for _ in 0..1000 {
        let a = Multivector3::from_array(std::array::from_fn(|_| rng.gen_range(-2.0..2.0)));
        let b = Multivector3::from_array(std::array::from_fn(|_| rng.gen_range(-2.0..2.0)));
        prod = prod.max((a * b).max_abs_diff(&common::brute_product(&a, &b)));
    }
    let mut sand: f64 = 0.0;
    let mut done = 0;
    while done < 1000 {
        let Some(plane) = common::unit_plane(std::array::from_fn(|_| rng.gen_range(-1.0..1.0)))
        else {
            continue;
        };
        let angle = rng.gen_range(-PI..PI);
        let x: [f64; 3] = std::array::from_fn(|_| rng.gen_range(-3.0..3.0));
        let got = sandwich(
            &exp_bivector(plane, angle / 2.0).unwrap(),
            &Multivector3::from_vec3(x),
        )
        .unwrap();
        let want = common::oracle_rotation(&plane, angle) * nalgebra::Vector3::from(x);
        sand = sand.max(got.max_abs_diff(&Multivector3::from_vec3(want.into())));
        done += 1;
    }
    check(
        prod <= 1e-12 && sand <= 1e-10,
        format!("product deviation {prod:.1e}, sandwich deviation {sand:.1e} over 1000 cases each"),
    )
}

fn round_trip() -> Outcome {
    let mut worst = 0u8;
    let mut cases = 0;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for seed in 0..6u64 {
        let (w, h) = if seed == 0 {
            (256, 256)
        } else {
            (rng.gen_range(16..96), rng.gen_range(16..96))
        };
        let img = synthetic_image(w, h, seed).unwrap();
        let v = image_to_field(&img).unwrap();
        let rots = [
            RotationSpec::new(Bivector3::E23, 1.7).unwrap(),
            RotationSpec::random(&mut rng),
        ];
        for rot in rots {
            for alg in [Algorithm::Plain, Algorithm::Accelerated] {
                let u = distort_color_space(&v, &rot);
                let res = alg.run(&v, &u, &DetectorConfig::default()).unwrap();
                let restored = field_to_image(&res.corrected).unwrap();
                worst = worst.max(restored.max_channel_diff(&img).unwrap());
                assert!(residual_error(&res.corrected, &v).unwrap().per_sample < 1.0 / 255.0);
                cases += 1;
            }
        }
    }
    check(
        worst <= 1,
        format!("max per-channel deviation {worst} over {cases} restorations"),
    )
}

fn main() {
    let runs = lemma_and_theorem_runs();
    let criteria: Vec<Criterion> = vec![
        ("closed-form correlation", Box::new(closed_form)),
        ("wrong-plane example", Box::new(wrong_plane)),
        ("linear-field error decay", Box::new(table1)),
        ("monotonicity", Box::new(|| monotonicity(&runs))),
        ("convergence", Box::new(|| convergence(&runs))),
        ("half-turn exception", Box::new(half_turn)),
        ("planar exactness", Box::new(planar)),
        ("algorithm 2 acceleration", Box::new(acceleration)),
        ("algebra oracles", Box::new(algebra_oracles)),
        ("image round trip", Box::new(round_trip)),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let (tag, detail) = match run() {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("criterion {:2} [{tag}] {name}: {detail}", i + 1);
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
