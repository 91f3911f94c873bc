//! Experiment drivers: random linear fields, color images and direct
//! detection on field files. Each returns an [`ExperimentReport`] that
//! renders as CSV.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Duration;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::detect::{residual_error, Algorithm, DetectionResult, DetectorConfig};
use crate::error::{Error, Result};
use crate::field::{field_coefficient_error, LinearField, RotationSpec, VectorField};
use crate::ga3::Bivector3;
use crate::imageio::{distort_color_space, field_to_image, image_to_field, RgbImage};

pub const SYNTH_HEADER: &str = "iterations,abs_error,error_per_coeff,seconds";
pub const IMAGE_HEADER: &str = "iterations,abs_error,error_per_pixel,seconds";

/// Checkpoints used when none are given.
pub fn default_checkpoints(algorithm: Algorithm) -> Vec<usize> {
    match algorithm {
        Algorithm::Plain => vec![0, 1, 10, 100, 1000],
        Algorithm::Accelerated => vec![0, 1, 2, 3, 4],
    }
}

/// Parse `"0,1,10"` into a strictly increasing list.
pub fn parse_checkpoints(s: &str) -> Result<Vec<usize>> {
    let list = s
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| Error::arg(format!("bad checkpoint {t:?}")))
        })
        .collect::<Result<Vec<_>>>()?;
    validate_checkpoints(&list)?;
    Ok(list)
}

fn validate_checkpoints(list: &[usize]) -> Result<()> {
    if list.is_empty() {
        return Err(Error::arg("checkpoint list is empty"));
    }
    if list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::arg("checkpoints must be strictly increasing"));
    }
    Ok(())
}

/// Plane of rotation from an axis name (`red`, `green`, `blue`), a basis
/// blade (`e12`, `-e13`, ...) or three comma-separated components
/// `b12,b13,b23`, which are normalized.
pub fn parse_plane(s: &str) -> Result<Bivector3> {
    let t = s.trim().to_ascii_lowercase();
    let (neg, name) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t.as_str()),
    };
    let named = match name {
        "red" | "e23" => Some(Bivector3::E23),
        "green" | "e13" => Some(Bivector3::E13),
        "blue" | "e12" => Some(Bivector3::E12),
        _ => None,
    };
    if let Some(b) = named {
        return Ok(if neg { -b } else { b });
    }
    let parts: Vec<f64> = t
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Error::arg(format!("unrecognized plane {s:?}")))?;
    let [b12, b13, b23] = parts[..] else {
        return Err(Error::arg(format!("plane {s:?} needs three components")));
    };
    Bivector3 { b12, b13, b23 }
        .normalized()
        .ok_or_else(|| Error::arg(format!("plane {s:?} is zero")))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReportRow {
    pub iterations: usize,
    pub abs_error: f64,
    /// Error per coefficient or per pixel.
    pub relative_error: f64,
    pub seconds: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentReport {
    pub header: &'static str,
    pub rows: Vec<ReportRow>,
    /// Every detection run hit its tolerance before the iteration cap.
    pub converged: bool,
}

impl ExperimentReport {
    pub fn to_csv(&self) -> String {
        let mut out = format!("{}\n", self.header);
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{:e},{:e},{:.6}",
                r.iterations, r.abs_error, r.relative_error, r.seconds
            );
        }
        out
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_csv()).map_err(|e| Error::io(path, e))
    }
}

fn seconds(d: Duration, timing: bool) -> f64 {
    if timing {
        d.as_secs_f64()
    } else {
        0.0
    }
}

#[derive(Clone, Debug)]
pub struct SynthParams {
    pub trials: usize,
    pub resolution: usize,
    pub checkpoints: Vec<usize>,
    pub seed: u64,
    pub algorithm: Algorithm,
    pub epsilon: f64,
    pub max_iterations: usize,
    /// Forces the rotation plane; random otherwise.
    pub plane: Option<Bivector3>,
    /// Forces the rotation angle; random otherwise.
    pub angle: Option<f64>,
    /// Record wall-clock seconds; with `false` the column is zero and the
    /// CSV is reproducible byte for byte.
    pub timing: bool,
}

impl SynthParams {
    pub fn new(trials: usize, resolution: usize, algorithm: Algorithm) -> Self {
        SynthParams {
            trials,
            resolution,
            checkpoints: default_checkpoints(algorithm),
            seed: 0,
            algorithm,
            epsilon: DetectorConfig::default().epsilon,
            max_iterations: DetectorConfig::default().max_iterations,
            plane: None,
            angle: None,
            timing: true,
        }
    }
}

/// The field and rotation of one synthetic trial.
pub fn synth_trial(
    seed: u64,
    trial: usize,
    plane: Option<Bivector3>,
    angle: Option<f64>,
) -> Result<(LinearField, RotationSpec)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    let field = LinearField::random(&mut rng);
    let random = RotationSpec::random(&mut rng);
    let rot = RotationSpec::new(plane.unwrap_or(random.plane), angle.unwrap_or(random.angle))?;
    Ok((field, rot))
}

/// Mean coefficient error over random linear fields at each checkpoint.
pub fn cmd_synth(p: &SynthParams) -> Result<ExperimentReport> {
    if p.trials == 0 {
        return Err(Error::arg("trials must be at least 1"));
    }
    validate_checkpoints(&p.checkpoints)?;
    let cfg = DetectorConfig::default()
        .with_epsilon(p.epsilon)
        .with_max_iterations(p.max_iterations)
        .with_checkpoints(p.checkpoints.clone());

    let per_trial: Vec<(Vec<(f64, f64)>, bool)> = (0..p.trials)
        .into_par_iter()
        .map(|t| {
            let (field, rot) = synth_trial(p.seed, t, p.plane, p.angle)?;
            let v = field.sample(p.resolution)?;
            let u = field.rotated(&rot).sample(p.resolution)?;
            let res = p.algorithm.run(&v, &u, &cfg)?;
            let rows = p
                .checkpoints
                .iter()
                .map(|&k| {
                    let (f, t) = state(&res, &u, k);
                    Ok((field_coefficient_error(f, &field)?, seconds(t, p.timing)))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok((rows, res.converged))
        })
        .collect::<Result<_>>()?;

    let n = p.trials as f64;
    let rows = p
        .checkpoints
        .iter()
        .enumerate()
        .map(|(i, &k)| {
            let abs = per_trial.iter().map(|(r, _)| r[i].0).sum::<f64>() / n;
            let secs = per_trial.iter().map(|(r, _)| r[i].1).sum::<f64>() / n;
            ReportRow {
                iterations: k,
                abs_error: abs,
                relative_error: abs / 9.0,
                seconds: secs,
            }
        })
        .collect();
    Ok(ExperimentReport {
        header: SYNTH_HEADER,
        rows,
        converged: per_trial.iter().all(|(_, c)| *c),
    })
}

fn state<'a>(
    res: &'a DetectionResult,
    initial: &'a VectorField,
    k: usize,
) -> (&'a VectorField, Duration) {
    if k == 0 {
        return (initial, Duration::ZERO);
    }
    res.state_at(k)
        .expect("checkpoints are passed to the detector")
}

#[derive(Clone, Debug)]
pub struct ImageParams {
    pub input: PathBuf,
    pub plane: Bivector3,
    pub angle: f64,
    pub checkpoints: Vec<usize>,
    pub algorithm: Algorithm,
    pub epsilon: f64,
    pub max_iterations: usize,
    pub outdir: PathBuf,
    pub timing: bool,
}

#[derive(Clone, Debug)]
pub struct ImageOutcome {
    pub report: ExperimentReport,
    pub detection: DetectionResult,
}

/// Distort the colors of a PPM image, detect and undo the distortion.
///
/// Writes `distorted.ppm`, `restored_{k}.ppm` per checkpoint and
/// `errors.csv` into `outdir`.
pub fn cmd_image(p: &ImageParams) -> Result<ImageOutcome> {
    validate_checkpoints(&p.checkpoints)?;
    let img = RgbImage::read_ppm(&p.input)?;
    let rot = RotationSpec::new(p.plane, p.angle)?;
    let v = image_to_field(&img)?;
    let u = distort_color_space(&v, &rot);
    std::fs::create_dir_all(&p.outdir).map_err(|e| Error::io(&p.outdir, e))?;
    field_to_image(&u)?.write_ppm(p.outdir.join("distorted.ppm"))?;

    let cfg = DetectorConfig::default()
        .with_epsilon(p.epsilon)
        .with_max_iterations(p.max_iterations)
        .with_checkpoints(p.checkpoints.clone());
    let res = p.algorithm.run(&v, &u, &cfg)?;

    let mut rows = Vec::with_capacity(p.checkpoints.len());
    for &k in &p.checkpoints {
        let (f, t) = state(&res, &u, k);
        field_to_image(f)?.write_ppm(p.outdir.join(format!("restored_{k}.ppm")))?;
        let r = residual_error(f, &v)?;
        rows.push(ReportRow {
            iterations: k,
            abs_error: r.absolute,
            relative_error: r.per_sample,
            seconds: seconds(t, p.timing),
        });
    }
    let report = ExperimentReport {
        header: IMAGE_HEADER,
        rows,
        converged: res.converged,
    };
    report.write_csv(p.outdir.join("errors.csv"))?;
    Ok(ImageOutcome {
        report,
        detection: res,
    })
}

/// Detect the outer rotation taking the field in `reference` to the one in
/// `rotated`.
pub fn cmd_detect(
    rotated: impl AsRef<Path>,
    reference: impl AsRef<Path>,
    algorithm: Algorithm,
    cfg: &DetectorConfig,
) -> Result<DetectionResult> {
    let u = VectorField::read(rotated)?;
    let v = VectorField::read(reference)?;
    algorithm.run(&v, &u, cfg)
}

/// Text summary printed by the `detect` subcommand.
pub fn detection_summary(res: &DetectionResult) -> String {
    let d = res.distortion();
    format!(
        "angle {}\nplane {} {} {}\niterations {}\nconverged {}\n",
        d.angle, d.plane.b12, d.plane.b13, d.plane.b23, res.iterations, res.converged
    )
}
