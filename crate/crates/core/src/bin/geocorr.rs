use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use geocorr::detect::{Algorithm, DetectorConfig};
use geocorr::experiment::{
    cmd_detect, cmd_image, cmd_synth, default_checkpoints, detection_summary, parse_checkpoints,
    parse_plane, ImageParams, SynthParams,
};
use geocorr::Error;

#[derive(Parser)]
#[command(
    name = "geocorr",
    version,
    about = "Detect outer rotations of vector fields by geometric correlation"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Common {
    /// 1 = plain iteration, 2 = accelerated.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
    algorithm: u8,
    #[arg(long, default_value_t = 1e-10)]
    epsilon: f64,
    #[arg(long, default_value_t = 5000)]
    max_iterations: usize,
}

#[derive(Subcommand)]
enum Cmd {
    /// Random linear fields on a cube: mean coefficient error per checkpoint.
    Synth {
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 32)]
        resolution: usize,
        /// Comma-separated iteration counts.
        #[arg(long)]
        checkpoints: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Fix the rotation plane instead of drawing it.
        #[arg(long)]
        plane: Option<String>,
        /// Fix the rotation angle instead of drawing it.
        #[arg(long)]
        angle: Option<f64>,
        /// Write zero seconds so repeated runs give identical CSV.
        #[arg(long)]
        no_timing: bool,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Rotate the colors of a PPM image, then detect and undo the rotation.
    Image {
        input: PathBuf,
        /// red, green, blue, e12, -e13, ... or b12,b13,b23.
        #[arg(long, default_value = "red")]
        plane: String,
        #[arg(long, default_value_t = 1.7)]
        angle: f64,
        #[arg(long)]
        checkpoints: Option<String>,
        #[arg(long)]
        no_timing: bool,
        #[arg(long)]
        outdir: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Detect the rotation taking field B to field A (text field files).
    Detect {
        field_a: PathBuf,
        field_b: PathBuf,
        #[command(flatten)]
        common: Common,
    },
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Io { .. } | Error::Parse { .. } | Error::Ppm(_) => 3,
        Error::InvalidArgument(_) | Error::GridMismatch(_) | Error::ZeroField => 2,
    }
}

fn checkpoints(list: Option<String>, algorithm: Algorithm) -> Result<Vec<usize>, Error> {
    list.map_or_else(
        || Ok(default_checkpoints(algorithm)),
        |s| parse_checkpoints(&s),
    )
}

fn run(cli: Cli) -> Result<bool, Error> {
    match cli.cmd {
        Cmd::Synth {
            trials,
            resolution,
            checkpoints: cps,
            seed,
            plane,
            angle,
            no_timing,
            out,
            common,
        } => {
            let algorithm = Algorithm::from_number(common.algorithm)?;
            let mut p = SynthParams::new(trials, resolution, algorithm);
            p.checkpoints = checkpoints(cps, algorithm)?;
            p.seed = seed;
            p.epsilon = common.epsilon;
            p.max_iterations = common.max_iterations;
            p.plane = plane.as_deref().map(parse_plane).transpose()?;
            p.angle = angle;
            p.timing = !no_timing;
            let report = cmd_synth(&p)?;
            report.write_csv(&out)?;
            print!("{}", report.to_csv());
            Ok(report.converged)
        }
        Cmd::Image {
            input,
            plane,
            angle,
            checkpoints: cps,
            no_timing,
            outdir,
            common,
        } => {
            let algorithm = Algorithm::from_number(common.algorithm)?;
            let p = ImageParams {
                input,
                plane: parse_plane(&plane)?,
                angle,
                checkpoints: checkpoints(cps, algorithm)?,
                algorithm,
                epsilon: common.epsilon,
                max_iterations: common.max_iterations,
                outdir,
                timing: !no_timing,
            };
            let out = cmd_image(&p)?;
            print!("{}", out.report.to_csv());
            eprint!("{}", detection_summary(&out.detection));
            Ok(out.report.converged)
        }
        Cmd::Detect {
            field_a,
            field_b,
            common,
        } => {
            let algorithm = Algorithm::from_number(common.algorithm)?;
            let cfg = DetectorConfig::default()
                .with_epsilon(common.epsilon)
                .with_max_iterations(common.max_iterations);
            let res = cmd_detect(&field_a, &field_b, algorithm, &cfg)?;
            print!("{}", detection_summary(&res));
            Ok(res.converged)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("geocorr: did not converge within the iteration cap");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("geocorr: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
