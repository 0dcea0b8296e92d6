//! Argument parsing for the `scatter` binary.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::pipeline::{
    self, Command, GridConfig, Method, ProfileConfig, ProfileKind, RunConfig, SolverConfig,
    WaveConfig, EXIT_INPUT, EXIT_OK,
};

#[derive(Debug, Parser)]
#[command(
    name = "scatter",
    version,
    about = "Forward and inverse scattering for rank-one separable potentials"
)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Debug, Subcommand)]
enum Sub {
    /// Compute xi, D and F for a potential.
    Forward(RunArgs),
    /// Recover xi and m(q) from F.csv.
    Invert(RunArgs),
    /// Solvability diagnostics of F.csv.
    Check(RunArgs),
    /// Forward then inverse, with error metrics against the exact potential.
    Roundtrip(RunArgs),
    /// Scattering wave function at sample points.
    Wave(RunArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ProfileArg {
    Gaussian,
    Yukawa,
    Table,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MethodArg {
    Collocation,
    FixedPoint,
}

#[derive(Debug, Args)]
struct RunArgs {
    #[arg(long, value_enum)]
    profile: Option<ProfileArg>,
    /// Gaussian width parameter.
    #[arg(long, default_value_t = 0.5)]
    alpha: f64,
    /// Yukawa range parameter.
    #[arg(long, default_value_t = 1.0)]
    mu: f64,
    #[arg(long, allow_negative_numbers = true)]
    lambda: Option<f64>,
    /// Radial profile table with header r,psi.
    #[arg(long)]
    table: Option<PathBuf>,
    #[arg(long = "grid-L", default_value_t = 100.0)]
    grid_l: f64,
    #[arg(long = "grid-N", default_value_t = 16384)]
    grid_n: usize,
    #[arg(long, value_enum, default_value = "collocation")]
    method: MethodArg,
    /// Cutoff of the fixed-point iteration; defaults to the smallest contractive value.
    #[arg(long = "A")]
    a: Option<f64>,
    #[arg(long, default_value_t = 1e-2)]
    tol: f64,
    #[arg(long = "max-iter", default_value_t = 5000)]
    max_iter: usize,
    /// Tikhonov damping for the collocation solver.
    #[arg(long)]
    reg: Option<f64>,
    /// Forward data (q,re,im) for invert and check.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Solve even when the solvability conditions fail.
    #[arg(long)]
    force: bool,
    /// Wave number |k| for wave.
    #[arg(long, allow_negative_numbers = true)]
    q: Option<f64>,
    /// Incidence direction for wave, as x,y,z.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, default_values_t = [0.0, 0.0, 1.0])]
    direction: Vec<f64>,
    /// Sample points for wave, CSV with header x1,x2,x3.
    #[arg(long)]
    points: Option<PathBuf>,
    /// Report the Lippmann-Schwinger residual at each wave sample.
    #[arg(long)]
    residual: bool,
    /// Print the resolved configuration as JSON and exit.
    #[arg(long = "dump-config")]
    dump_config: bool,
}

fn resolve(command: Command, a: RunArgs) -> (RunConfig, bool) {
    let uses_profile = matches!(
        command,
        Command::Forward | Command::Roundtrip | Command::Wave
    );
    let profile = match (uses_profile, a.profile, a.lambda) {
        (true, Some(kind), Some(lambda)) => Some(ProfileConfig {
            kind: match kind {
                ProfileArg::Gaussian => ProfileKind::Gaussian,
                ProfileArg::Yukawa => ProfileKind::Yukawa,
                ProfileArg::Table => ProfileKind::Table,
            },
            alpha: a.alpha,
            mu: a.mu,
            table: a.table,
            lambda,
        }),
        _ => None,
    };
    let grid = matches!(command, Command::Forward | Command::Roundtrip).then_some(GridConfig {
        l: a.grid_l,
        n: a.grid_n,
    });
    let wave = match (command, a.q) {
        (Command::Wave, Some(q)) => Some(WaveConfig {
            q,
            direction: std::array::from_fn(|i| a.direction.get(i).copied().unwrap_or(0.0)),
            points: a.points,
            residual: a.residual,
        }),
        _ => None,
    };
    let config = RunConfig {
        command,
        profile,
        grid,
        solver: SolverConfig {
            method: match a.method {
                MethodArg::Collocation => Method::Collocation,
                MethodArg::FixedPoint => Method::FixedPoint,
            },
            a: a.a,
            tol: a.tol,
            max_iter: a.max_iter,
            reg: a.reg,
        },
        wave,
        input: a.input,
        out: a.out,
        force: a.force,
    };
    (config, a.dump_config)
}

fn missing_flags(command: Command, a: &RunArgs) -> Option<&'static str> {
    let uses_profile = matches!(
        command,
        Command::Forward | Command::Roundtrip | Command::Wave
    );
    if uses_profile && a.profile.is_none() {
        return Some("--profile is required");
    }
    if uses_profile && a.lambda.is_none() {
        return Some("--lambda is required");
    }
    if a.direction.len() != 3 {
        return Some("--direction needs three comma-separated components");
    }
    None
}

/// Parse `args`, run the command and return the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .format_timestamp(None)
        .try_init();
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    let (command, args) = match cli.command {
        Sub::Forward(a) => (Command::Forward, a),
        Sub::Invert(a) => (Command::Invert, a),
        Sub::Check(a) => (Command::Check, a),
        Sub::Roundtrip(a) => (Command::Roundtrip, a),
        Sub::Wave(a) => (Command::Wave, a),
    };
    let missing = missing_flags(command, &args);
    let (config, dump) = resolve(command, args);
    if dump {
        let text = serde_json::to_string_pretty(&config).expect("config serializes");
        let _ = writeln!(std::io::stdout(), "{text}");
        return EXIT_OK;
    }
    if let Some(m) = missing {
        eprintln!("error: {m}");
        return EXIT_INPUT;
    }
    let outcome = pipeline::run(&config);
    if let Some(m) = &outcome.message {
        if outcome.exit_code == EXIT_OK {
            log::info!("{m}");
        } else {
            eprintln!("error: {m}");
        }
    }
    outcome.exit_code
}
