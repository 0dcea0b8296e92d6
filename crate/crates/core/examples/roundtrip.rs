//! The `roundtrip` pipeline run in-process, writing its report to a
//! temporary directory.

use scatter_core::pipeline::{
    run, Command, GridConfig, Method, ProfileConfig, ProfileKind, RunConfig, SolverConfig,
};

fn main() {
    let out = std::env::temp_dir().join("scatter-roundtrip-example");
    let config = RunConfig {
        command: Command::Roundtrip,
        profile: Some(ProfileConfig {
            kind: ProfileKind::Gaussian,
            alpha: 0.5,
            mu: 1.0,
            table: None,
            lambda: 0.1,
        }),
        grid: Some(GridConfig {
            l: 100.0,
            n: 1 << 14,
        }),
        solver: SolverConfig {
            method: Method::Collocation,
            ..SolverConfig::default()
        },
        wave: None,
        input: None,
        out: out.clone(),
        force: false,
    };
    let outcome = run(&config);
    println!("exit code {}", outcome.exit_code);
    if let Some(report) = outcome.report {
        println!("metrics {:?}", report.metrics);
        println!("solver {:?}", report.solver);
    }
    println!("report written to {}", out.join("report.json").display());
}
