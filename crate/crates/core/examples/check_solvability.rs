//! Solvability diagnostics for forward data: a scattering potential, a
//! potential with a bound state, and synthetic data whose symbol passes
//! through the origin.

use std::f64::consts::PI;

use num_complex::Complex64;
use scatter_core::forward::{compute_denominator, compute_xi, forward_F, ForwardData};
use scatter_core::grid::{extend_hermitian, UniformGrid};
use scatter_core::inverse::{solvability_report, SolvabilityReport};
use scatter_core::profile::PotentialSpec;
use scatter_core::singular::SingularOperator;

fn show(label: &str, r: &SolvabilityReport) {
    println!(
        "{label:<22} min|c| {:>9.4}  winding {:>4}  sup|qF| {:>8.4}  corollary {:<5}  {}",
        r.min_abs_c,
        r.winding.map_or("-".to_owned(), |k| k.to_string()),
        r.sup_qf,
        r.corollary_ok,
        match r.require_solvable() {
            Ok(()) => "solvable".to_owned(),
            Err(e) => e.to_string(),
        }
    );
}

fn from_spec(spec: &PotentialSpec, grid: UniformGrid) -> scatter_core::Result<ForwardData> {
    let xi = compute_xi(spec, &grid)?;
    let d = compute_denominator(&xi, &SingularOperator::new(grid))?;
    forward_F(&xi, &d)
}

fn main() -> scatter_core::Result<()> {
    let grid = UniformGrid::new(100.0, 1 << 14)?;
    show(
        "yamaguchi 0.1",
        &solvability_report(&from_spec(&PotentialSpec::yamaguchi(0.1, 1.0)?, grid)?),
    );
    show(
        "gaussian -0.1 (bound)",
        &solvability_report(&from_spec(&PotentialSpec::gaussian(-0.1, 0.5)?, grid)?),
    );

    let small = UniformGrid::new(10.0, 1024)?;
    let half: Vec<Complex64> = small
        .nonneg_points()
        .iter()
        .map(|&q| Complex64::new(0.0, 2.0 * PI * q * (-(q * q - 1.0).powi(2)).exp()))
        .collect();
    let f = ForwardData::from_samples(extend_hermitian(&half, &small)?)?;
    show("origin-hitting", &solvability_report(&f));
    Ok(())
}
