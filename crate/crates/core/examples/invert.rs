//! Recover `ξ` and `m(q) = |√λ ψ̂₀(q)|` from forward data by collocation.

use scatter_core::forward::{compute_xi, forward_F, Denominator};
use scatter_core::grid::{l2_norm_real, UniformGrid};
use scatter_core::inverse::{
    build_sie, reconstruct_radial, solvability_report, solve_sie, SolveOptions,
};
use scatter_core::profile::PotentialSpec;
use scatter_core::singular::SingularOperator;

fn main() -> scatter_core::Result<()> {
    let grid = UniformGrid::new(100.0, 1 << 14)?;
    for lambda in [0.1, -0.1] {
        let spec = PotentialSpec::yamaguchi(lambda, 1.0)?;
        let xi = compute_xi(&spec, &grid)?;
        let f = forward_F(&xi, &Denominator::from_autocorrelation(&spec, &grid)?)?;

        let report = solvability_report(&f);
        report.require_solvable()?;
        let sol = solve_sie(
            &build_sie(&f),
            &SingularOperator::new(grid),
            &SolveOptions::default(),
        )?;

        let diff: Vec<f64> = sol
            .xi
            .real_values()
            .iter()
            .zip(xi.real_values())
            .map(|(a, b)| a - b)
            .collect();
        let err = l2_norm_real(&diff, grid.spacing()) / xi.l2_norm();
        let rec = reconstruct_radial(&sol.xi)?;
        println!(
            "lambda {lambda:+}: {} iterations, residual {:.1e}, xi error {err:.2e}, sign {:+}",
            sol.iterations, sol.residual, rec.lambda_sign
        );
        for q in [0.5, 1.0, 2.0, 5.0] {
            let j = rec.q.partition_point(|&t| t < q);
            let exact = 0.252_313_252_202_016 / (rec.q[j] * rec.q[j] + 1.0);
            println!("  m({:.4}) = {:.8}  exact {exact:.8}", rec.q[j], rec.m[j]);
        }
    }
    Ok(())
}
