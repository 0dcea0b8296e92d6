//! Fixed-point inversion for a form factor supported away from the origin,
//! with its contraction certificate.

use num_complex::Complex64;
use scatter_core::forward::{compute_denominator, forward_F, Xi};
use scatter_core::grid::{l2_norm_real, UniformGrid};
use scatter_core::inverse::{contraction_factor, solve_fixed_point, FixedPointOptions};
use scatter_core::profile::{Coupling, FormFactor};
use scatter_core::singular::SingularOperator;

fn bump(q: f64) -> f64 {
    if q > 2.0 && q < 6.0 {
        0.4 * (1.0 - 4.0 / ((q - 2.0) * (6.0 - q))).exp()
    } else {
        0.0
    }
}

fn main() -> scatter_core::Result<()> {
    let grid = UniformGrid::new(64.0, 1 << 14)?;
    let op = SingularOperator::new(grid);
    let ff = FormFactor::from_fn(&grid, |q| Complex64::new(bump(q), 0.0));
    let xi = Xi::from_form_factor(Coupling::new(0.05)?, &ff)?;
    let f = forward_F(&xi, &compute_denominator(&xi, &op)?)?;

    for a in [0.5, 1.0, 2.0] {
        println!(
            "A = {a}: certificate factor {:.4}",
            contraction_factor(&f, a)
        );
    }
    let sol = solve_fixed_point(&f, 2.0, &op, &FixedPointOptions::default())?;
    let diff: Vec<f64> = sol
        .xi
        .real_values()
        .iter()
        .zip(xi.real_values())
        .map(|(a, b)| a - b)
        .collect();
    println!(
        "{} iterations, xi error {:.2e}",
        sol.iterations,
        l2_norm_real(&diff, grid.spacing()) / xi.l2_norm()
    );
    let ratios = sol.ratios();
    println!("first ratios {:.4?}", &ratios[..ratios.len().min(6)]);
    Ok(())
}
