//! Apply `S` to a Lorentzian with the FFT backend and compare with the
//! exact transform and with principal-value quadrature.

use num_complex::Complex64;
use scatter_core::grid::{SampledFunction, UniformGrid};
use scatter_core::singular::{apply_s_pv, ApplyS, SingularOperator};

fn main() -> scatter_core::Result<()> {
    let grid = UniformGrid::new(100.0, 1 << 14)?;
    let lorentz = |y: f64| 1.0 / (1.0 + y * y);
    let phi = SampledFunction::from_real_fn(grid, lorentz);

    let periodic = SingularOperator::new(grid).apply(&phi);
    let line = SingularOperator::new(grid)
        .with_line_correction(true)
        .apply(&phi);

    println!(
        "{:>6} {:>14} {:>14} {:>14} {:>14}",
        "x", "exact", "periodic", "line", "pv"
    );
    for target in [0.0, 0.5, 1.0, 2.0, 5.0, 10.0] {
        let j = grid.index_at_or_above(target);
        let x = grid.point(j);
        let exact = Complex64::new(0.0, x / (1.0 + x * x));
        let pv = apply_s_pv(lorentz, x, None)?;
        println!(
            "{x:>6.2} {:>14.9} {:>14.9} {:>14.9} {:>14.9}",
            exact.im,
            periodic.values()[j].im,
            line.values()[j].im,
            pv.im
        );
    }
    Ok(())
}
