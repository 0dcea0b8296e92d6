//! Scattering state of a Gaussian potential: values near the origin, the
//! Lippmann-Schwinger residual, and the approach to the far field.

use num_complex::Complex64;
use scatter_core::profile::PotentialSpec;
use scatter_core::wave::{ls_residual, ScatteringState};

fn main() -> scatter_core::Result<()> {
    let spec = PotentialSpec::gaussian(0.1, 0.5)?;
    let state = ScatteringState::new(&spec, [0.0, 0.0, 1.0])?;
    let f = state.far_field_amplitude()?;
    println!("D = {:.8}, f = {:.8}", state.d, f);

    for x in [[0.0, 0.0, 0.0], [1.0, 0.0, 0.5], [0.0, 2.0, -1.0]] {
        println!(
            "psi({x:?}) = {:.8}, residual {:.1e}",
            state.psi(x)?,
            ls_residual(&state, x)?
        );
    }
    for r in [5.0, 10.0, 50.0, 200.0] {
        let x = [r, 0.0, 0.0];
        let far = Complex64::from_polar(1.0, 0.0) + f * Complex64::from_polar(1.0 / r, r);
        println!(
            "r = {r:>5}: |psi - far field| = {:.2e}",
            (state.psi(x)? - far).norm()
        );
    }
    Ok(())
}
