//! Forward problem for the Yamaguchi potential: `ξ`, `D` by two routes,
//! the amplitude and the forward integral `F`.

use scatter_core::forward::{amplitude, compute_denominator, compute_xi, forward_F, Denominator};
use scatter_core::grid::UniformGrid;
use scatter_core::profile::PotentialSpec;
use scatter_core::singular::SingularOperator;

fn main() -> scatter_core::Result<()> {
    let spec = PotentialSpec::yamaguchi(0.1, 1.0)?;
    let grid = UniformGrid::new(64.0, 1 << 13)?;

    let xi = compute_xi(&spec, &grid)?;
    let hilbert = compute_denominator(&xi, &SingularOperator::new(grid))?;
    let exact = Denominator::closed_form_yamaguchi(0.1, 1.0, &grid);
    let f = forward_F(&xi, &hilbert)?;

    println!(
        "{:>5} {:>10} {:>24} {:>24} {:>24}",
        "q", "xi", "D (hilbert)", "D (exact)", "F"
    );
    for q in [0.0, 0.5, 1.0, 2.0, 4.0, 8.0] {
        let j = grid.index_at_or_above(q);
        println!(
            "{q:>5.1} {:>10.6} {:>24.8} {:>24.8} {:>24.8}",
            xi.at(j),
            hilbert.at(j),
            exact.at(j),
            f.values()[j]
        );
    }

    let j = grid.index_at_or_above(1.0);
    let w = [0.0, 0.0, 1.0];
    let amp = amplitude(spec.lambda, &spec.profile, hilbert.at(j), 1.0, w, w)?;
    println!(
        "f(1, w, w) = {amp:.8}, Im f - q|f|^2 = {:.2e}",
        amp.im - amp.norm_sqr()
    );
    Ok(())
}
