//! Forward and inverse scattering for the three-dimensional Schrödinger
//! operator `H = -Δ + λ (·, ψ₀) ψ₀` with a rank-one separable potential.
//!
//! The forward direction maps a potential (coupling `λ` and radial profile
//! `ψ₀`) to its spectral density `ξ`, resolvent denominator `D`, scattering
//! amplitude `f` and forward integral `F`. The inverse direction recovers `ξ`
//! from `F` by solving a dominant Cauchy singular integral equation, after
//! checking its solvability (nonvanishing symbol, winding index, contraction
//! certificate), and rebuilds `|√λ ψ̂₀|` and the sign of `λ`.
//!
//! Module map:
//!
//! * [`grid`]: symmetric momentum grids and sampled functions.
//! * [`profile`]: profiles, radial Fourier transforms, form factors.
//! * [`singular`]: the singular operator `S` (FFT, dense, PV quadrature).
//! * [`forward`]: `ξ`, `D`, `f`, `F`.
//! * [`wave`]: Lippmann–Schwinger scattering states.
//! * [`inverse`]: solvability diagnostics, equation solvers, reconstruction.
//! * [`io`], [`pipeline`]: file formats, reports and the command pipelines
//!   behind the `scatter` binary.

pub mod cli;
pub mod error;
pub mod forward;
pub mod grid;
pub mod inverse;
pub mod io;
pub mod pipeline;
pub mod profile;
pub mod quad;
pub mod singular;
pub mod wave;

pub use error::{Error, Result};
