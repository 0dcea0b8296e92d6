//! The Cauchy singular integral operator
//! `Sφ(x) = (1/πi) p.v.∫ φ(y)/(y - x) dy` on the real line.
//!
//! Three realizations are provided:
//!
//! * [`SingularOperator`]: the Fourier multiplier `sgn(ω)` applied with an
//!   FFT on a [`UniformGrid`]. The zero and Nyquist frequencies get
//!   multiplier 0, so `S² = I − (mean + Nyquist projections)`; for data that
//!   decays toward the grid edge the Nyquist term is negligible.
//! * [`DenseSingularOperator`]: the same discrete operator as an explicit
//!   circulant matrix built from its closed-form kernel
//!   `(2i/N) cot(πm/N)` for odd offsets `m` (zero for even `m`).
//! * [`PvOracle`]: adaptive principal-value quadrature on a callable, used
//!   as an independent check of the discrete operators.

use std::f64::consts::PI;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::grid::{sup_norm, SampledFunction, Symmetry, UniformGrid};
use crate::quad::{self, Tolerance};

/// Anything that applies the discrete `S` to grid samples.
pub trait ApplyS {
    fn grid(&self) -> &UniformGrid;
    fn apply_values(&self, values: &[Complex64]) -> Vec<Complex64>;

    fn apply(&self, phi: &SampledFunction) -> SampledFunction {
        let out = self.apply_values(phi.values());
        let sym = match phi.symmetry() {
            // S maps real even data to imaginary odd data, which is
            // Hermitian.
            Symmetry::EvenReal => Symmetry::Hermitian,
            _ => Symmetry::None,
        };
        SampledFunction::new(*phi.grid(), out)
            .expect("length preserved")
            .tagged_unchecked(sym)
    }

    /// `P = (1 + S)/2`.
    fn project_p(&self, phi: &SampledFunction) -> SampledFunction {
        half_sum(phi, &self.apply(phi), 1.0)
    }

    /// `Q = (1 - S)/2`.
    fn project_q(&self, phi: &SampledFunction) -> SampledFunction {
        half_sum(phi, &self.apply(phi), -1.0)
    }
}

fn half_sum(phi: &SampledFunction, s_phi: &SampledFunction, sign: f64) -> SampledFunction {
    let values = phi
        .values()
        .iter()
        .zip(s_phi.values())
        .map(|(a, b)| 0.5 * (a + sign * b))
        .collect();
    SampledFunction::new(*phi.grid(), values).expect("length preserved")
}

/// FFT realization of `S`.
#[derive(Clone)]
pub struct SingularOperator {
    grid: UniformGrid,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    taper: bool,
    leak_threshold: f64,
    line_correction: Option<Arc<LineCorrection>>,
    warned: Arc<AtomicBool>,
}

/// Spectrum of `iΔ k(mΔ)` with `k(u) = 1/(πu) − cot(πu/2L)/(2L)`, the
/// difference between the line kernel and the periodic kernel, set up for a
/// linear convolution of length `2N`.
struct LineCorrection {
    spectrum: Vec<Complex64>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl LineCorrection {
    fn new(grid: &UniformGrid) -> Self {
        let n = grid.len();
        let h = grid.spacing();
        let l = grid.half_width();
        let k = |m: i64| {
            if m == 0 {
                return 0.0;
            }
            let u = m as f64 * h;
            1.0 / (PI * u) - 1.0 / ((PI * u / (2.0 * l)).tan() * 2.0 * l)
        };
        let mut spectrum = vec![Complex64::new(0.0, 0.0); 2 * n];
        for t in 1..n {
            spectrum[t] = Complex64::new(0.0, h * k(t as i64));
            spectrum[2 * n - t] = Complex64::new(0.0, h * k(-(t as i64)));
        }
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(2 * n);
        let inverse = planner.plan_fft_inverse(2 * n);
        forward.process(&mut spectrum);
        let norm = 1.0 / (2 * n) as f64;
        for v in spectrum.iter_mut() {
            *v *= norm;
        }
        Self {
            spectrum,
            forward,
            inverse,
        }
    }

    fn apply(&self, values: &[Complex64]) -> Vec<Complex64> {
        let n = values.len();
        let mut buf = vec![Complex64::new(0.0, 0.0); 2 * n];
        // The unpaired -L sample would break the parity of the correction.
        buf[1..n].copy_from_slice(&values[1..]);
        self.forward.process(&mut buf);
        for (v, k) in buf.iter_mut().zip(&self.spectrum) {
            *v *= k;
        }
        self.inverse.process(&mut buf);
        buf.truncate(n);
        buf
    }
}

impl std::fmt::Debug for SingularOperator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SingularOperator")
            .field("grid", &self.grid)
            .field("taper", &self.taper)
            .field("line_correction", &self.line_correction.is_some())
            .finish()
    }
}

impl SingularOperator {
    pub fn new(grid: UniformGrid) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            grid,
            forward: planner.plan_fft_forward(grid.len()),
            inverse: planner.plan_fft_inverse(grid.len()),
            taper: false,
            leak_threshold: 1e-3,
            warned: Arc::new(AtomicBool::new(false)),
            line_correction: None,
        }
    }

    /// Replace the periodic kernel implied by the FFT with the line kernel
    /// `1/(π(x − y))` for samples inside the grid. This removes the
    /// `O(x/L²)` error from periodic images of slowly decaying data at the
    /// cost of the exact discrete involution `S² = I − mean`.
    pub fn with_line_correction(mut self, enabled: bool) -> Self {
        self.line_correction = enabled.then(|| Arc::new(LineCorrection::new(&self.grid)));
        self
    }

    pub fn has_line_correction(&self) -> bool {
        self.line_correction.is_some()
    }

    /// Multiply inputs by a raised-cosine taper on the outer 10% of the grid
    /// before transforming. Intended for noisy user data.
    pub fn with_taper(mut self, taper: bool) -> Self {
        self.taper = taper;
        self
    }

    /// Relative level on the outer 5% of the grid above which a warning is
    /// logged.
    pub fn with_leak_threshold(mut self, threshold: f64) -> Self {
        self.leak_threshold = threshold;
        self
    }

    /// The multiplier `sgn(k)` for DFT bin `k`.
    pub fn multiplier(&self, k: usize) -> f64 {
        let n = self.grid.len();
        let half = n / 2;
        if k == 0 || k == half {
            0.0
        } else if k < half {
            1.0
        } else {
            -1.0
        }
    }

    fn taper_weight(&self, j: usize) -> f64 {
        let q = self.grid.point(j).abs() / self.grid.half_width();
        let edge = 0.9;
        if q <= edge {
            1.0
        } else {
            let t = ((q - edge) / (1.0 - edge)).min(1.0);
            0.5 * (1.0 + (PI * t).cos())
        }
    }

    /// Build the explicit matrix of this operator from its closed-form
    /// kernel (independent of the FFT path).
    pub fn to_dense(&self) -> DenseSingularOperator {
        DenseSingularOperator::new(self.grid)
    }
}

/// Largest `|φ|` on the outer 5% of the grid relative to `sup |φ|`.
pub fn boundary_leak(grid: &UniformGrid, values: &[Complex64]) -> f64 {
    let scale = sup_norm(values);
    if scale == 0.0 {
        return 0.0;
    }
    let cut = 0.95 * grid.half_width();
    values
        .iter()
        .enumerate()
        .filter(|(j, _)| grid.point(*j).abs() >= cut)
        .fold(0.0_f64, |m, (_, v)| m.max(v.norm()))
        / scale
}

impl ApplyS for SingularOperator {
    fn grid(&self) -> &UniformGrid {
        &self.grid
    }

    fn apply_values(&self, values: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(
            values.len(),
            self.grid.len(),
            "sample count must match the grid"
        );
        let leak = boundary_leak(&self.grid, values);
        // Iterative solvers feed non-decaying intermediates; report once.
        if leak > self.leak_threshold && !self.taper && !self.warned.swap(true, Ordering::Relaxed) {
            log::warn!(
                "input does not decay toward the grid edge (relative level {leak:.3e}); \
                 periodization error may be significant"
            );
        }
        let mut buf: Vec<Complex64> = if self.taper {
            values
                .iter()
                .enumerate()
                .map(|(j, v)| v * self.taper_weight(j))
                .collect()
        } else {
            values.to_vec()
        };
        let correction = self.line_correction.as_ref().map(|c| c.apply(&buf));
        self.forward.process(&mut buf);
        let norm = 1.0 / self.grid.len() as f64;
        for (k, v) in buf.iter_mut().enumerate() {
            *v *= self.multiplier(k) * norm;
        }
        self.inverse.process(&mut buf);
        if let Some(c) = correction {
            for (v, d) in buf.iter_mut().zip(c) {
                *v += d;
            }
        }
        buf
    }
}

/// Explicit `N × N` matrix of the discrete `S`.
#[derive(Debug, Clone)]
pub struct DenseSingularOperator {
    grid: UniformGrid,
    matrix: DMatrix<Complex64>,
}

impl DenseSingularOperator {
    pub fn new(grid: UniformGrid) -> Self {
        let n = grid.len();
        let kernel: Vec<Complex64> = (0..n)
            .map(|m| {
                if m % 2 == 1 {
                    let c = 1.0 / (PI * m as f64 / n as f64).tan();
                    Complex64::new(0.0, 2.0 * c / n as f64)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
            .collect();
        let matrix = DMatrix::from_fn(n, n, |j, l| kernel[(j + n - l) % n]);
        Self { grid, matrix }
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }
}

impl ApplyS for DenseSingularOperator {
    fn grid(&self) -> &UniformGrid {
        &self.grid
    }

    fn apply_values(&self, values: &[Complex64]) -> Vec<Complex64> {
        let v = DVector::from_column_slice(values);
        (&self.matrix * v).as_slice().to_vec()
    }
}

/// Power-law tail model `φ(y) ≈ φ(±R) (R/|y|)^p` beyond `|y| = R`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailModel {
    pub cutoff: f64,
    pub order: u32,
}

/// Principal-value quadrature for `Sφ(x)` on a real callable.
///
/// The integral is split as `∫_{|y-x|<W} (φ(y) - φ(x))/(y - x) dy` (the
/// subtracted log term vanishes on a symmetric window) plus the two outer
/// pieces, which are either integrated to infinity or cut at the tail
/// model's radius with the remainder summed from the power-law expansion.
#[derive(Debug, Clone, Copy)]
pub struct PvOracle {
    pub tol: Tolerance,
    pub window: f64,
    pub tail: Option<TailModel>,
}

impl Default for PvOracle {
    fn default() -> Self {
        Self {
            tol: Tolerance {
                abs: 1e-13,
                rel: 1e-11,
                max_intervals: 20_000,
            },
            window: 1.0,
            tail: None,
        }
    }
}

impl PvOracle {
    pub fn with_tail(mut self, tail: TailModel) -> Self {
        self.tail = Some(tail);
        self
    }

    /// `p.v.∫ φ(y)/(y - x) dy`.
    pub fn principal_value(&self, phi: impl Fn(f64) -> f64, x: f64) -> Result<f64> {
        let w = self.window;
        let fx = phi(x);
        let diff = |y: f64| (phi(y) - fx) / (y - x);
        // Split at x so no Kronrod node lands on the removable singularity.
        let inner =
            quad::integrate(diff, x - w, x, self.tol)? + quad::integrate(diff, x, x + w, self.tol)?;
        let outer_f = |y: f64| phi(y) / (y - x);
        let outer = match self.tail {
            None => {
                quad::integrate_to_infinity(outer_f, x + w, self.tol)?
                    + quad::integrate_from_neg_infinity(outer_f, x - w, self.tol)?
            }
            Some(t) => {
                let r = t.cutoff;
                if r <= x.abs() + w {
                    return Err(Error::InvalidInput(format!(
                        "tail cutoff {r} must exceed |x| + window = {}",
                        x.abs() + w
                    )));
                }
                let body = quad::integrate(outer_f, x + w, r, self.tol)?
                    + quad::integrate(outer_f, -r, x - w, self.tol)?;
                body + tail_sum(phi(r), r, x, t.order) - tail_sum(phi(-r), r, -x, t.order)
            }
        };
        Ok(inner + outer)
    }

    /// `(Sφ)(x)`.
    pub fn apply(&self, phi: impl Fn(f64) -> f64, x: f64) -> Result<Complex64> {
        let pv = self.principal_value(phi, x)?;
        // 1/(πi) = -i/π
        Ok(Complex64::new(0.0, -pv / PI))
    }
}

/// `∫_R^∞ φ_R (R/y)^p / (y - x) dy = φ_R Σ_m (x/R)^m / (p + m)`.
fn tail_sum(phi_r: f64, r: f64, x: f64, order: u32) -> f64 {
    let ratio = x / r;
    let mut term = 1.0;
    let mut total = 0.0;
    for m in 0..200 {
        let t = term / (order as f64 + m as f64);
        total += t;
        if t.abs() < 1e-17 * total.abs() {
            break;
        }
        term *= ratio;
    }
    phi_r * total
}

/// Convenience: `S` applied with the FFT backend on a fresh plan.
pub fn apply_s(phi: &SampledFunction) -> SampledFunction {
    SingularOperator::new(*phi.grid()).apply(phi)
}

/// Convenience: [`PvOracle::apply`] with default settings.
pub fn apply_s_pv(phi: impl Fn(f64) -> f64, x: f64, tail: Option<TailModel>) -> Result<Complex64> {
    let oracle = PvOracle {
        tail,
        ..PvOracle::default()
    };
    oracle.apply(phi, x)
}
