//! Symmetric uniform momentum grids and functions sampled on them.
//!
//! A grid of half-width `L` with `N` points covers `[-L, L)` with spacing
//! `2L/N`. The point `q = 0` sits at index `N/2`, and the reflection
//! `q -> -q` maps index `j` to `(N - j) mod N`; the left endpoint `-L` is its
//! own mirror because `+L` is excluded (it is the periodic image of `-L`).

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Relative tolerance used when validating symmetry tags.
pub const SYMMETRY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformGrid {
    half_width: f64,
    count: usize,
}

impl UniformGrid {
    pub fn new(half_width: f64, count: usize) -> Result<Self> {
        if !(half_width.is_finite() && half_width > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "half-width must be positive, got {half_width}"
            )));
        }
        if count < 2 || !count.is_multiple_of(2) {
            return Err(Error::InvalidGrid(format!(
                "point count must be even and at least 2, got {count}"
            )));
        }
        Ok(Self { half_width, count })
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / self.count as f64
    }

    /// Index of `q = 0`.
    pub fn zero_index(&self) -> usize {
        self.count / 2
    }

    pub fn point(&self, j: usize) -> f64 {
        // Integer offset from the centre keeps q_{N/2} = 0 exact.
        (j as f64 - self.zero_index() as f64) * self.spacing()
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.count).map(|j| self.point(j)).collect()
    }

    /// Index of `-q_j` (index 0, i.e. `-L`, maps to itself).
    pub fn mirror(&self, j: usize) -> usize {
        (self.count - j) % self.count
    }

    /// Indices of the points with `q >= 0`, ascending.
    pub fn nonneg_indices(&self) -> std::ops::Range<usize> {
        self.zero_index()..self.count
    }

    /// Points with `q >= 0`, ascending (`0, Δ, ..., L - Δ`).
    pub fn nonneg_points(&self) -> Vec<f64> {
        self.nonneg_indices().map(|j| self.point(j)).collect()
    }

    /// Nearest grid index at or above `q`, clamped to the grid.
    pub fn index_at_or_above(&self, q: f64) -> usize {
        let raw = (q / self.spacing()).ceil() + self.zero_index() as f64;
        raw.clamp(0.0, (self.count - 1) as f64) as usize
    }
}

/// Symmetry a sampled function is declared to have.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Symmetry {
    None,
    /// `v(-q) = v(q)`, imaginary parts zero.
    EvenReal,
    /// `v(-q) = conj v(q)`.
    Hermitian,
}

impl Symmetry {
    fn name(self) -> &'static str {
        match self {
            Symmetry::None => "no",
            Symmetry::EvenReal => "even-real",
            Symmetry::Hermitian => "hermitian",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    grid: UniformGrid,
    values: Vec<Complex64>,
    symmetry: Symmetry,
}

impl SampledFunction {
    pub fn new(grid: UniformGrid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidInput(format!(
                "expected {} samples, got {}",
                grid.len(),
                values.len()
            )));
        }
        Ok(Self {
            grid,
            values,
            symmetry: Symmetry::None,
        })
    }

    pub fn zeros(grid: UniformGrid) -> Self {
        Self {
            grid,
            values: vec![Complex64::new(0.0, 0.0); grid.len()],
            symmetry: Symmetry::None,
        }
    }

    pub fn from_fn(grid: UniformGrid, f: impl Fn(f64) -> Complex64) -> Self {
        let values = grid.points().into_iter().map(f).collect();
        Self {
            grid,
            values,
            symmetry: Symmetry::None,
        }
    }

    pub fn from_real_fn(grid: UniformGrid, f: impl Fn(f64) -> f64) -> Self {
        Self::from_fn(grid, |q| Complex64::new(f(q), 0.0))
    }

    /// Declare a symmetry, checking that it holds within [`SYMMETRY_TOL`]
    /// relative to the largest sample.
    pub fn with_symmetry(mut self, symmetry: Symmetry) -> Result<Self> {
        let deviation = symmetry_deviation(&self.grid, &self.values, symmetry);
        let scale = sup_norm(&self.values).max(f64::MIN_POSITIVE);
        if deviation > SYMMETRY_TOL * scale {
            return Err(Error::SymmetryViolation {
                symmetry: symmetry.name(),
                deviation,
            });
        }
        self.symmetry = symmetry;
        Ok(self)
    }

    pub(crate) fn tagged_unchecked(mut self, symmetry: Symmetry) -> Self {
        self.symmetry = symmetry;
        self
    }

    pub fn grid(&self) -> &UniformGrid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        self.symmetry = Symmetry::None;
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn symmetry(&self) -> Symmetry {
        self.symmetry
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Samples on `q >= 0`, ascending.
    pub fn restrict_nonneg(&self) -> Vec<Complex64> {
        self.values[self.grid.zero_index()..].to_vec()
    }

    pub fn real_parts(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.re).collect()
    }

    /// Largest deviation from the given symmetry.
    pub fn symmetry_deviation(&self, symmetry: Symmetry) -> f64 {
        symmetry_deviation(&self.grid, &self.values, symmetry)
    }
}

fn symmetry_deviation(grid: &UniformGrid, values: &[Complex64], symmetry: Symmetry) -> f64 {
    let mut worst = 0.0_f64;
    // The -L sample has no +L partner on the grid and is skipped.
    for (j, v) in values.iter().enumerate().skip(1) {
        let m = values[grid.mirror(j)];
        let d = match symmetry {
            Symmetry::None => 0.0,
            Symmetry::EvenReal => (v.re - m.re).abs().max(v.im.abs()),
            Symmetry::Hermitian => (v - m.conj()).norm(),
        };
        worst = worst.max(d);
    }
    worst
}

pub(crate) fn sup_norm(values: &[Complex64]) -> f64 {
    values.iter().fold(0.0, |m, v| m.max(v.norm()))
}

/// Sum with a fixed pairwise reduction order.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    const BLOCK: usize = 32;
    if values.len() <= BLOCK {
        values.iter().sum()
    } else {
        let (l, r) = values.split_at(values.len() / 2);
        pairwise_sum(l) + pairwise_sum(r)
    }
}

/// Discrete L² norm `sqrt(Δ Σ |v|²)`.
pub fn l2_norm(values: &[Complex64], spacing: f64) -> f64 {
    let sq: Vec<f64> = values.iter().map(|v| v.norm_sqr()).collect();
    (spacing * pairwise_sum(&sq)).sqrt()
}

pub fn l2_norm_real(values: &[f64], spacing: f64) -> f64 {
    let sq: Vec<f64> = values.iter().map(|v| v * v).collect();
    (spacing * pairwise_sum(&sq)).sqrt()
}

/// Value at `+L` for half-line data that stops at `L - Δ`: linear
/// extrapolation from the last two samples.
fn edge_value(half: &[Complex64], grid: &UniformGrid) -> Complex64 {
    let m = grid.zero_index();
    if half.len() > m {
        half[m]
    } else if m >= 2 {
        half[m - 1] * 2.0 - half[m - 2]
    } else {
        half[m - 1]
    }
}

fn check_half_len(half: &[Complex64], grid: &UniformGrid) -> Result<()> {
    let m = grid.zero_index();
    if half.len() != m && half.len() != m + 1 {
        return Err(Error::InvalidInput(format!(
            "half-line data must cover the {m} nonnegative grid points (optionally plus q = L), got {}",
            half.len()
        )));
    }
    Ok(())
}

/// Extend samples given on `q >= 0` to an even real function on the grid.
pub fn extend_even(half: &[Complex64], grid: &UniformGrid) -> Result<SampledFunction> {
    check_half_len(half, grid)?;
    let scale = sup_norm(half).max(f64::MIN_POSITIVE);
    let worst_im = half.iter().fold(0.0_f64, |m, v| m.max(v.im.abs()));
    if worst_im > SYMMETRY_TOL * scale {
        return Err(Error::SymmetryViolation {
            symmetry: "even-real",
            deviation: worst_im,
        });
    }
    let m = grid.zero_index();
    let mut values = vec![Complex64::new(0.0, 0.0); grid.len()];
    for (i, v) in half.iter().take(m).enumerate() {
        values[m + i] = Complex64::new(v.re, 0.0);
        if i > 0 {
            values[m - i] = Complex64::new(v.re, 0.0);
        }
    }
    values[0] = Complex64::new(edge_value(half, grid).re, 0.0);
    Ok(SampledFunction {
        grid: *grid,
        values,
        symmetry: Symmetry::EvenReal,
    })
}

/// Real-valued convenience wrapper around [`extend_even`].
pub fn extend_even_real(half: &[f64], grid: &UniformGrid) -> Result<SampledFunction> {
    let c: Vec<Complex64> = half.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    extend_even(&c, grid)
}

/// Extend samples given on `q >= 0` by `v(-q) = conj v(q)`.
pub fn extend_hermitian(half: &[Complex64], grid: &UniformGrid) -> Result<SampledFunction> {
    check_half_len(half, grid)?;
    let scale = sup_norm(half).max(f64::MIN_POSITIVE);
    if half[0].im.abs() > SYMMETRY_TOL * scale {
        return Err(Error::SymmetryViolation {
            symmetry: "hermitian",
            deviation: half[0].im.abs(),
        });
    }
    let m = grid.zero_index();
    let mut values = vec![Complex64::new(0.0, 0.0); grid.len()];
    for (i, v) in half.iter().take(m).enumerate() {
        values[m + i] = *v;
        if i > 0 {
            values[m - i] = v.conj();
        }
    }
    values[m].im = 0.0;
    values[0] = edge_value(half, grid).conj();
    // The extrapolated -L sample has no partner on the grid; keep it real.
    values[0].im = 0.0;
    Ok(SampledFunction {
        grid: *grid,
        values,
        symmetry: Symmetry::Hermitian,
    })
}
