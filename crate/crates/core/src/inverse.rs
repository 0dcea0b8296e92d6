//! Inverse problem: recover `ξ` from forward data `F`.
//!
//! Rearranging the forward relation gives the dominant singular integral
//! equation
//!
//! `(a/2)(1 + S)ξ + (b/2)(1 − S)ξ = g`,
//! `a = 2π(iqF + 2π)`, `b = 4π²`, `g = −2q²F`.
//!
//! Its solvability is governed by the curve `c(q) = iqF(q) + 2π`: it must
//! avoid the origin and have nonnegative winding index. When
//! `sup |qF| < 2π` both hold automatically. When `ξ` vanishes on `(−A, A)`
//! the equation can also be solved by the fixed-point iteration
//! `ξ = rhs − M S ξ` with `M = iqF/(iqF + 4π)`, contractive as soon as
//! `sup_{|q|≥A} |M| < 1`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forward::{ForwardData, Xi, DEFAULT_D_EPS};
use crate::grid::{extend_even_real, l2_norm_real, SampledFunction, UniformGrid};
use crate::singular::{ApplyS, DenseSingularOperator};

/// Distance from the origin below which the curve `c` counts as hitting it.
pub const ORIGIN_EPS: f64 = 1e-9;

/// Tail threshold used when searching for the contraction point `A`.
pub const CONTRACTION_TARGET: f64 = 0.95;

const FOUR_PI_SQ: f64 = 4.0 * PI * PI;

/// Coefficients of the dominant equation on the full grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SieCoefficients {
    grid: UniformGrid,
    pub a: Vec<Complex64>,
    pub b: f64,
    pub g: Vec<Complex64>,
}

impl SieCoefficients {
    pub fn grid(&self) -> &UniformGrid {
        &self.grid
    }

    /// `c(q) = iqF(q) + 2π = a(q)/2π`.
    pub fn symbol_curve(&self) -> Vec<Complex64> {
        self.a.iter().map(|a| a / (2.0 * PI)).collect()
    }

    /// `A ξ = ((a + b)/2) ξ + ((a − b)/2) S ξ`.
    pub fn apply(&self, op: &impl ApplyS, xi: &[Complex64]) -> Vec<Complex64> {
        let s = op.apply_values(xi);
        self.a
            .iter()
            .zip(xi.iter().zip(&s))
            .map(|(a, (x, sx))| 0.5 * (a + self.b) * x + 0.5 * (a - self.b) * sx)
            .collect()
    }

    /// `A* r = conj((a + b)/2) r + S(conj((a − b)/2) r)`, using `S* = S`.
    fn apply_adjoint(&self, op: &impl ApplyS, r: &[Complex64]) -> Vec<Complex64> {
        let weighted: Vec<Complex64> = self
            .a
            .iter()
            .zip(r)
            .map(|(a, v)| (0.5 * (a - self.b)).conj() * v)
            .collect();
        let s = op.apply_values(&weighted);
        self.a
            .iter()
            .zip(r.iter().zip(s))
            .map(|(a, (v, sv))| (0.5 * (a + self.b)).conj() * v + sv)
            .collect()
    }

    /// `‖Aξ − g‖ / ‖g‖` (or `‖Aξ‖` when `g = 0`).
    pub fn residual(&self, op: &impl ApplyS, xi: &Xi) -> f64 {
        let r = self.apply(op, xi.samples().values());
        let num: f64 = r
            .iter()
            .zip(&self.g)
            .map(|(x, g)| (x - g).norm_sqr())
            .sum::<f64>()
            .sqrt();
        let den: f64 = self.g.iter().map(|g| g.norm_sqr()).sum::<f64>().sqrt();
        if den == 0.0 {
            num
        } else {
            num / den
        }
    }
}

pub fn build_sie(f: &ForwardData) -> SieCoefficients {
    let grid = *f.grid();
    let mut a = Vec::with_capacity(grid.len());
    let mut g = Vec::with_capacity(grid.len());
    for (j, v) in f.values().iter().enumerate() {
        let q = grid.point(j);
        let iqf = Complex64::new(0.0, q) * v;
        a.push(2.0 * PI * (iqf + 2.0 * PI));
        g.push(-2.0 * q * q * v);
    }
    SieCoefficients {
        grid,
        a,
        b: FOUR_PI_SQ,
        g,
    }
}

/// Distance from the origin to the segment `[p, r]`.
fn segment_distance(p: Complex64, r: Complex64) -> f64 {
    let d = r - p;
    let len2 = d.norm_sqr();
    if len2 == 0.0 {
        return p.norm();
    }
    let t = (-(p.re * d.re + p.im * d.im) / len2).clamp(0.0, 1.0);
    (p + d * t).norm()
}

/// Anticlockwise revolutions of the closed polyline through `curve`
/// (the last point joined back to the first).
pub fn winding_number(curve: &[Complex64]) -> Result<i64> {
    winding_number_with_eps(curve, ORIGIN_EPS)
}

pub fn winding_number_with_eps(curve: &[Complex64], eps: f64) -> Result<i64> {
    if curve.is_empty() {
        return Err(Error::InvalidInput("empty curve".into()));
    }
    let n = curve.len();
    let mut total = 0.0;
    for j in 0..n {
        let p = curve[j];
        let r = curve[(j + 1) % n];
        let distance = segment_distance(p, r);
        if distance < eps {
            return Err(Error::OriginHit { index: j, distance });
        }
        let increment = (r / p).arg();
        if increment.abs() >= PI / 2.0 {
            return Err(Error::UnderResolved {
                index: j,
                increment,
            });
        }
        total += increment;
    }
    let turns = total / (2.0 * PI);
    let rounded = turns.round();
    debug_assert!((turns - rounded).abs() < 1e-6);
    Ok(rounded as i64)
}

/// Certificate for the fixed-point solver.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Contraction {
    #[serde(rename = "A")]
    pub a: f64,
    pub factor: f64,
}

/// Why the winding index could not be computed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum WindingFailure {
    OriginHit {
        index: usize,
        q: f64,
        distance: f64,
    },
    UnderResolved {
        index: usize,
        q: f64,
        increment: f64,
    },
}

/// Computable surrogates for the solvability hypotheses.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolvabilityReport {
    /// Distance from the origin to the curve `c(q) = iqF + 2π`.
    pub min_abs_c: f64,
    /// Winding index of `c`, absent when it is undefined.
    pub winding: Option<i64>,
    pub winding_failure: Option<WindingFailure>,
    #[serde(rename = "sup_qF")]
    pub sup_qf: f64,
    #[serde(rename = "argsup_qF")]
    pub argsup_qf: f64,
    /// `sup |qF| < 2π`.
    pub corollary_ok: bool,
    pub contraction: Option<Contraction>,
}

impl SolvabilityReport {
    /// Ok when `c` avoids the origin and has nonnegative index.
    pub fn require_solvable(&self) -> Result<()> {
        match (&self.winding_failure, self.winding) {
            (
                Some(WindingFailure::OriginHit {
                    index, distance, ..
                }),
                _,
            ) => Err(Error::OriginHit {
                index: *index,
                distance: *distance,
            }),
            (
                Some(WindingFailure::UnderResolved {
                    index, increment, ..
                }),
                _,
            ) => Err(Error::UnderResolved {
                index: *index,
                increment: *increment,
            }),
            (None, Some(k)) if k < 0 => Err(Error::ConditionsViolated(format!(
                "winding index {k} is negative; the solution is not unique"
            ))),
            _ => Ok(()),
        }
    }
}

/// `|M(q)| = |iqF / (iqF + 4π)|` on the full grid.
fn contraction_moduli(f: &ForwardData) -> Vec<f64> {
    let grid = f.grid();
    f.values()
        .iter()
        .enumerate()
        .map(|(j, v)| {
            let iqf = Complex64::new(0.0, grid.point(j)) * v;
            let den = iqf + 4.0 * PI;
            if den.norm() == 0.0 {
                f64::INFINITY
            } else {
                (iqf / den).norm()
            }
        })
        .collect()
}

/// `sup_{|q| ≥ A} |M(q)|`.
pub fn contraction_factor(f: &ForwardData, a: f64) -> f64 {
    let grid = f.grid();
    contraction_moduli(f)
        .into_iter()
        .enumerate()
        .filter(|(j, _)| grid.point(*j).abs() >= a)
        .fold(0.0, |m, (_, v)| m.max(v))
}

/// Smallest positive grid point `A` with `sup_{|q|≥A} |M| < 0.95`.
pub fn contraction_threshold(f: &ForwardData) -> Option<Contraction> {
    let grid = f.grid();
    let moduli = contraction_moduli(f);
    let z = grid.zero_index();
    // Tail suprema over |q| >= q_j, scanning inward from the edge; the
    // self-mirrored -L sample belongs to every tail.
    let mut tail = moduli[0];
    let mut best = None;
    for j in (z + 1..grid.len()).rev() {
        tail = tail.max(moduli[j]).max(moduli[grid.mirror(j)]);
        if tail < CONTRACTION_TARGET {
            best = Some(Contraction {
                a: grid.point(j),
                factor: tail,
            });
        } else {
            break;
        }
    }
    best
}

pub fn solvability_report(f: &ForwardData) -> SolvabilityReport {
    let grid = f.grid();
    let coeffs = build_sie(f);
    let curve = coeffs.symbol_curve();
    let n = curve.len();
    let min_abs_c = (0..n)
        .map(|j| segment_distance(curve[j], curve[(j + 1) % n]))
        .fold(f64::INFINITY, f64::min);
    let (winding, winding_failure) = match winding_number(&curve) {
        Ok(k) => (Some(k), None),
        Err(Error::OriginHit { index, distance }) => (
            None,
            Some(WindingFailure::OriginHit {
                index,
                q: grid.point(index),
                distance,
            }),
        ),
        Err(Error::UnderResolved { index, increment }) => (
            None,
            Some(WindingFailure::UnderResolved {
                index,
                q: grid.point(index),
                increment,
            }),
        ),
        Err(e) => unreachable!("winding_number only fails geometrically: {e}"),
    };
    let (sup_qf, argsup_qf) = f
        .values()
        .iter()
        .enumerate()
        .map(|(j, v)| ((grid.point(j) * v).norm(), grid.point(j).abs()))
        .fold(
            (0.0, 0.0),
            |best, cur| if cur.0 > best.0 { cur } else { best },
        );
    SolvabilityReport {
        min_abs_c,
        winding,
        winding_failure,
        sup_qf,
        argsup_qf,
        corollary_ok: sup_qf < 2.0 * PI,
        contraction: contraction_threshold(f),
    }
}

/// Options for [`solve_sie`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolveOptions {
    /// Target relative residual `‖Aξ − g‖/‖g‖`.
    pub tol: f64,
    pub max_iter: usize,
    /// Tikhonov parameter; `None` picks `1e-10 ‖a‖∞`.
    pub regularization: Option<f64>,
    /// Solve even when the solvability gate fails.
    pub force: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            max_iter: 5000,
            regularization: None,
            force: false,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SieSolution {
    pub xi: Xi,
    pub iterations: usize,
    /// Relative residual of the returned `ξ`.
    pub residual: f64,
}

fn project_even(grid: &UniformGrid, v: &mut [f64]) {
    let z = grid.zero_index();
    for i in 1..z {
        let m = 0.5 * (v[z + i] + v[z - i]);
        v[z + i] = m;
        v[z - i] = m;
    }
    v[z] = 0.0;
}

fn to_complex(v: &[f64]) -> Vec<Complex64> {
    v.iter().map(|&x| Complex64::new(x, 0.0)).collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn xi_from_full(grid: &UniformGrid, values: &[f64]) -> Result<Xi> {
    let half = &values[grid.zero_index()..];
    let mut with_edge = half.to_vec();
    with_edge.push(values[0]);
    Xi::from_samples(extend_even_real(&with_edge, grid)?)
}

fn gate(coeffs: &SieCoefficients, force: bool) -> Result<()> {
    let data = ForwardData::from_samples(
        SampledFunction::new(
            coeffs.grid,
            coeffs
                .a
                .iter()
                .enumerate()
                .map(|(j, a)| {
                    let q = coeffs.grid.point(j);
                    if q == 0.0 {
                        Complex64::new(0.0, 0.0)
                    } else {
                        (a / (2.0 * PI) - 2.0 * PI) / Complex64::new(0.0, q)
                    }
                })
                .collect(),
        )?
        .tagged_unchecked(crate::grid::Symmetry::Hermitian),
    );
    let report = solvability_report(&data?);
    match report.require_solvable() {
        Ok(()) => Ok(()),
        Err(e) if force => {
            log::warn!(
                "solving despite failed solvability conditions ({e}); the result may not be unique"
            );
            Ok(())
        }
        Err(Error::ConditionsViolated(m)) => Err(Error::ConditionsViolated(m)),
        Err(e) => Err(Error::ConditionsViolated(e.to_string())),
    }
}

/// Least-squares solution of `Aξ = g` over real even `ξ` with `ξ(0) = 0`,
/// by CGLS on the real-linear operator with Tikhonov damping.
pub fn solve_sie(
    coeffs: &SieCoefficients,
    op: &impl ApplyS,
    opts: &SolveOptions,
) -> Result<SieSolution> {
    let grid = coeffs.grid;
    if op.grid() != &grid {
        return Err(Error::InvalidInput(
            "operator grid differs from coefficient grid".into(),
        ));
    }
    if opts.tol.is_nan() || opts.tol <= 0.0 {
        return Err(Error::InvalidInput("tolerance must be positive".into()));
    }
    gate(coeffs, opts.force)?;
    let n = grid.len();
    let g_norm = coeffs.g.iter().map(|g| g.norm_sqr()).sum::<f64>().sqrt();
    if g_norm == 0.0 {
        return Ok(SieSolution {
            xi: Xi::from_fn(&grid, |_| 0.0)?,
            iterations: 0,
            residual: 0.0,
        });
    }
    let a_sup = coeffs.a.iter().fold(0.0_f64, |m, a| m.max(a.norm()));
    let delta = opts.regularization.unwrap_or(1e-10 * a_sup);
    let delta2 = delta * delta;

    let forward = |x: &[f64]| coeffs.apply(op, &to_complex(x));
    let adjoint = |r: &[Complex64]| {
        let mut v: Vec<f64> = coeffs.apply_adjoint(op, r).iter().map(|z| z.re).collect();
        project_even(&grid, &mut v);
        v
    };

    let mut x = vec![0.0; n];
    let mut r = coeffs.g.clone();
    let mut s = adjoint(&r);
    let mut p = s.clone();
    let mut gamma = dot(&s, &s);
    let gamma0 = gamma;
    let mut iterations = 0;
    let mut best_gamma = gamma;
    let mut stalled = 0;
    while iterations < opts.max_iter {
        if gamma <= 1e-26 * gamma0 {
            break;
        }
        iterations += 1;
        let ap = forward(&p);
        let denom = ap.iter().map(|v| v.norm_sqr()).sum::<f64>() + delta2 * dot(&p, &p);
        if denom == 0.0 {
            break;
        }
        let alpha = gamma / denom;
        for (xi, pi) in x.iter_mut().zip(&p) {
            *xi += alpha * pi;
        }
        for (ri, api) in r.iter_mut().zip(&ap) {
            *ri -= alpha * api;
        }
        s = adjoint(&r);
        for (si, xi) in s.iter_mut().zip(&x) {
            *si -= delta2 * xi;
        }
        let gamma_new = dot(&s, &s);
        if gamma_new < 0.5 * best_gamma {
            best_gamma = gamma_new;
            stalled = 0;
        } else {
            stalled += 1;
            if stalled > 200 {
                break;
            }
        }
        let beta = gamma_new / gamma;
        gamma = gamma_new;
        for (pi, si) in p.iter_mut().zip(&s) {
            *pi = si + beta * *pi;
        }
    }
    project_even(&grid, &mut x);
    let xi = xi_from_full(&grid, &x)?;
    let residual = coeffs.residual(op, &xi);
    if residual > opts.tol {
        return Err(Error::NonConvergence {
            iterations,
            residual,
            best: Some(xi.real_values()),
        });
    }
    Ok(SieSolution {
        xi,
        iterations,
        residual,
    })
}

/// Direct least-squares solve with the dense operator, over the even
/// parametrization `ξ(±q_i) = u_i`. Limited to `N ≤ 1024`.
pub fn solve_sie_dense(coeffs: &SieCoefficients, opts: &SolveOptions) -> Result<SieSolution> {
    let grid = coeffs.grid;
    let n = grid.len();
    if n > 1024 {
        return Err(Error::InvalidGrid(
            "dense solve is limited to N <= 1024".into(),
        ));
    }
    gate(coeffs, opts.force)?;
    let op = DenseSingularOperator::new(grid);
    let z = grid.zero_index();
    // Columns: index 0 is the -L sample, index i in 1..z is ±q_i.
    let mut basis = vec![(0usize, None)];
    basis.extend((1..z).map(|i| (z + i, Some(z - i))));
    let m = basis.len();
    let mut mat = DMatrix::<f64>::zeros(2 * n, m);
    let s = op.matrix();
    for (col, &(j1, j2)) in basis.iter().enumerate() {
        for row in 0..n {
            let mut e = Complex64::new(0.0, 0.0);
            for j in std::iter::once(j1).chain(j2) {
                let diag = if row == j {
                    0.5 * (coeffs.a[row] + coeffs.b)
                } else {
                    Complex64::new(0.0, 0.0)
                };
                e += diag + 0.5 * (coeffs.a[row] - coeffs.b) * s[(row, j)];
            }
            mat[(row, col)] = e.re;
            mat[(n + row, col)] = e.im;
        }
    }
    let mut rhs = DVector::<f64>::zeros(2 * n);
    for row in 0..n {
        rhs[row] = coeffs.g[row].re;
        rhs[n + row] = coeffs.g[row].im;
    }
    let svd = mat.svd(true, true);
    let smax = svd.singular_values.max();
    let u = svd
        .solve(&rhs, 1e-14 * smax)
        .map_err(|e| Error::InvalidInput(format!("dense solve failed: {e}")))?;
    let mut full = vec![0.0; n];
    for (col, &(j1, j2)) in basis.iter().enumerate() {
        full[j1] = u[col];
        if let Some(j2) = j2 {
            full[j2] = u[col];
        }
    }
    let xi = xi_from_full(&grid, &full)?;
    let residual = coeffs.residual(&op, &xi);
    if residual > opts.tol {
        return Err(Error::NonConvergence {
            iterations: 1,
            residual,
            best: Some(xi.real_values()),
        });
    }
    Ok(SieSolution {
        xi,
        iterations: 1,
        residual,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FixedPointOptions {
    /// Stop when the sup-norm change relative to `sup |ξ|` drops below this.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for FixedPointOptions {
    fn default() -> Self {
        Self {
            tol: 1e-12,
            max_iter: 1000,
        }
    }
}

#[derive(Debug, Clone)]
pub struct FixedPointSolution {
    pub xi: Xi,
    pub a: f64,
    /// `sup_{|q|≥A} |M(q)|`.
    pub factor: f64,
    pub iterations: usize,
    /// Discrete L² norm of each update `ξ_{n+1} − ξ_n`.
    pub updates: Vec<f64>,
}

impl FixedPointSolution {
    /// Ratios of successive update norms.
    pub fn ratios(&self) -> Vec<f64> {
        self.updates
            .windows(2)
            .filter(|w| w[0] > 0.0)
            .map(|w| w[1] / w[0])
            .collect()
    }
}

/// Iterate `ξ = Re[rhs − M S(Eξ)]` on `|q| ≥ A`, with `Eξ` the even
/// extension that vanishes on `(−A, A)`,
/// `M = iqF/(iqF + 4π)` and `rhs = −2q²F / (π (iqF + 4π))`.
pub fn solve_fixed_point(
    f: &ForwardData,
    a: f64,
    op: &impl ApplyS,
    opts: &FixedPointOptions,
) -> Result<FixedPointSolution> {
    let grid = *f.grid();
    if op.grid() != &grid {
        return Err(Error::InvalidInput(
            "operator grid differs from data grid".into(),
        ));
    }
    if a.is_nan() || a <= 0.0 || a >= grid.half_width() {
        return Err(Error::InvalidInput(format!("A = {a} must lie in (0, L)")));
    }
    let factor = contraction_factor(f, a);
    if factor.is_nan() || factor >= 1.0 {
        return Err(Error::NotContractive { a, factor });
    }
    let n = grid.len();
    let active: Vec<bool> = (0..n).map(|j| grid.point(j).abs() >= a).collect();
    let mut m = vec![Complex64::new(0.0, 0.0); n];
    let mut rhs = vec![Complex64::new(0.0, 0.0); n];
    for j in 0..n {
        if !active[j] {
            continue;
        }
        let q = grid.point(j);
        let fv = f.values()[j];
        let iqf = Complex64::new(0.0, q) * fv;
        let den = iqf + 4.0 * PI;
        m[j] = iqf / den;
        rhs[j] = -2.0 * q * q * fv / (PI * den);
    }
    let h = grid.spacing();
    let mut xi = vec![0.0; n];
    let mut updates = Vec::new();
    let mut iterations = 0;
    loop {
        if iterations >= opts.max_iter {
            let residual = updates.last().copied().unwrap_or(f64::INFINITY);
            return Err(Error::NonConvergence {
                iterations,
                residual,
                best: Some(xi),
            });
        }
        iterations += 1;
        let s = op.apply_values(&to_complex(&xi));
        let mut next = vec![0.0; n];
        for j in 0..n {
            if active[j] {
                next[j] = (rhs[j] - m[j] * s[j]).re;
            }
        }
        project_even(&grid, &mut next);
        let diff: Vec<f64> = next.iter().zip(&xi).map(|(x, y)| x - y).collect();
        updates.push(l2_norm_real(&diff, h));
        let change = diff.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let scale = next.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        xi = next;
        if change <= opts.tol * scale || change == 0.0 {
            break;
        }
    }
    Ok(FixedPointSolution {
        xi: xi_from_full(&grid, &xi)?,
        a,
        factor,
        iterations,
        updates,
    })
}

/// Radial reconstruction from `ξ`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Reconstruction {
    pub lambda_sign: i8,
    /// Nonnegative grid points, starting at `q = 0`.
    pub q: Vec<f64>,
    /// `m(q) = |√λ ψ̂₀(q)|`.
    pub m: Vec<f64>,
}

impl Reconstruction {
    /// `lambda_sign · 4π q² m²`.
    pub fn xi_rebuilt(&self) -> Vec<f64> {
        self.q
            .iter()
            .zip(&self.m)
            .map(|(q, m)| self.lambda_sign as f64 * 4.0 * PI * q * q * m * m)
            .collect()
    }
}

/// Relative width of the band around zero ignored by the sign check.
pub const SIGN_BAND: f64 = 1e-3;

pub fn reconstruct_radial(xi: &Xi) -> Result<Reconstruction> {
    let grid = xi.grid();
    let values = xi.real_values();
    let (min, max) = values
        .iter()
        .fold((0.0_f64, 0.0_f64), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    let scale = max.max(-min);
    if scale == 0.0 {
        return Err(Error::NoPotential);
    }
    let band = SIGN_BAND * scale;
    if min < -band && max > band {
        return Err(Error::SignInconsistent { min, max });
    }
    let lambda_sign: i8 = if max >= -min { 1 } else { -1 };
    let z = grid.zero_index();
    let h = grid.spacing();
    let q: Vec<f64> = grid.nonneg_points();
    let mut m: Vec<f64> = q
        .iter()
        .enumerate()
        .map(|(i, &qv)| {
            if i == 0 {
                0.0
            } else {
                (values[z + i].abs() / (4.0 * PI)).sqrt() / qv
            }
        })
        .collect();
    if z >= 3 {
        let h1 = values[z + 1] / (h * h);
        let h2 = values[z + 2] / (4.0 * h * h);
        m[0] = (((4.0 * h1 - h2) / 3.0).abs() / (4.0 * PI)).sqrt();
    }
    Ok(Reconstruction { lambda_sign, q, m })
}

/// `K(q, n, ω) = −f D / (2π²) = λ ψ̂₀(qn) conj ψ̂₀(qω)`.
pub fn on_shell_kernel(f: Complex64, d: Complex64) -> Result<Complex64> {
    on_shell_kernel_with_eps(f, d, DEFAULT_D_EPS)
}

pub fn on_shell_kernel_with_eps(f: Complex64, d: Complex64, eps: f64) -> Result<Complex64> {
    if d.norm() <= eps {
        return Err(Error::Condition7Violation {
            q: f64::NAN,
            abs_d: d.norm(),
        });
    }
    Ok(-f * d / (2.0 * PI * PI))
}
