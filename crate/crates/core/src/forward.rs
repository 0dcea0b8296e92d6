//! Forward scattering: spectral density `ξ`, resolvent denominator `D`,
//! amplitude `f` and the forward integral `F`.
//!
//! With `ξ(q) = λ q² ∫ |ψ̂₀(q, Ω)|² dΩ` (sign carried by `λ`), the
//! denominator is `D(q) = 1 + (iπ/2q) ((1 + S) ξ)(q)`, the amplitude is
//! `f = −2π² λ ψ̂₀(qn) conj ψ̂₀(qω) / D` and
//! `F(q) = −4π² ξ / (q (2q + iπ (1 + S) ξ)) = −2π² ξ / (q² D)`.
//!
//! Two routes to `D` independent of `S` are provided: the autocorrelation
//! route `D(q) = 1 + λ ∫₀^∞ e^{iqρ} ρ a(ρ) dρ` with
//! `a(ρ) = ∫ ψ₀(y) ψ₀(y + ρe) dy`, and the closed form for the Yamaguchi
//! profile.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::{extend_even_real, l2_norm_real, SampledFunction, Symmetry, UniformGrid};
use crate::profile::{
    Coupling, DirectionalFormFactor, FormFactor, MomentumProfile, PotentialSpec, Profile,
};
use crate::quad::{self, filon, GaussRule, Tolerance};
use crate::singular::ApplyS;

/// Default threshold below which `|D|` counts as vanishing.
pub const DEFAULT_D_EPS: f64 = 1e-8;

const ZERO_EPS: f64 = 1e-12;

/// Real, even spectral density sampled on a full grid, with `ξ(0) = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct Xi {
    samples: SampledFunction,
}

impl Xi {
    /// Wrap real even samples. `ξ(0)` must vanish (it is reset to exact 0).
    pub fn from_samples(samples: SampledFunction) -> Result<Self> {
        let samples = samples.with_symmetry(Symmetry::EvenReal)?;
        let grid = *samples.grid();
        let mut values = samples.into_values();
        let z = grid.zero_index();
        let scale = values.iter().fold(0.0_f64, |m, v| m.max(v.re.abs()));
        if values[z].re.abs() > 1e-10 * scale.max(f64::MIN_POSITIVE) {
            return Err(Error::InvalidInput(format!(
                "xi(0) must vanish, got {}",
                values[z].re
            )));
        }
        values[z] = Complex64::new(0.0, 0.0);
        for v in values.iter_mut() {
            v.im = 0.0;
        }
        Ok(Self {
            samples: SampledFunction::new(grid, values)?.tagged_unchecked(Symmetry::EvenReal),
        })
    }

    /// Sample `ξ(|q|)` from a formula.
    pub fn from_fn(grid: &UniformGrid, f: impl Fn(f64) -> f64) -> Result<Self> {
        let half: Vec<f64> = crate::profile::edge_inclusive_points(grid)
            .into_iter()
            .map(|q| if q == 0.0 { 0.0 } else { f(q) })
            .collect();
        Self::from_samples(extend_even_real(&half, grid)?)
    }

    /// `ξ(q) = 4π λ q² |ψ̂₀(q)|²` from radial form-factor samples.
    pub fn from_form_factor(lambda: Coupling, ff: &FormFactor) -> Result<Self> {
        let grid = ff.grid();
        let half: Vec<f64> = crate::profile::edge_inclusive_points(grid)
            .iter()
            .zip(ff.values())
            .map(|(q, v)| 4.0 * PI * lambda.value() * q * q * v.norm_sqr())
            .collect();
        Self::from_samples(extend_even_real(&half, grid)?)
    }

    /// `ξ(q) = λ q² Σ_m w_m |ψ̂₀(q, Ω_m)|²`.
    pub fn from_directional(lambda: Coupling, ff: &DirectionalFormFactor) -> Result<Self> {
        let grid = ff.grid();
        let half: Vec<f64> = crate::profile::edge_inclusive_points(grid)
            .iter()
            .zip(ff.angular_power())
            .map(|(q, p)| lambda.value() * q * q * p)
            .collect();
        Self::from_samples(extend_even_real(&half, grid)?)
    }

    pub fn grid(&self) -> &UniformGrid {
        self.samples.grid()
    }

    pub fn samples(&self) -> &SampledFunction {
        &self.samples
    }

    pub fn real_values(&self) -> Vec<f64> {
        self.samples.real_parts()
    }

    /// `ξ` at grid index `j`.
    pub fn at(&self, j: usize) -> f64 {
        self.samples.values()[j].re
    }

    pub fn l2_norm(&self) -> f64 {
        l2_norm_real(&self.real_values(), self.grid().spacing())
    }

    pub fn is_zero(&self) -> bool {
        self.samples.values().iter().all(|v| v.re == 0.0)
    }
}

/// `ξ` for a potential with a radial profile.
pub fn compute_xi(spec: &PotentialSpec, grid: &UniformGrid) -> Result<Xi> {
    let ff = FormFactor::from_profile(&spec.profile, grid)?;
    Xi::from_form_factor(spec.lambda, &ff)
}

/// How a [`Denominator`] was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DenominatorRoute {
    /// `1 + (iπ/2q)(1 + S)ξ` with the discrete `S`.
    Hilbert,
    /// Fourier–Laplace transform of the profile autocorrelation.
    Autocorrelation,
    ClosedFormYamaguchi,
}

/// `D(q) = 1 + λ (R₀(q + i0) ψ₀, ψ₀)` on the full grid, with
/// `D(-q) = conj D(q)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Denominator {
    grid: UniformGrid,
    values: Vec<Complex64>,
    route: DenominatorRoute,
}

impl Denominator {
    /// Build from values on `q >= 0` (`0, Δ, ..., L`), extended by conjugation.
    fn from_half(grid: UniformGrid, half: Vec<Complex64>, route: DenominatorRoute) -> Self {
        let z = grid.zero_index();
        let mut values = vec![Complex64::new(0.0, 0.0); grid.len()];
        for (i, v) in half.iter().take(z).enumerate() {
            values[z + i] = *v;
            if i > 0 {
                values[z - i] = v.conj();
            }
        }
        values[0] = half[z].conj();
        Self {
            grid,
            values,
            route,
        }
    }

    /// Autocorrelation route on every nonnegative shell (and `q = L`).
    pub fn from_autocorrelation(spec: &PotentialSpec, grid: &UniformGrid) -> Result<Self> {
        let ac = Autocorrelation::new(spec)?;
        let half: Vec<Complex64> = crate::profile::edge_inclusive_points(grid)
            .par_iter()
            .map(|&q| ac.denominator(q))
            .collect();
        Ok(Self::from_half(
            *grid,
            half,
            DenominatorRoute::Autocorrelation,
        ))
    }

    /// Closed form for the Yamaguchi (Yukawa-profile) potential.
    pub fn closed_form_yamaguchi(lambda: f64, mu: f64, grid: &UniformGrid) -> Self {
        let half = crate::profile::edge_inclusive_points(grid)
            .into_iter()
            .map(|q| yamaguchi_denominator(lambda, mu, q))
            .collect();
        Self::from_half(*grid, half, DenominatorRoute::ClosedFormYamaguchi)
    }

    pub fn grid(&self) -> &UniformGrid {
        &self.grid
    }

    pub fn route(&self) -> DenominatorRoute {
        self.route
    }

    /// All samples, full grid.
    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Samples on `q >= 0`.
    pub fn nonneg(&self) -> &[Complex64] {
        &self.values[self.grid.zero_index()..]
    }

    pub fn at(&self, j: usize) -> Complex64 {
        self.values[j]
    }
}

/// Hilbert route: `D(q) = 1 + (iπ/2q) ((1 + S) ξ)(q)` for `q ≠ 0`, with
/// `D(0)` extrapolated quadratically from the three smallest positive
/// shells.
pub fn compute_denominator(xi: &Xi, op: &impl ApplyS) -> Result<Denominator> {
    let grid = *xi.grid();
    if op.grid() != &grid {
        return Err(Error::InvalidInput(
            "operator grid differs from xi grid".into(),
        ));
    }
    if grid.zero_index() < 4 {
        return Err(Error::InvalidGrid(
            "need at least 8 points for D(0) extrapolation".into(),
        ));
    }
    let s_xi = op.apply_values(xi.samples().values());
    let z = grid.zero_index();
    let mut values: Vec<Complex64> = (0..grid.len())
        .map(|j| {
            if j == z {
                return Complex64::new(0.0, 0.0);
            }
            let q = grid.point(j);
            let one_plus_s = xi.samples().values()[j] + s_xi[j];
            Complex64::new(1.0, 0.0) + Complex64::new(0.0, PI / (2.0 * q)) * one_plus_s
        })
        .collect();
    values[z] = values[z + 1] * 3.0 - values[z + 2] * 3.0 + values[z + 3];
    // D(0) is real: the odd imaginary part extrapolates to zero.
    values[z].im = 0.0;
    Ok(Denominator {
        grid,
        values,
        route: DenominatorRoute::Hilbert,
    })
}

/// Closed-form Yamaguchi denominator
/// `1 + (2πλ/μ) / (μ - iq)²`.
pub fn yamaguchi_denominator(lambda: f64, mu: f64, q: f64) -> Complex64 {
    Complex64::new(1.0, 0.0) + (2.0 * PI * lambda / mu) / Complex64::new(mu, -q).powi(2)
}

/// Autocorrelation route to `D`, tabulating `h(ρ) = ρ a(ρ)` once and
/// evaluating the oscillatory transform with Filon's rule.
#[derive(Debug, Clone)]
pub struct Autocorrelation {
    lambda: f64,
    step: f64,
    h: Vec<f64>,
}

impl Autocorrelation {
    /// Number of Filon panels across `[0, 2R]`.
    const PANELS: usize = 4000;

    pub fn new(spec: &PotentialSpec) -> Result<Self> {
        let profile = &spec.profile;
        let cumulative = CumulativeIntegral::new(profile);
        let r_max = profile.support_radius();
        let rho_max = 2.0 * r_max;
        let step = rho_max / (2 * Self::PANELS) as f64;
        let tol = Tolerance {
            abs: 1e-15 * cumulative.total().abs().powi(2).max(1e-300),
            rel: 1e-12,
            max_intervals: 2000,
        };
        let h = (0..=2 * Self::PANELS)
            .into_par_iter()
            .map(|i| {
                let rho = i as f64 * step;
                if i == 0 {
                    return Ok(0.0);
                }
                let integrand = |r: f64| {
                    profile.r_psi(r) * (cumulative.eval(r + rho) - cumulative.eval((r - rho).abs()))
                };
                let kink = rho.min(r_max);
                let v = quad::integrate(integrand, 0.0, kink, tol)?
                    + quad::integrate(integrand, kink, r_max, tol)?;
                Ok(2.0 * PI * v)
            })
            .collect::<Result<Vec<f64>>>()?;
        Ok(Self {
            lambda: spec.lambda.value(),
            step,
            h,
        })
    }

    /// `ρ a(ρ)` at the tabulation nodes.
    pub fn table(&self) -> (&[f64], f64) {
        (&self.h, self.step)
    }

    /// `(R₀(q + i0) ψ₀, ψ₀) = ∫₀^∞ e^{iqρ} ρ a(ρ) dρ`.
    pub fn resolvent_form(&self, q: f64) -> Complex64 {
        filon(&self.h, 0.0, self.step, q)
    }

    pub fn denominator(&self, q: f64) -> Complex64 {
        Complex64::new(1.0, 0.0) + self.lambda * self.resolvent_form(q.abs())
    }
}

/// Single-shell convenience wrapper around [`Autocorrelation`].
pub fn denominator_autocorr(spec: &PotentialSpec, q: f64) -> Result<Complex64> {
    Ok(Autocorrelation::new(spec)?.denominator(q))
}

/// `G(s) = ∫₀^s r ψ₀(r) dr`, tabulated at panel edges and completed with a
/// Gauss rule on the partial panel.
struct CumulativeIntegral<'a> {
    profile: &'a Profile,
    edges: Vec<f64>,
    values: Vec<f64>,
    rule: GaussRule,
}

impl<'a> CumulativeIntegral<'a> {
    fn new(profile: &'a Profile) -> Self {
        let r_max = profile.support_radius();
        let n = 4000;
        let mut edges: Vec<f64> = (0..=n).map(|i| r_max * i as f64 / n as f64).collect();
        edges.extend(
            profile
                .breakpoints()
                .iter()
                .copied()
                .filter(|&r| r > 0.0 && r < r_max),
        );
        edges.sort_by(f64::total_cmp);
        edges.dedup();
        let rule = GaussRule::new(12);
        let mut values = Vec::with_capacity(edges.len());
        let mut acc = 0.0;
        values.push(0.0);
        for w in edges.windows(2) {
            acc += rule.integrate(w[0], w[1], |r| profile.r_psi(r));
            values.push(acc);
        }
        Self {
            profile,
            edges,
            values,
            rule,
        }
    }

    fn total(&self) -> f64 {
        *self.values.last().unwrap()
    }

    fn eval(&self, s: f64) -> f64 {
        if s >= *self.edges.last().unwrap() {
            return self.total();
        }
        if s <= 0.0 {
            return 0.0;
        }
        let k = self.edges.partition_point(|&e| e <= s) - 1;
        let a = self.edges[k];
        if s == a {
            return self.values[k];
        }
        self.values[k] + self.rule.integrate(a, s, |r| self.profile.r_psi(r))
    }
}

/// Scattering amplitude
/// `f(q, n, ω) = −2π² λ ψ̂₀(qn) conj ψ̂₀(qω) / D(q)`.
pub fn amplitude(
    lambda: Coupling,
    form_factor: &dyn MomentumProfile,
    d: Complex64,
    q: f64,
    n: [f64; 3],
    omega: [f64; 3],
) -> Result<Complex64> {
    amplitude_with_eps(lambda, form_factor, d, q, n, omega, DEFAULT_D_EPS)
}

pub fn amplitude_with_eps(
    lambda: Coupling,
    form_factor: &dyn MomentumProfile,
    d: Complex64,
    q: f64,
    n: [f64; 3],
    omega: [f64; 3],
    eps: f64,
) -> Result<Complex64> {
    if d.norm() <= eps {
        return Err(Error::Condition7Violation { q, abs_d: d.norm() });
    }
    let (out, inc) = if form_factor.is_radial() {
        let v = form_factor.eval([0.0, 0.0, q]);
        (v, v)
    } else {
        (
            form_factor.eval([q * n[0], q * n[1], q * n[2]]),
            form_factor.eval([q * omega[0], q * omega[1], q * omega[2]]),
        )
    };
    Ok(-2.0 * PI * PI * lambda.value() * out * inc.conj() / d)
}

/// Forward integral `F(q) = ∫ f(q, ω, ω) dΩ_ω` on the full grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ForwardData {
    samples: SampledFunction,
}

impl ForwardData {
    /// Wrap samples, checking `F(-q) = conj F(q)`.
    pub fn from_samples(samples: SampledFunction) -> Result<Self> {
        Ok(Self {
            samples: samples.with_symmetry(Symmetry::Hermitian)?,
        })
    }

    pub fn grid(&self) -> &UniformGrid {
        self.samples.grid()
    }

    pub fn samples(&self) -> &SampledFunction {
        &self.samples
    }

    pub fn values(&self) -> &[Complex64] {
        self.samples.values()
    }
}

/// `F(q) = −2π² ξ(q) / (q² D(q))` for `q ≠ 0`; `F(0)` from the even
/// extrapolation of `ξ/q²`.
#[allow(non_snake_case)]
pub fn forward_F(xi: &Xi, d: &Denominator) -> Result<ForwardData> {
    let grid = *xi.grid();
    if d.grid() != &grid {
        return Err(Error::InvalidInput(
            "denominator grid differs from xi grid".into(),
        ));
    }
    let z = grid.zero_index();
    let mut values = vec![Complex64::new(0.0, 0.0); grid.len()];
    for (j, v) in values.iter_mut().enumerate() {
        if j == z {
            continue;
        }
        let q = grid.point(j);
        let x = xi.at(j);
        // 2q + iπ(1+S)ξ = 2q D
        let denom = 2.0 * q * d.at(j);
        if denom.norm() < ZERO_EPS {
            if x.abs() < ZERO_EPS {
                continue;
            }
            return Err(Error::ZeroDenominator { q, xi: x });
        }
        *v = -4.0 * PI * PI * x / (q * denom);
    }
    let h = grid.spacing();
    let c1 = xi.at(z + 1) / (h * h);
    let c2 = xi.at(z + 2) / (4.0 * h * h);
    let curvature = (4.0 * c1 - c2) / 3.0;
    let d0 = d.at(z);
    if d0.norm() < ZERO_EPS {
        if curvature.abs() >= ZERO_EPS {
            return Err(Error::ZeroDenominator {
                q: 0.0,
                xi: curvature,
            });
        }
    } else {
        values[z] = Complex64::new((-2.0 * PI * PI * curvature / d0).re, 0.0);
    }
    let samples = SampledFunction::new(grid, values)?;
    ForwardData::from_samples(samples)
}

/// Result of scanning `|D|` for zeros.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Condition7Report {
    pub min_abs_d: f64,
    pub argmin_q: f64,
    /// Nonnegative shells with `|D| <= eps`.
    pub failing_shells: Vec<f64>,
}

impl Condition7Report {
    pub fn holds(&self) -> bool {
        self.failing_shells.is_empty()
    }
}

pub fn check_condition7(d: &Denominator, eps: f64) -> Condition7Report {
    let grid = d.grid();
    let mut min_abs_d = f64::INFINITY;
    let mut argmin_q = 0.0;
    let mut failing_shells = Vec::new();
    for j in grid.nonneg_indices() {
        let a = d.at(j).norm();
        let q = grid.point(j);
        if a < min_abs_d {
            min_abs_d = a;
            argmin_q = q;
        }
        if a <= eps {
            failing_shells.push(q);
        }
    }
    Condition7Report {
        min_abs_d,
        argmin_q,
        failing_shells,
    }
}

/// Everything the forward pipeline produces on one grid.
#[derive(Debug, Clone)]
pub struct ForwardSolution {
    pub xi: Xi,
    pub denominator: Denominator,
    pub forward: ForwardData,
}

/// `ξ`, `D` (Hilbert route) and `F` for a radial potential.
pub fn solve_forward(spec: &PotentialSpec, op: &impl ApplyS) -> Result<ForwardSolution> {
    let xi = compute_xi(spec, op.grid())?;
    let denominator = compute_denominator(&xi, op)?;
    let forward = forward_F(&xi, &denominator)?;
    Ok(ForwardSolution {
        xi,
        denominator,
        forward,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::direction;
    use crate::singular::SingularOperator;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn xi_yukawa_and_gaussian_values() {
        let g = UniformGrid::new(64.0, 1024).unwrap();
        let j1 = g.zero_index() + 8; // q = 1
        assert_eq!(g.point(j1), 1.0);
        let xi = compute_xi(&PotentialSpec::yamaguchi(0.1, 1.0).unwrap(), &g).unwrap();
        assert!((xi.at(j1) - 0.2).abs() < 1e-15);
        assert_eq!(xi.at(g.zero_index()), 0.0);
        let xi = compute_xi(&PotentialSpec::gaussian(1.0, 0.5).unwrap(), &g).unwrap();
        assert!((xi.at(j1) - 4.0 * PI * (-1.0f64).exp()).abs() < 1e-14);
    }

    #[test]
    fn xi_sign_follows_lambda() {
        let g = UniformGrid::new(16.0, 256).unwrap();
        let xi = compute_xi(&PotentialSpec::yamaguchi(-0.3, 1.0).unwrap(), &g).unwrap();
        assert!(xi.real_values().iter().all(|&v| v <= 0.0));
    }

    #[test]
    fn directional_xi_matches_radial_for_shifted_profile() {
        // A translated Gaussian only picks up a phase, so ξ is unchanged.
        let g = UniformGrid::new(16.0, 128).unwrap();
        let shift = [0.3, -0.2, 0.5];
        let shifted = move |k: [f64; 3]| {
            let q2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
            let phase = -(k[0] * shift[0] + k[1] * shift[1] + k[2] * shift[2]);
            Complex64::from_polar((-q2 / 2.0).exp(), phase)
        };
        let dff = DirectionalFormFactor::sample(&shifted, &g, 12, 16);
        let lambda = Coupling::new(0.1).unwrap();
        let a = Xi::from_directional(lambda, &dff).unwrap();
        let b = compute_xi(&PotentialSpec::gaussian(0.1, 0.5).unwrap(), &g).unwrap();
        for (x, y) in a.real_values().iter().zip(b.real_values()) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_xi_gives_unit_denominator_and_zero_f() {
        let g = UniformGrid::new(10.0, 256).unwrap();
        let xi = Xi::from_fn(&g, |_| 0.0).unwrap();
        let d = compute_denominator(&xi, &SingularOperator::new(g)).unwrap();
        assert!(d.values().iter().all(|v| *v == c(1.0, 0.0)));
        let f = forward_F(&xi, &d).unwrap();
        assert!(f.values().iter().all(|v| v.norm() == 0.0));
        let r = check_condition7(&d, DEFAULT_D_EPS);
        assert_eq!(r.min_abs_d, 1.0);
    }

    #[test]
    fn yamaguchi_closed_form_values() {
        let d1 = yamaguchi_denominator(0.1, 1.0, 1.0);
        assert!((d1 - c(1.0, 0.1 * PI)).norm() < 1e-15);
        let d0 = yamaguchi_denominator(0.1, 1.0, 0.0);
        assert!((d0.re - 1.628_318_530_717_958_6).abs() < 1e-15);
        // Critical coupling λ = −μ³/(2π) puts a zero at q = 0.
        let crit = yamaguchi_denominator(-1.0 / (2.0 * PI), 1.0, 0.0);
        assert!(crit.norm() < 1e-15);
    }

    /// Residue-calculus oracle for the Yamaguchi resolvent form, evaluated
    /// independently by integrating `|ψ̂₀(p)|² / (p² − q² − i0)` with the
    /// Plemelj split on a fine grid.
    fn plemelj_oracle(lambda: f64, mu: f64, q: f64) -> Complex64 {
        let g2 = |p: f64| (2.0 / PI) / (p * p + mu * mu).powi(2);
        let tol = Tolerance::new(1e-15, 1e-12);
        // 4π ∫ p² g²(p) / (p² − q²) dp, subtracting the pole at p = q.
        let num = |p: f64| 4.0 * PI * p * p * g2(p) / (p + q);
        let re = if q == 0.0 {
            quad::integrate_to_infinity(|p| 4.0 * PI * g2(p), 0.0, tol).unwrap()
        } else {
            let sub = |p: f64| (num(p) - num(q)) / (p - q);
            let w = 2.0 * q;
            let inner = quad::integrate(sub, 0.0, q, tol).unwrap()
                + quad::integrate(sub, q, w, tol).unwrap();
            // ∫_0^{2q} dp/(p − q) = 0 (principal value)
            let outer = quad::integrate_to_infinity(|p| num(p) / (p - q), w, tol).unwrap();
            inner + outer
        };
        let im = if q == 0.0 { 0.0 } else { PI * num(q) };
        c(1.0, 0.0) + lambda * c(re, im)
    }

    #[test]
    fn closed_form_matches_plemelj_oracle() {
        for q in [0.0, 0.2, 1.0, 2.5, 10.0] {
            let a = yamaguchi_denominator(0.1, 1.0, q);
            let b = plemelj_oracle(0.1, 1.0, q);
            assert!((a - b).norm() < 1e-9, "q={q}: {a} vs {b}");
        }
    }

    #[test]
    fn hilbert_route_reproduces_yamaguchi() {
        let g = UniformGrid::new(200.0, 1 << 15).unwrap();
        let spec = PotentialSpec::yamaguchi(0.1, 1.0).unwrap();
        let xi = compute_xi(&spec, &g).unwrap();
        let d = compute_denominator(&xi, &SingularOperator::new(g)).unwrap();
        for j in g.nonneg_indices().take_while(|&j| g.point(j) <= 10.0) {
            let q = g.point(j);
            let exact = yamaguchi_denominator(0.1, 1.0, q);
            let rel = (d.at(j) - exact).norm() / exact.norm();
            assert!(rel <= 1e-3, "q={q}: rel {rel}");
        }
        // Im D = π ξ / 2q within the route.
        for j in g.nonneg_indices().skip(1) {
            let q = g.point(j);
            assert!((d.at(j).im - PI * xi.at(j) / (2.0 * q)).abs() < 1e-10);
        }
    }

    #[test]
    fn autocorrelation_matches_closed_form() {
        let spec = PotentialSpec::yamaguchi(0.1, 1.0).unwrap();
        let ac = Autocorrelation::new(&spec).unwrap();
        for q in [0.0, 0.5, 1.0, 3.0, 10.0, 1000.0] {
            let a = ac.denominator(q);
            let b = yamaguchi_denominator(0.1, 1.0, q);
            assert!((a - b).norm() < 1e-8, "q={q}: {a} vs {b}");
        }
        assert!((ac.denominator(1000.0) - c(1.0, 0.0)).norm() <= 1e-5);
    }

    #[test]
    fn gaussian_autocorrelation_table() {
        let spec = PotentialSpec::gaussian(1.0, 0.5).unwrap();
        let ac = Autocorrelation::new(&spec).unwrap();
        let (h, step) = ac.table();
        for i in [1, 100, 1000, 3000] {
            let rho = i as f64 * step;
            let exact = rho * PI.powf(1.5) * (-rho * rho / 4.0).exp();
            assert!((h[i] - exact).abs() < 1e-10, "rho={rho}");
        }
    }

    #[test]
    fn amplitude_yamaguchi_value_and_optical_identity() {
        let lambda = Coupling::new(0.1).unwrap();
        let p = Profile::yukawa(1.0).unwrap();
        let d = yamaguchi_denominator(0.1, 1.0, 1.0);
        let n = direction(0.3, 1.2);
        let w = direction(2.0, -0.4);
        let f = amplitude(lambda, &p, d, 1.0, n, w).unwrap();
        assert!((f - c(-0.285_938_287_546_855_35, 0.089_830_162_353_724_65)).norm() < 1e-14);
        let g = amplitude(lambda, &p, d, 1.0, w, n).unwrap();
        assert_eq!(f, g);
        assert!((f.im - 1.0 * f.norm_sqr()).abs() < 1e-12);
    }

    #[test]
    fn amplitude_rejects_vanishing_denominator() {
        let lambda = Coupling::new(0.1).unwrap();
        let p = Profile::yukawa(1.0).unwrap();
        let e = amplitude(
            lambda,
            &p,
            c(0.0, 1e-12),
            1.0,
            [0.0, 0.0, 1.0],
            [0.0, 0.0, 1.0],
        );
        assert!(matches!(e, Err(Error::Condition7Violation { .. })));
    }

    #[test]
    fn forward_integral_closed_form_and_symmetry() {
        let g = UniformGrid::new(64.0, 4096).unwrap();
        let d = Denominator::closed_form_yamaguchi(0.1, 1.0, &g);
        let xi = compute_xi(&PotentialSpec::yamaguchi(0.1, 1.0).unwrap(), &g).unwrap();
        let f = forward_F(&xi, &d).unwrap();
        let j1 = g.zero_index() + 32;
        assert_eq!(g.point(j1), 1.0);
        let expected = c(-3.593_206_494_148_986_5, 1.128_839_112_484_959);
        assert!((f.values()[j1] - expected).norm() < 1e-13);
        assert!(f.samples().symmetry_deviation(Symmetry::Hermitian) < 1e-12);
    }

    #[test]
    fn condition7_flags_critical_coupling() {
        let g = UniformGrid::new(32.0, 512).unwrap();
        let d = Denominator::closed_form_yamaguchi(-1.0 / (2.0 * PI), 1.0, &g);
        let r = check_condition7(&d, 1e-8);
        assert!(!r.holds());
        assert_eq!(r.failing_shells, vec![0.0]);
        let d = Denominator::closed_form_yamaguchi(0.1, 1.0, &g);
        let r = check_condition7(&d, 1e-8);
        assert!(r.holds() && r.min_abs_d >= 0.9);
    }
}
