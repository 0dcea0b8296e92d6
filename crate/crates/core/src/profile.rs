//! Potential profiles `ψ₀`, their radial Fourier transforms, and sampled
//! form factors.
//!
//! The Fourier convention is `ψ̂(k) = (2π)^{-3/2} ∫ e^{-ik·x} ψ(x) dx`; for a
//! radial profile this reduces to the sine transform
//! `ψ̂(q) = sqrt(2/π) ∫₀^∞ r² ψ(r) sinc(qr) dr`.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::UniformGrid;
use crate::quad::{self, GaussRule, Tolerance};

/// Nonzero real coupling strength `λ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Coupling(f64);

impl Coupling {
    pub fn new(lambda: f64) -> Result<Self> {
        if !lambda.is_finite() || lambda == 0.0 {
            return Err(Error::InvalidPotential(format!(
                "coupling must be finite and nonzero, got {lambda}"
            )));
        }
        Ok(Self(lambda))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn sign(self) -> f64 {
        self.0.signum()
    }
}

impl TryFrom<f64> for Coupling {
    type Error = Error;
    fn try_from(v: f64) -> Result<Self> {
        Coupling::new(v)
    }
}

impl From<Coupling> for f64 {
    fn from(c: Coupling) -> f64 {
        c.0
    }
}

/// Radial profile `ψ₀(r)`.
#[derive(Debug, Clone, PartialEq)]
pub enum Profile {
    /// `e^{-α r²}`
    Gaussian {
        alpha: f64,
    },
    /// `e^{-μ r} / r`; the Yamaguchi form factor `∝ 1/(q² + μ²)`.
    Yukawa {
        mu: f64,
    },
    Tabulated(TabulatedProfile),
}

impl Profile {
    pub fn gaussian(alpha: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(Error::InvalidPotential(format!(
                "alpha must be positive, got {alpha}"
            )));
        }
        Ok(Profile::Gaussian { alpha })
    }

    pub fn yukawa(mu: f64) -> Result<Self> {
        if !(mu.is_finite() && mu > 0.0) {
            return Err(Error::InvalidPotential(format!(
                "mu must be positive, got {mu}"
            )));
        }
        Ok(Profile::Yukawa { mu })
    }

    pub fn tabulated(r: Vec<f64>, v: Vec<f64>) -> Result<Self> {
        TabulatedProfile::new(r, v).map(Profile::Tabulated)
    }

    /// `ψ₀(r)` for `r > 0`.
    pub fn psi(&self, r: f64) -> f64 {
        match self {
            Profile::Gaussian { alpha } => (-alpha * r * r).exp(),
            Profile::Yukawa { mu } => (-mu * r).exp() / r,
            Profile::Tabulated(t) => t.r_psi(r) / r,
        }
    }

    /// The bounded product `r ψ₀(r)`.
    pub fn r_psi(&self, r: f64) -> f64 {
        match self {
            Profile::Gaussian { alpha } => r * (-alpha * r * r).exp(),
            Profile::Yukawa { mu } => (-mu * r).exp(),
            Profile::Tabulated(t) => t.r_psi(r),
        }
    }

    /// Radius beyond which `r ψ₀(r)` is negligible (below ~1e-17 of its
    /// scale) or identically zero.
    pub fn support_radius(&self) -> f64 {
        match self {
            Profile::Gaussian { alpha } => (40.0 / alpha).sqrt(),
            Profile::Yukawa { mu } => 40.0 / mu,
            Profile::Tabulated(t) => *t.r.last().expect("validated nonempty"),
        }
    }

    /// Points where the profile's interpolant has kinks (tabulated knots).
    pub(crate) fn breakpoints(&self) -> &[f64] {
        match self {
            Profile::Tabulated(t) => &t.r,
            _ => &[],
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Profile::Gaussian { .. } => "gaussian",
            Profile::Yukawa { .. } => "yukawa",
            Profile::Tabulated(_) => "table",
        }
    }
}

/// Tabulated profile. The product `w(r) = r v(r)` is interpolated with a
/// monotone cubic; below the first knot `w` is held constant, beyond the
/// last knot the profile is zero.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedProfile {
    r: Vec<f64>,
    v: Vec<f64>,
    interp: MonotoneCubic,
}

impl TabulatedProfile {
    pub fn new(r: Vec<f64>, v: Vec<f64>) -> Result<Self> {
        if r.len() != v.len() || r.len() < 2 {
            return Err(Error::InvalidPotential(
                "table needs at least two (r, v) rows of equal length".into(),
            ));
        }
        if r.iter().chain(&v).any(|x| !x.is_finite()) {
            return Err(Error::InvalidPotential(
                "table contains non-finite values".into(),
            ));
        }
        if r[0] < 0.0 {
            return Err(Error::InvalidPotential("radii must be nonnegative".into()));
        }
        if r.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidPotential(
                "radii must be strictly increasing".into(),
            ));
        }
        let w: Vec<f64> = r.iter().zip(&v).map(|(r, v)| r * v).collect();
        let interp = MonotoneCubic::new(r.clone(), w);
        Ok(Self { r, v, interp })
    }

    pub fn radii(&self) -> &[f64] {
        &self.r
    }

    pub fn values(&self) -> &[f64] {
        &self.v
    }

    fn r_psi(&self, r: f64) -> f64 {
        let last = *self.r.last().unwrap();
        if r > last {
            0.0
        } else if r <= self.r[0] {
            self.interp.y[0]
        } else {
            self.interp.eval(r)
        }
    }
}

/// Fritsch–Carlson monotone piecewise-cubic Hermite interpolant.
#[derive(Debug, Clone, PartialEq)]
pub struct MonotoneCubic {
    x: Vec<f64>,
    y: Vec<f64>,
    d: Vec<f64>,
}

impl MonotoneCubic {
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Self {
        let n = x.len();
        let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
        let delta: Vec<f64> = (0..n - 1).map(|i| (y[i + 1] - y[i]) / h[i]).collect();
        let mut d = vec![0.0; n];
        if n == 2 {
            d[0] = delta[0];
            d[1] = delta[0];
        } else {
            for i in 1..n - 1 {
                if delta[i - 1] * delta[i] <= 0.0 {
                    d[i] = 0.0;
                } else {
                    let w1 = 2.0 * h[i] + h[i - 1];
                    let w2 = h[i] + 2.0 * h[i - 1];
                    d[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
                }
            }
            d[0] = end_slope(h[0], h[1], delta[0], delta[1]);
            d[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
        }
        Self { x, y, d }
    }

    pub fn eval(&self, t: f64) -> f64 {
        let n = self.x.len();
        let i = match self.x.partition_point(|&xi| xi <= t) {
            0 => 0,
            k if k >= n => n - 2,
            k => k - 1,
        };
        let h = self.x[i + 1] - self.x[i];
        let s = (t - self.x[i]) / h;
        let s2 = s * s;
        let s3 = s2 * s;
        let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
        let h10 = s3 - 2.0 * s2 + s;
        let h01 = -2.0 * s3 + 3.0 * s2;
        let h11 = s3 - s2;
        h00 * self.y[i] + h10 * h * self.d[i] + h01 * self.y[i + 1] + h11 * h * self.d[i + 1]
    }
}

fn end_slope(h0: f64, h1: f64, d0: f64, d1: f64) -> f64 {
    let d = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if d.signum() != d0.signum() {
        0.0
    } else if d0.signum() != d1.signum() && d.abs() > 3.0 * d0.abs() {
        3.0 * d0
    } else {
        d
    }
}

/// Coupling plus profile: the separable potential `V = λ (·, ψ₀) ψ₀`.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialSpec {
    pub lambda: Coupling,
    pub profile: Profile,
}

impl PotentialSpec {
    pub fn new(lambda: f64, profile: Profile) -> Result<Self> {
        Ok(Self {
            lambda: Coupling::new(lambda)?,
            profile,
        })
    }

    pub fn yamaguchi(lambda: f64, mu: f64) -> Result<Self> {
        Self::new(lambda, Profile::yukawa(mu)?)
    }

    pub fn gaussian(lambda: f64, alpha: f64) -> Result<Self> {
        Self::new(lambda, Profile::gaussian(alpha)?)
    }
}

/// `sin(x)/x`, stable near zero.
pub(crate) fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sin() / x
    }
}

/// Radial Fourier transform `ψ̂₀(q)` of a profile.
pub fn radial_fourier(profile: &Profile, q: f64) -> Result<Complex64> {
    if !(q.is_finite() && q >= 0.0) {
        return Err(Error::InvalidInput(format!(
            "q must be nonnegative, got {q}"
        )));
    }
    let value = match profile {
        Profile::Gaussian { alpha } => (2.0 * alpha).powf(-1.5) * (-q * q / (4.0 * alpha)).exp(),
        Profile::Yukawa { mu } => (2.0 / PI).sqrt() / (q * q + mu * mu),
        Profile::Tabulated(t) => tabulated_fourier(t, q)?,
    };
    Ok(Complex64::new(value, 0.0))
}

fn tabulated_fourier(t: &TabulatedProfile, q: f64) -> Result<f64> {
    let integrand = |r: f64| r * t.r_psi(r) * sinc(q * r);
    let scale: f64 =
        t.r.windows(2)
            .map(|w| (w[1] - w[0]) * (w[1] * t.r_psi(w[1])).abs())
            .sum::<f64>()
            .max(f64::MIN_POSITIVE);
    let tol = Tolerance::new(1e-14 * scale / t.r.len() as f64, 1e-10);
    // w is constant on [0, r_0].
    let mut total = quad::integrate(integrand, 0.0, t.r[0], tol)?;
    for w in t.r.windows(2) {
        total += quad::integrate(integrand, w[0], w[1], tol)?;
    }
    Ok((2.0 / PI).sqrt() * total)
}

/// Where a form factor's samples came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FormFactorSource {
    ClosedFormGaussian,
    ClosedFormYukawa,
    Quadrature,
    /// Samples supplied directly in momentum space.
    Supplied,
}

/// Radial samples `ψ̂₀(q)` on the nonnegative half of a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct FormFactor {
    grid: UniformGrid,
    values: Vec<Complex64>,
    source: FormFactorSource,
}

impl FormFactor {
    pub fn from_profile(profile: &Profile, grid: &UniformGrid) -> Result<Self> {
        let source = match profile {
            Profile::Gaussian { .. } => FormFactorSource::ClosedFormGaussian,
            Profile::Yukawa { .. } => FormFactorSource::ClosedFormYukawa,
            Profile::Tabulated(_) => FormFactorSource::Quadrature,
        };
        let values = edge_inclusive_points(grid)
            .into_iter()
            .map(|q| radial_fourier(profile, q))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            grid: *grid,
            values,
            source,
        })
    }

    /// Form factor given directly as a function of `q >= 0`.
    pub fn from_fn(grid: &UniformGrid, f: impl Fn(f64) -> Complex64) -> Self {
        Self {
            grid: *grid,
            values: edge_inclusive_points(grid).into_iter().map(f).collect(),
            source: FormFactorSource::Supplied,
        }
    }

    pub fn grid(&self) -> &UniformGrid {
        &self.grid
    }

    /// Samples at `0, Δ, ..., L` (the last entry is the `+L` edge value).
    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn source(&self) -> FormFactorSource {
        self.source
    }
}

/// Nonnegative grid points plus the excluded right edge `+L`.
pub(crate) fn edge_inclusive_points(grid: &UniformGrid) -> Vec<f64> {
    let mut pts = grid.nonneg_points();
    pts.push(grid.half_width());
    pts
}

/// A form factor that can be evaluated at an arbitrary momentum vector.
pub trait MomentumProfile: Send + Sync {
    fn eval(&self, k: [f64; 3]) -> Complex64;

    /// True when the value depends only on `|k|`.
    fn is_radial(&self) -> bool {
        false
    }
}

impl MomentumProfile for Profile {
    fn eval(&self, k: [f64; 3]) -> Complex64 {
        radial_fourier(self, norm3(k)).unwrap_or(Complex64::new(f64::NAN, f64::NAN))
    }

    fn is_radial(&self) -> bool {
        true
    }
}

impl<F> MomentumProfile for F
where
    F: Fn([f64; 3]) -> Complex64 + Send + Sync,
{
    fn eval(&self, k: [f64; 3]) -> Complex64 {
        self(k)
    }
}

pub(crate) fn norm3(k: [f64; 3]) -> f64 {
    (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]).sqrt()
}

/// Unit vector for polar angle `θ` and azimuth `φ`.
pub fn direction(theta: f64, phi: f64) -> [f64; 3] {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    [st * cp, st * sp, ct]
}

/// Product quadrature on the unit sphere: Gauss–Legendre in `cos θ` times a
/// uniform rule in `φ`.
#[derive(Debug, Clone)]
pub struct SphereQuadrature {
    pub directions: Vec<[f64; 3]>,
    pub weights: Vec<f64>,
}

impl SphereQuadrature {
    pub fn new(n_theta: usize, n_phi: usize) -> Self {
        let (x, w) = quad::gauss_legendre(n_theta);
        let dphi = 2.0 * PI / n_phi as f64;
        let mut directions = Vec::with_capacity(n_theta * n_phi);
        let mut weights = Vec::with_capacity(n_theta * n_phi);
        for (ct, wt) in x.iter().zip(&w) {
            for p in 0..n_phi {
                directions.push(direction(ct.acos(), p as f64 * dphi));
                weights.push(wt * dphi);
            }
        }
        Self {
            directions,
            weights,
        }
    }

    pub fn total_weight(&self) -> f64 {
        crate::grid::pairwise_sum(&self.weights)
    }
}

/// Samples `ψ̂₀(q n_m)` over a direction set, for `q` on the nonnegative
/// half of a grid (plus the `+L` edge).
#[derive(Clone)]
pub struct DirectionalFormFactor {
    grid: UniformGrid,
    sphere: SphereQuadrature,
    /// `values[i][m]` at `q_i`, direction `m`.
    values: Vec<Vec<Complex64>>,
}

impl std::fmt::Debug for DirectionalFormFactor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("DirectionalFormFactor")
            .field("grid", &self.grid)
            .field("directions", &self.sphere.directions.len())
            .finish()
    }
}

impl DirectionalFormFactor {
    pub fn sample(
        profile: &dyn MomentumProfile,
        grid: &UniformGrid,
        n_theta: usize,
        n_phi: usize,
    ) -> Self {
        let sphere = SphereQuadrature::new(n_theta, n_phi);
        let values = edge_inclusive_points(grid)
            .into_iter()
            .map(|q| {
                sphere
                    .directions
                    .iter()
                    .map(|n| profile.eval([q * n[0], q * n[1], q * n[2]]))
                    .collect()
            })
            .collect();
        Self {
            grid: *grid,
            sphere,
            values,
        }
    }

    pub fn grid(&self) -> &UniformGrid {
        &self.grid
    }

    pub fn sphere(&self) -> &SphereQuadrature {
        &self.sphere
    }

    pub fn values(&self) -> &[Vec<Complex64>] {
        &self.values
    }

    /// `∫ |ψ̂₀(q, Ω)|² dΩ` at each sampled `q`.
    pub fn angular_power(&self) -> Vec<f64> {
        self.values
            .iter()
            .map(|row| {
                let terms: Vec<f64> = row
                    .iter()
                    .zip(&self.sphere.weights)
                    .map(|(v, w)| w * v.norm_sqr())
                    .collect();
                crate::grid::pairwise_sum(&terms)
            })
            .collect()
    }
}

/// Shared handle to an arbitrary momentum-space form factor.
pub type SharedProfile = Arc<dyn MomentumProfile>;

/// Weighted radial integrals used to screen a profile for the integrability
/// conditions on `ψ₀`: `∫(1+r²)²ψ₀² d³x`, `∫|ψ₀| d³x` and `∫|ψ₀|^{4/3} d³x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IntegrabilityCheck {
    pub weighted_l2: f64,
    pub l1: f64,
    pub l4_3: f64,
}

impl IntegrabilityCheck {
    pub fn all_finite(&self) -> bool {
        self.weighted_l2.is_finite() && self.l1.is_finite() && self.l4_3.is_finite()
    }
}

pub fn integrability_check(profile: &Profile) -> Result<IntegrabilityCheck> {
    let r_max = profile.support_radius();
    let rule = GaussRule::new(20);
    let panels = 400;
    let h = r_max / panels as f64;
    let mut sums = [0.0; 3];
    for p in 0..panels {
        for (r, w) in rule.mapped(p as f64 * h, (p + 1) as f64 * h) {
            let rp = profile.r_psi(r);
            // 4π r² g(ψ) with ψ = rp / r, written in terms of rp to stay finite.
            sums[0] += w * 4.0 * PI * (1.0 + r * r).powi(2) * rp * rp;
            sums[1] += w * 4.0 * PI * r * rp.abs();
            sums[2] += w * 4.0 * PI * r.powf(2.0 / 3.0) * rp.abs().powf(4.0 / 3.0);
        }
    }
    Ok(IntegrabilityCheck {
        weighted_l2: sums[0],
        l1: sums[1],
        l4_3: sums[2],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_values() {
        let g = radial_fourier(&Profile::gaussian(0.5).unwrap(), 1.0).unwrap();
        assert!((g.re - (-0.5f64).exp()).abs() < 1e-15);
        let y = radial_fourier(&Profile::yukawa(1.0).unwrap(), 0.0).unwrap();
        assert!((y.re - 0.797_884_560_802_865_4).abs() < 1e-15);
        let y = radial_fourier(&Profile::yukawa(2.0).unwrap(), 2.0).unwrap();
        assert!((y.re - 0.099_735_570_100_358_17).abs() < 1e-15);
    }

    /// Sine-transform oracle by brute-force adaptive quadrature on the
    /// profile itself, independent of the closed forms.
    fn sine_transform_oracle(profile: &Profile, q: f64) -> f64 {
        let r_max = profile.support_radius();
        let v = quad::integrate(
            |r| r * profile.r_psi(r) * sinc(q * r),
            0.0,
            r_max,
            Tolerance::new(1e-15, 1e-12),
        )
        .unwrap();
        (2.0 / PI).sqrt() * v
    }

    #[test]
    fn closed_forms_agree_with_quadrature() {
        for p in [
            Profile::gaussian(0.5).unwrap(),
            Profile::yukawa(1.0).unwrap(),
            Profile::yukawa(2.0).unwrap(),
        ] {
            for q in [0.0, 0.3, 1.0, 2.0, 5.0] {
                let closed = radial_fourier(&p, q).unwrap().re;
                let oracle = sine_transform_oracle(&p, q);
                assert!(
                    (closed - oracle).abs() < 1e-9 * closed.abs().max(1e-3),
                    "{p:?} q={q}"
                );
            }
        }
    }

    #[test]
    fn tabulated_gaussian_matches_closed_form() {
        let r: Vec<f64> = (0..=600).map(|i| i as f64 * 0.02).collect();
        let v: Vec<f64> = r.iter().map(|r| (-0.5 * r * r).exp()).collect();
        let p = Profile::tabulated(r, v).unwrap();
        for q in [0.0, 0.5, 1.0, 3.0] {
            let t = radial_fourier(&p, q).unwrap().re;
            let exact = (-0.5 * q * q).exp();
            assert!((t - exact).abs() < 1e-6, "q={q}: {t} vs {exact}");
        }
    }

    #[test]
    fn tabulated_yukawa_uses_bounded_product() {
        let r: Vec<f64> = (1..=4000).map(|i| i as f64 * 0.01).collect();
        let v: Vec<f64> = r.iter().map(|r| (-r).exp() / r).collect();
        let p = Profile::tabulated(r, v).unwrap();
        let t = radial_fourier(&p, 1.0).unwrap().re;
        let exact = (2.0 / PI).sqrt() / 2.0;
        assert!((t - exact).abs() < 1e-4, "{t} vs {exact}");
    }

    #[test]
    fn table_validation() {
        assert!(Profile::tabulated(vec![0.0, 1.0, 1.0], vec![1.0, 2.0, 3.0]).is_err());
        assert!(Profile::tabulated(vec![0.0], vec![1.0]).is_err());
        assert!(Profile::tabulated(vec![-1.0, 1.0], vec![1.0, 2.0]).is_err());
        assert!(Profile::tabulated(vec![0.0, 1.0], vec![1.0, f64::NAN]).is_err());
    }

    #[test]
    fn coupling_must_be_nonzero() {
        assert!(Coupling::new(0.0).is_err());
        assert!(Coupling::new(f64::INFINITY).is_err());
        assert_eq!(Coupling::new(-0.3).unwrap().sign(), -1.0);
    }

    #[test]
    fn monotone_cubic_preserves_monotonicity() {
        let x = vec![0.0, 1.0, 2.0, 3.0, 4.0];
        let y = vec![0.0, 0.1, 0.2, 5.0, 5.1];
        let m = MonotoneCubic::new(x, y);
        let mut prev = m.eval(0.0);
        for i in 1..=400 {
            let v = m.eval(i as f64 * 0.01);
            assert!(v >= prev - 1e-15);
            prev = v;
        }
        assert_eq!(m.eval(3.0), 5.0);
    }

    #[test]
    fn sphere_weights_cover_the_sphere() {
        let s = SphereQuadrature::new(16, 24);
        assert!((s.total_weight() - 4.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn positive_profile_has_positive_transform_at_origin() {
        for p in [
            Profile::gaussian(2.0).unwrap(),
            Profile::yukawa(0.3).unwrap(),
        ] {
            assert!(radial_fourier(&p, 0.0).unwrap().re > 0.0);
        }
    }

    #[test]
    fn builtin_profiles_pass_integrability_screen() {
        for p in [
            Profile::gaussian(0.5).unwrap(),
            Profile::yukawa(1.0).unwrap(),
        ] {
            let c = integrability_check(&p).unwrap();
            assert!(c.all_finite() && c.l1 > 0.0);
        }
        // ∫ e^{-2μr} d³x/r² · r² = 4π/(2μ) for the Yukawa L² part at μ = 1.
        let c = integrability_check(&Profile::yukawa(1.0).unwrap()).unwrap();
        assert!(c.weighted_l2 > 2.0 * PI);
    }
}
