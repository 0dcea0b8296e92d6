//! Scattering states of `H = -Δ + λ(·, ψ₀)ψ₀` from the Lippmann–Schwinger
//! equation `ψ = e^{ik·x} − R₀(q + i0) V ψ`.
//!
//! For a rank-one potential the equation collapses to one scalar,
//! `c = (ψ, ψ₀)`, with `c D(q) = (2π)^{3/2} conj ψ̂₀(k)`, and
//! `ψ(x) = e^{ik·x} − λ c u(|x|)` where `u = R₀ψ₀` is the outgoing radial
//! solution
//! `u(r) = (1/qr) ∫₀^∞ sin(q min(r,s)) e^{iq max(r,s)} s ψ₀(s) ds`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::forward::DEFAULT_D_EPS;
use crate::profile::{norm3, radial_fourier, PotentialSpec, Profile};
use crate::quad::{self, GaussRule, Tolerance};

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn wave_tol() -> Tolerance {
    Tolerance {
        abs: 1e-14,
        rel: 1e-12,
        max_intervals: 4000,
    }
}

/// Integrate `f` over `[a, b]`, splitting at the profile's breakpoints.
fn integrate_pieces(
    profile: &Profile,
    f: impl Fn(f64) -> Complex64,
    a: f64,
    b: f64,
) -> Result<Complex64> {
    if b <= a {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let mut cuts = vec![a];
    cuts.extend(
        profile
            .breakpoints()
            .iter()
            .copied()
            .filter(|&x| x > a && x < b),
    );
    cuts.push(b);
    let mut total = Complex64::new(0.0, 0.0);
    for w in cuts.windows(2) {
        total += quad::integrate_complex(&f, w[0], w[1], wave_tol())?;
    }
    Ok(total)
}

/// Outgoing radial solution `u(r) = (R₀(q + i0) ψ₀)(r)` for `r > 0`.
pub fn outgoing_radial(profile: &Profile, q: f64, r: f64) -> Result<Complex64> {
    let big_r = profile.support_radius();
    let w = |s: f64| profile.r_psi(s);
    let inner_end = r.min(big_r);
    let inner = integrate_pieces(
        profile,
        |s| Complex64::new((q * s).sin() * w(s), 0.0),
        0.0,
        inner_end,
    )?;
    let outer = integrate_pieces(
        profile,
        |s| Complex64::from_polar(w(s), q * s),
        r.min(big_r),
        big_r,
    )?;
    let eiqr = Complex64::from_polar(1.0, q * r);
    Ok((eiqr * inner + (q * r).sin() * outer) / (q * r))
}

/// `D(q) = 1 + λ(R₀ψ₀, ψ₀) = 1 + λ (8π/q) ∫₀^∞ r ψ₀ e^{iqr} ∫₀^r sin(qs) s ψ₀ ds dr`.
pub fn green_denominator(spec: &PotentialSpec, q: f64) -> Result<Complex64> {
    if q <= 0.0 {
        return Err(Error::InvalidInput("the Green route needs q > 0".into()));
    }
    let profile = &spec.profile;
    let big_r = profile.support_radius();
    let mut edges: Vec<f64> = (0..=800).map(|i| big_r * i as f64 / 800.0).collect();
    edges.extend(
        profile
            .breakpoints()
            .iter()
            .copied()
            .filter(|&x| x > 0.0 && x < big_r),
    );
    edges.sort_by(f64::total_cmp);
    edges.dedup();
    let rule = GaussRule::new(20);
    let inner = |s: f64| (q * s).sin() * profile.r_psi(s);
    let mut cumulative = 0.0;
    let mut total = Complex64::new(0.0, 0.0);
    for e in edges.windows(2) {
        let (a, b) = (e[0], e[1]);
        for (r, wgt) in rule.mapped(a, b) {
            let i1 = cumulative + rule.integrate(a, r, inner);
            total += Complex64::from_polar(profile.r_psi(r) * i1 * wgt, q * r);
        }
        cumulative += rule.integrate(a, b, inner);
    }
    Ok(Complex64::new(1.0, 0.0) + spec.lambda.value() * 8.0 * PI / q * total)
}

/// Solution of the Lippmann–Schwinger equation for one incident momentum.
#[derive(Debug, Clone)]
pub struct ScatteringState {
    spec: PotentialSpec,
    k: [f64; 3],
    q: f64,
    /// `(ψ, ψ₀)`.
    pub c: Complex64,
    pub d: Complex64,
}

impl ScatteringState {
    pub fn new(spec: &PotentialSpec, k: [f64; 3]) -> Result<Self> {
        Self::with_eps(spec, k, DEFAULT_D_EPS)
    }

    pub fn with_eps(spec: &PotentialSpec, k: [f64; 3], eps: f64) -> Result<Self> {
        let q = norm3(k);
        if q <= 0.0 || !q.is_finite() {
            return Err(Error::InvalidInput(
                "incident momentum must be nonzero".into(),
            ));
        }
        let d = green_denominator(spec, q)?;
        if d.norm() <= eps {
            return Err(Error::Condition7Violation { q, abs_d: d.norm() });
        }
        let hat = radial_fourier(&spec.profile, q)?;
        let c = (2.0 * PI).powf(1.5) * hat.conj() / d;
        Ok(Self {
            spec: spec.clone(),
            k,
            q,
            c,
            d,
        })
    }

    pub fn momentum(&self) -> [f64; 3] {
        self.k
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn spec(&self) -> &PotentialSpec {
        &self.spec
    }

    /// `ψ(x, k) = e^{ik·x} − λ c u(|x|)`.
    pub fn psi(&self, x: [f64; 3]) -> Result<Complex64> {
        let plane = Complex64::from_polar(1.0, dot(self.k, x));
        let r = norm3(x);
        let u = if r == 0.0 {
            // u(0) = ∫ e^{iqs} s ψ₀ ds.
            integrate_pieces(
                &self.spec.profile,
                |s| Complex64::from_polar(self.spec.profile.r_psi(s), self.q * s),
                0.0,
                self.spec.profile.support_radius(),
            )?
        } else {
            outgoing_radial(&self.spec.profile, self.q, r)?
        };
        Ok(plane - self.spec.lambda.value() * self.c * u)
    }

    /// Forward amplitude implied by the far field:
    /// `ψ ~ e^{ik·x} + f e^{iqr}/r`.
    pub fn far_field_amplitude(&self) -> Result<Complex64> {
        let hat = radial_fourier(&self.spec.profile, self.q)?;
        Ok(-self.spec.lambda.value() * self.c * (PI / 2.0).sqrt() * hat)
    }
}

/// `ψ(x, k)` for a single point.
pub fn wavefunction(spec: &PotentialSpec, k: [f64; 3], x: [f64; 3]) -> Result<Complex64> {
    ScatteringState::new(spec, k)?.psi(x)
}

/// Independent check of the Lippmann–Schwinger equation at `x`.
///
/// `(ψ, ψ₀)` is recomputed from `ψ` itself by 3-D quadrature over
/// `(r, cos θ)` about `k`, and `R₀ψ₀(x)` by quadrature of the free Green's
/// function in coordinates centred at `x`. Returns
/// `|ψ(x) − e^{ik·x} + λ (ψ, ψ₀) R₀ψ₀(x)| / |ψ(x)|`.
pub fn ls_residual(state: &ScatteringState, x: [f64; 3]) -> Result<f64> {
    let c = inner_product_3d(state)?;
    let g = free_resolvent_3d(&state.spec.profile, state.q, x);
    let psi = state.psi(x)?;
    let plane = Complex64::from_polar(1.0, dot(state.k, x));
    let residual = psi - plane + state.spec.lambda.value() * c * g;
    Ok(residual.norm() / psi.norm())
}

/// `(ψ, ψ₀) = ∫ ψ(y) ψ₀(|y|) d³y` evaluated from `ψ` samples.
pub fn inner_product_3d(state: &ScatteringState) -> Result<Complex64> {
    let profile = &state.spec.profile;
    let khat = state.k.map(|v| v / state.q);
    // Any unit vector orthogonal to k.
    let perp = {
        let t = if khat[0].abs() < 0.9 {
            [1.0, 0.0, 0.0]
        } else {
            [0.0, 1.0, 0.0]
        };
        let p = dot(t, khat);
        let v = [t[0] - p * khat[0], t[1] - p * khat[1], t[2] - p * khat[2]];
        let n = norm3(v);
        v.map(|x| x / n)
    };
    let big_r = profile.support_radius();
    let panels = 120;
    let radial = GaussRule::new(16);
    let angular = GaussRule::new(48);
    let cells: Vec<(f64, f64)> = (0..panels)
        .flat_map(|p| {
            let a = big_r * p as f64 / panels as f64;
            let b = big_r * (p + 1) as f64 / panels as f64;
            radial.mapped(a, b).collect::<Vec<_>>()
        })
        .collect();
    let parts = cells
        .par_iter()
        .map(|&(r, wr)| {
            let mut s = Complex64::new(0.0, 0.0);
            for (t, wt) in angular.mapped(-1.0, 1.0) {
                let st = (1.0 - t * t).sqrt();
                let y = [
                    r * (t * khat[0] + st * perp[0]),
                    r * (t * khat[1] + st * perp[1]),
                    r * (t * khat[2] + st * perp[2]),
                ];
                s += state.psi(y)? * wt;
            }
            // d³y = 2π r² dr dt; r² ψ₀ = r · (r ψ₀).
            Ok(s * (2.0 * PI * r * profile.r_psi(r) * wr))
        })
        .collect::<Result<Vec<Complex64>>>()?;
    Ok(parts.iter().sum())
}

/// `R₀(q + i0)ψ₀(x) = ∫ e^{iq|x−y|} / (4π|x−y|) ψ₀(y) d³y`
/// written in spherical coordinates about `x`:
/// `(1/2) ∫₀^∞ ρ e^{iqρ} ∫_{-1}^{1} ψ₀(√(r² + ρ² + 2rρt)) dt dρ`.
pub fn free_resolvent_3d(profile: &Profile, q: f64, x: [f64; 3]) -> Complex64 {
    let r = norm3(x);
    let big_r = profile.support_radius();
    let rho_max = r + big_r;
    let panels = 200;
    let radial = GaussRule::new(16);
    let angular = GaussRule::new(32);
    let edges: Vec<f64> = {
        let mut e: Vec<f64> = (0..=panels)
            .map(|i| rho_max * i as f64 / panels as f64)
            .collect();
        // ρ = r is where the sphere about x passes through the origin.
        if r > 0.0 && r < rho_max {
            e.push(r);
        }
        e.sort_by(f64::total_cmp);
        e.dedup();
        e
    };
    let parts: Vec<Complex64> = edges
        .par_windows(2)
        .map(|e| {
            let mut s = Complex64::new(0.0, 0.0);
            for (rho, wr) in radial.mapped(e[0], e[1]) {
                let inner = angular.integrate(-1.0, 1.0, |t| {
                    let d2 = (r * r + rho * rho + 2.0 * r * rho * t).max(0.0);
                    let d = d2.sqrt();
                    if d > big_r || d == 0.0 {
                        0.0
                    } else {
                        profile.psi(d)
                    }
                });
                s += Complex64::from_polar(0.5 * rho * inner * wr, q * rho);
            }
            s
        })
        .collect();
    parts.iter().sum()
}
