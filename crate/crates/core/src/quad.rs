//! Quadrature rules: Gauss–Legendre nodes, adaptive Gauss–Kronrod (7/15)
//! for real and complex integrands, and Filon integration of `e^{iqx} h(x)`
//! against tabulated `h`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n > 0, "need at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        // Tricomi initial guess, then Newton on P_n.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Fixed Gauss–Legendre rule mapped onto intervals.
#[derive(Debug, Clone)]
pub struct GaussRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussRule {
    pub fn new(n: usize) -> Self {
        let (nodes, weights) = gauss_legendre(n);
        Self { nodes, weights }
    }

    pub fn integrate(&self, a: f64, b: f64, f: impl Fn(f64) -> f64) -> f64 {
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        let mut s = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            s += w * f(c + h * x);
        }
        s * h
    }

    pub fn integrate_complex(&self, a: f64, b: f64, f: impl Fn(f64) -> Complex64) -> Complex64 {
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        let mut s = Complex64::new(0.0, 0.0);
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            s += f(c + h * x) * *w;
        }
        s * h
    }

    /// Nodes and weights mapped to `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(x, w)| (c + h * x, w * h))
    }
}

// Kronrod 15-point abscissae (nonnegative half) and weights, with the
// embedded 7-point Gauss weights (QUADPACK qk15).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15_complex(f: &impl Fn(f64) -> Complex64, a: f64, b: f64) -> (Complex64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        kron += s * WGK[j];
        if j % 2 == 1 {
            gauss += s * WG[j / 2];
        }
    }
    let err = ((kron - gauss) * h).norm();
    (kron * h, err)
}

/// Tolerances for the adaptive integrators.
#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_intervals: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            abs: 1e-13,
            rel: 1e-10,
            max_intervals: 4000,
        }
    }
}

impl Tolerance {
    pub fn new(abs: f64, rel: f64) -> Self {
        Self {
            abs,
            rel,
            ..Self::default()
        }
    }
}

struct Segment {
    a: f64,
    b: f64,
    value: Complex64,
    err: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

/// Globally adaptive Gauss–Kronrod integration of a complex integrand over
/// a finite interval, bisecting the segment with the largest error estimate.
pub fn integrate_complex(
    f: impl Fn(f64) -> Complex64,
    a: f64,
    b: f64,
    tol: Tolerance,
) -> Result<Complex64> {
    if a == b {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let (v, e) = gk15_complex(&f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Segment {
        a,
        b,
        value: v,
        err: e,
    });
    let mut total = v;
    let mut total_err = e;
    let mut count = 1;
    while total_err > tol.abs.max(tol.rel * total.norm()) {
        if count >= tol.max_intervals {
            return Err(Error::QuadratureFailure {
                a,
                b,
                estimate: total_err,
            });
        }
        let seg = heap.pop().expect("heap holds at least one segment");
        let m = 0.5 * (seg.a + seg.b);
        if m <= seg.a || m >= seg.b {
            // Interval can no longer be bisected in floating point.
            return Err(Error::QuadratureFailure {
                a,
                b,
                estimate: total_err,
            });
        }
        let (v1, e1) = gk15_complex(&f, seg.a, m);
        let (v2, e2) = gk15_complex(&f, m, seg.b);
        total += v1 + v2 - seg.value;
        total_err += e1 + e2 - seg.err;
        heap.push(Segment {
            a: seg.a,
            b: m,
            value: v1,
            err: e1,
        });
        heap.push(Segment {
            a: m,
            b: seg.b,
            value: v2,
            err: e2,
        });
        count += 1;
        // Re-sum periodically to stop drift in the running error estimate.
        if count % 64 == 0 {
            total_err = heap.iter().map(|s| s.err).sum();
            total = heap.iter().map(|s| s.value).sum();
        }
    }
    Ok(total)
}

pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: Tolerance) -> Result<f64> {
    integrate_complex(|x| Complex64::new(f(x), 0.0), a, b, tol).map(|v| v.re)
}

/// `∫_a^∞ f(x) dx` through the map `x = a + t/(1-t)`.
pub fn integrate_to_infinity(f: impl Fn(f64) -> f64, a: f64, tol: Tolerance) -> Result<f64> {
    integrate(
        |t| {
            let s = 1.0 - t;
            let x = a + t / s;
            f(x) / (s * s)
        },
        0.0,
        1.0,
        tol,
    )
}

/// `∫_{-∞}^b f(x) dx`.
pub fn integrate_from_neg_infinity(f: impl Fn(f64) -> f64, b: f64, tol: Tolerance) -> Result<f64> {
    integrate_to_infinity(|x| f(2.0 * b - x), b, tol)
}

/// Filon–Simpson integration of `∫_{x0}^{x0 + 2M δ} e^{iqx} h(x) dx` from
/// samples `h_i = h(x0 + iδ)`, `i = 0..=2M`. The exponential is integrated
/// exactly against the piecewise-quadratic interpolant of `h`, so accuracy
/// does not degrade with `q`.
pub fn filon(samples: &[f64], x0: f64, step: f64, q: f64) -> Complex64 {
    assert!(
        samples.len() >= 3 && samples.len() % 2 == 1,
        "need 2M+1 samples"
    );
    let (m0, m1, m2) = filon_moments(q, step);
    let mut total = Complex64::new(0.0, 0.0);
    let mut i = 0;
    while i + 2 < samples.len() {
        let (hl, hc, hr) = (samples[i], samples[i + 1], samples[i + 2]);
        // h(t) = A + B t + C t² on t ∈ [-δ, δ] about the panel centre.
        let a = hc;
        let b = (hr - hl) / (2.0 * step);
        let c = (hr - 2.0 * hc + hl) / (2.0 * step * step);
        let centre = x0 + (i + 1) as f64 * step;
        let phase = Complex64::from_polar(1.0, q * centre);
        total += phase * (m0 * a + m1 * b + m2 * c);
        i += 2;
    }
    total
}

/// Moments `∫_{-δ}^{δ} e^{iqt} t^k dt` for `k = 0, 1, 2`.
fn filon_moments(q: f64, d: f64) -> (Complex64, Complex64, Complex64) {
    let th = q * d;
    if th.abs() < 0.2 {
        let t2 = th * th;
        let m0 = 2.0
            * d
            * (1.0 - t2 / 6.0 + t2 * t2 / 120.0 - t2 * t2 * t2 / 5040.0
                + t2 * t2 * t2 * t2 / 362_880.0);
        let m1 = 2.0
            * d
            * d
            * th
            * (1.0 / 3.0 - t2 / 30.0 + t2 * t2 / 840.0 - t2 * t2 * t2 / 45_360.0
                + t2 * t2 * t2 * t2 / 3_991_680.0);
        let m2 = 2.0
            * d
            * d
            * d
            * (1.0 / 3.0 - t2 / 10.0 + t2 * t2 / 168.0 - t2 * t2 * t2 / 6480.0
                + t2 * t2 * t2 * t2 / 443_520.0);
        (
            Complex64::new(m0, 0.0),
            Complex64::new(0.0, m1),
            Complex64::new(m2, 0.0),
        )
    } else {
        let (s, c) = th.sin_cos();
        let m0 = 2.0 * s / q;
        let m1 = 2.0 * (s - th * c) / (q * q);
        let m2 = 2.0 * ((th * th - 2.0) * s + 2.0 * th * c) / (q * q * q);
        (
            Complex64::new(m0, 0.0),
            Complex64::new(0.0, m1),
            Complex64::new(m2, 0.0),
        )
    }
}
