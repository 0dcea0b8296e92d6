use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;
use scatter_core::forward::{amplitude, compute_xi, yamaguchi_denominator, ForwardData};
use scatter_core::grid::{extend_even_real, extend_hermitian, Symmetry, UniformGrid};
use scatter_core::inverse::{build_sie, solvability_report, solve_sie, SolveOptions};
use scatter_core::io::{complex_table, parse_table, real_table};
use scatter_core::profile::{direction, Coupling, PotentialSpec, Profile};
use scatter_core::singular::{ApplyS, SingularOperator};

fn complex_vec(n: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), n)
        .prop_map(|v| v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect())
}

fn sup(v: &[Complex64]) -> f64 {
    v.iter().fold(0.0, |m, z| m.max(z.norm()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn s_is_linear(
        phi in complex_vec(128),
        psi in complex_vec(128),
        a in (-3.0..3.0f64, -3.0..3.0f64),
        b in (-3.0..3.0f64, -3.0..3.0f64),
    ) {
        let op = SingularOperator::new(UniformGrid::new(8.0, 128).unwrap()).with_leak_threshold(f64::INFINITY);
        let (a, b) = (Complex64::new(a.0, a.1), Complex64::new(b.0, b.1));
        let mix: Vec<Complex64> = phi.iter().zip(&psi).map(|(x, y)| a * x + b * y).collect();
        let lhs = op.apply_values(&mix);
        let sp = op.apply_values(&phi);
        let ss = op.apply_values(&psi);
        let diff: Vec<Complex64> = lhs.iter().zip(sp.iter().zip(&ss)).map(|(l, (x, y))| l - a * x - b * y).collect();
        prop_assert!(sup(&diff) <= 1e-12 * (1.0 + sup(&lhs)));
    }

    #[test]
    fn real_even_maps_to_imaginary_odd(half in prop::collection::vec(-1.0..1.0f64, 64)) {
        let g = UniformGrid::new(10.0, 128).unwrap();
        let phi = extend_even_real(&half, &g).unwrap();
        let out = SingularOperator::new(g).with_leak_threshold(f64::INFINITY).apply_values(phi.values());
        let m = g.zero_index();
        for (j, z) in out.iter().enumerate() {
            prop_assert!(z.re.abs() <= 1e-10);
            if j > 0 {
                prop_assert!((z.im + out[2 * m - j].im).abs() <= 1e-10);
            }
        }
    }

    #[test]
    fn csv_round_trip_is_bit_exact(
        rows in prop::collection::vec((any::<f64>(), any::<f64>()), 1..40),
        start in -1e6..1e6f64,
    ) {
        let rows: Vec<(f64, f64)> = rows.into_iter().filter(|(a, b)| a.is_finite() && b.is_finite()).collect();
        prop_assume!(!rows.is_empty());
        let q: Vec<f64> = (0..rows.len()).map(|i| start + i as f64 * 0.5).collect();
        let values: Vec<Complex64> = rows.iter().map(|&(a, b)| Complex64::new(a, b)).collect();
        let t = parse_table(std::str::from_utf8(&complex_table(&q, &values).unwrap()).unwrap()).unwrap();
        prop_assert_eq!(&t.q, &q);
        for (x, y) in t.values.iter().zip(&values) {
            prop_assert_eq!(x.re.to_bits(), y.re.to_bits());
            prop_assert_eq!(x.im.to_bits(), y.im.to_bits());
        }
        let re: Vec<f64> = rows.iter().map(|r| r.0).collect();
        let t = parse_table(std::str::from_utf8(&real_table("xi", &q, &re).unwrap()).unwrap()).unwrap();
        for (x, y) in t.values.iter().zip(&re) {
            prop_assert_eq!(x.re.to_bits(), y.to_bits());
        }
    }

    #[test]
    fn extend_then_restrict_is_identity(half in complex_vec(32), even in prop::collection::vec(-5.0..5.0f64, 32)) {
        let g = UniformGrid::new(4.0, 64).unwrap();
        let mut half = half;
        half[0].im = 0.0;
        let f = extend_hermitian(&half, &g).unwrap();
        prop_assert_eq!(f.restrict_nonneg(), half);
        prop_assert!(f.symmetry_deviation(Symmetry::Hermitian) == 0.0);
        let e = extend_even_real(&even, &g).unwrap();
        let back: Vec<f64> = e.restrict_nonneg().iter().map(|z| z.re).collect();
        prop_assert_eq!(back, even);
    }

    #[test]
    fn small_data_has_zero_index(
        centers in prop::collection::vec(0.2..6.0f64, 1..4),
        coeffs in complex_vec(3),
        level in 0.01..0.99f64,
    ) {
        // Smooth Hermitian data rescaled so that sup|qF| = level · 2π.
        let g = UniformGrid::new(20.0, 1024).unwrap();
        let raw: Vec<Complex64> = g.nonneg_points().iter().map(|&q| {
            centers.iter().zip(&coeffs).map(|(c, a)| a * (-(q - c).powi(2)).exp()).sum::<Complex64>()
        }).collect();
        let peak = g.nonneg_points().iter().zip(&raw).fold(0.0_f64, |m, (q, v)| m.max(q * v.norm()));
        prop_assume!(peak > 1e-6);
        let mut half: Vec<Complex64> = raw.iter().map(|v| v * (level * 2.0 * PI / peak)).collect();
        half[0].im = 0.0;
        let f = ForwardData::from_samples(extend_hermitian(&half, &g).unwrap()).unwrap();
        let r = solvability_report(&f);
        prop_assert!(r.sup_qf < 2.0 * PI);
        prop_assert!(r.corollary_ok);
        prop_assert_eq!(r.winding, Some(0));
        prop_assert!(r.min_abs_c >= 2.0 * PI - r.sup_qf - 1e-12);
    }

    #[test]
    fn optical_identity_closed_form(q in 0.1..20.0f64, lambda in 0.01..0.5f64, mu in 0.5..3.0f64, neg in any::<bool>()) {
        let lambda = if neg { -lambda * mu.powi(3) / (4.0 * PI) } else { lambda };
        let p = Profile::yukawa(mu).unwrap();
        let d = yamaguchi_denominator(lambda, mu, q);
        let w = direction(0.7, 2.1);
        let f = amplitude(Coupling::new(lambda).unwrap(), &p, d, q, w, w).unwrap();
        prop_assert!((f.im - q * f.norm_sqr()).abs() <= 1e-10 * f.norm());
    }

    #[test]
    fn xi_is_even_and_vanishes_at_origin(lambda in -0.3..0.3f64, alpha in 0.2..2.0f64) {
        prop_assume!(lambda.abs() > 1e-3);
        let g = UniformGrid::new(20.0, 256).unwrap();
        let xi = compute_xi(&PotentialSpec::gaussian(lambda, alpha).unwrap(), &g).unwrap();
        let v = xi.real_values();
        let m = g.zero_index();
        prop_assert_eq!(v[m], 0.0);
        for j in 1..m {
            prop_assert_eq!(v[m + j], v[m - j]);
            prop_assert!(v[m + j] == 0.0 || v[m + j].signum() == lambda.signum());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn collocation_output_is_real_and_even(lambda in 0.02..0.2f64, mu in 0.7..2.0f64) {
        let g = UniformGrid::new(50.0, 1024).unwrap();
        let spec = PotentialSpec::yamaguchi(lambda, mu).unwrap();
        let xi = compute_xi(&spec, &g).unwrap();
        let d = scatter_core::forward::Denominator::closed_form_yamaguchi(lambda, mu, &g);
        let f = scatter_core::forward::forward_F(&xi, &d).unwrap();
        let op = SingularOperator::new(g);
        let sol = solve_sie(&build_sie(&f), &op, &SolveOptions { tol: 1e-2, ..SolveOptions::default() }).unwrap();
        let v = sol.xi.samples().values();
        let m = g.zero_index();
        prop_assert_eq!(v[m], Complex64::new(0.0, 0.0));
        for j in 1..m {
            prop_assert!(v[m + j].im.abs() <= 1e-10);
            prop_assert!((v[m + j] - v[m - j]).norm() <= 1e-10 * (1.0 + v[m + j].norm()));
        }
    }
}
