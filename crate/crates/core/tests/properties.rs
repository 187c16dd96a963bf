use std::f64::consts::PI;

use mahler_core::eclf::{ap_count, primes_up_to, resolve_bad_data, WeierstrassCurve, DEFAULT_P_MAX};
use mahler_core::elliptic::carlson_rf;
use mahler_core::lpoly::{parse_poly, IntPoly};
use mahler_core::mahler::mahler_jensen;
use mahler_core::quad::{tanh_sinh, Offsets};
use mahler_core::specialfn::bloch_wigner;
use num_complex::Complex64;
use proptest::prelude::*;
use proptest::strategy::ValueTree;

fn int_poly() -> impl Strategy<Value = IntPoly> {
    prop::collection::vec(((-3i32..=3, -3i32..=3), -5i64..=5), 1..7)
        .prop_map(|terms| IntPoly::from_terms(terms.into_iter().map(|((i, j), c)| (i, j, c))))
}

fn unimodular() -> impl Strategy<Value = [[i32; 2]; 2]> {
    prop::sample::select(vec![
        [[1, 0], [0, 1]],
        [[0, 1], [1, 0]],
        [[1, 1], [0, 1]],
        [[1, 0], [-1, 1]],
        [[-1, 0], [0, 1]],
        [[2, 1], [1, 1]],
        [[1, -2], [0, 1]],
    ])
}

fn mat_mul(a: [[i32; 2]; 2], b: [[i32; 2]; 2]) -> [[i32; 2]; 2] {
    let mut c = [[0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    c
}

fn unit_disc() -> impl Strategy<Value = Complex64> {
    (0.05f64..3.0, -PI..PI)
        .prop_map(|(r, t)| Complex64::from_polar(r, t))
        .prop_filter("away from 0 and 1", |z| (z - 1.0).norm() > 0.05)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn print_parse_round_trip(p in int_poly()) {
        let text = p.to_string();
        let back = parse_poly(&text).unwrap();
        prop_assert_eq!(back, p.to_symbolic());
    }

    #[test]
    fn transform_composition(p in int_poly(), a in unimodular(), b in unimodular()) {
        let two_step = p.monomial_transform(b, (0, 0)).unwrap().monomial_transform(a, (0, 0)).unwrap();
        prop_assert_eq!(two_step, p.monomial_transform(mat_mul(a, b), (0, 0)).unwrap());
    }

    #[test]
    fn carlson_homogeneity(x in 0.0f64..10.0, y in 0.01f64..10.0, z in 0.01f64..10.0, l in 0.01f64..100.0) {
        let base = carlson_rf(x, y, z).unwrap();
        prop_assert!((carlson_rf(l * x, l * y, l * z).unwrap() - base / l.sqrt()).abs() < 1e-13 * base / l.sqrt());
        prop_assert!((carlson_rf(y, z, x).unwrap() - base).abs() < 1e-14 * base);
    }

    #[test]
    fn bloch_wigner_functional_equations(z in unit_disc()) {
        let d = bloch_wigner(z);
        let one = Complex64::new(1.0, 0.0);
        prop_assert!((bloch_wigner(one - z) + d).abs() < 1e-12);
        prop_assert!((bloch_wigner(one / z) + d).abs() < 1e-12);
        prop_assert!((bloch_wigner(z.conj()) + d).abs() < 1e-12);
        prop_assert!(bloch_wigner(Complex64::new(z.re, 0.0)).abs() < 1e-12);
    }

    #[test]
    fn bloch_wigner_five_term(x in unit_disc(), y in unit_disc()) {
        let one = Complex64::new(1.0, 0.0);
        prop_assume!((x - y).norm() > 0.05 && (one - x * y).norm() > 0.05);
        let terms = [
            x,
            y,
            (one - x) / (one - x * y),
            one - x * y,
            (one - y) / (one - x * y),
        ];
        let s: f64 = terms.iter().map(|&t| bloch_wigner(t)).sum();
        prop_assert!(s.abs() < 1e-11, "sum {}", s);
    }

    #[test]
    fn quadrature_additivity(a in -2.0f64..-0.1, m in 0.1f64..0.9, b in 1.0f64..3.0) {
        // smooth part plus an inverse square root at `a`
        let g = |x: f64, from_a: f64| (3.0 * x).cos() * (-x * x).exp() + 1.0 / from_a.sqrt();
        let near = Offsets(|x: f64, da: f64, _| g(x, da));
        let far = Offsets(|x: f64, _, _| g(x, x - a));
        let whole = tanh_sinh(&near, a, b, 1e-13).unwrap().value;
        let parts = tanh_sinh(&near, a, m, 1e-13).unwrap().value + tanh_sinh(&far, m, b, 1e-13).unwrap().value;
        prop_assert!((whole - parts).abs() < 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn measure_invariance(p in int_poly(), a in unimodular(), s in (-2i32..=2, -2i32..=2)) {
        prop_assume!(p.y_range().map_or(false, |(lo, hi)| hi > lo));
        let base = mahler_jensen(&p.to_real(), 1e-10);
        prop_assume!(base.is_ok());
        let q = p.monomial_transform(a, s).unwrap();
        let moved = mahler_jensen(&q.to_real(), 1e-10).unwrap();
        prop_assert!((base.unwrap().value - moved.value).abs() < 1e-7);
    }
}

#[test]
fn hasse_bound_and_multiplicativity() {
    for curve in [WeierstrassCurve::e224(), WeierstrassCurve::e210()] {
        for p in primes_up_to(DEFAULT_P_MAX) {
            if let Ok(a) = ap_count(&curve, p) {
                assert!(((a * a) as u64) <= 4 * p, "{} p={p} a={a}", curve.label);
            }
        }
        let d = resolve_bad_data(&curve, curve.conductor, DEFAULT_P_MAX).unwrap();
        let mut runner = proptest::test_runner::TestRunner::deterministic();
        let pairs = (2usize..32, 2usize..32).prop_filter("coprime", |&(m, n)| gcd(m, n) == 1);
        for _ in 0..50 {
            let (m, n) = pairs.new_tree(&mut runner).unwrap().current();
            let lhs = d.an(m * n).unwrap();
            assert_eq!(lhs, d.an(m).unwrap() * d.an(n).unwrap(), "m={m} n={n}");
        }
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
