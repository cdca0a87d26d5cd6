use proptest::prelude::*;

use slowfast::cli::paired_lienard;
use slowfast::series::{
    codimension_from_series, g_from_h1, psi_from_h1, series_add, series_compose, series_invert, series_mul,
    SeriesCodimension, TruncatedSeries,
};

const N: usize = 16;

fn s(c: &[f64]) -> TruncatedSeries {
    TruncatedSeries::new(c, N)
}

fn size(a: &TruncatedSeries) -> f64 {
    a.coeffs().iter().fold(1.0f64, |m, v| m.max(v.abs()))
}

fn close(a: &TruncatedSeries, b: &TruncatedSeries, tol: f64) -> bool {
    a.max_abs_diff(b) <= tol * size(a).max(size(b))
}

/// Both composites against the identity; rounding scales with the largest
/// coefficient of either factor.
fn round_trips(psi: &TruncatedSeries, inv: &TruncatedSeries) -> bool {
    let id = TruncatedSeries::identity(psi.order());
    let tol = 1e-12 * size(psi).max(size(inv));
    psi.compose(inv).unwrap().max_abs_diff(&id) <= tol && inv.compose(psi).unwrap().max_abs_diff(&id) <= tol
}

#[test]
fn arithmetic_examples() {
    assert_eq!(series_mul(&s(&[1.0, 1.0]), &s(&[1.0, -1.0])), s(&[1.0, 0.0, -1.0]));
    assert_eq!(series_compose(&s(&[0.0, 0.0, 1.0]), &s(&[0.0, 1.0, 1.0])).unwrap(), s(&[0.0, 0.0, 1.0, 2.0, 1.0]));
    assert_eq!(series_add(&s(&[0.0, 1.0]), &s(&[0.0, -1.0])), TruncatedSeries::zero(N));
    // mixed orders truncate to the shorter operand
    let short = TruncatedSeries::new(&[1.0, 1.0], 3);
    assert_eq!(series_mul(&short, &s(&[1.0, 1.0])).order(), 3);
}

#[test]
fn psi_squares_back_to_the_height_function() {
    for h1 in [vec![0.0], vec![0.7], vec![0.0, 1.0], vec![1.0, -2.0, 0.5]] {
        let h = s(&h1);
        let psi = psi_from_h1(&h).unwrap();
        // Psi^2 = x^2 (1 - x h1)
        let want = series_mul(&TruncatedSeries::new(&[0.0, 0.0, 1.0], N), &(&s(&[1.0]) - &h.shift_up(1)));
        assert!(close(&series_mul(&psi, &psi), &want, 1e-14), "{h1:?}");
    }
    assert_eq!(psi_from_h1(&s(&[0.0])).unwrap(), TruncatedSeries::identity(N));
    let c = 0.7;
    let psi = psi_from_h1(&s(&[c])).unwrap();
    assert!((psi.coeff(2) + c / 2.0).abs() < 1e-15 && (psi.coeff(3) + c * c / 8.0).abs() < 1e-15);
    let psi = psi_from_h1(&s(&[0.0, 1.0])).unwrap();
    assert!((psi.coeff(3) + 0.5).abs() < 1e-15 && (psi.coeff(5) + 0.125).abs() < 1e-15);
}

#[test]
fn inversion_examples() {
    assert_eq!(series_invert(&TruncatedSeries::identity(N)).unwrap(), TruncatedSeries::identity(N));
    let inv = series_invert(&s(&[0.0, 1.0, 1.0])).unwrap();
    for (i, c) in [1.0, -1.0, 2.0, -5.0, 14.0, -42.0].into_iter().enumerate() {
        assert_eq!(inv.coeff(i + 1), c);
    }
    assert!(series_invert(&s(&[0.5, 1.0])).is_err());
    assert!(series_invert(&s(&[0.0, 2.0])).is_err());
}

#[test]
fn slow_dynamics_examples() {
    // differentiation costs one order
    let g = g_from_h1(&s(&[0.0])).unwrap();
    assert_eq!(g.order(), N - 1);
    assert!(g.coeffs().iter().enumerate().all(|(i, c)| *c == if i == 1 { -1.0 } else { 0.0 }));
    let g = g_from_h1(&s(&[1.0])).unwrap();
    match codimension_from_series(&g).unwrap() {
        SeriesCodimension::Finite { j: 0, alpha, codimension: 1 } => assert!((alpha + 3.0).abs() < 1e-12),
        other => panic!("{other:?}"),
    }
    assert_eq!(
        codimension_from_series(&g_from_h1(&s(&[0.0, 1.0])).unwrap()).unwrap(),
        SeriesCodimension::InfiniteUpTo { order: N - 3 }
    );
    assert!(matches!(
        codimension_from_series(&g_from_h1(&s(&[0.0, 0.0, 1.0])).unwrap()).unwrap(),
        SeriesCodimension::Finite { j: 1, codimension: 2, .. }
    ));
}

#[test]
fn g_matches_numerical_inversion() {
    // Psi for h1 = 1 is x sqrt(1 - x); invert it pointwise by bisection and
    // compare -Psi^-1 (Psi^-1)' with the truncated series at small X.
    let g = g_from_h1(&s(&[1.0])).unwrap();
    let psi = |x: f64| x * (1.0 - x).sqrt();
    let inv = |big: f64| {
        let (mut lo, mut hi) = (-0.5f64, 0.5f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if psi(mid) < big {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    };
    for i in 1..=10 {
        let big = 0.002 * f64::from(i) - 0.011;
        let x = inv(big);
        // (Psi^-1)' = 1 / Psi'(x)
        let dpsi = (1.0 - x).sqrt() - x / (2.0 * (1.0 - x).sqrt());
        let direct = -x / dpsi;
        assert!((g.eval(big) - direct).abs() < 1e-14, "X = {big}: {} vs {direct}", g.eval(big));
    }
}

fn h1_strategy() -> impl Strategy<Value = (usize, Vec<f64>)> {
    (0usize..=4, prop::collection::vec(-1.0f64..1.0, 10), prop_oneof![0.2f64..1.0, -1.0f64..-0.2]).prop_map(
        |(j, mut c, lead)| {
            // no even terms below x^(2j); odd terms anywhere
            for (i, v) in c.iter_mut().enumerate() {
                if i % 2 == 0 && i < 2 * j {
                    *v = 0.0;
                }
            }
            c[2 * j] = lead;
            (j, c)
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn inversion_composes_to_the_identity(tail in prop::collection::vec(-1.0f64..1.0, N - 1)) {
        let mut c = vec![0.0, 1.0];
        c.extend(tail);
        let psi = s(&c);
        let inv = series_invert(&psi).unwrap();
        prop_assert!(round_trips(&psi, &inv));
    }

    #[test]
    fn codimension_follows_the_lowest_even_term((j, c) in h1_strategy()) {
        let g = g_from_h1(&s(&c)).unwrap();
        prop_assert!((g.coeff(1) + 1.0).abs() < 1e-12 && g.coeff(0) == 0.0);
        match codimension_from_series(&g).unwrap() {
            SeriesCodimension::Finite { j: got, codimension, .. } => {
                prop_assert_eq!(got as usize, j);
                prop_assert_eq!(codimension as usize, j + 1);
            }
            other => prop_assert!(false, "{:?}", other),
        }
        let psi = psi_from_h1(&s(&c)).unwrap();
        let inv = series_invert(&psi).unwrap();
        prop_assert!(round_trips(&psi, &inv));
    }

    #[test]
    fn alpha_sign_agrees_with_the_divergence_integral(j in 0usize..=4, c in prop_oneof![0.2f64..2.0, -2.0f64..-0.2]) {
        let mut h1 = vec![0.0; 2 * j + 1];
        h1[2 * j] = c;
        let SeriesCodimension::Finite { alpha, .. } = codimension_from_series(&g_from_h1(&s(&h1)).unwrap()).unwrap() else {
            panic!("finite codimension expected");
        };
        let model = paired_lienard(&h1).unwrap().build().unwrap();
        let h = 1e-3f64.min(0.5 * model.max_height());
        let i = model.sdi_diagonal(h).unwrap();
        prop_assert_eq!(alpha > 0.0, i > 0.0, "alpha {} vs I {}", alpha, i);
    }

    #[test]
    fn even_h1_keeps_the_inverse_even_to_order_2j_plus_1(j in 0usize..=4, even in prop::collection::vec(-1.0f64..1.0, 5), lead in 0.2f64..1.0) {
        let mut c = vec![0.0; N];
        for (k, v) in even.iter().enumerate() {
            if 2 * k > 2 * j && 2 * k < N {
                c[2 * k] = *v;
            }
        }
        c[2 * j] = lead;
        let inv = series_invert(&psi_from_h1(&s(&c)).unwrap()).unwrap();
        let odd = (&inv - &TruncatedSeries::identity(N)).odd_part();
        for i in 0..=(2 * j + 1) {
            prop_assert!(odd.coeff(i) == 0.0, "order {}: {}", i, odd.coeff(i));
        }
    }
}
