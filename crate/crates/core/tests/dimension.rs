use proptest::prelude::*;

use slowfast::cli::analysis::Analysis;
use slowfast::cli::spec::ModelSpec;
use slowfast::cli::tables::run_table;
use slowfast::dimension::{
    borel_estimate, box_count_dimension, cahen_estimate, chirp_segments, chirp_theoretical_dimension,
    codimension_from_dimension, default_point_scales, default_segment_scales, default_snap_threshold,
    j_from_dimension, tail_nucleus_estimate, theoretical_dimension, BoxSet, CodimensionVerdict, JIndex, Method,
    Segment,
};
use slowfast::{generate_sequence, FractalSequence, NormalFormModel, SequenceConfig, SlowFastModel};

fn powers(p: f64, n: usize) -> FractalSequence {
    FractalSequence::from_heights((1..=n).map(|k| (k as f64).powf(-p)).collect()).unwrap()
}

fn point_dimension(points: &[f64]) -> f64 {
    box_count_dimension(BoxSet::Points(points), &default_point_scales(points).unwrap())
        .unwrap()
        .final_value
}

#[test]
fn power_sequences_have_their_classical_dimension() {
    // dim {k^-p} = 1/(1+p)
    for (p, d, tol) in [(1.0, 0.5, 0.05), (2.0, 1.0 / 3.0, 0.05), (0.5, 2.0 / 3.0, 0.05)] {
        let s = powers(p, 100_000);
        let borel = borel_estimate(&s).unwrap().final_value;
        let tail = tail_nucleus_estimate(&s).unwrap().final_value;
        assert!((borel - d).abs() < tol, "p={p}: borel {borel}");
        assert!((tail - d).abs() < tol, "p={p}: tail {tail}");
    }
    let cahen = cahen_estimate(&powers(1.0, 100_000)).unwrap().final_value;
    assert!((cahen - 0.5).abs() < 0.05);
}

#[test]
fn geometric_sequence_has_dimension_zero() {
    // the estimates decay like ln k / k; 2^-1000 is still a normal double
    let s = FractalSequence::from_heights((0..1000).map(|k| 2f64.powi(-k)).collect()).unwrap();
    for e in [cahen_estimate(&s), borel_estimate(&s), tail_nucleus_estimate(&s)] {
        let e = e.unwrap();
        assert!(e.final_value < 0.02, "{:?}: {}", e.method, e.final_value);
    }
}

#[test]
fn box_counting_matches_classical_sets() {
    let harmonic: Vec<f64> = (1..=100_000).map(|k| 1.0 / k as f64).collect();
    assert!((point_dimension(&harmonic) - 0.5).abs() < 0.05);
    // a grid counts as an interval at scales coarser than its pitch
    let grid: Vec<f64> = (0..10_000).map(|i| i as f64 / 9_999.0).collect();
    let scales: Vec<f64> = (1..=12).map(|i| 2f64.powi(-i)).collect();
    let d = box_count_dimension(BoxSet::Points(&grid), &scales).unwrap().final_value;
    assert!((d - 1.0).abs() < 0.03, "{d}");
}

#[test]
fn box_counting_is_bi_lipschitz_stable() {
    for p in [1.0, 2.0] {
        let base: Vec<f64> = (1..=50_000).map(|k| (k as f64).powf(-p)).collect();
        let d0 = point_dimension(&base);
        for c in [0.5, 2.0, 10.0] {
            let scaled: Vec<f64> = base.iter().map(|y| c * y).collect();
            let d = point_dimension(&scaled);
            assert!((d - d0).abs() < 0.02, "p={p} c={c}: {d} vs {d0}");
        }
    }
}

#[test]
fn box_counting_agrees_with_the_formulas_on_long_runs() {
    for j in [0u32, 1] {
        let m = NormalFormModel::new(2, 1, j, 1.0, 1.0).unwrap();
        let seq = generate_sequence(&m, &SequenceConfig::new(0.3, 100_000)).unwrap();
        let boxed = point_dimension(seq.heights());
        let tail = tail_nucleus_estimate(&seq).unwrap().final_value;
        assert!((boxed - tail).abs() < 0.05, "j={j}: box {boxed} vs tail-nucleus {tail}");
    }
}

/// The table runs are short: 100 steps from 1e-3 cover about one decade of
/// heights, too little for box counting to see the sequence's scaling.
#[test]
#[ignore = "a 100-step run spans about one decade of heights; box counting has no scaling range there"]
fn box_counting_agrees_with_the_formulas_on_table_one() {
    for o in run_table(1).unwrap() {
        let a = o.result.unwrap();
        let h = a.sequence.heights();
        let boxed = default_point_scales(h).and_then(|s| box_count_dimension(BoxSet::Points(h), &s));
        let boxed = boxed.map(|e| e.final_value).unwrap_or(f64::NAN);
        let (_, best) = a.best();
        assert!((boxed - best).abs() < 0.05, "row {}: box {boxed} vs {best}", o.row.row);
    }
}

#[test]
#[ignore = "Cahen and tail-nucleus disagree by up to 0.65 at 2000 iterations for large j"]
fn formula_estimates_agree_on_long_normal_form_runs() {
    for (n, j) in [(2u32, 0u32), (2, 5), (2, 10), (4, 10), (10, 10)] {
        let spec = ModelSpec::NormalForm { n, m: 1, j, alpha: 1.0, beta: 1.0 };
        let a = Analysis::run(spec, SequenceConfig::new(0.1, 2000)).unwrap();
        assert!(a.spread() < 0.05, "{spec}: spread {}", a.spread());
    }
}

#[test]
fn chirps_approach_their_theoretical_dimension() {
    for (j, tol) in [(0u32, 0.1), (1, 0.1)] {
        let m = NormalFormModel::new(2, 1, j, 1.0, 1.0).unwrap();
        let seq = generate_sequence(&m, &SequenceConfig::new(0.3, 100_000)).unwrap();
        let segs = chirp_segments(&m, &seq).unwrap();
        let d = box_count_dimension(BoxSet::Segments(&segs), &default_segment_scales(&segs).unwrap())
            .unwrap()
            .final_value;
        let want = chirp_theoretical_dimension(2, j);
        assert!((d - want).abs() < tol, "j={j}: {d} vs {want}");
    }
}

#[test]
fn chirp_segments_span_the_limits() {
    let m = NormalFormModel::new(2, 1, 0, 1.0, 1.0).unwrap();
    let seq = FractalSequence::from_heights(vec![0.04, 0.01]).unwrap();
    let segs = chirp_segments(&m, &seq).unwrap();
    assert_eq!(segs[0], Segment { x0: -0.2, x1: 0.2, y: 0.04 });
    assert!(segs[1].y < segs[0].y);
    let lien = slowfast::ClassicalLienardModel::new(0, 1.0).unwrap();
    let s = chirp_segments(&lien, &FractalSequence::from_heights(vec![0.01]).unwrap()).unwrap();
    assert!((lien.f(s[0].x0) - 0.01).abs() < 1e-15 && (lien.f(s[0].x1) - 0.01).abs() < 1e-15);
}

#[test]
fn theoretical_values() {
    assert_eq!(theoretical_dimension(2, JIndex::Finite(0)), 1.0 / 3.0);
    assert!((theoretical_dimension(4, JIndex::Finite(10)) - 0.84).abs() < 1e-15);
    assert_eq!(theoretical_dimension(2, JIndex::Infinite), 1.0);
    assert_eq!(chirp_theoretical_dimension(2, 0), 1.0);
    assert!((chirp_theoretical_dimension(2, 1) - 1.4).abs() < 1e-15);
    assert!((chirp_theoretical_dimension(4, 10) - 1.8).abs() < 1e-15);
}

#[test]
fn published_dimensions_snap_to_their_codimension() {
    for (d, j) in [(1.0 / 3.0, 0u32), (0.600363, 1), (0.98019, 49)] {
        let r = codimension_from_dimension(2, d, default_snap_threshold(2));
        assert_eq!(r.verdict, CodimensionVerdict::Finite { j, codimension: j + 1 }, "{d}");
    }
    let r = codimension_from_dimension(2, 1.0, default_snap_threshold(2));
    assert_eq!(r.verdict, CodimensionVerdict::Infinite);
}

#[test]
fn codimension_round_trip() {
    for n in [2u32, 4, 10, 100] {
        for j in 0..=50u32 {
            let d = theoretical_dimension(n, JIndex::Finite(j));
            let r = codimension_from_dimension(n, d, default_snap_threshold(n));
            assert_eq!(r.recovered_j(), Some(JIndex::Finite(j)), "n={n} j={j}");
            assert!((j_from_dimension(n, d) - f64::from(j)).abs() < 1e-6 * f64::from(j + 1));
        }
    }
}

#[test]
fn admissible_dimensions_are_separated() {
    for n in [2u32, 4, 10] {
        for j in 0..=200u32 {
            let gap = theoretical_dimension(n, JIndex::Finite(j + 1)) - theoretical_dimension(n, JIndex::Finite(j));
            let bound = 2.0 / f64::from(n + 2 * j + 1).powi(2);
            assert!(gap > bound, "n={n} j={j}: {gap} vs {bound}");
        }
    }
}

#[test]
fn estimates_far_from_every_value_are_unresolved() {
    // halfway between 1/3 and 3/5
    let r = codimension_from_dimension(2, 0.4667, default_snap_threshold(2));
    assert!(matches!(r.verdict, CodimensionVerdict::Unresolved { .. }));
    assert_eq!(r.codimension_label(), "unresolved");
}

#[test]
fn formula_traces_are_complete() {
    let s = powers(1.0, 1000);
    let c = cahen_estimate(&s).unwrap();
    let b = borel_estimate(&s).unwrap();
    assert_eq!(c.per_k.len(), 999);
    assert_eq!(b.per_k.first().unwrap().0, 2);
    assert_eq!(c.method, Method::Cahen);
    assert!(cahen_estimate(&FractalSequence::from_heights(vec![1.0, 0.5]).unwrap()).is_err());
}

proptest! {
    #[test]
    fn theoretical_dimension_is_monotone(n in 1u32..60, j in 0u32..300) {
        let n = 2 * n;
        let d = theoretical_dimension(n, JIndex::Finite(j));
        prop_assert!(theoretical_dimension(n, JIndex::Finite(j + 1)) > d);
        prop_assert!(theoretical_dimension(n + 2, JIndex::Finite(j)) < d);
        prop_assert!(d > 0.0 && d < 1.0);
    }

    #[test]
    fn recovered_index_inverts_the_dimension(n in 1u32..60, j in 0u32..300) {
        let n = 2 * n;
        let d = theoretical_dimension(n, JIndex::Finite(j));
        let r = codimension_from_dimension(n, d, default_snap_threshold(n));
        if let CodimensionVerdict::Finite { j: got, codimension } = r.verdict {
            prop_assert_eq!(got, j);
            prop_assert_eq!(codimension, j + 1);
        } else {
            // the snap threshold is fixed per n, so for very large j the
            // admissible values crowd closer than it
            prop_assert!(j > 50);
        }
    }

    #[test]
    fn final_values_are_clamped(p in 0.2f64..5.0, n in 10usize..2000) {
        let s = powers(p, n);
        for e in [cahen_estimate(&s).unwrap(), borel_estimate(&s).unwrap(), tail_nucleus_estimate(&s).unwrap()] {
            prop_assert!((0.0..=1.0).contains(&e.final_value));
            prop_assert!(!e.per_k.is_empty());
        }
    }

    #[test]
    fn model_sequences_admit_all_estimators(j in 0u32..4, t in 0.05f64..0.9) {
        let m = NormalFormModel::new(2, 1, j, 1.0, 1.0).unwrap();
        let seq = generate_sequence(&m, &SequenceConfig::new(t * m.max_height(), 200)).unwrap();
        for method in Method::FORMULAS {
            let e = slowfast::dimension::formula_estimate_by(&seq, method).unwrap();
            prop_assert!((0.0..=1.0).contains(&e.final_value));
        }
    }
}
