use itm_core::interval::{HalfOpenInterval, IntervalSet};
use itm_core::oracle::{default_return_budget, first_return_oracle};
use itm_core::reduction::{
    as_double_rotation, cell, classify_tight3, drop_edge_interval, fit, induce_type1, induce_type2,
    reduce_pipeline, reducibility_case, trap, trap_formula, truncate, untruncate, CaseLabel,
    ReducibilityVerdict,
};
use itm_core::typing::{detect_type_with, hull_chain_trap, DetectConfig};
use itm_core::{Itm, Rational, TightItm};
use proptest::prelude::*;

/// Valid maps on the `1/q` grid: sorted distinct breakpoints, then for each
/// piece a nonzero translation keeping the image inside `[0, 1)`.
fn grid_itm(d: usize, q: i64) -> impl Strategy<Value = Itm> {
    proptest::sample::subsequence((1..q).collect::<Vec<_>>(), d - 1)
        .prop_flat_map(move |cuts| {
            let mut edges = vec![0];
            edges.extend(&cuts);
            edges.push(q);
            let shifts: Vec<_> = edges
                .windows(2)
                .map(|w| (-w[0]..=q - w[1]).prop_filter("nonzero", |k| *k != 0))
                .collect();
            (Just(cuts), shifts)
        })
        .prop_map(move |(cuts, shifts)| {
            let b = cuts.iter().map(|&c| Rational::new(c, q)).collect();
            let g = shifts.iter().map(|&k| Rational::new(k, q)).collect();
            Itm::new(b, g).expect("constructed valid")
        })
}

fn irreducible(d: usize, q: i64) -> impl Strategy<Value = Itm> {
    grid_itm(d, q).prop_filter("irreducible", |t| {
        reducibility_case(t) == ReducibilityVerdict::Irreducible
    })
}

/// Tight canonical three-piece maps, obtained by fitting.
fn tight3(q: i64) -> impl Strategy<Value = TightItm> {
    irreducible(3, q)
        .prop_map(|t| fit(&t).expect("fit").fitted)
        .prop_filter("three pieces", |t| t.d() == 3)
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 300,
        max_global_rejects: 100_000,
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn trap_is_invariant_and_matches_hull_chain(t in irreducible(3, 64)) {
        let delta = trap(&t).unwrap();
        let set = IntervalSet::from(delta.clone());
        prop_assert!(t.image(&set).is_subset(&set));
        prop_assert_eq!(&delta, &hull_chain_trap(&t, 10_000).unwrap());
    }

    #[test]
    fn trap_matches_hull_chain_for_more_pieces(t in irreducible(5, 48)) {
        prop_assert_eq!(trap(&t).unwrap(), hull_chain_trap(&t, 10_000).unwrap());
    }

    #[test]
    fn fitting_is_tight_and_conjugate(t in irreducible(3, 64), k in 0i64..97) {
        let f = fit(&t).unwrap();
        prop_assert!(f.fitted.is_tight());
        prop_assert!(f.fitted.is_canonical());
        let y = Rational::new(k, 97);
        let x = f.to_original(&y);
        prop_assert_eq!(f.fitted.eval(&y).unwrap(), f.to_fitted(&t.eval(&x).unwrap()));
    }

    /// Only the breakpoints named by the cell are guaranteed to survive:
    /// other pieces may be transient and lie wholly outside the trap.
    #[test]
    fn cell_breakpoints_lie_in_a_tight_single_pass_trap(t in irreducible(4, 64)) {
        prop_assume!(t.is_canonical());
        let f = trap_formula(&t).unwrap();
        prop_assume!(!f.cell.boundary_flag);
        prop_assume!(f.interval == trap(&t).unwrap());
        prop_assert!(f.interval.contains(&t.edge(f.cell.j - 1)));
        prop_assert!(f.interval.contains(&t.edge(f.cell.k)));
    }

    #[test]
    fn truncation_round_trips(t in irreducible(3, 64)) {
        let c = cell(&t).unwrap();
        let (tr, aux) = truncate(&t, &c).unwrap();
        prop_assert_eq!(untruncate(&tr, &aux).unwrap(), t);
    }

    #[test]
    fn truncation_round_trips_for_four_pieces(t in irreducible(4, 32)) {
        let (tr, aux) = truncate(&t, &cell(&t).unwrap()).unwrap();
        prop_assert_eq!(untruncate(&tr, &aux).unwrap(), t);
    }

    #[test]
    fn dropping_a_dead_edge_is_a_conjugacy(t in grid_itm(3, 64), k in 0i64..101) {
        prop_assume!(reducibility_case(&t) != ReducibilityVerdict::Irreducible);
        let dropped = drop_edge_interval(&t).unwrap();
        let dom = &dropped.domain;
        let x = dom.left() + dom.length() * Rational::new(k, 101);
        let scale = dom.length().recip();
        let to_unit = |v: &Rational| (v - dom.left()) * &scale;
        prop_assert_eq!(dropped.map.eval(&to_unit(&x)).unwrap(), to_unit(&t.eval(&x).unwrap()));
    }

    #[test]
    fn inductions_match_the_oracle(t in tight3(64)) {
        let c = classify_tight3(&t).unwrap();
        let ind = match c.label {
            CaseLabel::B => induce_type1(&c).unwrap(),
            CaseLabel::Bi { .. } | CaseLabel::Ci { .. } => induce_type2(&c).unwrap(),
            _ => return Ok(()),
        };
        let oracle = first_return_oracle(&c.map, &ind.base, default_return_budget(&c.map)).unwrap();
        prop_assert_eq!(&oracle.pieces, &ind.pieces);
        let times = oracle.return_times();
        match c.label.escape_index() {
            None => prop_assert!(times.iter().all(|&n| n == 1 || n == 2)),
            Some(i) => {
                let i = i as usize;
                prop_assert!(times.iter().all(|&n| n == 1 || n == i + 1 || n == i + 2));
            }
        }
    }

    #[test]
    fn double_rotations_agree_pointwise(t in tight3(64)) {
        let c = classify_tight3(&t).unwrap();
        prop_assume!(matches!(c.label, CaseLabel::A | CaseLabel::APrime));
        let f = as_double_rotation(&t).unwrap();
        for k in 0..200 {
            let x = Rational::new(k, 200);
            prop_assert_eq!(f.eval(&x).unwrap(), t.eval(&x).unwrap());
        }
    }

    #[test]
    fn mirror_swaps_a_and_a_prime(t in tight3(64)) {
        let c = classify_tight3(&t).unwrap();
        let m = classify_tight3(&TightItm::try_from(t.mirror()).unwrap()).unwrap();
        match c.label {
            CaseLabel::A => prop_assert_eq!(m.label, CaseLabel::APrime),
            CaseLabel::APrime => prop_assert_eq!(m.label, CaseLabel::A),
            CaseLabel::Boundary { .. } => prop_assert!(m.label.is_boundary()),
            // the B/C branch normalizes |Δ_1| ≥ |Δ_3| by mirroring
            ref other => {
                prop_assert_eq!(&m.label, other);
                prop_assert_ne!(m.mirrored, c.mirrored);
            }
        }
    }

    #[test]
    fn pipeline_preserves_finiteness(t in grid_itm(3, 32)) {
        let tr = reduce_pipeline(&t).unwrap();
        let config = DetectConfig::default();
        if let Some(v) = tr.terminal_verdict {
            let original = detect_type_with(&t, &config).unwrap();
            prop_assert_eq!(original.is_finite(), v.is_finite());
        } else {
            prop_assert!(tr.terminal.is_boundary());
        }
    }
}

#[test]
fn trap_of_a_tight_map_is_the_unit_interval() {
    let t = Itm::new(
        vec![Rational::new(1, 2), Rational::new(3, 4)],
        vec![
            Rational::new(1, 2),
            Rational::new(-1, 8),
            Rational::new(-3, 4),
        ],
    )
    .unwrap();
    assert_eq!(trap(&t).unwrap(), HalfOpenInterval::unit());
}
