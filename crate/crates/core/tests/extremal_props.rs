use std::collections::BTreeSet;

use linlogic::corpus::{self, AnyStructure, NAMES};
use linlogic::extremal::{
    default_templates, is_extremal, maximizer_closure, minimal_submodel, run_cases, subset_types, suite_cases, Strategy, Suite,
    SuiteParams,
};
use linlogic::structure::FiniteStructure;
use linlogic::typespace::{realized_types, Fragment, FragmentParams};
use linlogic::{Scalar, Tolerance};
use proptest::prelude::*;

fn minimal_model_law<N: Scalar>(name: &str, s: &FiniteStructure<N>) {
    let frag = Fragment::generate(s, 1, FragmentParams::default()).unwrap();
    let min = minimal_submodel(s, &frag, Strategy::Exhaustive).unwrap().points;
    let ext = realized_types(s, &frag, 1).unwrap().extreme_types().unwrap();
    assert_eq!(subset_types(s, &frag, &min, 1).unwrap(), ext, "{name}");

    let sub = s.induced(&min).unwrap();
    let sub_frag = Fragment::generate(&sub, 1, FragmentParams::default()).unwrap();
    assert!(is_extremal(&sub, &sub_frag, 1).unwrap().extremal, "{name}");
}

#[test]
fn corpus_minimal_submodels_realize_exactly_the_extreme_types() {
    for name in NAMES {
        match corpus::load_corpus(name).unwrap().structure {
            AnyStructure::Exact(s) => minimal_model_law(name, &s),
            AnyStructure::Float(s) => minimal_model_law(name, &s),
        }
    }
}

#[test]
fn suite_counterexamples_recheck() {
    let params = SuiteParams { cases: 0, ..SuiteParams::default() };
    for suite in Suite::ALL {
        let r = run_cases(suite, &suite_cases(&params), &params.fragment).unwrap();
        for c in &r.counterexamples {
            assert!(c.recheck(suite).unwrap(), "{} on {}", suite.name(), c.case);
        }
    }
}

fn c8() -> FiniteStructure<f64> {
    corpus::c8(Tolerance::DEFAULT_FLOAT)
}

proptest! {
    #[test]
    fn closure_contains_seeds_and_is_a_fixed_point(seeds in prop::collection::btree_set(0usize..8, 1..4), argmin in any::<bool>()) {
        let s = c8();
        let t = default_templates(&s);
        let seeds: Vec<usize> = seeds.into_iter().collect();
        let r = maximizer_closure(&s, &seeds, &t, argmin).unwrap();
        prop_assert!(seeds.iter().all(|p| r.points.contains(p)));
        let again = maximizer_closure(&s, &r.points, &t, argmin).unwrap();
        prop_assert!(again.steps.is_empty());
        prop_assert_eq!(again.points, r.points);
    }

    #[test]
    fn closure_is_monotone(a in prop::collection::btree_set(0usize..4, 1..3), b in prop::collection::btree_set(0usize..4, 0..3)) {
        let s = corpus::u2();
        let t = default_templates(&s);
        let small: Vec<usize> = a.iter().copied().collect();
        let big: Vec<usize> = a.union(&b).copied().collect();
        let cs: BTreeSet<usize> = maximizer_closure(&s, &small, &t, false).unwrap().points.into_iter().collect();
        let cb: BTreeSet<usize> = maximizer_closure(&s, &big, &t, false).unwrap().points.into_iter().collect();
        prop_assert!(cs.is_subset(&cb));
    }
}
