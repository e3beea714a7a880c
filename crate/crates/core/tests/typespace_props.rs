use linlogic::corpus;
use linlogic::extremal::{random_formula, random_signature, random_structure_over, random_weights, GeneratorParams, Rng8};
use linlogic::linalg::dot;
use linlogic::structure::{all_tuples, Assignment, FiniteStructure};
use linlogic::typespace::{context_names, realized_types, sigma_face, Fragment, FragmentParams};
use linlogic::ultramean::{build_ultramean, check_los_in, Charge};
use linlogic::Rational;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};

fn quick() -> FragmentParams {
    FragmentParams { rounds: 4, samples: 16, ..FragmentParams::default() }
}

fn random_case(seed: u64) -> (FiniteStructure<Rational>, Rng8) {
    let mut rng = Rng8::seed_from_u64(seed);
    let sig = random_signature(&mut rng, &GeneratorParams::default());
    let n = rng.gen_range(1..=4);
    (random_structure_over(&mut rng, &sig, n), rng)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn realizers_partition_the_tuples(seed in any::<u64>(), n in 1usize..=2) {
        let (s, _) = random_case(seed);
        let frag = Fragment::generate(&s, n, quick()).unwrap();
        let ts = realized_types(&s, &frag, n).unwrap();
        let mut seen: Vec<Vec<usize>> = ts.vectors.iter().flat_map(|v| v.realizers.clone()).collect();
        seen.sort();
        prop_assert_eq!(seen, all_tuples(s.size(), n).collect::<Vec<_>>());
        for (i, v) in ts.vectors.iter().enumerate() {
            for t in &v.realizers {
                prop_assert_eq!(ts.class_of(t), Some(i));
            }
        }
    }

    #[test]
    fn span_elements_are_functions_of_the_type(seed in any::<u64>()) {
        let (s, mut rng) = random_case(seed);
        let frag = Fragment::generate(&s, 1, quick()).unwrap();
        let names = context_names(1);
        for m in 1..=frag.max_context() {
            let names_m = context_names(m);
            for (i, e) in frag.basis(m).unwrap().iter().enumerate() {
                if let Ok(phi) = frag.basis_formula(m, i) {
                    let table = s.formula_table(&phi, &names_m).unwrap();
                    prop_assert_eq!(&table, &e.table);
                }
            }
        }
        let phi = random_formula(&mut rng, s.signature(), &names, 3, 2);
        let table = s.formula_table(&phi, &names).unwrap();
        if let Some(coeffs) = frag.express(1, &table).unwrap() {
            for (p, value) in table.iter().enumerate() {
                prop_assert_eq!(&dot(&coeffs, &frag.coordinates(&[p]).unwrap()), value);
            }
        }
    }

    #[test]
    fn fragment_formulas_average_over_factors(seed in any::<u64>()) {
        let mut rng = Rng8::seed_from_u64(seed);
        let sig = random_signature(&mut rng, &GeneratorParams::default());
        let factors: Vec<FiniteStructure<Rational>> = (0..2)
            .map(|_| {
                let n = rng.gen_range(1..=3);
                random_structure_over(&mut rng, &sig, n)
            })
            .collect();
        let charge = Charge::new(random_weights(&mut rng, 2)).unwrap();
        let u = build_ultramean(&factors, &charge).unwrap();
        let frag = Fragment::generate(&u.structure, 1, quick()).unwrap();
        for i in 0..frag.basis(1).unwrap().len() {
            let Ok(phi) = frag.basis_formula(1, i) else { continue };
            let free = phi.free_variables();
            for c in 0..u.representatives.len() {
                let tuples = vec![u.representatives[c].clone(); free.len()];
                prop_assert!(check_los_in(&u, &factors, &charge, &phi, &tuples).unwrap().equal);
            }
        }
    }

    #[test]
    fn sigma_faces_of_extreme_pairs(seed in any::<u64>()) {
        let (s, _) = random_case(seed);
        let frag = Fragment::generate(&s, 2, quick()).unwrap();
        prop_assume!(frag.saturated());
        let ts = realized_types(&s, &frag, 1).unwrap();
        let ext = ts.extreme_types().unwrap();
        for &p in &ext {
            for &q in &ext {
                let sf = sigma_face(&s, &frag, &ts, p, q).unwrap();
                prop_assert!(sf.verdict.is_face() && sf.marginals_match, "types {p}, {q}");
            }
        }
    }
}

#[test]
fn evaluation_agrees_with_coordinates_on_the_corpus() {
    let s = corpus::dc3();
    let frag = Fragment::generate(&s, 1, FragmentParams::default()).unwrap();
    let ts = realized_types(&s, &frag, 1).unwrap();
    for v in &ts.vectors {
        for t in &v.realizers {
            assert_eq!(frag.coordinates(t).unwrap(), v.coordinates);
            let phi = frag.basis_formula(1, 1).unwrap();
            let value = s.eval(&phi, &Assignment::zip(&context_names(1), t)).unwrap();
            assert_eq!(value, v.coordinates[1]);
        }
    }
}
