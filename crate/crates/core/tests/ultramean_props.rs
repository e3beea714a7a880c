use linlogic::corpus;
use linlogic::extremal::{random_formula, random_signature, random_structure_over, random_weights, GeneratorParams, Rng8};
use linlogic::logic::Formula;
use linlogic::scalar::rat;
use linlogic::structure::{all_tuples, Assignment, FiniteStructure};
use linlogic::ultramean::{build_ultramean, check_los_in, Charge};
use linlogic::Rational;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};

fn vars() -> Vec<String> {
    vec!["x".into(), "y".into()]
}

struct Instance {
    factors: Vec<FiniteStructure<Rational>>,
    charge: Charge,
    phi: Formula,
}

fn instance(seed: u64) -> (Instance, Rng8) {
    let mut rng = Rng8::seed_from_u64(seed);
    let sig = random_signature(&mut rng, &GeneratorParams { max_functions: 1, ..GeneratorParams::default() });
    let k = rng.gen_range(1..=3);
    let factors = (0..k)
        .map(|_| {
            let n = rng.gen_range(1..=3);
            random_structure_over(&mut rng, &sig, n)
        })
        .collect();
    let charge = Charge::new(random_weights(&mut rng, k)).unwrap();
    let phi = random_formula(&mut rng, &sig, &vars(), 3, 2);
    (Instance { factors, charge, phi }, rng)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn averaging_identity_on_every_class_tuple(seed in any::<u64>()) {
        let (inst, _) = instance(seed);
        let u = build_ultramean(&inst.factors, &inst.charge).unwrap();
        let free = inst.phi.free_variables();
        for classes in all_tuples(u.representatives.len(), free.len()) {
            let tuples: Vec<Vec<usize>> = classes.iter().map(|&c| u.representatives[c].clone()).collect();
            let c = check_los_in(&u, &inst.factors, &inst.charge, &inst.phi, &tuples).unwrap();
            prop_assert!(c.equal, "{}: {} != {}", inst.phi, c.lhs, c.rhs);
        }
    }

    #[test]
    fn diagonal_embedding_is_elementary(seed in any::<u64>()) {
        let (inst, mut rng) = instance(seed);
        let n = &inst.factors[0];
        let k = rng.gen_range(1..=3);
        let copies = vec![n.clone(); k];
        let charge = Charge::new(random_weights(&mut rng, k)).unwrap();
        let u = build_ultramean(&copies, &charge).unwrap();
        let free = inst.phi.free_variables();
        for t in all_tuples(n.size(), free.len()) {
            let classes: Vec<usize> = t.iter().map(|&a| u.class_of(&vec![a; k]).unwrap()).collect();
            let lhs = n.eval(&inst.phi, &Assignment::zip(&free, &t)).unwrap();
            let rhs = u.structure.eval(&inst.phi, &Assignment::zip(&free, &classes)).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn ultrameans_validate(seed in any::<u64>()) {
        let (inst, _) = instance(seed);
        let u = build_ultramean(&inst.factors, &inst.charge).unwrap();
        prop_assert!(u.structure.validate().is_valid(), "{}", u.structure.validate());
    }

    #[test]
    fn u2_midpoints_average_the_diagonal(seed in any::<u64>()) {
        let u = corpus::u2();
        let mut rng = Rng8::seed_from_u64(seed);
        let phi = random_formula(&mut rng, u.signature(), &["x".to_string()], 3, 2);
        let free = phi.free_variables();
        let at = |label: &str| {
            let p = u.point(label).unwrap();
            u.eval(&phi, &Assignment::zip(&free, &vec![p; free.len()])).unwrap()
        };
        prop_assert_eq!(at("[a0a1]"), rat(1, 2) * at("[a0a0]") + rat(1, 2) * at("[a1a1]"));
    }
}
