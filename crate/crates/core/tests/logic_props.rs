use std::collections::HashMap;

use linlogic::corpus;
use linlogic::extremal::{random_formula, random_signature, random_structure_over, GeneratorParams, Rng8};
use linlogic::logic::{parse_formula, syntactic_bounds, Formula, Quantifier, Term};
use linlogic::scalar::int;
use linlogic::structure::{all_tuples, tuple_index, Assignment, FiniteStructure};
use linlogic::Rational;
use num_traits::Signed;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};

fn gen_params() -> GeneratorParams {
    GeneratorParams { max_functions: 1, max_constants: 2, ..GeneratorParams::default() }
}

fn vars() -> Vec<String> {
    vec!["x".into(), "y".into()]
}

fn oracle_term(s: &FiniteStructure<Rational>, t: &Term, env: &HashMap<String, usize>) -> usize {
    match t {
        Term::Var(v) => env[v],
        Term::Const(c) => s.constant(c).unwrap(),
        Term::Apply(f, args) => {
            let a: Vec<usize> = args.iter().map(|x| oracle_term(s, x, env)).collect();
            s.function_table(f).unwrap()[tuple_index(&a, s.size())]
        }
    }
}

/// Direct recursive evaluation, expanding quantifiers point by point.
fn oracle(s: &FiniteStructure<Rational>, phi: &Formula, env: &mut HashMap<String, usize>) -> Rational {
    match phi {
        Formula::Const(r) => r.clone(),
        Formula::Dist(a, b) => s.dist(oracle_term(s, a, env), oracle_term(s, b, env)).clone(),
        Formula::Rel(r, args) => {
            let a: Vec<usize> = args.iter().map(|x| oracle_term(s, x, env)).collect();
            s.relation_table(r).unwrap()[tuple_index(&a, s.size())].clone()
        }
        Formula::Scale(r, body) => r * oracle(s, body, env),
        Formula::Add(l, r) => oracle(s, l, env) + oracle(s, r, env),
        Formula::Quant(q, v, body) => {
            let saved = env.get(v).copied();
            let mut values = Vec::new();
            for p in 0..s.size() {
                env.insert(v.clone(), p);
                values.push(oracle(s, body, env));
            }
            match saved {
                Some(p) => env.insert(v.clone(), p),
                None => env.remove(v),
            };
            let it = values.into_iter();
            match q {
                Quantifier::Sup => it.max().unwrap(),
                Quantifier::Inf => it.min().unwrap(),
            }
        }
    }
}

fn corpus_exact() -> Vec<FiniteStructure<Rational>> {
    vec![corpus::m2(), corpus::u2(), corpus::dc3(), corpus::dc3_open(), corpus::singleton()]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn print_then_parse_is_identity(seed in any::<u64>()) {
        let mut rng = Rng8::seed_from_u64(seed);
        let sig = random_signature(&mut rng, &GeneratorParams { max_functions: 2, max_relations: 3, ..gen_params() });
        let phi = random_formula(&mut rng, &sig, &vars(), 4, 3);
        let back = parse_formula(&phi.to_string(), &sig).unwrap();
        prop_assert_eq!(back, phi);
    }

    #[test]
    fn eval_matches_the_oracle(seed in any::<u64>()) {
        let mut rng = Rng8::seed_from_u64(seed);
        let sig = random_signature(&mut rng, &gen_params());
        let n = rng.gen_range(1..=4);
        let s = random_structure_over(&mut rng, &sig, n);
        let phi = random_formula(&mut rng, &sig, &vars(), 3, 2);
        let free = phi.free_variables();
        for t in all_tuples(n, free.len()) {
            let mut env: HashMap<String, usize> = free.iter().cloned().zip(t.iter().copied()).collect();
            prop_assert_eq!(s.eval(&phi, &Assignment::zip(&free, &t)).unwrap(), oracle(&s, &phi, &mut env));
        }
    }

    #[test]
    fn bounds_and_lipschitz_constants_are_sound(seed in any::<u64>()) {
        let mut rng = Rng8::seed_from_u64(seed);
        let random = {
            let sig = random_signature(&mut rng, &gen_params());
            let n = rng.gen_range(1..=4);
            random_structure_over(&mut rng, &sig, n)
        };
        let mut structures = corpus_exact();
        structures.push(random);
        for s in &structures {
            let phi = random_formula(&mut rng, s.signature(), &vars(), 3, 2);
            let b = syntactic_bounds(&phi, s.signature());
            let free = phi.free_variables();
            for t in all_tuples(s.size(), free.len()) {
                let v = s.eval(&phi, &Assignment::zip(&free, &t)).unwrap();
                prop_assert!(v.abs() <= b.bound, "{phi}: |{v}| > {}", b.bound);
                for (i, var) in free.iter().enumerate() {
                    let lambda = b.lipschitz_of(var);
                    for u in 0..s.size() {
                        let mut t2 = t.clone();
                        t2[i] = u;
                        let w = s.eval(&phi, &Assignment::zip(&free, &t2)).unwrap();
                        let dist = s.dist(t[i], u).clone();
                        prop_assert!((v.clone() - w).abs() <= lambda.clone() * dist, "{phi} in {var}");
                    }
                }
            }
        }
    }
}

#[test]
fn relation_atoms_respect_bounds_on_validated_structures() {
    let mut rng = Rng8::seed_from_u64(5);
    for _ in 0..100 {
        let sig = random_signature(&mut rng, &gen_params());
        let s = random_structure_over(&mut rng, &sig, 3);
        assert!(s.validate().is_valid());
        for r in sig.relations() {
            let phi = Formula::rel(&r.name, (0..r.arity).map(|i| Term::Var(vars()[i % 2].clone())).collect());
            let b = syntactic_bounds(&phi, &sig);
            assert!(s.relation_table(&r.name).unwrap().iter().all(|v| v.abs() <= b.bound));
        }
    }
    assert_eq!(syntactic_bounds(&parse_formula("2 * P(x) + d(x, c0)", corpus::m2().signature()).unwrap(), corpus::m2().signature()).bound, int(3));
}
