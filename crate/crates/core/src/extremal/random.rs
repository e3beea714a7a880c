//! Seeded generators for structures, formulas and charges.

use num_traits::Signed;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::logic::{Formula, Signature, Term};
use crate::scalar::{int, rat, Rational, Tolerance};
use crate::structure::{all_tuples, FiniteStructure};

pub type Rng8 = ChaCha8Rng;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorParams {
    pub min_points: usize,
    pub max_points: usize,
    pub max_relations: usize,
    pub max_relation_arity: usize,
    pub max_constants: usize,
    /// Unary functions, each with Lipschitz constant 4.
    pub max_functions: usize,
}

impl Default for GeneratorParams {
    fn default() -> Self {
        GeneratorParams {
            min_points: 1,
            max_points: 4,
            max_relations: 2,
            max_relation_arity: 2,
            max_constants: 1,
            max_functions: 0,
        }
    }
}

pub fn random_signature(rng: &mut Rng8, params: &GeneratorParams) -> Signature {
    let mut sig = Signature::new();
    for i in 0..rng.gen_range(0..=params.max_constants) {
        sig.add_constant(&format!("c{i}")).expect("fresh constant");
    }
    for i in 0..rng.gen_range(0..=params.max_functions) {
        sig.add_function(&format!("F{i}"), 1, int(4)).expect("fresh function");
    }
    for i in 0..rng.gen_range(0..=params.max_relations) {
        let arity = rng.gen_range(1..=params.max_relation_arity.max(1));
        let lambda = int(rng.gen_range(1..=2));
        sig.add_relation(&format!("R{i}"), arity, lambda).expect("fresh relation");
    }
    sig
}

/// Metric with off-diagonal entries from {1/4, 1/2, 3/4, 1}, closed under
/// shortest paths.
pub fn random_metric(rng: &mut Rng8, n: usize) -> Vec<Vec<Rational>> {
    let mut d = vec![vec![int(0); n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let v = rat(rng.gen_range(1..=4), 4);
            d[i][j] = v.clone();
            d[j][i] = v;
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d[i][k].clone() + d[k][j].clone();
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    d
}

/// Random structure over `sig` with relation tables scaled into Lipschitz range.
pub fn random_structure_over(rng: &mut Rng8, sig: &Signature, n: usize) -> FiniteStructure<Rational> {
    let metric = random_metric(rng, n);
    let labels = (0..n).map(|i| format!("p{i}")).collect();
    let constants = sig.constants().iter().map(|_| rng.gen_range(0..n)).collect();
    let functions = sig.functions().iter().map(|f| (0..n.pow(f.arity as u32)).map(|_| rng.gen_range(0..n)).collect()).collect();
    let relations = sig
        .relations()
        .iter()
        .map(|r| {
            let tuples: Vec<Vec<usize>> = all_tuples(n, r.arity).collect();
            let mut values: Vec<Rational> = tuples.iter().map(|_| rat(rng.gen_range(-4..=4), 4)).collect();
            let mut worst = int(0);
            for i in 0..tuples.len() {
                for j in (i + 1)..tuples.len() {
                    let rho: Rational = tuples[i]
                        .iter()
                        .zip(&tuples[j])
                        .enumerate()
                        .map(|(k, (&a, &b))| metric[a][b].clone() / int(1 << k))
                        .sum();
                    let ratio = (values[i].clone() - values[j].clone()).abs() / (rho * r.lipschitz.clone());
                    if ratio > worst {
                        worst = ratio;
                    }
                }
            }
            if worst > int(1) {
                values.iter_mut().for_each(|v| *v = v.clone() / worst.clone());
            }
            values
        })
        .collect();
    FiniteStructure::from_parts(sig.clone(), labels, metric, constants, functions, relations, Tolerance::EXACT)
        .expect("generated tables have the right shape")
}

pub fn random_structure(rng: &mut Rng8, params: &GeneratorParams) -> FiniteStructure<Rational> {
    let sig = random_signature(rng, params);
    let n = rng.gen_range(params.min_points.max(1)..=params.max_points.max(1));
    random_structure_over(rng, &sig, n)
}

fn random_term(rng: &mut Rng8, sig: &Signature, vars: &[String], depth: usize) -> Term {
    let functions = sig.functions();
    if depth > 0 && !functions.is_empty() && rng.gen_bool(0.25) {
        let f = &functions[rng.gen_range(0..functions.len())];
        let args = (0..f.arity).map(|_| random_term(rng, sig, vars, depth - 1)).collect();
        return Term::apply(&f.name, args);
    }
    let constants = sig.constants();
    let pool = vars.len() + constants.len();
    if pool == 0 {
        return Term::var("x");
    }
    let i = rng.gen_range(0..pool);
    if i < vars.len() {
        Term::Var(vars[i].clone())
    } else {
        Term::Const(constants[i - vars.len()].clone())
    }
}

fn random_coefficient(rng: &mut Rng8) -> Rational {
    let q = rng.gen_range(1..=4);
    let mut p = rng.gen_range(-4..=4);
    if p == 0 {
        p = 1;
    }
    rat(p, q)
}

/// Random formula with free variables among `vars`, connective depth at most
/// `depth` and quantifier depth at most `quantifiers`. Binders are `u1, u2, ...`
/// by nesting level so they never clash.
pub fn random_formula(rng: &mut Rng8, sig: &Signature, vars: &[String], depth: usize, quantifiers: usize) -> Formula {
    random_formula_at(rng, sig, vars.to_vec(), depth, quantifiers, 1)
}

fn random_formula_at(
    rng: &mut Rng8,
    sig: &Signature,
    vars: Vec<String>,
    depth: usize,
    quantifiers: usize,
    level: usize,
) -> Formula {
    let choice = if depth == 0 { rng.gen_range(0..3) } else { rng.gen_range(0..6) };
    match choice {
        0 => Formula::constant(random_coefficient(rng)),
        1 | 2 => {
            let relations = sig.relations();
            if choice == 2 && !relations.is_empty() {
                let r = &relations[rng.gen_range(0..relations.len())];
                let args = (0..r.arity).map(|_| random_term(rng, sig, &vars, 1)).collect();
                Formula::rel(&r.name, args)
            } else {
                Formula::dist(random_term(rng, sig, &vars, 1), random_term(rng, sig, &vars, 1))
            }
        }
        3 => Formula::scale(random_coefficient(rng), random_formula_at(rng, sig, vars, depth - 1, quantifiers, level)),
        4 => {
            let left = random_formula_at(rng, sig, vars.clone(), depth - 1, quantifiers, level);
            let right = random_formula_at(rng, sig, vars, depth - 1, quantifiers, level);
            Formula::add(left, right)
        }
        _ => {
            if quantifiers == 0 {
                return random_formula_at(rng, sig, vars, depth - 1, quantifiers, level);
            }
            let binder = format!("u{level}");
            let mut inner = vars;
            inner.push(binder.clone());
            let body = random_formula_at(rng, sig, inner, depth - 1, quantifiers - 1, level + 1);
            if rng.gen_bool(0.5) {
                Formula::sup(&binder, body)
            } else {
                Formula::inf(&binder, body)
            }
        }
    }
}

/// Weights on `k` indices with denominators dividing 12, summing to one.
pub fn random_weights(rng: &mut Rng8, k: usize) -> Vec<Rational> {
    let mut raw: Vec<i64> = (0..k).map(|_| rng.gen_range(0..=3)).collect();
    if raw.iter().all(|&w| w == 0) {
        let i = rng.gen_range(0..k);
        raw[i] = 1;
    }
    let total: i64 = raw.iter().sum();
    raw.into_iter().map(|w| rat(w, total)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn generated_structures_validate() {
        for seed in 0..200 {
            let mut rng = Rng8::seed_from_u64(seed);
            let params = GeneratorParams { max_functions: 1, ..GeneratorParams::default() };
            let s = random_structure(&mut rng, &params);
            assert!(s.validate().is_valid(), "seed {seed}: {}", s.validate());
        }
    }

    #[test]
    fn formulas_check_against_signature() {
        let mut rng = Rng8::seed_from_u64(3);
        let params = GeneratorParams { max_functions: 1, ..GeneratorParams::default() };
        for _ in 0..100 {
            let sig = random_signature(&mut rng, &params);
            let vars = vec!["x".to_string(), "y".to_string()];
            let phi = random_formula(&mut rng, &sig, &vars, 3, 2);
            phi.check(&sig).unwrap();
            assert!(phi.free_variables().iter().all(|v| vars.contains(v)));
        }
    }

    #[test]
    fn generation_is_seeded() {
        let a = random_structure(&mut Rng8::seed_from_u64(9), &GeneratorParams::default());
        let b = random_structure(&mut Rng8::seed_from_u64(9), &GeneratorParams::default());
        assert_eq!(a, b);
        let w = random_weights(&mut Rng8::seed_from_u64(1), 3);
        assert_eq!(w.iter().cloned().sum::<Rational>(), int(1));
    }
}
