//! Conservative syntactic bound and per-variable Lipschitz constants.
//!
//! Lipschitz constants are with respect to moving a single variable; an
//! n-ary symbol contributes through the weighted tuple metric, so argument
//! `i` (0-based) is weighted by `2^-i`.

use super::{Formula, Signature, Term};
use crate::scalar::{int, rat, Rational};
use num_traits::Signed;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bounds {
    pub bound: Rational,
    /// One entry per free variable, in first-occurrence order.
    pub lipschitz: Vec<(String, Rational)>,
}

impl Bounds {
    pub fn lipschitz_of(&self, var: &str) -> Rational {
        self.lipschitz.iter().find(|(v, _)| v == var).map(|(_, l)| l.clone()).unwrap_or_else(|| int(0))
    }
}

fn term_lipschitz(t: &Term, var: &str, sig: &Signature) -> Rational {
    match t {
        Term::Var(v) => int(if v == var { 1 } else { 0 }),
        Term::Const(_) => int(0),
        Term::Apply(f, args) => {
            let lambda = sig.function(f).map(|s| s.lipschitz.clone()).unwrap_or_else(|| int(0));
            lambda * weighted(args, var, sig)
        }
    }
}

fn weighted(args: &[Term], var: &str, sig: &Signature) -> Rational {
    let mut weight = int(1);
    let mut total = int(0);
    for a in args {
        total += weight.clone() * term_lipschitz(a, var, sig);
        weight *= rat(1, 2);
    }
    total
}

fn bound_and_lipschitz(phi: &Formula, var: &str, sig: &Signature) -> (Rational, Rational) {
    match phi {
        Formula::Const(r) => (r.abs(), int(0)),
        Formula::Dist(a, b) => (int(1), term_lipschitz(a, var, sig) + term_lipschitz(b, var, sig)),
        Formula::Rel(r, args) => {
            let lambda = sig.relation(r).map(|s| s.lipschitz.clone()).unwrap_or_else(|| int(0));
            (int(1), lambda * weighted(args, var, sig))
        }
        Formula::Scale(r, body) => {
            let (b, l) = bound_and_lipschitz(body, var, sig);
            (r.abs() * b, r.abs() * l)
        }
        Formula::Add(l, r) => {
            let (bl, ll) = bound_and_lipschitz(l, var, sig);
            let (br, lr) = bound_and_lipschitz(r, var, sig);
            (bl + br, ll + lr)
        }
        Formula::Quant(_, v, body) => {
            let (b, l) = bound_and_lipschitz(body, var, sig);
            (b, if v == var { int(0) } else { l })
        }
    }
}

/// `|phi| <= bound` on every valid structure, and moving free variable `x`
/// by `t` changes the value by at most `lipschitz(x) * t`.
pub fn syntactic_bounds(phi: &Formula, sig: &Signature) -> Bounds {
    let bound = bound_and_lipschitz(phi, "", sig).0;
    let lipschitz = phi
        .free_variables()
        .into_iter()
        .map(|v| {
            let l = bound_and_lipschitz(phi, &v, sig).1;
            (v, l)
        })
        .collect();
    Bounds { bound, lipschitz }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse_formula;

    fn sig() -> Signature {
        Signature::new()
            .with_relation("P", 1, int(1))
            .unwrap()
            .with_relation("R", 2, int(1))
            .unwrap()
            .with_function("F", 1, int(3))
            .unwrap()
    }

    #[test]
    fn distance_bounds() {
        let b = syntactic_bounds(&parse_formula("d(x,y)", &sig()).unwrap(), &sig());
        assert_eq!(b.bound, int(1));
        assert_eq!(b.lipschitz, vec![("x".into(), int(1)), ("y".into(), int(1))]);
    }

    #[test]
    fn scaling_clause() {
        let b = syntactic_bounds(&parse_formula("2 * P(x)", &sig()).unwrap(), &sig());
        assert_eq!(b.bound, int(2));
        assert_eq!(b.lipschitz_of("x"), int(2));
    }

    #[test]
    fn sum_clause() {
        let b = syntactic_bounds(&parse_formula("1 + d(x,y)", &sig()).unwrap(), &sig());
        assert_eq!(b.bound, int(2));
        assert_eq!(b.lipschitz_of("x"), int(1));
    }

    #[test]
    fn quantifier_drops_bound_variable_and_functions_multiply() {
        let b = syntactic_bounds(&parse_formula("sup y . (R(x, y) - d(F(x), y))", &sig()).unwrap(), &sig());
        assert_eq!(b.bound, int(2));
        assert_eq!(b.lipschitz, vec![("x".into(), int(4))]);
        let b = syntactic_bounds(&parse_formula("R(y, x)", &sig()).unwrap(), &sig());
        assert_eq!(b.lipschitz_of("x"), rat(1, 2));
    }
}
