//! Term functions `M^m -> M` generated by variables, constants and function
//! symbols, deduplicated by table.

use crate::logic::Term;
use crate::scalar::Scalar;
use crate::structure::{all_tuples, Assignment, FiniteStructure};

/// Safety valve on the number of distinct term functions.
pub const MAX_TERMS: usize = 512;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TermFunction {
    pub term: Term,
    /// Value at every tuple of `M^m`, indexed by [`crate::structure::tuple_index`].
    pub table: Vec<usize>,
}

/// Closure of the variables and constants under the function symbols, up to
/// `depth` nested applications (unbounded when `None`).
pub fn term_closure<N: Scalar>(s: &FiniteStructure<N>, vars: &[String], depth: Option<usize>) -> Vec<TermFunction> {
    let size = s.size();
    let m = vars.len();
    let tuples: Vec<Vec<usize>> = all_tuples(size, m).collect();
    let mut out: Vec<TermFunction> = Vec::new();
    let push = |out: &mut Vec<TermFunction>, term: Term| -> bool {
        let table: Vec<usize> = tuples
            .iter()
            .map(|t| s.eval_term(&term, &Assignment::zip(vars, t)).expect("term over context variables"))
            .collect();
        if out.iter().any(|f| f.table == table) || out.len() >= MAX_TERMS {
            return false;
        }
        out.push(TermFunction { term, table });
        true
    };
    for v in vars {
        push(&mut out, Term::var(v));
    }
    for c in s.signature().constants() {
        push(&mut out, Term::constant(c));
    }
    let mut level = 0;
    loop {
        if depth.is_some_and(|d| level >= d) {
            break;
        }
        let snapshot = out.clone();
        let mut grew = false;
        for sym in s.signature().functions() {
            for args in all_tuples(snapshot.len(), sym.arity) {
                let term = Term::apply(&sym.name, args.iter().map(|&i| snapshot[i].term.clone()).collect());
                grew |= push(&mut out, term);
            }
        }
        level += 1;
        if !grew {
            break;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::logic::Signature;
    use crate::scalar::{int, Rational, Tolerance};

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn m2_has_identity_and_constant() {
        let terms = term_closure(&corpus::m2(), &names(&["x"]), None);
        assert_eq!(terms.iter().map(|t| t.term.clone()).collect::<Vec<_>>(), vec![Term::var("x"), Term::constant("c0")]);
    }

    #[test]
    fn dc3_has_identity_and_three_constants() {
        let terms = term_closure(&corpus::dc3(), &names(&["x"]), None);
        assert_eq!(terms.len(), 4);
        assert_eq!(terms[3].table, vec![2, 2, 2, 2]);
    }

    #[test]
    fn identity_function_adds_nothing() {
        let sig = Signature::new().with_function("F", 1, int(1)).unwrap();
        let metric = vec![vec![int(0), int(1)], vec![int(1), int(0)]];
        let s: FiniteStructure<Rational> =
            FiniteStructure::from_parts(sig, names(&["a", "b"]), metric, vec![], vec![vec![0, 1]], vec![], Tolerance::EXACT).unwrap();
        assert_eq!(term_closure(&s, &names(&["x"]), None).len(), 1);
    }

    #[test]
    fn swap_function_and_depth_cap() {
        let sig = Signature::new().with_function("F", 1, int(1)).unwrap();
        let metric = vec![vec![int(0), int(1)], vec![int(1), int(0)]];
        let s: FiniteStructure<Rational> =
            FiniteStructure::from_parts(sig, names(&["a", "b"]), metric, vec![], vec![vec![1, 0]], vec![], Tolerance::EXACT).unwrap();
        assert_eq!(term_closure(&s, &names(&["x"]), None).len(), 2);
        assert_eq!(term_closure(&s, &names(&["x"]), Some(0)).len(), 1);
    }
}
