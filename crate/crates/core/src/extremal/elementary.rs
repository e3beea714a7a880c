//! Fragment-relative elementary substructures.

use std::collections::HashMap;

use thiserror::Error;

use crate::convex::{extreme_subset, ConvexError};
use crate::scalar::Scalar;
use crate::structure::{all_tuples, tuple_index, ClosureFailure, FiniteStructure};
use crate::typespace::{context_names, Fragment, FragmentError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ElementaryError {
    #[error("subset is empty")]
    EmptySubset,
    #[error("point {0} does not exist")]
    BadPoint(usize),
    #[error(transparent)]
    NotClosed(#[from] ClosureFailure),
    #[error(transparent)]
    Fragment(#[from] FragmentError),
    #[error(transparent)]
    Convex(#[from] ConvexError),
}

/// Evidence that a subset is not elementary.
#[derive(Debug, Clone, PartialEq)]
pub enum Mismatch<N> {
    /// A fragment formula whose value on the substructure differs from the ambient one.
    Value {
        context: usize,
        /// Index into the basis, or into the derived list when `derived` is set.
        basis_index: usize,
        derived: bool,
        /// Assignment, as points of the ambient structure.
        tuple: Vec<usize>,
        in_sub: N,
        in_full: N,
        /// The formula, when small enough to print.
        formula: Option<String>,
    },
    /// Over `prefix`, the extension by `witness` has an extreme coordinate
    /// vector in context `context` that no extension inside the subset realizes.
    /// Some sup over the last variable then differs.
    Extension { context: usize, prefix: Vec<usize>, witness: usize, coordinates: Vec<N> },
}

/// Sorted, deduplicated subset after range checks.
pub fn normalize_subset(size: usize, subset: &[usize]) -> Result<Vec<usize>, ElementaryError> {
    if subset.is_empty() {
        return Err(ElementaryError::EmptySubset);
    }
    if let Some(&p) = subset.iter().find(|&&p| p >= size) {
        return Err(ElementaryError::BadPoint(p));
    }
    let mut out = subset.to_vec();
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// `Ok(None)` when every basis and derived formula agrees on every assignment into the
/// subset; otherwise the first disagreement by context, basis index and tuple.
pub fn is_elementary_submodel<N: Scalar>(
    s: &FiniteStructure<N>,
    subset: &[usize],
    frag: &Fragment<N>,
) -> Result<Option<Mismatch<N>>, ElementaryError> {
    let subset = normalize_subset(s.size(), subset)?;
    let sub = s.induced(&subset)?;
    if s.size() != frag.points() {
        return Err(FragmentError::SizeMismatch { expected: frag.points(), found: s.size() }.into());
    }
    let k = subset.len();
    let tol = s.tolerance();
    let mut memo = HashMap::new();
    for m in 1..=frag.max_context() {
        let basis = frag.basis(m)?;
        let derived = frag.derived(m)?;
        let local: Vec<Vec<usize>> = all_tuples(k, m).collect();
        let ambient: Vec<usize> =
            local.iter().map(|t| tuple_index(&t.iter().map(|&i| subset[i]).collect::<Vec<_>>(), s.size())).collect();
        let elements = basis.iter().enumerate().map(|(i, e)| (false, i, e));
        for (is_derived, bi, e) in elements.chain(derived.iter().enumerate().map(|(i, e)| (true, i, e))) {
            let table = frag.node_table(e.node, &sub, &mut memo);
            for (li, t) in local.iter().enumerate() {
                let full = &e.table[ambient[li]];
                if !table[li].approx_eq(full, tol) {
                    return Ok(Some(Mismatch::Value {
                        context: m,
                        basis_index: bi,
                        derived: is_derived,
                        tuple: t.iter().map(|&i| subset[i]).collect(),
                        in_sub: table[li].clone(),
                        in_full: full.clone(),
                        formula: frag.node_formula(e.node, &context_names(m)).ok().map(|f| f.to_string()),
                    }));
                }
            }
        }
    }
    for m in 0..frag.max_context() {
        for t in all_tuples(k, m) {
            let prefix: Vec<usize> = t.iter().map(|&i| subset[i]).collect();
            let fibre: Vec<Vec<N>> = (0..s.size())
                .map(|b| {
                    let mut ext = prefix.clone();
                    ext.push(b);
                    frag.coordinates(&ext)
                })
                .collect::<Result<_, _>>()?;
            for b in extreme_subset(&fibre, tol)? {
                let realized = subset.iter().any(|&c| fibre[c].iter().zip(&fibre[b]).all(|(x, y)| x.approx_eq(y, tol)));
                if !realized {
                    return Ok(Some(Mismatch::Extension { context: m + 1, prefix, witness: b, coordinates: fibre[b].clone() }));
                }
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::scalar::int;
    use crate::typespace::FragmentParams;

    #[test]
    fn u2_diagonal_is_elementary() {
        let u = corpus::u2();
        let f = Fragment::generate(&u, 1, FragmentParams::default()).unwrap();
        let diag = [u.point("[a0a0]").unwrap(), u.point("[a1a1]").unwrap()];
        assert_eq!(is_elementary_submodel(&u, &diag, &f).unwrap(), None);
        assert_eq!(is_elementary_submodel(&u, &[0, 1, 2, 3], &f).unwrap(), None);
    }

    #[test]
    fn m2_point_is_not_elementary() {
        let m = corpus::m2();
        let f = Fragment::generate(&m, 1, FragmentParams::default()).unwrap();
        let Some(Mismatch::Value { tuple, in_sub, in_full, formula, .. }) = is_elementary_submodel(&m, &[0], &f).unwrap() else {
            panic!("expected a value mismatch");
        };
        assert_eq!(tuple, vec![0]);
        assert_eq!((in_sub, in_full), (int(0), int(1)));
        assert!(formula.unwrap().starts_with("sup"));
    }

    #[test]
    fn dc3_needs_the_far_point() {
        let s = corpus::dc3();
        let f = Fragment::generate(&s, 1, FragmentParams::default()).unwrap();
        let b3 = s.point("b3").unwrap();
        let miss = is_elementary_submodel(&s, &[0, 1, 2], &f).unwrap().unwrap();
        assert!(matches!(miss, Mismatch::Extension { context: 1, witness, .. } if witness == b3));
        assert_eq!(is_elementary_submodel(&s, &[0, 1, 2, 3], &f).unwrap(), None);
    }

    #[test]
    fn subsets_must_be_closed() {
        let m = corpus::m2();
        let f = Fragment::generate(&m, 1, FragmentParams::default()).unwrap();
        assert!(matches!(is_elementary_submodel(&m, &[1], &f), Err(ElementaryError::NotClosed(_))));
        assert_eq!(is_elementary_submodel(&m, &[], &f), Err(ElementaryError::EmptySubset));
    }
}
