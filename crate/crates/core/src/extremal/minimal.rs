//! Minimal elementary submodels and extremality of a structure.

use std::collections::BTreeSet;

use thiserror::Error;

use super::elementary::{is_elementary_submodel, ElementaryError};
use crate::scalar::Scalar;
use crate::structure::{all_tuples, FiniteStructure};
use crate::typespace::{realized_types, Fragment, TypeSpaceError};

pub const EXHAUSTIVE_LIMIT: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    Exhaustive,
    Greedy,
}

impl Strategy {
    pub fn name(self) -> &'static str {
        match self {
            Strategy::Exhaustive => "exhaustive",
            Strategy::Greedy => "greedy",
        }
    }

    pub fn parse(text: &str) -> Option<Self> {
        match text {
            "exhaustive" => Some(Strategy::Exhaustive),
            "greedy" => Some(Strategy::Greedy),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MinimalError {
    #[error("exhaustive search is limited to {limit} points, structure has {size}")]
    TooLarge { size: usize, limit: usize },
    #[error(transparent)]
    Elementary(#[from] ElementaryError),
    #[error(transparent)]
    Types(#[from] TypeSpaceError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinimalResult {
    pub strategy: Strategy,
    pub points: Vec<usize>,
    /// Subsets examined (closed or not).
    pub examined: usize,
}

/// `Ok(true)` when `subset` is closed and elementary.
fn admissible<N: Scalar>(s: &FiniteStructure<N>, subset: &[usize], frag: &Fragment<N>) -> Result<bool, MinimalError> {
    match is_elementary_submodel(s, subset, frag) {
        Ok(m) => Ok(m.is_none()),
        Err(ElementaryError::NotClosed(_)) => Ok(false),
        Err(e) => Err(e.into()),
    }
}

/// Lexicographic `k`-subsets of `0..n`.
fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut c: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(c.clone());
        let Some(i) = (0..k).rev().find(|&i| c[i] != i + n - k) else {
            return out;
        };
        c[i] += 1;
        for j in i + 1..k {
            c[j] = c[j - 1] + 1;
        }
    }
}

pub fn minimal_submodel<N: Scalar>(
    s: &FiniteStructure<N>,
    frag: &Fragment<N>,
    strategy: Strategy,
) -> Result<MinimalResult, MinimalError> {
    let n = s.size();
    let mut examined = 0;
    match strategy {
        Strategy::Exhaustive => {
            if n > EXHAUSTIVE_LIMIT {
                return Err(MinimalError::TooLarge { size: n, limit: EXHAUSTIVE_LIMIT });
            }
            let constants: BTreeSet<usize> = s.constant_points().iter().copied().collect();
            for k in 1..=n {
                for c in combinations(n, k) {
                    if !constants.iter().all(|p| c.binary_search(p).is_ok()) {
                        continue;
                    }
                    examined += 1;
                    if admissible(s, &c, frag)? {
                        return Ok(MinimalResult { strategy, points: c, examined });
                    }
                }
            }
            unreachable!("the whole structure is elementary in itself")
        }
        Strategy::Greedy => {
            let mut current: Vec<usize> = (0..n).collect();
            'outer: loop {
                for i in 0..current.len() {
                    if current.len() == 1 {
                        break 'outer;
                    }
                    let mut trial = current.clone();
                    trial.remove(i);
                    examined += 1;
                    if admissible(s, &trial, frag)? {
                        current = trial;
                        continue 'outer;
                    }
                }
                break;
            }
            Ok(MinimalResult { strategy, points: current, examined })
        }
    }
}

/// Type classes (indices into the ambient `n`-type space) realized by tuples
/// from `subset`.
pub fn subset_types<N: Scalar>(
    s: &FiniteStructure<N>,
    frag: &Fragment<N>,
    subset: &[usize],
    n: usize,
) -> Result<Vec<usize>, MinimalError> {
    let space = realized_types(s, frag, n)?;
    let classes: BTreeSet<usize> = all_tuples(subset.len(), n)
        .map(|t| {
            let t: Vec<usize> = t.iter().map(|&i| subset[i]).collect();
            space.class_of(&t).expect("every tuple is realized")
        })
        .collect();
    Ok(classes.into_iter().collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExtremalVerdict<N> {
    pub extremal: bool,
    /// First realizer of a non-extreme type, with its arity.
    pub witness: Option<(usize, Vec<usize>)>,
    pub coordinates: Option<Vec<N>>,
    pub checked: usize,
}

/// Whether every realized `n`-type, `n <= n_max`, is extreme.
pub fn is_extremal<N: Scalar>(
    s: &FiniteStructure<N>,
    frag: &Fragment<N>,
    n_max: usize,
) -> Result<ExtremalVerdict<N>, MinimalError> {
    let mut checked = 0;
    for n in 1..=n_max {
        let space = realized_types(s, frag, n)?;
        let extreme: BTreeSet<usize> = space.extreme_types()?.into_iter().collect();
        checked += space.len();
        let first = all_tuples(s.size(), n).find(|t| !extreme.contains(&space.class_of(t).expect("realized")));
        if let Some(t) = first {
            let coords = space.vectors[space.class_of(&t).expect("realized")].coordinates.clone();
            return Ok(ExtremalVerdict { extremal: false, witness: Some((n, t)), coordinates: Some(coords), checked });
        }
    }
    Ok(ExtremalVerdict { extremal: true, witness: None, coordinates: None, checked })
}
