//! Realized type vectors, their hull, partial types, the type metric and
//! types over parameters.

use std::collections::HashMap;

use thiserror::Error;

use super::fragment::{context_names, Fragment, FragmentError};
use crate::convex::{extreme_subset, is_face_region, ConvexError, FaceVerdict};
use crate::linalg::{dot, vectors_equal};
use crate::logic::{Condition, ConditionRel, Formula, LogicError, Term};
use crate::lp::LinearConstraint;
use crate::scalar::{rat, Scalar, Tolerance};
use crate::structure::{all_tuples, EvalError, FiniteStructure};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TypeSpaceError {
    #[error(transparent)]
    Fragment(#[from] FragmentError),
    #[error(transparent)]
    Convex(#[from] ConvexError),
    #[error(transparent)]
    Logic(#[from] LogicError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("condition `{condition}` uses variables outside {context:?}")]
    Variables { condition: String, context: Vec<String> },
    #[error("condition `{0}` is not expressible in the fragment")]
    OutsideSpan(String),
    #[error("no realized type with index {0}")]
    Unrealized(usize),
    #[error("tuple {tuple:?} does not fit {points} points")]
    BadTuple { tuple: Vec<usize>, points: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct TypeVector<N> {
    pub coordinates: Vec<N>,
    /// Every tuple with these coordinates, in enumeration order.
    pub realizers: Vec<Vec<usize>>,
}

impl<N: Scalar> TypeVector<N> {
    /// Coordinates without the constant-1 entry.
    pub fn display(&self) -> &[N] {
        &self.coordinates[1..]
    }
}

/// Distinct type vectors of a family of tuples.
#[derive(Debug, Clone)]
pub struct TypeSpace<N> {
    /// Length of the realizing tuples.
    pub arity: usize,
    /// Fragment context the coordinates live in.
    pub context: usize,
    pub vectors: Vec<TypeVector<N>>,
    class: HashMap<Vec<usize>, usize>,
    tol: Tolerance,
}

impl<N: Scalar> TypeSpace<N> {
    pub fn from_realizers(
        arity: usize,
        context: usize,
        realized: impl IntoIterator<Item = (Vec<usize>, Vec<N>)>,
        tol: Tolerance,
    ) -> Self {
        let mut vectors: Vec<TypeVector<N>> = Vec::new();
        let mut class = HashMap::new();
        for (tuple, coords) in realized {
            let idx = match vectors.iter().position(|v| vectors_equal(&v.coordinates, &coords, tol)) {
                Some(i) => {
                    vectors[i].realizers.push(tuple.clone());
                    i
                }
                None => {
                    vectors.push(TypeVector { coordinates: coords, realizers: vec![tuple.clone()] });
                    vectors.len() - 1
                }
            };
            class.insert(tuple, idx);
        }
        TypeSpace { arity, context, vectors, class, tol }
    }

    pub fn tolerance(&self) -> Tolerance {
        self.tol
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn points(&self) -> Vec<Vec<N>> {
        self.vectors.iter().map(|v| v.coordinates.clone()).collect()
    }

    /// Index of the vector realized by `tuple`.
    pub fn class_of(&self, tuple: &[usize]) -> Option<usize> {
        self.class.get(tuple).copied()
    }

    pub fn position(&self, coordinates: &[N]) -> Option<usize> {
        self.vectors.iter().position(|v| vectors_equal(&v.coordinates, coordinates, self.tol))
    }

    /// Indices of the extreme vectors.
    pub fn extreme_types(&self) -> Result<Vec<usize>, TypeSpaceError> {
        Ok(extreme_subset(&self.points(), self.tol)?)
    }

    pub fn face(&self, gamma: &PartialType<N>) -> Result<FaceVerdict<N>, TypeSpaceError> {
        Ok(is_face_region(&self.points(), &gamma.constraints, self.tol)?)
    }
}

/// Type vectors of all `n`-tuples.
pub fn realized_types<N: Scalar>(
    s: &FiniteStructure<N>,
    frag: &Fragment<N>,
    n: usize,
) -> Result<TypeSpace<N>, TypeSpaceError> {
    check_size(s, frag)?;
    let basis = frag.basis(n)?;
    let realized = all_tuples(s.size(), n)
        .enumerate()
        .map(|(i, t)| (t, basis.iter().map(|e| e.table[i].clone()).collect::<Vec<N>>()));
    Ok(TypeSpace::from_realizers(n, n, realized, s.tolerance()))
}

fn check_size<N: Scalar>(s: &FiniteStructure<N>, frag: &Fragment<N>) -> Result<(), TypeSpaceError> {
    if s.size() != frag.points() {
        return Err(FragmentError::SizeMismatch { expected: frag.points(), found: s.size() }.into());
    }
    Ok(())
}

/// Conditions compiled into linear constraints on type vectors of one context.
#[derive(Debug, Clone, PartialEq)]
pub struct PartialType<N> {
    pub context: usize,
    pub descriptions: Vec<String>,
    pub constraints: Vec<LinearConstraint<N>>,
}

impl<N: Scalar> PartialType<N> {
    pub fn empty(context: usize) -> Self {
        PartialType { context, descriptions: Vec::new(), constraints: Vec::new() }
    }

    pub fn compile(
        s: &FiniteStructure<N>,
        frag: &Fragment<N>,
        context: usize,
        conditions: &[Condition],
    ) -> Result<Self, TypeSpaceError> {
        check_size(s, frag)?;
        let names = context_names(context);
        let dim = frag.basis(context)?.len();
        let mut out = PartialType::empty(context);
        for cond in conditions {
            cond.check(s.signature())?;
            if !cond.free_variables().iter().all(|v| names.contains(v)) {
                return Err(TypeSpaceError::Variables { condition: cond.to_string(), context: names });
            }
            let diff = Formula::sub(cond.left.clone(), cond.right.clone());
            let table = s.formula_table(&diff, &names)?;
            let coords = frag.express(context, &table)?.ok_or_else(|| TypeSpaceError::OutsideSpan(cond.to_string()))?;
            debug_assert_eq!(coords.len(), dim);
            let constraint = match cond.relation {
                ConditionRel::Le => LinearConstraint::le(coords, N::zero()),
                ConditionRel::Eq => LinearConstraint::eq(coords, N::zero()),
            };
            out.descriptions.push(cond.to_string());
            out.constraints.push(constraint);
        }
        Ok(out)
    }

    pub fn push(&mut self, description: String, constraint: LinearConstraint<N>) {
        self.descriptions.push(description);
        self.constraints.push(constraint);
    }

    /// Conjunction of two condition sets.
    pub fn union(&self, other: &PartialType<N>) -> PartialType<N> {
        let mut out = self.clone();
        out.descriptions.extend(other.descriptions.iter().cloned());
        out.constraints.extend(other.constraints.iter().cloned());
        out
    }

    pub fn satisfied_by(&self, coordinates: &[N], tol: Tolerance) -> bool {
        self.constraints.iter().all(|c| c.satisfied_by(coordinates, tol))
    }
}

/// Minimum tuple distance between realizers of two vectors.
pub fn type_metric<N: Scalar>(s: &FiniteStructure<N>, ts: &TypeSpace<N>, p: usize, q: usize) -> Result<N, TypeSpaceError> {
    let vp = ts.vectors.get(p).ok_or(TypeSpaceError::Unrealized(p))?;
    let vq = ts.vectors.get(q).ok_or(TypeSpaceError::Unrealized(q))?;
    let mut best: Option<N> = None;
    for a in &vp.realizers {
        for b in &vq.realizers {
            let d = s.tuple_metric(a, b)?;
            if best.as_ref().is_none_or(|cur| d.lt_tol(cur, Tolerance::EXACT)) {
                best = Some(d);
            }
        }
    }
    Ok(best.expect("realized vectors have realizers"))
}

/// Linear map sending type vectors of context `from` to a smaller context
/// through a variable map.
#[derive(Debug, Clone)]
pub struct Projection<N> {
    matrix: Vec<Vec<N>>,
}

impl<N: Scalar> Projection<N> {
    /// `map[i]` is the variable of context `from` playing variable `i` of the target.
    pub fn new(frag: &Fragment<N>, from: usize, map: &[usize]) -> Result<Self, TypeSpaceError> {
        Ok(Projection { matrix: frag.embedding(map.len(), from, map)? })
    }

    /// Drops the trailing variables.
    pub fn restriction(frag: &Fragment<N>, from: usize, to: usize) -> Result<Self, TypeSpaceError> {
        Self::new(frag, from, &(0..to).collect::<Vec<_>>())
    }

    pub fn apply(&self, v: &[N]) -> Vec<N> {
        self.matrix.iter().map(|row| dot(row, v)).collect()
    }
}

/// Restriction of a type vector of context `m + 1` to its first `m` variables.
pub fn restrict_type<N: Scalar>(frag: &Fragment<N>, v: &[N], from: usize) -> Result<Vec<N>, TypeSpaceError> {
    Ok(Projection::restriction(frag, from, from - 1)?.apply(v))
}

fn check_tuple<N: Scalar>(s: &FiniteStructure<N>, t: &[usize]) -> Result<(), TypeSpaceError> {
    if t.iter().any(|&p| p >= s.size()) {
        return Err(TypeSpaceError::BadTuple { tuple: t.to_vec(), points: s.size() });
    }
    Ok(())
}

/// Coordinates of `a` over the parameters `b`: the type vector of `a ++ b`.
pub fn tp_over<N: Scalar>(s: &FiniteStructure<N>, frag: &Fragment<N>, a: &[usize], b: &[usize]) -> Result<Vec<N>, TypeSpaceError> {
    check_size(s, frag)?;
    check_tuple(s, a)?;
    check_tuple(s, b)?;
    let joined: Vec<usize> = a.iter().chain(b).copied().collect();
    Ok(frag.coordinates(&joined)?)
}

/// Types over `b` of all tuples of length `arity`.
pub fn over_space<N: Scalar>(
    s: &FiniteStructure<N>,
    frag: &Fragment<N>,
    arity: usize,
    b: &[usize],
) -> Result<TypeSpace<N>, TypeSpaceError> {
    check_size(s, frag)?;
    check_tuple(s, b)?;
    let context = arity + b.len();
    frag.basis(context)?;
    let realized = all_tuples(s.size(), arity)
        .map(|c| {
            let joined: Vec<usize> = c.iter().chain(b).copied().collect();
            let coords = frag.coordinates(&joined).expect("context checked");
            (c, coords)
        })
        .collect::<Vec<_>>();
    Ok(TypeSpace::from_realizers(arity, context, realized, s.tolerance()))
}

pub fn is_extreme_over<N: Scalar>(
    s: &FiniteStructure<N>,
    frag: &Fragment<N>,
    a: &[usize],
    b: &[usize],
) -> Result<bool, TypeSpaceError> {
    check_tuple(s, a)?;
    let space = over_space(s, frag, a.len(), b)?;
    let idx = space.class_of(a).expect("every tuple is realized");
    Ok(space.extreme_types()?.contains(&idx))
}

#[derive(Debug, Clone)]
pub struct SigmaFace<N> {
    pub radius: N,
    pub gamma: PartialType<N>,
    /// The `2n`-type space the conditions live in.
    pub space: TypeSpace<N>,
    pub verdict: FaceVerdict<N>,
    /// Every vertex of the face has marginals `p` and `q`.
    pub marginals_match: bool,
}

/// `p(x) ∪ q(y) ∪ {d(x, y) <= d(p, q)}` over the `2n`-types, with `p`, `q`
/// indices into the `n`-type space `ts`.
pub fn sigma_face<N: Scalar>(
    s: &FiniteStructure<N>,
    frag: &Fragment<N>,
    ts: &TypeSpace<N>,
    p: usize,
    q: usize,
) -> Result<SigmaFace<N>, TypeSpaceError> {
    let n = ts.context;
    let radius = type_metric(s, ts, p, q)?;
    let pv = &ts.vectors[p].coordinates;
    let qv = &ts.vectors[q].coordinates;
    let wide = 2 * n;
    let space = realized_types(s, frag, wide)?;
    let left = Projection::new(frag, wide, &(0..n).collect::<Vec<_>>())?;
    let right = Projection::new(frag, wide, &(n..wide).collect::<Vec<_>>())?;
    let mut gamma = PartialType::empty(wide);
    for (i, (row, value)) in left.matrix.iter().zip(pv).enumerate() {
        gamma.push(format!("tp(x)[{i}] = {}", value.render()), LinearConstraint::eq(row.clone(), value.clone()));
    }
    for (i, (row, value)) in right.matrix.iter().zip(qv).enumerate() {
        gamma.push(format!("tp(y)[{i}] = {}", value.render()), LinearConstraint::eq(row.clone(), value.clone()));
    }
    let names = context_names(wide);
    let distance = (0..n)
        .map(|i| {
            let atom = Formula::dist(Term::var(&names[i]), Term::var(&names[n + i]));
            if i == 0 {
                atom
            } else {
                Formula::scale(rat(1, 1 << i), atom)
            }
        })
        .reduce(Formula::add)
        .expect("n >= 1");
    let table = s.formula_table(&distance, &names)?;
    let description = format!("{distance} <= {}", radius.render());
    let coords = frag.express(wide, &table)?.ok_or_else(|| TypeSpaceError::OutsideSpan(description.clone()))?;
    gamma.push(description, LinearConstraint::le(coords, radius.clone()));
    let verdict = space.face(&gamma)?;
    let tol = s.tolerance();
    let marginals_match = verdict.vertices.iter().all(|&e| {
        let v = &space.vectors[e].coordinates;
        vectors_equal(&left.apply(v), pv, tol) && vectors_equal(&right.apply(v), qv, tol)
    });
    Ok(SigmaFace { radius, gamma, space, verdict, marginals_match })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convex::FaceStatus;
    use crate::corpus;
    use crate::logic::{parse_conditions, parse_formula_in};
    use crate::scalar::{int, Rational};
    use crate::typespace::FragmentParams;

    fn listed(s: &FiniteStructure<Rational>, texts: &[&str], n: usize) -> Fragment<Rational> {
        let names = context_names(n);
        let phis = texts.iter().map(|t| parse_formula_in(t, s.signature(), &names).unwrap()).collect();
        Fragment::generate(s, n, FragmentParams::listed(phis)).unwrap()
    }

    fn saturated(s: &FiniteStructure<Rational>) -> Fragment<Rational> {
        Fragment::generate(s, 1, FragmentParams::default()).unwrap()
    }

    fn display(ts: &TypeSpace<Rational>) -> Vec<Vec<Rational>> {
        ts.vectors.iter().map(|v| v.display().to_vec()).collect()
    }

    #[test]
    fn u2_listed_one_types() {
        let u = corpus::u2();
        let f = listed(&u, &["P(x)", "d(x, c0)"], 1);
        let ts = realized_types(&u, &f, 1).unwrap();
        let mut shown = display(&ts);
        shown.sort();
        let half = rat(1, 2);
        assert_eq!(shown, vec![vec![int(0), int(0)], vec![half.clone(), half], vec![int(1), int(1)]]);
        let mid = ts.class_of(&[u.point("[a0a1]").unwrap()]).unwrap();
        assert_eq!(ts.vectors[mid].realizers.len(), 2);
        let ext: Vec<Vec<Rational>> = ts.extreme_types().unwrap().iter().map(|&i| ts.vectors[i].display().to_vec()).collect();
        assert_eq!(ext.len(), 2);
        assert!(!ext.contains(&vec![rat(1, 2), rat(1, 2)]));
    }

    #[test]
    fn m2_two_types_are_all_extreme() {
        let m = corpus::m2();
        let f = listed(&m, &["P(x)", "P(y)", "d(x, y)"], 2);
        let ts = realized_types(&m, &f, 2).unwrap();
        assert_eq!(ts.len(), 4);
        assert_eq!(ts.extreme_types().unwrap().len(), 4);
        assert_eq!(ts.vectors[1].display(), &[int(0), int(1), int(1)]);
    }

    #[test]
    fn singleton_has_one_type() {
        let s = corpus::singleton();
        let f = saturated(&s);
        let ts = realized_types(&s, &f, 1).unwrap();
        assert_eq!(ts.len(), 1);
        assert_eq!(ts.extreme_types().unwrap(), vec![0]);
    }

    #[test]
    fn dc3_sigma_is_a_face() {
        let d = corpus::dc3();
        let f = saturated(&d);
        let ts = realized_types(&d, &f, 1).unwrap();
        let x = context_names(1);
        let gamma = parse_conditions("d(x,k0)=1; d(x,k1)=1; d(x,k2)=1", d.signature(), &x).unwrap();
        let pt = PartialType::compile(&d, &f, 1, &gamma).unwrap();
        let v = ts.face(&pt).unwrap();
        assert_eq!(v.status, FaceStatus::Face);
        assert_eq!(v.vertices.len(), 1);
        assert_eq!(ts.vectors[v.vertices[0]].realizers, vec![vec![3]]);
        assert!(v.verify(&ts.points(), &pt.constraints, Tolerance::EXACT));
    }

    #[test]
    fn u2_half_slab_is_not_a_face() {
        let u = corpus::u2();
        let f = saturated(&u);
        let ts = realized_types(&u, &f, 1).unwrap();
        let gamma = parse_conditions("P(x) <= 1/2", u.signature(), &context_names(1)).unwrap();
        let pt = PartialType::compile(&u, &f, 1, &gamma).unwrap();
        assert_eq!(ts.face(&pt).unwrap().status, FaceStatus::NotFace);
        assert_eq!(ts.face(&PartialType::empty(1)).unwrap().status, FaceStatus::Face);
    }

    #[test]
    fn type_metric_examples() {
        let u = corpus::u2();
        let f = saturated(&u);
        let ts = realized_types(&u, &f, 1).unwrap();
        let lo = ts.class_of(&[u.point("[a0a0]").unwrap()]).unwrap();
        let mid = ts.class_of(&[u.point("[a0a1]").unwrap()]).unwrap();
        assert_eq!(type_metric(&u, &ts, lo, mid).unwrap(), rat(1, 2));
        assert_eq!(type_metric(&u, &ts, mid, mid).unwrap(), int(0));
        let m = corpus::m2();
        let fm = saturated(&m);
        let tm = realized_types(&m, &fm, 1).unwrap();
        assert_eq!(type_metric(&m, &tm, 0, 1).unwrap(), int(1));
    }

    #[test]
    fn sigma_faces_on_m2_and_u2() {
        let m = corpus::m2();
        let f = saturated(&m);
        let ts = realized_types(&m, &f, 1).unwrap();
        let sf = sigma_face(&m, &f, &ts, 0, 1).unwrap();
        assert_eq!(sf.radius, int(1));
        assert!(sf.verdict.is_face());
        assert!(sf.marginals_match);
        assert_eq!(sf.space.vectors[sf.verdict.vertices[0]].realizers, vec![vec![0, 1]]);
        let same = sigma_face(&m, &f, &ts, 1, 1).unwrap();
        assert_eq!(same.radius, int(0));
        assert!(same.verdict.is_face());

        let u = corpus::u2();
        let f = saturated(&u);
        let ts = realized_types(&u, &f, 1).unwrap();
        let lo = ts.class_of(&[u.point("[a0a0]").unwrap()]).unwrap();
        let hi = ts.class_of(&[u.point("[a1a1]").unwrap()]).unwrap();
        let sf = sigma_face(&u, &f, &ts, lo, hi).unwrap();
        assert_eq!(sf.radius, int(1));
        assert!(sf.verdict.is_face());
        assert!(sf.marginals_match);
    }

    #[test]
    fn restriction_and_parameters() {
        let m = corpus::m2();
        let f = saturated(&m);
        let v = f.coordinates(&[0, 1]).unwrap();
        assert_eq!(restrict_type(&f, &v, 2).unwrap(), f.coordinates(&[0]).unwrap());
        let w = f.coordinates(&[1, 0, 1]).unwrap();
        let twice = restrict_type(&f, &restrict_type(&f, &w, 3).unwrap(), 2).unwrap();
        assert_eq!(twice, Projection::restriction(&f, 3, 1).unwrap().apply(&w));
        assert_ne!(tp_over(&m, &f, &[0], &[1]).unwrap(), tp_over(&m, &f, &[1], &[1]).unwrap());
        assert!(is_extreme_over(&m, &f, &[0], &[1]).unwrap());
        assert_eq!(tp_over(&m, &f, &[1], &[]).unwrap(), f.coordinates(&[1]).unwrap());

        let u = corpus::u2();
        let f = saturated(&u);
        let (lo, mid, hi) = (u.point("[a0a0]").unwrap(), u.point("[a0a1]").unwrap(), u.point("[a1a1]").unwrap());
        let avg: Vec<Rational> = tp_over(&u, &f, &[lo], &[lo])
            .unwrap()
            .into_iter()
            .zip(tp_over(&u, &f, &[hi], &[lo]).unwrap())
            .map(|(a, b)| (a + b) * rat(1, 2))
            .collect();
        assert_eq!(tp_over(&u, &f, &[mid], &[lo]).unwrap(), avg);
        assert!(!is_extreme_over(&u, &f, &[mid], &[lo]).unwrap());
        let v = f.coordinates(&[mid, lo]).unwrap();
        assert_eq!(restrict_type(&f, &v, 2).unwrap(), f.coordinates(&[mid]).unwrap());
    }
}
