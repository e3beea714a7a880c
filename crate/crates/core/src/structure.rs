//! Finite metric structures: interpretation tables, axiom validation, and
//! evaluation of terms and formulas.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::logic::{Formula, Quantifier, Signature, Term};
use crate::scalar::{rat, Scalar, Tolerance};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("structure must have at least one point")]
    Empty,
    #[error("metric table must be {expected}x{expected}")]
    MetricShape { expected: usize },
    #[error("symbol `{0}` is not interpreted")]
    Missing(String),
    #[error("table for `{symbol}` has {found} entries, expected {expected}")]
    TableShape { symbol: String, expected: usize, found: usize },
    #[error("`{symbol}` maps to point {point}, which does not exist")]
    PointOutOfRange { symbol: String, point: usize },
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("duplicate point label `{0}`")]
    DuplicateLabel(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("variable `{0}` has no assignment")]
    MissingAssignment(String),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("tuple lengths differ ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("tuples must be nonempty")]
    EmptyTuple,
}

/// Variable assignment into the points of a structure.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Assignment(HashMap<String, usize>);

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs<'a>(pairs: impl IntoIterator<Item = (&'a str, usize)>) -> Self {
        Assignment(pairs.into_iter().map(|(v, p)| (v.to_string(), p)).collect())
    }

    /// Assigns `vars[i] -> tuple[i]`.
    pub fn zip(vars: &[String], tuple: &[usize]) -> Self {
        Assignment(vars.iter().cloned().zip(tuple.iter().copied()).collect())
    }

    pub fn get(&self, var: &str) -> Option<usize> {
        self.0.get(var).copied()
    }

    pub fn set(&mut self, var: &str, point: usize) -> Option<usize> {
        self.0.insert(var.to_string(), point)
    }

    pub fn remove(&mut self, var: &str) -> Option<usize> {
        self.0.remove(var)
    }
}

/// Mixed-radix index of `tuple` in `size^len`, first coordinate most significant.
pub fn tuple_index(tuple: &[usize], size: usize) -> usize {
    tuple.iter().fold(0, |acc, &a| acc * size + a)
}

pub fn index_tuple(mut index: usize, size: usize, len: usize) -> Vec<usize> {
    let mut out = vec![0; len];
    for slot in out.iter_mut().rev() {
        *slot = index % size;
        index /= size;
    }
    out
}

/// All tuples of length `len` over `0..size`, in index order.
pub fn all_tuples(size: usize, len: usize) -> impl Iterator<Item = Vec<usize>> {
    (0..size.pow(len as u32)).map(move |i| index_tuple(i, size, len))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Axiom {
    ZeroSelfDistance,
    Symmetry,
    Separation,
    Triangle,
    Nonnegativity,
    Diameter,
    RelationBound,
    FunctionLipschitz,
    RelationLipschitz,
}

impl Axiom {
    pub fn name(self) -> &'static str {
        match self {
            Axiom::ZeroSelfDistance => "zero-self-distance",
            Axiom::Symmetry => "symmetry",
            Axiom::Separation => "separation",
            Axiom::Triangle => "triangle",
            Axiom::Nonnegativity => "nonnegativity",
            Axiom::Diameter => "diameter",
            Axiom::RelationBound => "relation-bound",
            Axiom::FunctionLipschitz => "function-lipschitz",
            Axiom::RelationLipschitz => "relation-lipschitz",
        }
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One failed axiom instance. `witness` lists point indices; for Lipschitz
/// axioms it is the first tuple followed by the second.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub axiom: Axiom,
    pub symbol: Option<String>,
    pub witness: Vec<usize>,
    /// The inequality that failed, rendered with concrete values.
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, axiom: Axiom) -> bool {
        self.violations.iter().any(|v| v.axiom == axiom)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return f.write_str("valid");
        }
        for v in &self.violations {
            write!(f, "{}", v.axiom)?;
            if let Some(s) = &v.symbol {
                write!(f, " [{s}]")?;
            }
            writeln!(f, " at {:?}: {}", v.witness, v.detail)?;
        }
        Ok(())
    }
}

/// A finite metric L-structure. Tables are indexed by [`tuple_index`].
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteStructure<N> {
    signature: Signature,
    labels: Vec<String>,
    metric: Vec<N>,
    constants: Vec<usize>,
    functions: Vec<Vec<usize>>,
    relations: Vec<Vec<N>>,
    tol: Tolerance,
}

impl<N: Scalar> FiniteStructure<N> {
    /// Shape-checks the interpretation; axioms are checked by [`Self::validate`].
    pub fn from_parts(
        signature: Signature,
        labels: Vec<String>,
        metric: Vec<Vec<N>>,
        constants: Vec<usize>,
        functions: Vec<Vec<usize>>,
        relations: Vec<Vec<N>>,
        tol: Tolerance,
    ) -> Result<Self, StructureError> {
        let n = labels.len();
        if n == 0 {
            return Err(StructureError::Empty);
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(StructureError::DuplicateLabel(l.clone()));
            }
        }
        if metric.len() != n || metric.iter().any(|row| row.len() != n) {
            return Err(StructureError::MetricShape { expected: n });
        }
        if constants.len() != signature.constants().len() {
            return Err(StructureError::TableShape {
                symbol: "constants".into(),
                expected: signature.constants().len(),
                found: constants.len(),
            });
        }
        for (name, &p) in signature.constants().iter().zip(&constants) {
            if p >= n {
                return Err(StructureError::PointOutOfRange { symbol: name.clone(), point: p });
            }
        }
        if functions.len() != signature.functions().len() {
            return Err(StructureError::TableShape {
                symbol: "functions".into(),
                expected: signature.functions().len(),
                found: functions.len(),
            });
        }
        for (sym, table) in signature.functions().iter().zip(&functions) {
            let expected = n.pow(sym.arity as u32);
            if table.len() != expected {
                return Err(StructureError::TableShape { symbol: sym.name.clone(), expected, found: table.len() });
            }
            if let Some(&p) = table.iter().find(|&&p| p >= n) {
                return Err(StructureError::PointOutOfRange { symbol: sym.name.clone(), point: p });
            }
        }
        if relations.len() != signature.relations().len() {
            return Err(StructureError::TableShape {
                symbol: "relations".into(),
                expected: signature.relations().len(),
                found: relations.len(),
            });
        }
        for (sym, table) in signature.relations().iter().zip(&relations) {
            let expected = n.pow(sym.arity as u32);
            if table.len() != expected {
                return Err(StructureError::TableShape { symbol: sym.name.clone(), expected, found: table.len() });
            }
        }
        let tol = if N::EXACT { Tolerance::EXACT } else { tol };
        Ok(FiniteStructure {
            signature,
            labels,
            metric: metric.into_iter().flatten().collect(),
            constants,
            functions,
            relations,
            tol,
        })
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, point: usize) -> &str {
        &self.labels[point]
    }

    pub fn point(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn tolerance(&self) -> Tolerance {
        self.tol
    }

    pub fn dist(&self, a: usize, b: usize) -> &N {
        &self.metric[a * self.size() + b]
    }

    /// Sets one entry of the metric table (not its mirror).
    pub fn set_distance_entry(&mut self, a: usize, b: usize, value: N) {
        let n = self.size();
        self.metric[a * n + b] = value;
    }

    pub fn set_distance(&mut self, a: usize, b: usize, value: N) {
        self.set_distance_entry(a, b, value.clone());
        self.set_distance_entry(b, a, value);
    }

    pub fn constant(&self, name: &str) -> Option<usize> {
        self.signature.constant_index(name).map(|i| self.constants[i])
    }

    pub fn constant_points(&self) -> &[usize] {
        &self.constants
    }

    pub fn function_table(&self, name: &str) -> Option<&[usize]> {
        self.signature.function_index(name).map(|i| self.functions[i].as_slice())
    }

    pub fn relation_table(&self, name: &str) -> Option<&[N]> {
        self.signature.relation_index(name).map(|i| self.relations[i].as_slice())
    }

    pub fn set_relation_value(&mut self, name: &str, tuple: &[usize], value: N) -> Result<(), StructureError> {
        let i = self.signature.relation_index(name).ok_or_else(|| StructureError::UnknownSymbol(name.to_string()))?;
        let idx = tuple_index(tuple, self.size());
        self.relations[i][idx] = value;
        Ok(())
    }

    pub fn set_function_value(&mut self, name: &str, tuple: &[usize], value: usize) -> Result<(), StructureError> {
        let i = self.signature.function_index(name).ok_or_else(|| StructureError::UnknownSymbol(name.to_string()))?;
        let idx = tuple_index(tuple, self.size());
        self.functions[i][idx] = value;
        Ok(())
    }

    pub fn apply_function(&self, index: usize, args: &[usize]) -> usize {
        self.functions[index][tuple_index(args, self.size())]
    }

    pub fn relation_value(&self, index: usize, args: &[usize]) -> &N {
        &self.relations[index][tuple_index(args, self.size())]
    }

    /// Weighted tuple metric `sum_i 2^-i d(a_i, b_i)`, starting at weight 1.
    pub fn tuple_metric(&self, a: &[usize], b: &[usize]) -> Result<N, EvalError> {
        if a.len() != b.len() {
            return Err(EvalError::LengthMismatch(a.len(), b.len()));
        }
        if a.is_empty() {
            return Err(EvalError::EmptyTuple);
        }
        Ok(self.tuple_metric_unchecked(a, b))
    }

    fn tuple_metric_unchecked(&self, a: &[usize], b: &[usize]) -> N {
        let half = N::from_rational(&rat(1, 2));
        let mut weight = N::one();
        let mut total = N::zero();
        for (&x, &y) in a.iter().zip(b) {
            total = total + weight.clone() * self.dist(x, y).clone();
            weight = weight * half.clone();
        }
        total
    }

    pub fn validate(&self) -> ValidationReport {
        let n = self.size();
        let tol = self.tol;
        let zero = N::zero();
        let one = N::one();
        let mut violations = Vec::new();
        let mut push = |axiom, symbol: Option<&str>, witness: Vec<usize>, detail: String| {
            violations.push(Violation { axiom, symbol: symbol.map(str::to_string), witness, detail });
        };
        for a in 0..n {
            let daa = self.dist(a, a);
            if !daa.is_zero_tol(tol) {
                push(Axiom::ZeroSelfDistance, None, vec![a], format!("d = {} != 0", daa.render()));
            }
        }
        for a in 0..n {
            for b in 0..n {
                let dab = self.dist(a, b);
                if a < b && !dab.approx_eq(self.dist(b, a), tol) {
                    push(
                        Axiom::Symmetry,
                        None,
                        vec![a, b],
                        format!("{} != {}", dab.render(), self.dist(b, a).render()),
                    );
                }
                if dab.lt_tol(&zero, tol) {
                    push(Axiom::Nonnegativity, None, vec![a, b], format!("d = {} < 0", dab.render()));
                }
                if a < b && dab.is_zero_tol(tol) {
                    push(Axiom::Separation, None, vec![a, b], "d = 0 for distinct points".to_string());
                }
                if a != b && dab.compare(&one, tol) == Ordering::Greater {
                    push(Axiom::Diameter, None, vec![a, b], format!("d = {} > 1", dab.render()));
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let direct = self.dist(a, c);
                    let detour = self.dist(a, b).clone() + self.dist(b, c).clone();
                    if direct.compare(&detour, tol) == Ordering::Greater {
                        push(
                            Axiom::Triangle,
                            None,
                            vec![a, b, c],
                            format!("d(a,c) = {} > {} = d(a,b) + d(b,c)", direct.render(), detour.render()),
                        );
                    }
                }
            }
        }
        for (sym, table) in self.signature.relations().iter().zip(&self.relations) {
            for (idx, v) in table.iter().enumerate() {
                if v.abs().compare(&one, tol) == Ordering::Greater {
                    push(
                        Axiom::RelationBound,
                        Some(&sym.name),
                        index_tuple(idx, n, sym.arity),
                        format!("|{}| > 1", v.render()),
                    );
                }
            }
        }
        for (sym, table) in self.signature.functions().iter().zip(&self.functions) {
            let lambda = N::from_rational(&sym.lipschitz);
            let count = table.len();
            for i in 0..count {
                for j in (i + 1)..count {
                    let (ta, tb) = (index_tuple(i, n, sym.arity), index_tuple(j, n, sym.arity));
                    let lhs = self.dist(table[i], table[j]).clone();
                    let rhs = lambda.clone() * self.tuple_metric_unchecked(&ta, &tb);
                    if lhs.compare(&rhs, tol) == Ordering::Greater {
                        push(
                            Axiom::FunctionLipschitz,
                            Some(&sym.name),
                            [ta, tb].concat(),
                            format!("d(F a, F b) = {} > {}", lhs.render(), rhs.render()),
                        );
                    }
                }
            }
        }
        for (sym, table) in self.signature.relations().iter().zip(&self.relations) {
            let lambda = N::from_rational(&sym.lipschitz);
            let count = table.len();
            for i in 0..count {
                for j in (i + 1)..count {
                    let (ta, tb) = (index_tuple(i, n, sym.arity), index_tuple(j, n, sym.arity));
                    let lhs = (table[i].clone() - table[j].clone()).abs();
                    let rhs = lambda.clone() * self.tuple_metric_unchecked(&ta, &tb);
                    if lhs.compare(&rhs, tol) == Ordering::Greater {
                        push(
                            Axiom::RelationLipschitz,
                            Some(&sym.name),
                            [ta, tb].concat(),
                            format!("|R a - R b| = {} > {}", lhs.render(), rhs.render()),
                        );
                    }
                }
            }
        }
        ValidationReport { violations }
    }

    pub fn eval_term(&self, t: &Term, asg: &Assignment) -> Result<usize, EvalError> {
        match t {
            Term::Var(v) => asg.get(v).ok_or_else(|| EvalError::MissingAssignment(v.clone())),
            Term::Const(c) => self.constant(c).ok_or_else(|| EvalError::UnknownSymbol(c.clone())),
            Term::Apply(f, args) => {
                let idx = self.signature.function_index(f).ok_or_else(|| EvalError::UnknownSymbol(f.clone()))?;
                let vals = args.iter().map(|a| self.eval_term(a, asg)).collect::<Result<Vec<_>, _>>()?;
                Ok(self.apply_function(idx, &vals))
            }
        }
    }

    pub fn eval(&self, phi: &Formula, asg: &Assignment) -> Result<N, EvalError> {
        let mut asg = asg.clone();
        self.eval_in(phi, &mut asg)
    }

    fn eval_in(&self, phi: &Formula, asg: &mut Assignment) -> Result<N, EvalError> {
        match phi {
            Formula::Const(r) => Ok(N::from_rational(r)),
            Formula::Dist(a, b) => {
                let (a, b) = (self.eval_term(a, asg)?, self.eval_term(b, asg)?);
                Ok(self.dist(a, b).clone())
            }
            Formula::Rel(r, args) => {
                let idx = self.signature.relation_index(r).ok_or_else(|| EvalError::UnknownSymbol(r.clone()))?;
                let vals = args.iter().map(|a| self.eval_term(a, asg)).collect::<Result<Vec<_>, _>>()?;
                Ok(self.relation_value(idx, &vals).clone())
            }
            Formula::Scale(r, body) => Ok(N::from_rational(r) * self.eval_in(body, asg)?),
            Formula::Add(l, r) => Ok(self.eval_in(l, asg)? + self.eval_in(r, asg)?),
            Formula::Quant(q, v, body) => {
                let saved = asg.get(v);
                let mut best: Option<N> = None;
                for p in 0..self.size() {
                    asg.set(v, p);
                    let val = self.eval_in(body, asg);
                    let val = match val {
                        Ok(val) => val,
                        Err(e) => {
                            restore(asg, v, saved);
                            return Err(e);
                        }
                    };
                    best = Some(match best {
                        None => val,
                        Some(b) => pick(*q, b, val),
                    });
                }
                restore(asg, v, saved);
                Ok(best.expect("structures are nonempty"))
            }
        }
    }

    /// Values of `phi` at every tuple of `M^vars.len()`, in index order.
    pub fn formula_table(&self, phi: &Formula, vars: &[String]) -> Result<Vec<N>, EvalError> {
        all_tuples(self.size(), vars.len())
            .map(|t| self.eval(phi, &Assignment::zip(vars, &t)))
            .collect()
    }

    /// Substructure on `subset` (sorted, deduplicated). Fails with a witness
    /// symbol and argument tuple when `subset` is not closed.
    pub fn induced(&self, subset: &[usize]) -> Result<FiniteStructure<N>, ClosureFailure> {
        let mut subset = subset.to_vec();
        subset.sort_unstable();
        subset.dedup();
        let position = |p: usize| subset.binary_search(&p).ok();
        let mut constants = Vec::new();
        for (name, &c) in self.signature.constants().iter().zip(&self.constants) {
            constants.push(position(c).ok_or_else(|| ClosureFailure { symbol: name.clone(), args: vec![], image: c })?);
        }
        let k = subset.len();
        let mut functions = Vec::new();
        for (sym, table) in self.signature.functions().iter().zip(&self.functions) {
            let mut sub = Vec::with_capacity(k.pow(sym.arity as u32));
            for t in all_tuples(k, sym.arity) {
                let args: Vec<usize> = t.iter().map(|&i| subset[i]).collect();
                let image = table[tuple_index(&args, self.size())];
                sub.push(position(image).ok_or_else(|| ClosureFailure { symbol: sym.name.clone(), args: args.clone(), image })?);
            }
            functions.push(sub);
        }
        let relations = self
            .signature
            .relations()
            .iter()
            .zip(&self.relations)
            .map(|(sym, table)| {
                all_tuples(k, sym.arity)
                    .map(|t| {
                        let args: Vec<usize> = t.iter().map(|&i| subset[i]).collect();
                        table[tuple_index(&args, self.size())].clone()
                    })
                    .collect()
            })
            .collect();
        let metric = subset.iter().map(|&a| subset.iter().map(|&b| self.dist(a, b).clone()).collect()).collect();
        let labels = subset.iter().map(|&p| self.labels[p].clone()).collect();
        Ok(FiniteStructure::from_parts(self.signature.clone(), labels, metric, constants, functions, relations, self.tol)
            .expect("restriction preserves shapes"))
    }

    /// Converts to float mode.
    pub fn to_float(&self, tol: Tolerance) -> FiniteStructure<f64> {
        FiniteStructure {
            signature: self.signature.clone(),
            labels: self.labels.clone(),
            metric: self.metric.iter().map(|v| v.to_f64()).collect(),
            constants: self.constants.clone(),
            functions: self.functions.clone(),
            relations: self.relations.iter().map(|t| t.iter().map(|v| v.to_f64()).collect()).collect(),
            tol,
        }
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.labels.len());
        self.labels = labels;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("not closed under `{symbol}`: image {image} of {args:?} lies outside")]
pub struct ClosureFailure {
    pub symbol: String,
    pub args: Vec<usize>,
    pub image: usize,
}

fn restore(asg: &mut Assignment, v: &str, saved: Option<usize>) {
    match saved {
        Some(p) => {
            asg.set(v, p);
        }
        None => {
            asg.remove(v);
        }
    }
}

fn pick<N: Scalar>(q: Quantifier, a: N, b: N) -> N {
    // Exact comparison: ties keep either value, which are equal up to tolerance.
    let b_better = match q {
        Quantifier::Sup => b.compare(&a, Tolerance::EXACT) == Ordering::Greater,
        Quantifier::Inf => b.compare(&a, Tolerance::EXACT) == Ordering::Less,
    };
    if b_better {
        b
    } else {
        a
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::logic::parse_formula;
    use crate::scalar::{int, rat};

    #[test]
    fn m2_is_valid_and_evaluates() {
        let m2 = corpus::m2();
        assert!(m2.validate().is_valid());
        let sig = m2.signature().clone();
        let a1 = Assignment::from_pairs([("x", 1)]);
        assert_eq!(m2.eval(&parse_formula("P(x)", &sig).unwrap(), &a1).unwrap(), int(1));
        assert_eq!(m2.eval(&parse_formula("sup x . P(x)", &sig).unwrap(), &Assignment::new()).unwrap(), int(1));
        assert_eq!(m2.eval(&parse_formula("2*P(x) + d(x,c0)", &sig).unwrap(), &a1).unwrap(), int(3));
    }

    #[test]
    fn evaluates_terms() {
        let m2 = corpus::m2();
        let a1 = Assignment::from_pairs([("x", 1)]);
        assert_eq!(m2.eval_term(&Term::var("x"), &a1), Ok(1));
        assert_eq!(m2.eval_term(&Term::constant("c0"), &a1), Ok(0));
        assert_eq!(m2.eval_term(&Term::var("y"), &a1), Err(EvalError::MissingAssignment("y".into())));
    }

    #[test]
    fn tuple_metric_weights_start_at_one() {
        let m2 = corpus::m2();
        assert_eq!(m2.tuple_metric(&[0, 1], &[1, 1]).unwrap(), int(1));
        assert_eq!(m2.tuple_metric(&[0, 1], &[1, 0]).unwrap(), rat(3, 2));
        assert_eq!(m2.tuple_metric(&[0, 1], &[0, 1]).unwrap(), int(0));
        assert_eq!(m2.tuple_metric(&[0], &[0, 1]), Err(EvalError::LengthMismatch(1, 2)));
    }

    #[test]
    fn lowered_distance_breaks_relation_lipschitz() {
        let mut m2 = corpus::m2();
        m2.set_distance(0, 1, rat(1, 2));
        let report = m2.validate();
        assert_eq!(report.violations.len(), 1);
        let v = &report.violations[0];
        assert_eq!(v.axiom, Axiom::RelationLipschitz);
        assert_eq!(v.witness, vec![0, 1]);
        assert_eq!(v.detail, "|R a - R b| = 1 > 1/2");
    }

    #[test]
    fn zero_distance_breaks_separation() {
        let mut m2 = corpus::m2();
        m2.set_distance(0, 1, int(0));
        assert!(m2.validate().has(Axiom::Separation));
    }

    #[test]
    fn induced_substructure_requires_constants() {
        let m2 = corpus::m2();
        let err = m2.induced(&[1]).unwrap_err();
        assert_eq!(err.symbol, "c0");
        let k = m2.induced(&[0]).unwrap();
        assert_eq!(k.size(), 1);
        assert_eq!(k.relation_table("P").unwrap(), &[int(0)]);
    }
}
