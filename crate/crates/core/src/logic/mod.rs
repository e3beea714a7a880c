//! Signatures, terms, formulas and conditions of linear continuous logic.
//!
//! Formulas are built from rational constants, the metric `d`, relation
//! symbols, scaling by a rational, addition, and the quantifiers `sup`/`inf`.
//! There are no lattice connectives.

mod bounds;
mod parse;
mod print;

use std::collections::BTreeSet;

use thiserror::Error;

use crate::scalar::Rational;

pub use bounds::{syntactic_bounds, Bounds};
pub use parse::{parse_condition, parse_conditions, parse_formula, parse_formula_in, ParseError, ParseErrorKind};

/// Name of the built-in metric symbol.
pub const METRIC: &str = "d";

const RESERVED: [&str; 3] = [METRIC, "sup", "inf"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Symbol {
    pub name: String,
    pub arity: usize,
    pub lipschitz: Rational,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymbolKind {
    Constant,
    Function,
    Relation,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SignatureError {
    #[error("symbol `{0}` is declared twice")]
    Duplicate(String),
    #[error("`{0}` is reserved and cannot be declared")]
    Reserved(String),
    #[error("symbol `{0}` must have arity at least 1")]
    ZeroArity(String),
    #[error("symbol `{0}` has a negative Lipschitz constant")]
    NegativeLipschitz(String),
    #[error("`{0}` is not a valid symbol name")]
    BadName(String),
}

/// Symbol table of a language. The metric `d` is implicit.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Signature {
    constants: Vec<String>,
    functions: Vec<Symbol>,
    relations: Vec<Symbol>,
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    fn check_fresh(&self, name: &str) -> Result<(), SignatureError> {
        if RESERVED.contains(&name) {
            return Err(SignatureError::Reserved(name.to_string()));
        }
        let valid = name.chars().next().is_some_and(|c| c.is_alphabetic() || c == '_')
            && name.chars().all(|c| c.is_alphanumeric() || c == '_');
        if !valid {
            return Err(SignatureError::BadName(name.to_string()));
        }
        if self.kind(name).is_some() {
            return Err(SignatureError::Duplicate(name.to_string()));
        }
        Ok(())
    }

    pub fn add_constant(&mut self, name: &str) -> Result<(), SignatureError> {
        self.check_fresh(name)?;
        self.constants.push(name.to_string());
        Ok(())
    }

    pub fn add_function(&mut self, name: &str, arity: usize, lipschitz: Rational) -> Result<(), SignatureError> {
        self.check_symbol(name, arity, &lipschitz)?;
        self.functions.push(Symbol { name: name.to_string(), arity, lipschitz });
        Ok(())
    }

    pub fn add_relation(&mut self, name: &str, arity: usize, lipschitz: Rational) -> Result<(), SignatureError> {
        self.check_symbol(name, arity, &lipschitz)?;
        self.relations.push(Symbol { name: name.to_string(), arity, lipschitz });
        Ok(())
    }

    fn check_symbol(&self, name: &str, arity: usize, lipschitz: &Rational) -> Result<(), SignatureError> {
        self.check_fresh(name)?;
        if arity == 0 {
            return Err(SignatureError::ZeroArity(name.to_string()));
        }
        if *lipschitz < Rational::from_integer(0.into()) {
            return Err(SignatureError::NegativeLipschitz(name.to_string()));
        }
        Ok(())
    }

    pub fn with_constant(mut self, name: &str) -> Result<Self, SignatureError> {
        self.add_constant(name)?;
        Ok(self)
    }

    pub fn with_function(mut self, name: &str, arity: usize, lipschitz: Rational) -> Result<Self, SignatureError> {
        self.add_function(name, arity, lipschitz)?;
        Ok(self)
    }

    pub fn with_relation(mut self, name: &str, arity: usize, lipschitz: Rational) -> Result<Self, SignatureError> {
        self.add_relation(name, arity, lipschitz)?;
        Ok(self)
    }

    pub fn constants(&self) -> &[String] {
        &self.constants
    }

    pub fn functions(&self) -> &[Symbol] {
        &self.functions
    }

    pub fn relations(&self) -> &[Symbol] {
        &self.relations
    }

    pub fn kind(&self, name: &str) -> Option<SymbolKind> {
        if self.constants.iter().any(|c| c == name) {
            Some(SymbolKind::Constant)
        } else if self.functions.iter().any(|f| f.name == name) {
            Some(SymbolKind::Function)
        } else if self.relations.iter().any(|r| r.name == name) {
            Some(SymbolKind::Relation)
        } else {
            None
        }
    }

    pub fn function(&self, name: &str) -> Option<&Symbol> {
        self.functions.iter().find(|f| f.name == name)
    }

    pub fn relation(&self, name: &str) -> Option<&Symbol> {
        self.relations.iter().find(|r| r.name == name)
    }

    pub fn constant_index(&self, name: &str) -> Option<usize> {
        self.constants.iter().position(|c| c == name)
    }

    pub fn function_index(&self, name: &str) -> Option<usize> {
        self.functions.iter().position(|f| f.name == name)
    }

    pub fn relation_index(&self, name: &str) -> Option<usize> {
        self.relations.iter().position(|r| r.name == name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(String),
    Const(String),
    Apply(String, Vec<Term>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.to_string())
    }

    pub fn constant(name: &str) -> Term {
        Term::Const(name.to_string())
    }

    pub fn apply(name: &str, args: Vec<Term>) -> Term {
        Term::Apply(name.to_string(), args)
    }

    fn collect_vars(&self, out: &mut Vec<String>) {
        match self {
            Term::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
            Term::Const(_) => {}
            Term::Apply(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    /// Variables in first-occurrence order.
    pub fn variables(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    pub fn check(&self, sig: &Signature) -> Result<(), LogicError> {
        match self {
            Term::Var(_) => Ok(()),
            Term::Const(c) => match sig.kind(c) {
                Some(SymbolKind::Constant) => Ok(()),
                _ => Err(LogicError::UnknownSymbol(c.clone())),
            },
            Term::Apply(f, args) => {
                let sym = sig.function(f).ok_or_else(|| LogicError::UnknownSymbol(f.clone()))?;
                if sym.arity != args.len() {
                    return Err(LogicError::Arity { symbol: f.clone(), expected: sym.arity, found: args.len() });
                }
                args.iter().try_for_each(|a| a.check(sig))
            }
        }
    }

    fn rename(&self, map: &dyn Fn(&str) -> Option<String>) -> Term {
        match self {
            Term::Var(v) => Term::Var(map(v).unwrap_or_else(|| v.clone())),
            Term::Const(c) => Term::Const(c.clone()),
            Term::Apply(f, args) => Term::Apply(f.clone(), args.iter().map(|a| a.rename(map)).collect()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Quantifier {
    Sup,
    Inf,
}

impl Quantifier {
    pub fn keyword(self) -> &'static str {
        match self {
            Quantifier::Sup => "sup",
            Quantifier::Inf => "inf",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Const(Rational),
    Dist(Term, Term),
    Rel(String, Vec<Term>),
    Scale(Rational, Box<Formula>),
    Add(Box<Formula>, Box<Formula>),
    Quant(Quantifier, String, Box<Formula>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LogicError {
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("`{symbol}` expects {expected} arguments, found {found}")]
    Arity { symbol: String, expected: usize, found: usize },
    #[error("variable `{0}` is rebound inside its own scope")]
    Rebound(String),
    #[error("bound variable `{0}` clashes with a declared symbol")]
    BinderIsSymbol(String),
}

impl Formula {
    pub fn constant(r: Rational) -> Formula {
        Formula::Const(r)
    }

    pub fn dist(a: Term, b: Term) -> Formula {
        Formula::Dist(a, b)
    }

    pub fn rel(name: &str, args: Vec<Term>) -> Formula {
        Formula::Rel(name.to_string(), args)
    }

    pub fn scale(r: Rational, body: Formula) -> Formula {
        Formula::Scale(r, Box::new(body))
    }

    pub fn add(left: Formula, right: Formula) -> Formula {
        Formula::Add(Box::new(left), Box::new(right))
    }

    pub fn sup(var: &str, body: Formula) -> Formula {
        Formula::Quant(Quantifier::Sup, var.to_string(), Box::new(body))
    }

    pub fn inf(var: &str, body: Formula) -> Formula {
        Formula::Quant(Quantifier::Inf, var.to_string(), Box::new(body))
    }

    /// `left - right`, desugared.
    pub fn sub(left: Formula, right: Formula) -> Formula {
        Formula::add(left, Formula::scale(-crate::scalar::int(1), right))
    }

    /// Free variables in first-occurrence order.
    pub fn free_variables(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut Vec<String>) {
        let push_term = |t: &Term, out: &mut Vec<String>| {
            for v in t.variables() {
                if !bound.contains(&v) && !out.contains(&v) {
                    out.push(v);
                }
            }
        };
        match self {
            Formula::Const(_) => {}
            Formula::Dist(a, b) => {
                push_term(a, out);
                push_term(b, out);
            }
            Formula::Rel(_, args) => args.iter().for_each(|t| push_term(t, out)),
            Formula::Scale(_, body) => body.collect_free(bound, out),
            Formula::Add(l, r) => {
                l.collect_free(bound, out);
                r.collect_free(bound, out);
            }
            Formula::Quant(_, v, body) => {
                bound.push(v.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn is_sentence(&self) -> bool {
        self.free_variables().is_empty()
    }

    /// Checks declarations, arities, and that no binder is rebound in its scope.
    pub fn check(&self, sig: &Signature) -> Result<(), LogicError> {
        self.check_in(sig, &mut Vec::new())
    }

    fn check_in(&self, sig: &Signature, bound: &mut Vec<String>) -> Result<(), LogicError> {
        match self {
            Formula::Const(_) => Ok(()),
            Formula::Dist(a, b) => {
                a.check(sig)?;
                b.check(sig)
            }
            Formula::Rel(r, args) => {
                let sym = sig.relation(r).ok_or_else(|| LogicError::UnknownSymbol(r.clone()))?;
                if sym.arity != args.len() {
                    return Err(LogicError::Arity { symbol: r.clone(), expected: sym.arity, found: args.len() });
                }
                args.iter().try_for_each(|a| a.check(sig))
            }
            Formula::Scale(_, body) => body.check_in(sig, bound),
            Formula::Add(l, r) => {
                l.check_in(sig, bound)?;
                r.check_in(sig, bound)
            }
            Formula::Quant(_, v, body) => {
                if bound.contains(v) {
                    return Err(LogicError::Rebound(v.clone()));
                }
                if sig.kind(v).is_some() || v == METRIC {
                    return Err(LogicError::BinderIsSymbol(v.clone()));
                }
                bound.push(v.clone());
                let res = body.check_in(sig, bound);
                bound.pop();
                res
            }
        }
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        match self {
            Formula::Const(_) | Formula::Dist(..) | Formula::Rel(..) => 1,
            Formula::Scale(_, b) | Formula::Quant(_, _, b) => 1 + b.size(),
            Formula::Add(l, r) => 1 + l.size() + r.size(),
        }
    }

    pub fn quantifier_depth(&self) -> usize {
        match self {
            Formula::Const(_) | Formula::Dist(..) | Formula::Rel(..) => 0,
            Formula::Scale(_, b) => b.quantifier_depth(),
            Formula::Quant(_, _, b) => 1 + b.quantifier_depth(),
            Formula::Add(l, r) => l.quantifier_depth().max(r.quantifier_depth()),
        }
    }

    /// Renames free occurrences of variables. Bound variables are left alone;
    /// the caller must make sure new names are not captured.
    pub fn rename_free(&self, map: &dyn Fn(&str) -> Option<String>) -> Formula {
        self.rename_in(map, &mut Vec::new())
    }

    fn rename_in(&self, map: &dyn Fn(&str) -> Option<String>, bound: &mut Vec<String>) -> Formula {
        let bound_snapshot: BTreeSet<String> = bound.iter().cloned().collect();
        let term_map = |v: &str| if bound_snapshot.contains(v) { None } else { map(v) };
        match self {
            Formula::Const(r) => Formula::Const(r.clone()),
            Formula::Dist(a, b) => Formula::Dist(a.rename(&term_map), b.rename(&term_map)),
            Formula::Rel(r, args) => Formula::Rel(r.clone(), args.iter().map(|t| t.rename(&term_map)).collect()),
            Formula::Scale(r, body) => Formula::Scale(r.clone(), Box::new(body.rename_in(map, bound))),
            Formula::Add(l, r) => Formula::Add(Box::new(l.rename_in(map, bound)), Box::new(r.rename_in(map, bound))),
            Formula::Quant(q, v, body) => {
                bound.push(v.clone());
                let body = body.rename_in(map, bound);
                bound.pop();
                Formula::Quant(*q, v.clone(), Box::new(body))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConditionRel {
    Le,
    Eq,
}

/// `left <= right` or `left = right`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Condition {
    pub left: Formula,
    pub relation: ConditionRel,
    pub right: Formula,
}

impl Condition {
    pub fn le(left: Formula, right: Formula) -> Self {
        Condition { left, relation: ConditionRel::Le, right }
    }

    pub fn eq(left: Formula, right: Formula) -> Self {
        Condition { left, relation: ConditionRel::Eq, right }
    }

    /// `=` is shorthand for the two inequalities.
    pub fn expand(&self) -> Vec<(Formula, Formula)> {
        match self.relation {
            ConditionRel::Le => vec![(self.left.clone(), self.right.clone())],
            ConditionRel::Eq => vec![
                (self.left.clone(), self.right.clone()),
                (self.right.clone(), self.left.clone()),
            ],
        }
    }

    pub fn free_variables(&self) -> Vec<String> {
        let mut vars = self.left.free_variables();
        for v in self.right.free_variables() {
            if !vars.contains(&v) {
                vars.push(v);
            }
        }
        vars
    }

    pub fn check(&self, sig: &Signature) -> Result<(), LogicError> {
        self.left.check(sig)?;
        self.right.check(sig)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn m2_sig() -> Signature {
        Signature::new().with_constant("c0").unwrap().with_relation("P", 1, int(1)).unwrap()
    }

    #[test]
    fn signature_rejects_duplicates_and_reserved() {
        let sig = m2_sig();
        assert_eq!(sig.clone().with_constant("P"), Err(SignatureError::Duplicate("P".into())));
        assert_eq!(sig.clone().with_relation("d", 2, int(1)), Err(SignatureError::Reserved("d".into())));
        assert_eq!(sig.clone().with_function("F", 0, int(1)), Err(SignatureError::ZeroArity("F".into())));
        assert_eq!(sig.with_function("F", 1, int(-1)), Err(SignatureError::NegativeLipschitz("F".into())));
    }

    #[test]
    fn free_variables_in_first_occurrence_order() {
        let phi = Formula::sup(
            "x",
            Formula::add(Formula::rel("P", vec![Term::var("x")]), Formula::dist(Term::var("x"), Term::var("y"))),
        );
        assert_eq!(phi.free_variables(), vec!["y".to_string()]);
        assert!(Formula::constant(int(3)).free_variables().is_empty());
        let d = Formula::dist(Term::var("x"), Term::var("y"));
        assert_eq!(d.free_variables(), vec!["x".to_string(), "y".to_string()]);
    }

    #[test]
    fn check_rejects_rebinding() {
        let phi = Formula::sup("x", Formula::sup("x", Formula::rel("P", vec![Term::var("x")])));
        assert_eq!(phi.check(&m2_sig()), Err(LogicError::Rebound("x".into())));
        let psi = Formula::rel("P", vec![Term::var("x"), Term::var("y")]);
        assert!(matches!(psi.check(&m2_sig()), Err(LogicError::Arity { .. })));
    }

    #[test]
    fn equality_condition_expands_to_two_sides() {
        let c = Condition::eq(Formula::constant(int(1)), Formula::dist(Term::var("x"), Term::constant("c0")));
        assert_eq!(c.expand().len(), 2);
        assert_eq!(c.free_variables(), vec!["x".to_string()]);
    }
}
