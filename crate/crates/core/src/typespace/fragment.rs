//! Finite-dimensional fragments of the formula space.
//!
//! Every basis element is a node of a recipe DAG, so it can be re-evaluated
//! on other structures (substructures in particular) and materialized as a
//! formula. Context `m` holds functions of the variables `context_names(m)`.

use std::collections::{HashMap, HashSet};

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use super::terms::term_closure;
use crate::linalg::SpanBasis;
use crate::logic::{Formula, Quantifier, Signature};
use crate::scalar::{int, rat, Rational, Scalar, Tolerance};
use crate::structure::{all_tuples, tuple_index, FiniteStructure};

pub type NodeId = usize;

/// Formulas larger than this are not materialized.
pub const MATERIALIZE_LIMIT: usize = 20_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FragmentMode {
    /// The given formulas verbatim, plus the constant 1.
    Listed,
    /// Atomic formulas closed under quantifiers, permutations and dummy variables.
    Enumerated,
    /// As enumerated, also quantifying random combinations.
    Saturated,
}

impl FragmentMode {
    pub fn name(self) -> &'static str {
        match self {
            FragmentMode::Listed => "listed",
            FragmentMode::Enumerated => "enumerated",
            FragmentMode::Saturated => "saturated",
        }
    }

    pub fn parse(text: &str) -> Option<Self> {
        match text {
            "listed" => Some(FragmentMode::Listed),
            "enumerated" => Some(FragmentMode::Enumerated),
            "saturated" => Some(FragmentMode::Saturated),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FragmentParams {
    pub mode: FragmentMode,
    /// Cap on nested function applications in terms.
    pub term_depth: Option<usize>,
    pub rounds: usize,
    /// Random combinations quantified per context and round.
    pub samples: usize,
    pub seed: u64,
    /// Contexts beyond the requested arity.
    pub extra_contexts: usize,
    /// Formulas for listed mode, over `context_names`.
    pub listed: Vec<Formula>,
}

impl Default for FragmentParams {
    fn default() -> Self {
        FragmentParams {
            mode: FragmentMode::Saturated,
            term_depth: Some(3),
            rounds: 8,
            samples: 32,
            seed: 0,
            extra_contexts: 2,
            listed: Vec::new(),
        }
    }
}

impl FragmentParams {
    pub fn listed(formulas: Vec<Formula>) -> Self {
        FragmentParams { mode: FragmentMode::Listed, listed: formulas, extra_contexts: 0, ..Default::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FragmentError {
    #[error("context {0} is not available")]
    MissingContext(usize),
    #[error("listed formula `{formula}` uses variables outside {context:?}")]
    ListedVariables { formula: String, context: Vec<String> },
    #[error("listed formula `{formula}`: {source}")]
    Listed { formula: String, source: crate::logic::LogicError },
    #[error("formula would have {0} nodes")]
    TooLarge(usize),
    #[error("structure has {found} points, fragment was built for {expected}")]
    SizeMismatch { expected: usize, found: usize },
    #[error("structure signature differs from the fragment's")]
    SignatureMismatch,
    #[error("substituted table is outside the span of context {0}")]
    OutsideSpan(usize),
    #[error("variable map {map:?} does not fit contexts {from} -> {to}")]
    BadMap { from: usize, to: usize, map: Vec<usize> },
}

/// Variable names of context `m`.
pub fn context_names(m: usize) -> Vec<String> {
    if m <= 3 {
        ["x", "y", "z"][..m].iter().map(|s| s.to_string()).collect()
    } else {
        (1..=m).map(|i| format!("x{i}")).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    One,
    /// A formula over the context variables (also used for listed formulas).
    Atomic(Formula),
    Combo(Vec<(Rational, NodeId)>),
    /// Quantifies the last variable of a node one context up.
    Quant(Quantifier, NodeId),
    /// Variable `i` of the child becomes variable `map[i]` here.
    Subst(NodeId, Vec<usize>),
}

#[derive(Debug, Clone, PartialEq)]
struct NodeEntry {
    node: Node,
    context: usize,
}

#[derive(Debug, Clone)]
pub struct BasisElement<N> {
    pub node: NodeId,
    pub table: Vec<N>,
}

#[derive(Debug, Clone)]
struct Context<N> {
    elements: Vec<BasisElement<N>>,
    /// Quantified candidates whose tables were already spanned.
    derived: Vec<BasisElement<N>>,
    span: SpanBasis<N>,
}

const DERIVED_LIMIT: usize = 256;

const COEFFICIENTS: [(i64, i64); 14] =
    [(1, 1), (-1, 1), (2, 1), (-2, 1), (1, 2), (-1, 2), (1, 3), (-1, 3), (2, 3), (-2, 3), (1, 4), (-1, 4), (3, 4), (-3, 4)];

#[derive(Debug, Clone)]
pub struct Fragment<N> {
    params: FragmentParams,
    signature: Signature,
    points: usize,
    arity: usize,
    nodes: Vec<NodeEntry>,
    contexts: Vec<Context<N>>,
    saturated: bool,
    rounds_run: usize,
    quantified: HashSet<(NodeId, Quantifier)>,
    tol: Tolerance,
}

fn quantify<N: Scalar>(table: &[N], points: usize, q: Quantifier) -> Vec<N> {
    table
        .chunks(points)
        .map(|chunk| {
            chunk
                .iter()
                .skip(1)
                .fold(chunk[0].clone(), |best, v| {
                    let better = match q {
                        Quantifier::Sup => v.compare(&best, Tolerance::EXACT).is_gt(),
                        Quantifier::Inf => v.compare(&best, Tolerance::EXACT).is_lt(),
                    };
                    if better {
                        v.clone()
                    } else {
                        best
                    }
                })
        })
        .collect()
}

fn substitute<N: Scalar>(table: &[N], points: usize, map: &[usize], to: usize) -> Vec<N> {
    all_tuples(points, to)
        .map(|t| {
            let inner: Vec<usize> = map.iter().map(|&i| t[i]).collect();
            table[tuple_index(&inner, points)].clone()
        })
        .collect()
}

fn combine<N: Scalar>(terms: &[(Rational, &[N])]) -> Vec<N> {
    let len = terms[0].1.len();
    let mut out = vec![N::zero(); len];
    for (c, t) in terms {
        let c = N::from_rational(c);
        for (o, v) in out.iter_mut().zip(t.iter()) {
            *o = o.clone() + c.clone() * v.clone();
        }
    }
    out
}

/// Adjacent transpositions of `m` variables.
fn transpositions(m: usize) -> Vec<Vec<usize>> {
    (0..m.saturating_sub(1))
        .map(|i| {
            let mut p: Vec<usize> = (0..m).collect();
            p.swap(i, i + 1);
            p
        })
        .collect()
}

impl<N: Scalar> Fragment<N> {
    /// Builds the fragment for `n`-types over `s`, with contexts
    /// `1 ..= n + params.extra_contexts`.
    pub fn generate(s: &FiniteStructure<N>, n: usize, params: FragmentParams) -> Result<Self, FragmentError> {
        let n = n.max(1);
        let top = n + params.extra_contexts.max(if params.mode == FragmentMode::Listed { 0 } else { 1 });
        let tol = s.tolerance();
        let points = s.size();
        let mut frag = Fragment {
            params: params.clone(),
            signature: s.signature().clone(),
            points,
            arity: n,
            nodes: Vec::new(),
            contexts: (1..=top)
                .map(|m| Context {
                    elements: Vec::new(),
                    derived: Vec::new(),
                    span: SpanBasis::new(points.pow(m as u32), tol),
                })
                .collect(),
            saturated: false,
            rounds_run: 0,
            quantified: HashSet::new(),
            tol,
        };
        for m in 1..=top {
            frag.insert_node(m, Node::One, vec![N::one(); points.pow(m as u32)], true);
        }
        if params.mode == FragmentMode::Listed {
            for phi in &params.listed {
                phi.check(s.signature()).map_err(|e| FragmentError::Listed { formula: phi.to_string(), source: e })?;
                let fits: Vec<usize> = (1..=top)
                    .filter(|&m| phi.free_variables().iter().all(|v| context_names(m).contains(v)))
                    .collect();
                if fits.is_empty() {
                    return Err(FragmentError::ListedVariables { formula: phi.to_string(), context: context_names(top) });
                }
                for m in fits {
                    let table = s.formula_table(phi, &context_names(m)).expect("checked formula");
                    frag.insert_node(m, Node::Atomic(phi.clone()), table, true);
                }
            }
            return Ok(frag);
        }
        for m in 1..=top {
            frag.add_atomics(s, m);
        }
        frag.close_permutations();
        frag.lift_all();
        let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
        let samples = if params.mode == FragmentMode::Saturated { params.samples } else { 0 };
        for _ in 0..params.rounds {
            let before = frag.dims();
            for m in (1..top).rev() {
                frag.quantify_into(m, samples, &mut rng);
            }
            frag.close_permutations();
            frag.lift_all();
            frag.rounds_run += 1;
            if frag.dims() == before {
                frag.saturated = true;
                break;
            }
        }
        Ok(frag)
    }

    fn push_node(&mut self, context: usize, node: Node) -> NodeId {
        self.nodes.push(NodeEntry { node, context });
        self.nodes.len() - 1
    }

    /// Adds `table` to context `m` if independent (or unconditionally when `force`).
    fn insert_node(&mut self, m: usize, node: Node, table: Vec<N>, force: bool) -> bool {
        let ctx = &mut self.contexts[m - 1];
        let independent = ctx.span.insert(&table);
        if !independent && !force {
            return false;
        }
        let id = self.push_node(m, node);
        self.contexts[m - 1].elements.push(BasisElement { node: id, table });
        true
    }

    /// Like `insert_node`, but a dependent table is kept as a derived element.
    fn insert_candidate(&mut self, m: usize, node: Node, table: Vec<N>) {
        if self.contexts[m - 1].span.contains(&table) {
            if self.contexts[m - 1].derived.len() < DERIVED_LIMIT {
                let id = self.push_node(m, node);
                self.contexts[m - 1].derived.push(BasisElement { node: id, table });
            }
            return;
        }
        self.insert_node(m, node, table, false);
    }

    fn add_atomics(&mut self, s: &FiniteStructure<N>, m: usize) {
        let names = context_names(m);
        let terms = term_closure(s, &names, self.params.term_depth);
        let mut atoms = Vec::new();
        for sym in s.signature().relations() {
            for args in all_tuples(terms.len(), sym.arity) {
                atoms.push(Formula::rel(&sym.name, args.iter().map(|&i| terms[i].term.clone()).collect()));
            }
        }
        for i in 0..terms.len() {
            for j in (i + 1)..terms.len() {
                atoms.push(Formula::dist(terms[i].term.clone(), terms[j].term.clone()));
            }
        }
        for phi in atoms {
            let table = s.formula_table(&phi, &names).expect("atomic formula over context");
            self.insert_node(m, Node::Atomic(phi), table, false);
        }
    }

    fn quantify_into(&mut self, m: usize, samples: usize, rng: &mut ChaCha8Rng) {
        let upper: Vec<BasisElement<N>> = self.contexts[m].elements.clone();
        for e in &upper {
            for q in [Quantifier::Sup, Quantifier::Inf] {
                if !self.quantified.insert((e.node, q)) {
                    continue;
                }
                let table = quantify(&e.table, self.points, q);
                self.insert_candidate(m, Node::Quant(q, e.node), table);
            }
        }
        if upper.len() < 2 {
            return;
        }
        for _ in 0..samples {
            let k = rng.gen_range(2..=3usize.min(upper.len()));
            let picks = sample(rng, upper.len(), k).into_vec();
            let coeffs: Vec<Rational> = picks
                .iter()
                .map(|_| {
                    let (p, q) = COEFFICIENTS[rng.gen_range(0..COEFFICIENTS.len())];
                    rat(p, q)
                })
                .collect();
            let parts: Vec<(Rational, &[N])> =
                coeffs.iter().zip(&picks).map(|(c, &i)| (c.clone(), upper[i].table.as_slice())).collect();
            let combo_table = combine(&parts);
            let mut combo: Option<NodeId> = None;
            for q in [Quantifier::Sup, Quantifier::Inf] {
                let table = quantify(&combo_table, self.points, q);
                let spanned = self.contexts[m - 1].span.contains(&table);
                if spanned && self.contexts[m - 1].derived.len() >= DERIVED_LIMIT {
                    continue;
                }
                let child = *combo.get_or_insert_with(|| {
                    let node = Node::Combo(coeffs.iter().cloned().zip(picks.iter().map(|&i| upper[i].node)).collect());
                    self.nodes.push(NodeEntry { node, context: m + 1 });
                    self.nodes.len() - 1
                });
                self.insert_candidate(m, Node::Quant(q, child), table);
            }
        }
    }

    fn close_permutations(&mut self) {
        for m in 2..=self.contexts.len() {
            let perms = transpositions(m);
            let mut next = 0;
            while next < self.contexts[m - 1].elements.len() {
                let e = self.contexts[m - 1].elements[next].clone();
                for p in &perms {
                    let table = substitute(&e.table, self.points, p, m);
                    self.insert_node(m, Node::Subst(e.node, p.clone()), table, false);
                }
                next += 1;
            }
        }
    }

    fn lift_all(&mut self) {
        for m in 1..self.contexts.len() {
            let map: Vec<usize> = (0..m).collect();
            let lower = self.contexts[m - 1].elements.clone();
            for e in lower {
                let table = substitute(&e.table, self.points, &map, m + 1);
                self.insert_node(m + 1, Node::Subst(e.node, map.clone()), table, false);
            }
        }
        self.close_permutations();
    }

    pub fn params(&self) -> &FragmentParams {
        &self.params
    }

    pub fn mode(&self) -> FragmentMode {
        self.params.mode
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn tolerance(&self) -> Tolerance {
        self.tol
    }

    pub fn max_context(&self) -> usize {
        self.contexts.len()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.contexts.iter().map(|c| c.elements.len()).collect()
    }

    pub fn saturated(&self) -> bool {
        self.saturated
    }

    pub fn rounds_run(&self) -> usize {
        self.rounds_run
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    fn context(&self, m: usize) -> Result<&Context<N>, FragmentError> {
        if m == 0 {
            return Err(FragmentError::MissingContext(m));
        }
        self.contexts.get(m - 1).ok_or(FragmentError::MissingContext(m))
    }

    pub fn basis(&self, m: usize) -> Result<&[BasisElement<N>], FragmentError> {
        Ok(&self.context(m)?.elements)
    }

    /// Basis values at a tuple of context length.
    /// Quantified formulas of context `m` whose tables on the generating
    /// structure were spanned by the basis. They still matter on substructures.
    pub fn derived(&self, m: usize) -> Result<&[BasisElement<N>], FragmentError> {
        Ok(&self.context(m)?.derived)
    }

    pub fn coordinates(&self, tuple: &[usize]) -> Result<Vec<N>, FragmentError> {
        let ctx = self.context(tuple.len())?;
        let i = tuple_index(tuple, self.points);
        Ok(ctx.elements.iter().map(|e| e.table[i].clone()).collect())
    }

    /// Coordinates of a table over `M^m` in terms of the basis of context `m`.
    pub fn express(&self, m: usize, table: &[N]) -> Result<Option<Vec<N>>, FragmentError> {
        let ctx = self.context(m)?;
        if self.params.mode == FragmentMode::Listed {
            return Ok(express_listed(&ctx.elements, table, self.tol));
        }
        Ok(ctx.span.coordinates(table))
    }

    /// Matrix whose row `i` expresses basis element `i` of context `from`,
    /// with its variable `j` renamed to variable `map[j]` of context `to`.
    pub fn embedding(&self, from: usize, to: usize, map: &[usize]) -> Result<Vec<Vec<N>>, FragmentError> {
        if map.len() != from || map.iter().any(|&j| j >= to) {
            return Err(FragmentError::BadMap { from, to, map: map.to_vec() });
        }
        let source = self.context(from)?;
        self.context(to)?;
        source
            .elements
            .iter()
            .map(|e| {
                let table = substitute(&e.table, self.points, map, to);
                self.express(to, &table)?.ok_or(FragmentError::OutsideSpan(to))
            })
            .collect()
    }

    /// Table of a node over `s^m` for any structure with the same signature.
    pub fn node_table(&self, id: NodeId, s: &FiniteStructure<N>, memo: &mut HashMap<NodeId, Vec<N>>) -> Vec<N> {
        if let Some(t) = memo.get(&id) {
            return t.clone();
        }
        let entry = &self.nodes[id];
        let k = s.size();
        let m = entry.context;
        let table = match &entry.node {
            Node::One => vec![N::one(); k.pow(m as u32)],
            Node::Atomic(phi) => s.formula_table(phi, &context_names(m)).expect("formula over context"),
            Node::Combo(parts) => {
                let tables: Vec<(Rational, Vec<N>)> =
                    parts.iter().map(|(c, child)| (c.clone(), self.node_table(*child, s, memo))).collect();
                let refs: Vec<(Rational, &[N])> = tables.iter().map(|(c, t)| (c.clone(), t.as_slice())).collect();
                combine(&refs)
            }
            Node::Quant(q, child) => quantify(&self.node_table(*child, s, memo), k, *q),
            Node::Subst(child, map) => substitute(&self.node_table(*child, s, memo), k, map, m),
        };
        memo.insert(id, table.clone());
        table
    }

    /// Basis tables of every context evaluated on another structure.
    pub fn tables_on(&self, s: &FiniteStructure<N>) -> Result<Vec<Vec<Vec<N>>>, FragmentError> {
        if s.signature() != &self.signature {
            return Err(FragmentError::SignatureMismatch);
        }
        let mut memo = HashMap::new();
        Ok(self
            .contexts
            .iter()
            .map(|c| c.elements.iter().map(|e| self.node_table(e.node, s, &mut memo)).collect())
            .collect())
    }

    fn node_size(&self, id: NodeId, memo: &mut HashMap<NodeId, usize>) -> usize {
        if let Some(&v) = memo.get(&id) {
            return v;
        }
        let v = match &self.nodes[id].node {
            Node::One => 1,
            Node::Atomic(phi) => phi.size(),
            Node::Combo(parts) => parts
                .iter()
                .fold(0usize, |acc, (_, c)| acc.saturating_add(self.node_size(*c, memo)).saturating_add(2)),
            Node::Quant(_, c) => self.node_size(*c, memo).saturating_add(1),
            Node::Subst(c, _) => self.node_size(*c, memo),
        };
        memo.insert(id, v);
        v
    }

    fn build_formula(&self, id: NodeId, names: &[String], depth: usize) -> Formula {
        let entry = &self.nodes[id];
        match &entry.node {
            Node::One => Formula::constant(int(1)),
            Node::Atomic(phi) => {
                let canonical = context_names(entry.context);
                phi.rename_free(&|v| canonical.iter().position(|c| c == v).map(|i| names[i].clone()))
            }
            Node::Combo(parts) => {
                let mut terms = parts.iter().map(|(c, child)| {
                    let body = self.build_formula(*child, names, depth);
                    if *c == int(1) {
                        body
                    } else {
                        Formula::scale(c.clone(), body)
                    }
                });
                let first = terms.next().expect("nonempty combination");
                terms.fold(first, Formula::add)
            }
            Node::Quant(q, child) => {
                let bound = format!("u{}", depth + 1);
                let mut inner = names.to_vec();
                inner.push(bound.clone());
                let body = self.build_formula(*child, &inner, depth + 1);
                match q {
                    Quantifier::Sup => Formula::sup(&bound, body),
                    Quantifier::Inf => Formula::inf(&bound, body),
                }
            }
            Node::Subst(child, map) => {
                let inner: Vec<String> = map.iter().map(|&i| names[i].clone()).collect();
                self.build_formula(*child, &inner, depth)
            }
        }
    }

    /// The formula behind a node, over the variables `names`.
    pub fn node_formula(&self, id: NodeId, names: &[String]) -> Result<Formula, FragmentError> {
        let size = self.node_size(id, &mut HashMap::new());
        if size > MATERIALIZE_LIMIT {
            return Err(FragmentError::TooLarge(size));
        }
        Ok(self.build_formula(id, names, 0))
    }

    /// Basis element `i` of context `m` as a formula over `context_names(m)`.
    pub fn basis_formula(&self, m: usize, i: usize) -> Result<Formula, FragmentError> {
        let e = self.context(m)?.elements.get(i).ok_or(FragmentError::MissingContext(m))?;
        self.node_formula(e.node, &context_names(m))
    }
}

/// Least-squares-free coordinates for listed fragments, whose elements may be
/// dependent: eliminate over an independent sub-family, zero elsewhere.
fn express_listed<N: Scalar>(elements: &[BasisElement<N>], table: &[N], tol: Tolerance) -> Option<Vec<N>> {
    let mut span = SpanBasis::new(table.len(), tol);
    let mut kept = Vec::new();
    for (i, e) in elements.iter().enumerate() {
        if span.insert(&e.table) {
            kept.push(i);
        }
    }
    let coords = span.coordinates(table)?;
    let mut out = vec![N::zero(); elements.len()];
    for (i, c) in kept.into_iter().zip(coords) {
        out[i] = c;
    }
    Some(out)
}
