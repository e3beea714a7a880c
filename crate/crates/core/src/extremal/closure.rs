//! Closure of a point set under maximizers of parametrized formulas.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::logic::{parse_formula_in, Formula, ParseError, Signature};
use crate::scalar::Scalar;
use crate::structure::{all_tuples, Assignment, EvalError, FiniteStructure};

pub const DEFAULT_TEMPLATES: [&str; 2] = ["d(x, a)", "d(x, a) + d(x, b)"];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ClosureError {
    #[error("seed set is empty")]
    EmptySeeds,
    #[error("point {0} does not exist")]
    BadPoint(usize),
    #[error("template `{template}` must have free variable x")]
    NoVariable { template: String },
    #[error("template `{template}`: {source}")]
    Parse { template: String, source: ParseError },
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// A formula in `x` whose other free variables are parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct Template {
    pub formula: Formula,
    pub parameters: Vec<String>,
}

impl Template {
    pub fn new(formula: Formula) -> Result<Self, ClosureError> {
        let free = formula.free_variables();
        if !free.iter().any(|v| v == "x") {
            return Err(ClosureError::NoVariable { template: formula.to_string() });
        }
        let parameters = free.into_iter().filter(|v| v != "x").collect();
        Ok(Template { formula, parameters })
    }

    /// Parses `text` allowing any identifier as a free variable.
    pub fn parse<N: Scalar>(text: &str, s: &FiniteStructure<N>) -> Result<Self, ClosureError> {
        let free = template_variables(text, s.signature());
        let formula = parse_formula_in(text, s.signature(), &free)
            .map_err(|e| ClosureError::Parse { template: text.to_string(), source: e })?;
        Template::new(formula)
    }
}

/// Identifiers in `text` that look like variables: `x` plus single lowercase
/// letters other than `d` and symbol names.
fn template_variables(text: &str, sig: &Signature) -> Vec<String> {
    let mut symbols: Vec<&str> = sig.constants().iter().map(String::as_str).collect();
    symbols.extend(sig.functions().iter().chain(sig.relations()).map(|sym| sym.name.as_str()));
    let mut out: BTreeSet<String> = BTreeSet::new();
    out.insert("x".into());
    for word in text.split(|c: char| !c.is_ascii_alphanumeric() && c != '_') {
        if word.len() == 1 && word.chars().all(|c| c.is_ascii_lowercase()) && word != "d" && !symbols.contains(&word) {
            out.insert(word.to_string());
        }
    }
    out.into_iter().collect()
}

pub fn default_templates<N: Scalar>(s: &FiniteStructure<N>) -> Vec<Template> {
    DEFAULT_TEMPLATES.iter().map(|t| Template::parse(t, s).expect("default template")).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureStep {
    pub template: usize,
    pub parameters: Vec<usize>,
    pub added: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureResult {
    pub points: Vec<usize>,
    pub steps: Vec<ClosureStep>,
    pub iterations: usize,
}

/// Adds every maximizer (and minimizer with `argmin`) of each instantiated
/// template until nothing changes. Ties add all optimal points.
pub fn maximizer_closure<N: Scalar>(
    s: &FiniteStructure<N>,
    seeds: &[usize],
    templates: &[Template],
    argmin: bool,
) -> Result<ClosureResult, ClosureError> {
    if seeds.is_empty() {
        return Err(ClosureError::EmptySeeds);
    }
    if let Some(&p) = seeds.iter().find(|&&p| p >= s.size()) {
        return Err(ClosureError::BadPoint(p));
    }
    let tol = s.tolerance();
    let mut set: BTreeSet<usize> = seeds.iter().copied().collect();
    let mut steps = Vec::new();
    let mut iterations = 0;
    loop {
        iterations += 1;
        let current: Vec<usize> = set.iter().copied().collect();
        let mut grew = false;
        for (ti, t) in templates.iter().enumerate() {
            for params in all_tuples(current.len(), t.parameters.len()) {
                let params: Vec<usize> = params.iter().map(|&i| current[i]).collect();
                let mut asg = Assignment::zip(&t.parameters, &params);
                let mut values = Vec::with_capacity(s.size());
                for x in 0..s.size() {
                    asg.set("x", x);
                    values.push(s.eval(&t.formula, &asg)?);
                }
                let mut added = Vec::new();
                let mut extremes = vec![true];
                if argmin {
                    extremes.push(false);
                }
                for maximize in extremes {
                    let best = values
                        .iter()
                        .skip(1)
                        .fold(values[0].clone(), |b, v| {
                            let better = if maximize { v.compare(&b, tol).is_gt() } else { v.compare(&b, tol).is_lt() };
                            if better {
                                v.clone()
                            } else {
                                b
                            }
                        });
                    for (x, v) in values.iter().enumerate() {
                        if v.approx_eq(&best, tol) && set.insert(x) {
                            added.push(x);
                        }
                    }
                }
                if !added.is_empty() {
                    grew = true;
                    steps.push(ClosureStep { template: ti, parameters: params, added });
                }
            }
        }
        if !grew {
            break;
        }
    }
    Ok(ClosureResult { points: set.into_iter().collect(), steps, iterations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::scalar::Tolerance;

    #[test]
    fn c8_closes_from_any_seed() {
        let c = corpus::c8(Tolerance::DEFAULT_FLOAT);
        let t = default_templates(&c);
        for seed in 0..8 {
            let r = maximizer_closure(&c, &[seed], &t, false).unwrap();
            assert_eq!(r.points, (0..8).collect::<Vec<_>>());
        }
        let r = maximizer_closure(&c, &[0], &t, false).unwrap();
        assert_eq!(r.steps[0].added, vec![4]);
    }

    #[test]
    fn m2_and_fixed_points() {
        let m = corpus::m2();
        let t = default_templates(&m);
        assert_eq!(maximizer_closure(&m, &[0], &t, false).unwrap().points, vec![0, 1]);
        let all = maximizer_closure(&m, &[0, 1], &t, false).unwrap();
        assert!(all.steps.is_empty());
        assert_eq!(all.iterations, 1);
        assert_eq!(maximizer_closure(&m, &[], &t, false), Err(ClosureError::EmptySeeds));
    }

    #[test]
    fn argmin_and_custom_templates() {
        let m = corpus::m2();
        let t = vec![Template::parse("P(x)", &m).unwrap()];
        assert_eq!(maximizer_closure(&m, &[0], &t, false).unwrap().points, vec![0, 1]);
        let t = vec![Template::parse("-P(x)", &m).unwrap()];
        assert_eq!(maximizer_closure(&m, &[1], &t, true).unwrap().points, vec![0, 1]);
        assert!(matches!(Template::parse("P(c0)", &m), Err(ClosureError::NoVariable { .. })));
    }
}
