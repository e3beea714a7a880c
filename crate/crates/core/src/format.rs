//! Plain-text structure files.
//!
//! ```text
//! # comments run to end of line
//! SIGNATURE
//! constant c0
//! relation P 1 lipschitz 1
//! function F 1 lipschitz 1/2
//! POINTS
//! a0 a1
//! METRIC
//! 0
//! 1 0
//! INTERP
//! c0 = a0
//! P a0 = 0
//! P a1 = 1
//! F a0 = a1
//! F a1 = a0
//! MODE
//! exact
//! ```
//!
//! METRIC rows are lower-triangular, with or without the zero diagonal.
//! Relation entries left out of INTERP default to 0; every function entry
//! and constant must be given. MODE is `exact` (default) or `float <eps>`.

use std::fmt::Write as _;

use thiserror::Error;

use crate::corpus::AnyStructure;
use crate::logic::{Signature, SignatureError};
use crate::scalar::{parse_rational, Rational, Scalar, Tolerance};
use crate::structure::{all_tuples, tuple_index, FiniteStructure, StructureError, ValidationReport};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    Signature { line: usize, source: SignatureError },
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error("structure violates its axioms:\n{0}")]
    Invalid(ValidationReport),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Section {
    None,
    Signature,
    Points,
    Metric,
    Interp,
    Mode,
}

fn syntax(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Syntax { line, message: message.into() }
}

struct Raw {
    signature: Signature,
    points: Vec<String>,
    metric_rows: Vec<(usize, Vec<String>)>,
    interp: Vec<(usize, Vec<String>, String)>,
    float: Option<Tolerance>,
}

fn read_sections(text: &str) -> Result<Raw, FormatError> {
    let mut raw = Raw { signature: Signature::new(), points: Vec::new(), metric_rows: Vec::new(), interp: Vec::new(), float: None };
    let mut section = Section::None;
    let mut mode_seen = false;
    for (i, full) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = full.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let next = match line {
            "SIGNATURE" => Some(Section::Signature),
            "POINTS" => Some(Section::Points),
            "METRIC" => Some(Section::Metric),
            "INTERP" => Some(Section::Interp),
            "MODE" => Some(Section::Mode),
            _ => None,
        };
        if let Some(s) = next {
            section = s;
            continue;
        }
        let words: Vec<&str> = line.split_whitespace().collect();
        match section {
            Section::None => return Err(syntax(line_no, "content before the first section header")),
            Section::Signature => read_symbol(&mut raw.signature, &words, line_no)?,
            Section::Points => raw.points.extend(words.iter().map(|w| w.to_string())),
            Section::Metric => raw.metric_rows.push((line_no, words.iter().map(|w| w.to_string()).collect())),
            Section::Interp => {
                let (lhs, rhs) = line.split_once('=').ok_or_else(|| syntax(line_no, "expected `symbol args = value`"))?;
                let lhs: Vec<String> = lhs.split_whitespace().map(str::to_string).collect();
                if lhs.is_empty() {
                    return Err(syntax(line_no, "missing symbol before `=`"));
                }
                raw.interp.push((line_no, lhs, rhs.trim().to_string()));
            }
            Section::Mode => {
                if mode_seen {
                    return Err(syntax(line_no, "MODE given twice"));
                }
                mode_seen = true;
                raw.float = match words.as_slice() {
                    ["exact"] => None,
                    ["float"] => Some(Tolerance::DEFAULT_FLOAT),
                    ["float", eps] => {
                        let eps = f64::parse_literal(eps).filter(|e| *e >= 0.0).ok_or_else(|| syntax(line_no, "bad tolerance"))?;
                        Some(Tolerance(eps))
                    }
                    _ => return Err(syntax(line_no, "expected `exact` or `float <eps>`")),
                };
            }
        }
    }
    Ok(raw)
}

fn read_symbol(sig: &mut Signature, words: &[&str], line: usize) -> Result<(), FormatError> {
    let wrap = |source| FormatError::Signature { line, source };
    match words {
        ["constant", name] => sig.add_constant(name).map_err(wrap),
        [kind @ ("relation" | "function"), name, arity, rest @ ..] => {
            let arity: usize = arity.parse().map_err(|_| syntax(line, format!("bad arity `{arity}`")))?;
            let lipschitz = match rest {
                [] => Rational::from_integer(1.into()),
                ["lipschitz", value] => parse_rational(value).ok_or_else(|| syntax(line, format!("bad constant `{value}`")))?,
                _ => return Err(syntax(line, "expected `lipschitz <value>`")),
            };
            if *kind == "relation" {
                sig.add_relation(name, arity, lipschitz).map_err(wrap)
            } else {
                sig.add_function(name, arity, lipschitz).map_err(wrap)
            }
        }
        _ => Err(syntax(line, "expected `constant NAME`, `relation NAME ARITY [lipschitz L]` or `function ...`")),
    }
}

fn build<N: Scalar>(raw: &Raw, tol: Tolerance) -> Result<FiniteStructure<N>, FormatError> {
    let n = raw.points.len();
    let point = |label: &str, line: usize| -> Result<usize, FormatError> {
        raw.points.iter().position(|p| p == label).ok_or_else(|| syntax(line, format!("unknown point `{label}`")))
    };
    let value = |text: &str, line: usize| -> Result<N, FormatError> {
        N::parse_literal(text).ok_or_else(|| syntax(line, format!("bad number `{text}`")))
    };

    let with_diagonal = raw.metric_rows.len() == n;
    if !(with_diagonal || raw.metric_rows.len() + 1 == n) {
        let line = raw.metric_rows.first().map_or(0, |r| r.0);
        return Err(syntax(line, format!("expected {n} metric rows (or {} without the diagonal)", n.saturating_sub(1))));
    }
    let mut metric = vec![vec![N::zero(); n]; n];
    for (r, (line, row)) in raw.metric_rows.iter().enumerate() {
        let i = if with_diagonal { r } else { r + 1 };
        let expected = if with_diagonal { i + 1 } else { i };
        if row.len() != expected {
            return Err(syntax(*line, format!("row for point {i} needs {expected} entries")));
        }
        for (j, text) in row.iter().enumerate() {
            let v = value(text, *line)?;
            metric[i][j] = v.clone();
            metric[j][i] = v;
        }
    }

    let sig = &raw.signature;
    let mut constants: Vec<Option<usize>> = vec![None; sig.constants().len()];
    let mut functions: Vec<Vec<Option<usize>>> =
        sig.functions().iter().map(|f| vec![None; n.pow(f.arity as u32)]).collect();
    let mut relations: Vec<Vec<N>> = sig.relations().iter().map(|r| vec![N::zero(); n.pow(r.arity as u32)]).collect();
    for (line, lhs, rhs) in &raw.interp {
        let line = *line;
        let name = lhs[0].as_str();
        let args = lhs[1..].iter().map(|a| point(a, line)).collect::<Result<Vec<usize>, _>>()?;
        if let Some(ci) = sig.constant_index(name) {
            if !args.is_empty() {
                return Err(syntax(line, format!("constant `{name}` takes no arguments")));
            }
            constants[ci] = Some(point(rhs, line)?);
        } else if let Some(fi) = sig.function_index(name) {
            if args.len() != sig.functions()[fi].arity {
                return Err(syntax(line, format!("`{name}` needs {} arguments", sig.functions()[fi].arity)));
            }
            functions[fi][tuple_index(&args, n)] = Some(point(rhs, line)?);
        } else if let Some(ri) = sig.relation_index(name) {
            if args.len() != sig.relations()[ri].arity {
                return Err(syntax(line, format!("`{name}` needs {} arguments", sig.relations()[ri].arity)));
            }
            relations[ri][tuple_index(&args, n)] = value(rhs, line)?;
        } else {
            return Err(StructureError::UnknownSymbol(name.to_string()).into());
        }
    }
    let constants = constants
        .into_iter()
        .zip(sig.constants())
        .map(|(c, name)| c.ok_or_else(|| StructureError::Missing(name.clone())))
        .collect::<Result<Vec<usize>, _>>()?;
    let functions = functions
        .into_iter()
        .zip(sig.functions())
        .map(|(table, sym)| {
            table
                .into_iter()
                .collect::<Option<Vec<usize>>>()
                .ok_or_else(|| StructureError::Missing(sym.name.clone()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(FiniteStructure::from_parts(sig.clone(), raw.points.clone(), metric, constants, functions, relations, tol)?)
}

/// Parses a structure file without checking the axioms.
pub fn parse_structure_unchecked(text: &str) -> Result<AnyStructure, FormatError> {
    let raw = read_sections(text)?;
    Ok(match raw.float {
        None => AnyStructure::Exact(build::<Rational>(&raw, Tolerance::EXACT)?),
        Some(tol) => AnyStructure::Float(build::<f64>(&raw, tol)?),
    })
}

/// Parses a structure file and rejects structures that violate the axioms.
pub fn parse_structure(text: &str) -> Result<AnyStructure, FormatError> {
    let s = parse_structure_unchecked(text)?;
    let report = match &s {
        AnyStructure::Exact(s) => s.validate(),
        AnyStructure::Float(s) => s.validate(),
    };
    if report.is_valid() {
        Ok(s)
    } else {
        Err(FormatError::Invalid(report))
    }
}

fn write_structure<N: Scalar>(s: &FiniteStructure<N>, mode: &str) -> String {
    let mut out = String::new();
    let sig = s.signature();
    let n = s.size();
    out.push_str("SIGNATURE\n");
    for c in sig.constants() {
        let _ = writeln!(out, "constant {c}");
    }
    for r in sig.relations() {
        let _ = writeln!(out, "relation {} {} lipschitz {}", r.name, r.arity, r.lipschitz.render());
    }
    for f in sig.functions() {
        let _ = writeln!(out, "function {} {} lipschitz {}", f.name, f.arity, f.lipschitz.render());
    }
    let _ = writeln!(out, "POINTS\n{}", s.labels().join(" "));
    out.push_str("METRIC\n");
    for i in 0..n {
        let row: Vec<String> = (0..=i).map(|j| s.dist(i, j).render()).collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
    out.push_str("INTERP\n");
    for (c, &p) in sig.constants().iter().zip(s.constant_points()) {
        let _ = writeln!(out, "{c} = {}", s.label(p));
    }
    for r in sig.relations() {
        let table = s.relation_table(&r.name).expect("declared");
        for t in all_tuples(n, r.arity) {
            let args: Vec<&str> = t.iter().map(|&p| s.label(p)).collect();
            let _ = writeln!(out, "{} {} = {}", r.name, args.join(" "), table[tuple_index(&t, n)].render());
        }
    }
    for f in sig.functions() {
        let table = s.function_table(&f.name).expect("declared");
        for t in all_tuples(n, f.arity) {
            let args: Vec<&str> = t.iter().map(|&p| s.label(p)).collect();
            let _ = writeln!(out, "{} {} = {}", f.name, args.join(" "), s.label(table[tuple_index(&t, n)]));
        }
    }
    let _ = writeln!(out, "MODE\n{mode}");
    out
}

/// Text that [`parse_structure_unchecked`] reads back to an equal structure.
pub fn serialize_structure(s: &AnyStructure) -> String {
    match s {
        AnyStructure::Exact(s) => write_structure(s, "exact"),
        AnyStructure::Float(s) => write_structure(s, &format!("float {:e}", s.tolerance().0)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::scalar::int;

    const M2_TEXT: &str = "\
# two points
SIGNATURE
relation P 1 lipschitz 1
constant c0
POINTS
a0 a1
METRIC
1
INTERP
c0 = a0
P a1 = 1
";

    #[test]
    fn reads_m2_without_diagonal() {
        let s = parse_structure(M2_TEXT).unwrap();
        let AnyStructure::Exact(s) = s else { panic!("exact mode") };
        assert_eq!(s.relation_table("P").unwrap(), &[int(0), int(1)]);
        assert_eq!(s.dist(0, 1), &int(1));
        assert_eq!(s.constant("c0"), Some(0));
    }

    #[test]
    fn corpus_round_trips() {
        for name in corpus::NAMES {
            let s = corpus::load_corpus(name).unwrap().structure;
            let text = serialize_structure(&s);
            assert_eq!(parse_structure(&text).unwrap(), s, "{name}\n{text}");
        }
    }

    #[test]
    fn functions_and_float_mode() {
        let text = "SIGNATURE\nfunction F 1 lipschitz 1\nPOINTS\na b\nMETRIC\n0\n0.5 0\nINTERP\nF a = b\nF b = a\nMODE\nfloat 1e-6\n";
        let AnyStructure::Float(s) = parse_structure(text).unwrap() else { panic!("float mode") };
        assert_eq!(s.function_table("F").unwrap(), &[1, 0]);
        assert_eq!(s.tolerance(), Tolerance(1e-6));
        assert_eq!(*s.dist(0, 1), 0.5);
    }

    #[test]
    fn reports_errors() {
        assert!(matches!(parse_structure("POINTS\na\nMETRIC\n0\n0 0\n"), Err(FormatError::Syntax { .. })));
        assert!(matches!(parse_structure("SIGNATURE\nconstant c\nPOINTS\na\nMETRIC\n0\n"), Err(FormatError::Structure(_))));
        assert!(matches!(parse_structure("SIGNATURE\nrelation d 1\n"), Err(FormatError::Signature { line: 2, .. })));
        let lowered = "SIGNATURE\nrelation P 1\nPOINTS\na b\nMETRIC\n1/2\nINTERP\nP b = 1\n";
        let Err(FormatError::Invalid(report)) = parse_structure(lowered) else { panic!("expected violation") };
        assert!(report.has(crate::structure::Axiom::RelationLipschitz));
        assert!(parse_structure_unchecked(lowered).is_ok());
    }
}
