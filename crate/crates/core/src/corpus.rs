//! Built-in structures with their documented expectations.

use std::f64::consts::PI;

use thiserror::Error;

use crate::logic::Signature;
use crate::scalar::{int, rat, Rational, Scalar, Tolerance};
use crate::structure::FiniteStructure;
use crate::ultramean::{build_ultramean, Charge};

pub const CORPUS_VERSION: &str = "1";

pub const NAMES: [&str; 6] = ["M2", "U2", "DC3", "DC3-open", "C8", "singleton"];

/// A structure in either arithmetic mode.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyStructure {
    Exact(FiniteStructure<Rational>),
    Float(FiniteStructure<f64>),
}

impl AnyStructure {
    pub fn size(&self) -> usize {
        match self {
            AnyStructure::Exact(s) => s.size(),
            AnyStructure::Float(s) => s.size(),
        }
    }

    pub fn signature(&self) -> &Signature {
        match self {
            AnyStructure::Exact(s) => s.signature(),
            AnyStructure::Float(s) => s.signature(),
        }
    }

    pub fn labels(&self) -> &[String] {
        match self {
            AnyStructure::Exact(s) => s.labels(),
            AnyStructure::Float(s) => s.labels(),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, AnyStructure::Exact(_))
    }

    /// Float view; exact structures are converted.
    pub fn as_float(&self, tol: Tolerance) -> FiniteStructure<f64> {
        match self {
            AnyStructure::Exact(s) => s.to_float(tol),
            AnyStructure::Float(s) => s.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown corpus entry `{0}` (known: M2, U2, DC3, DC3-open, C8, singleton)")]
pub struct UnknownEntry(pub String);

#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub name: &'static str,
    pub version: &'static str,
    pub structure: AnyStructure,
    pub description: &'static str,
    /// Human-readable expectations re-derived by [`self_check`].
    pub expectations: &'static [&'static str],
}

fn labels(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

fn discrete_metric(n: usize) -> Vec<Vec<Rational>> {
    (0..n).map(|i| (0..n).map(|j| int(if i == j { 0 } else { 1 })).collect()).collect()
}

pub fn m2() -> FiniteStructure<Rational> {
    let sig = Signature::new().with_relation("P", 1, int(1)).unwrap().with_constant("c0").unwrap();
    FiniteStructure::from_parts(sig, labels("a", 2), discrete_metric(2), vec![0], vec![], vec![vec![int(0), int(1)]], Tolerance::EXACT)
        .expect("M2 shape")
}

pub fn u2() -> FiniteStructure<Rational> {
    let m = m2();
    build_ultramean(&[m.clone(), m], &Charge::uniform(2)).expect("M2 is valid").structure
}

pub fn dc3() -> FiniteStructure<Rational> {
    let sig = Signature::new().with_constant("k0").unwrap().with_constant("k1").unwrap().with_constant("k2").unwrap();
    FiniteStructure::from_parts(sig, labels("b", 4), discrete_metric(4), vec![0, 1, 2], vec![], vec![], Tolerance::EXACT)
        .expect("DC3 shape")
}

pub fn dc3_open() -> FiniteStructure<Rational> {
    dc3().induced(&[0, 1, 2]).expect("constants stay inside")
}

pub fn c8(tol: Tolerance) -> FiniteStructure<f64> {
    let n = 8usize;
    let metric = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let diff = i.abs_diff(j);
                    let k = diff.min(n - diff);
                    (PI * k as f64 / n as f64).sin()
                })
                .collect()
        })
        .collect();
    FiniteStructure::from_parts(Signature::new(), labels("p", n), metric, vec![], vec![], vec![], tol).expect("C8 shape")
}

pub fn singleton() -> FiniteStructure<Rational> {
    FiniteStructure::from_parts(Signature::new(), vec!["s0".into()], vec![vec![int(0)]], vec![], vec![], vec![], Tolerance::EXACT)
        .expect("singleton shape")
}

pub fn load_corpus(name: &str) -> Result<CorpusEntry, UnknownEntry> {
    let entry = match name.to_ascii_lowercase().as_str() {
        "m2" => CorpusEntry {
            name: "M2",
            version: CORPUS_VERSION,
            structure: AnyStructure::Exact(m2()),
            description: "two points at distance 1, unary P with values 0 and 1, constant c0 at a0",
            expectations: &["valid", "sup x . P(x) = 1", "2 * P(x) + d(x, c0) at a1 = 3"],
        },
        "u2" => CorpusEntry {
            name: "U2",
            version: CORPUS_VERSION,
            structure: AnyStructure::Exact(u2()),
            description: "ultramean of two copies of M2 under the uniform charge",
            expectations: &["valid", "4 points", "P values 0, 1/2, 1/2, 1", "d([a0a0],[a0a1]) = 1/2"],
        },
        "dc3" => CorpusEntry {
            name: "DC3",
            version: CORPUS_VERSION,
            structure: AnyStructure::Exact(dc3()),
            description: "four points pairwise at distance 1, constants k0 k1 k2 on b0 b1 b2",
            expectations: &["valid", "b3 realizes d(x,k0) = d(x,k1) = d(x,k2) = 1"],
        },
        "dc3-open" => CorpusEntry {
            name: "DC3-open",
            version: CORPUS_VERSION,
            structure: AnyStructure::Exact(dc3_open()),
            description: "DC3 without the witness b3",
            expectations: &["valid", "3 points", "no point is at distance 1 from all constants"],
        },
        "c8" => CorpusEntry {
            name: "C8",
            version: CORPUS_VERSION,
            structure: AnyStructure::Float(c8(Tolerance::DEFAULT_FLOAT)),
            description: "eight equally spaced points on a circle, chord metric scaled to diameter 1",
            expectations: &["valid", "d(p0,p4) = 1", "d(p0,p1) = sin(pi/8)"],
        },
        "singleton" => CorpusEntry {
            name: "singleton",
            version: CORPUS_VERSION,
            structure: AnyStructure::Exact(singleton()),
            description: "one point, empty signature",
            expectations: &["valid", "1 point"],
        },
        _ => return Err(UnknownEntry(name.to_string())),
    };
    Ok(entry)
}

/// Re-derives the documented expectations; returns the failed ones.
pub fn self_check(entry: &CorpusEntry) -> Vec<String> {
    use crate::logic::parse_formula;
    use crate::structure::Assignment;

    let mut failures = Vec::new();
    let mut expect = |ok: bool, what: &str| {
        if !ok {
            failures.push(what.to_string());
        }
    };
    let valid = match &entry.structure {
        AnyStructure::Exact(s) => s.validate().is_valid(),
        AnyStructure::Float(s) => s.validate().is_valid(),
    };
    expect(valid, "valid");
    match (entry.name, &entry.structure) {
        ("M2", AnyStructure::Exact(s)) => {
            let sup = parse_formula("sup x . P(x)", s.signature()).unwrap();
            expect(s.eval(&sup, &Assignment::new()) == Ok(int(1)), "sup x . P(x) = 1");
            let phi = parse_formula("2 * P(x) + d(x, c0)", s.signature()).unwrap();
            expect(s.eval(&phi, &Assignment::from_pairs([("x", 1)])) == Ok(int(3)), "2 * P(x) + d(x, c0) at a1 = 3");
        }
        ("U2", AnyStructure::Exact(s)) => {
            expect(s.size() == 4, "4 points");
            let mut p = s.relation_table("P").unwrap().to_vec();
            p.sort();
            expect(p == vec![int(0), rat(1, 2), rat(1, 2), int(1)], "P values 0, 1/2, 1/2, 1");
            let a = s.point("[a0a0]").unwrap();
            let b = s.point("[a0a1]").unwrap();
            expect(*s.dist(a, b) == rat(1, 2), "d([a0a0],[a0a1]) = 1/2");
        }
        ("DC3", AnyStructure::Exact(s)) => {
            let b3 = s.point("b3").unwrap();
            expect((0..3).all(|i| s.dist(b3, s.constant(&format!("k{i}")).unwrap()) == &int(1)), "b3 realizes d(x,k0) = d(x,k1) = d(x,k2) = 1");
        }
        ("DC3-open", AnyStructure::Exact(s)) => {
            expect(s.size() == 3, "3 points");
            let far = (0..s.size()).any(|p| (0..3).all(|i| s.dist(p, s.constant(&format!("k{i}")).unwrap()) == &int(1)));
            expect(!far, "no point is at distance 1 from all constants");
        }
        ("C8", AnyStructure::Float(s)) => {
            let tol = s.tolerance();
            expect(s.dist(0, 4).approx_eq(&1.0, tol), "d(p0,p4) = 1");
            expect(s.dist(0, 1).approx_eq(&(PI / 8.0).sin(), tol), "d(p0,p1) = sin(pi/8)");
        }
        ("singleton", AnyStructure::Exact(s)) => expect(s.size() == 1, "1 point"),
        _ => expect(false, "mode"),
    }
    failures
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_entry_passes_its_self_check() {
        for name in NAMES {
            let entry = load_corpus(name).unwrap();
            assert_eq!(entry.version, CORPUS_VERSION);
            assert!(self_check(&entry).is_empty(), "{name}: {:?}", self_check(&entry));
        }
        assert!(load_corpus("nope").is_err());
    }

    #[test]
    fn c8_chords() {
        let c = c8(Tolerance::DEFAULT_FLOAT);
        assert!((c.dist(0, 1) - 0.38268343236).abs() < 1e-9);
        assert_eq!(*c.dist(2, 6), 1.0);
    }
}
