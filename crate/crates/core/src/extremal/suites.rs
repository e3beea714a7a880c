//! Property suites over corpus and random structures.

use std::collections::BTreeSet;

use rand::SeedableRng;
use rayon::prelude::*;
use thiserror::Error;

use super::random::{random_structure, GeneratorParams, Rng8};
use crate::convex::{is_face_region, FaceStatus};
use crate::corpus::{self, AnyStructure};
use crate::format::{parse_structure, serialize_structure, FormatError};
use crate::logic::parse_conditions;
use crate::lp::LinearConstraint;
use crate::scalar::{int, Rational, Scalar};
use crate::structure::FiniteStructure;
use crate::typespace::{
    context_names, is_extreme_over, over_space, realized_types, restrict_type, Fragment, FragmentParams, PartialType, TypeSpace, TypeSpaceError,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    RestrictionExtreme,
    PairExtreme,
    OverSymmetry,
    FaceParameter,
    FaceCombinators,
}

impl Suite {
    pub const ALL: [Suite; 5] =
        [Suite::RestrictionExtreme, Suite::PairExtreme, Suite::OverSymmetry, Suite::FaceParameter, Suite::FaceCombinators];

    pub fn name(self) -> &'static str {
        match self {
            Suite::RestrictionExtreme => "restriction-extreme",
            Suite::PairExtreme => "pair-extreme",
            Suite::OverSymmetry => "over-symmetry",
            Suite::FaceParameter => "face-parameter",
            Suite::FaceCombinators => "face-combinators",
        }
    }

    pub fn parse(text: &str) -> Option<Self> {
        Suite::ALL.into_iter().find(|s| s.name() == text)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SuiteError {
    #[error("case {case}: {source}")]
    Types { case: String, source: TypeSpaceError },
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error("counterexample structure is not exact")]
    NotExact,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteParams {
    /// Random structures, in addition to the corpus.
    pub cases: usize,
    pub seed: u64,
    pub include_corpus: bool,
    pub fragment: FragmentParams,
    pub generator: GeneratorParams,
}

impl Default for SuiteParams {
    fn default() -> Self {
        SuiteParams {
            cases: 20,
            seed: 0,
            include_corpus: true,
            fragment: FragmentParams::default(),
            generator: GeneratorParams::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub tuples: Vec<Vec<usize>>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Counterexample {
    pub case: String,
    /// The structure in file format.
    pub structure: String,
    pub dims: Vec<usize>,
    pub saturated: bool,
    pub fragment: FragmentParams,
    pub witness: Witness,
}

impl Counterexample {
    /// Rebuilds the structure and fragment from the stored data and checks
    /// that the same witness comes out.
    pub fn recheck(&self, suite: Suite) -> Result<bool, SuiteError> {
        let AnyStructure::Exact(s) = parse_structure(&self.structure)? else {
            return Err(SuiteError::NotExact);
        };
        let frag = Fragment::generate(&s, 1, self.fragment.clone())
            .map_err(|e| SuiteError::Types { case: self.case.clone(), source: e.into() })?;
        let found = check_case(suite, &s, &frag).map_err(|e| SuiteError::Types { case: self.case.clone(), source: e })?;
        Ok(found.as_ref() == Some(&self.witness))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub suite: Suite,
    pub cases_run: usize,
    pub passed: usize,
    pub skipped_unsaturated: usize,
    pub counterexamples: Vec<Counterexample>,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct Case {
    pub name: String,
    pub structure: FiniteStructure<Rational>,
}

/// Corpus cases followed by random ones; case `i` of the random part uses
/// seed `seed + i`.
pub fn suite_cases(params: &SuiteParams) -> Vec<Case> {
    let mut out = Vec::new();
    if params.include_corpus {
        for (name, s) in [("M2", corpus::m2()), ("U2", corpus::u2()), ("DC3", corpus::dc3()), ("singleton", corpus::singleton())] {
            out.push(Case { name: name.to_string(), structure: s });
        }
    }
    for i in 0..params.cases {
        let seed = params.seed.wrapping_add(i as u64);
        let mut rng = Rng8::seed_from_u64(seed);
        out.push(Case { name: format!("random-{seed}"), structure: random_structure(&mut rng, &params.generator) });
    }
    out
}

enum Outcome {
    Pass,
    Skipped,
    Fail(Counterexample),
}

pub fn run_suite(suite: Suite, params: &SuiteParams) -> Result<SuiteReport, SuiteError> {
    run_cases(suite, &suite_cases(params), &params.fragment)
}

pub fn run_cases(suite: Suite, cases: &[Case], fragment: &FragmentParams) -> Result<SuiteReport, SuiteError> {
    let outcomes: Vec<Result<Outcome, SuiteError>> = cases
        .par_iter()
        .map(|case| {
            let wrap = |e: TypeSpaceError| SuiteError::Types { case: case.name.clone(), source: e };
            let frag = Fragment::generate(&case.structure, 1, fragment.clone()).map_err(|e| wrap(e.into()))?;
            if !frag.saturated() {
                return Ok(Outcome::Skipped);
            }
            match check_case(suite, &case.structure, &frag).map_err(|e| wrap(e))? {
                None => Ok(Outcome::Pass),
                Some(witness) => Ok(Outcome::Fail(Counterexample {
                    case: case.name.clone(),
                    structure: serialize_structure(&AnyStructure::Exact(case.structure.clone())),
                    dims: frag.dims(),
                    saturated: frag.saturated(),
                    fragment: fragment.clone(),
                    witness,
                })),
            }
        })
        .collect();
    let mut report =
        SuiteReport { suite, cases_run: cases.len(), passed: 0, skipped_unsaturated: 0, counterexamples: Vec::new() };
    for o in outcomes {
        match o? {
            Outcome::Pass => report.passed += 1,
            Outcome::Skipped => report.skipped_unsaturated += 1,
            Outcome::Fail(c) => report.counterexamples.push(c),
        }
    }
    Ok(report)
}

type CaseResult = Result<Option<Witness>, TypeSpaceError>;

fn check_case(suite: Suite, s: &FiniteStructure<Rational>, frag: &Fragment<Rational>) -> CaseResult {
    match suite {
        Suite::RestrictionExtreme => restriction_extreme(s, frag),
        Suite::PairExtreme => pair_extreme(s, frag),
        Suite::OverSymmetry => over_symmetry(s, frag),
        Suite::FaceParameter => face_parameter(s, frag),
        Suite::FaceCombinators => face_combinators(s, frag),
    }
}

fn extreme_set<N: Scalar>(space: &TypeSpace<N>) -> Result<BTreeSet<usize>, TypeSpaceError> {
    Ok(space.extreme_types()?.into_iter().collect())
}

/// Extreme 2-vectors restrict to extreme 1-vectors.
fn restriction_extreme(s: &FiniteStructure<Rational>, frag: &Fragment<Rational>) -> CaseResult {
    let one = realized_types(s, frag, 1)?;
    let two = realized_types(s, frag, 2)?;
    let ext1 = extreme_set(&one)?;
    for e in extreme_set(&two)? {
        let v = &two.vectors[e];
        let r = restrict_type(frag, &v.coordinates, 2)?;
        let ok = one.position(&r).is_some_and(|i| ext1.contains(&i));
        if !ok {
            return Ok(Some(Witness {
                tuples: vec![v.realizers[0].clone()],
                detail: "extreme 2-type restricts to a non-extreme 1-type".into(),
            }));
        }
    }
    Ok(None)
}

/// tp(ab) extreme iff tp(b) extreme and a extreme over b.
fn pair_extreme(s: &FiniteStructure<Rational>, frag: &Fragment<Rational>) -> CaseResult {
    let one = realized_types(s, frag, 1)?;
    let two = realized_types(s, frag, 2)?;
    let ext1 = extreme_set(&one)?;
    let ext2 = extreme_set(&two)?;
    for a in 0..s.size() {
        for b in 0..s.size() {
            let lhs = ext2.contains(&two.class_of(&[a, b]).expect("realized"));
            let b_ext = ext1.contains(&one.class_of(&[b]).expect("realized"));
            let over = is_extreme_over(s, frag, &[a], &[b])?;
            if lhs != (b_ext && over) {
                return Ok(Some(Witness {
                    tuples: vec![vec![a], vec![b]],
                    detail: format!("tp(ab) extreme: {lhs}, tp(b) extreme: {b_ext}, a extreme over b: {over}"),
                }));
            }
        }
    }
    Ok(None)
}

/// a extreme over b iff b extreme over a.
fn over_symmetry(s: &FiniteStructure<Rational>, frag: &Fragment<Rational>) -> CaseResult {
    for a in 0..s.size() {
        for b in (a + 1)..s.size() {
            let ab = is_extreme_over(s, frag, &[a], &[b])?;
            let ba = is_extreme_over(s, frag, &[b], &[a])?;
            if ab != ba {
                return Ok(Some(Witness {
                    tuples: vec![vec![a], vec![b]],
                    detail: format!("a extreme over b: {ab}, b extreme over a: {ba}"),
                }));
            }
        }
    }
    Ok(None)
}

fn unit(dim: usize, i: usize) -> Vec<Rational> {
    let mut v = vec![int(0); dim];
    v[i] = int(1);
    v
}

/// Candidate partial types in context `m`: the empty one, exposed faces of
/// each coordinate, singletons of extreme vectors and a few condition sets
/// read off the signature. Only verified faces are returned, one per
/// vertex set.
fn face_candidates(
    s: &FiniteStructure<Rational>,
    frag: &Fragment<Rational>,
    space: &TypeSpace<Rational>,
) -> Result<Vec<PartialType<Rational>>, TypeSpaceError> {
    let m = space.context;
    let dim = frag.basis(m)?.len();
    let mut out = vec![PartialType::empty(m)];
    for i in 1..dim {
        let values: Vec<&Rational> = space.vectors.iter().map(|v| &v.coordinates[i]).collect();
        let hi = (*values.iter().max().expect("nonempty")).clone();
        let lo = (*values.iter().min().expect("nonempty")).clone();
        let mut top = PartialType::empty(m);
        top.push(format!("[{i}] >= {hi}"), LinearConstraint::ge(unit(dim, i), hi));
        out.push(top);
        let mut bottom = PartialType::empty(m);
        bottom.push(format!("[{i}] <= {lo}"), LinearConstraint::le(unit(dim, i), lo));
        out.push(bottom);
    }
    for e in space.extreme_types()? {
        let mut p = PartialType::empty(m);
        for (i, c) in space.vectors[e].coordinates.iter().enumerate().skip(1) {
            p.push(format!("[{i}] = {c}"), LinearConstraint::eq(unit(dim, i), c.clone()));
        }
        out.push(p);
    }
    let names = context_names(m);
    let mut texts = Vec::new();
    if m >= 2 {
        texts.push(format!("d({}, {}) <= 0", names[0], names[1]));
    }
    let constants = s.signature().constants();
    if !constants.is_empty() {
        texts.push(constants.iter().map(|c| format!("d(x, {c}) = 1")).collect::<Vec<_>>().join("; "));
        texts.push(format!("d(x, {}) <= 1", constants[0]));
    }
    for text in texts {
        let conds = parse_conditions(&text, s.signature(), &names).expect("generated condition text");
        if let Ok(p) = PartialType::compile(s, frag, m, &conds) {
            out.push(p);
        }
    }
    let mut faces = Vec::new();
    let mut seen = BTreeSet::new();
    for p in out {
        let verdict = space.face(&p)?;
        if verdict.is_face() && seen.insert(verdict.vertices) {
            faces.push(p);
        }
    }
    Ok(faces)
}

/// A face of the (x, y)-type space instantiated at each parameter b is a
/// face of the space of types over b, or unsatisfiable there.
fn face_parameter(s: &FiniteStructure<Rational>, frag: &Fragment<Rational>) -> CaseResult {
    let two = realized_types(s, frag, 2)?;
    let faces = face_candidates(s, frag, &two)?;
    let tol = s.tolerance();
    for b in 0..s.size() {
        let over = over_space(s, frag, 1, &[b])?;
        for gamma in &faces {
            let verdict = is_face_region(&over.points(), &gamma.constraints, tol)?;
            if verdict.status == FaceStatus::NotFace {
                return Ok(Some(Witness {
                    tuples: vec![vec![b]],
                    detail: format!("{{{}}} is not a face over b", gamma.descriptions.join("; ")),
                }));
            }
        }
    }
    Ok(None)
}

/// Unions of faces are faces (or empty), and cutting a face at the maximum
/// of a coordinate leaves a face.
fn face_combinators(s: &FiniteStructure<Rational>, frag: &Fragment<Rational>) -> CaseResult {
    let one = realized_types(s, frag, 1)?;
    let faces = face_candidates(s, frag, &one)?;
    let dim = frag.basis(1)?.len();
    for (i, g) in faces.iter().enumerate() {
        for h in &faces[i + 1..] {
            let union = g.union(h);
            if one.face(&union)?.status == FaceStatus::NotFace {
                return Ok(Some(Witness {
                    tuples: vec![],
                    detail: format!("union {{{}}} is not a face", union.descriptions.join("; ")),
                }));
            }
        }
        let verdict = one.face(g)?;
        for k in 1..dim {
            let top = verdict
                .vertices
                .iter()
                .map(|&v| one.vectors[v].coordinates[k].clone())
                .max()
                .expect("faces are nonempty");
            let mut cut = g.clone();
            cut.push(format!("0 <= [{k}] - {top}"), LinearConstraint::ge(unit(dim, k), top));
            if one.face(&cut)?.status == FaceStatus::NotFace {
                return Ok(Some(Witness {
                    tuples: vec![],
                    detail: format!("{{{}}} is not a face", cut.descriptions.join("; ")),
                }));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn corpus_only() -> SuiteParams {
        SuiteParams { cases: 0, ..SuiteParams::default() }
    }

    #[test]
    fn suites_on_corpus() {
        for suite in Suite::ALL {
            let r = run_suite(suite, &corpus_only()).unwrap();
            assert_eq!(r.cases_run, 4);
            assert_eq!(r.passed + r.skipped_unsaturated + r.counterexamples.len(), 4);
            if suite != Suite::OverSymmetry {
                assert!(r.ok(), "{}: {:?}", suite.name(), r.counterexamples);
            }
        }
    }

    #[test]
    fn over_symmetry_fails_on_u2() {
        let r = run_suite(Suite::OverSymmetry, &corpus_only()).unwrap();
        assert_eq!(r.counterexamples.len(), 1);
        let c = &r.counterexamples[0];
        assert_eq!(c.case, "U2");
        // [a0a0] is extreme over [a0a1], but not conversely
        assert_eq!(c.witness.tuples, vec![vec![0], vec![1]]);
        assert!(c.recheck(Suite::OverSymmetry).unwrap());
    }

    #[test]
    fn random_cases_are_seeded() {
        let p = SuiteParams { cases: 5, seed: 11, include_corpus: false, ..SuiteParams::default() };
        let a = suite_cases(&p);
        let b = suite_cases(&p);
        assert_eq!(a.len(), 5);
        assert!(a.iter().zip(&b).all(|(x, y)| x.structure == y.structure && x.name == y.name));
        assert_eq!(Suite::parse("pair-extreme"), Some(Suite::PairExtreme));
    }

    #[test]
    fn listed_fragments_are_skipped() {
        let listed = FragmentParams::listed(vec![]);
        let r = run_cases(Suite::RestrictionExtreme, &suite_cases(&corpus_only()), &listed).unwrap();
        assert_eq!(r.skipped_unsaturated, 4);
    }
}
