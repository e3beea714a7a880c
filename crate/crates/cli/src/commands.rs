use linlogic::convex::{in_hull, supporting_functional, ConvexError, FaceVerdict};
use linlogic::corpus::{load_corpus, self_check, AnyStructure, UnknownEntry, NAMES};
use linlogic::extremal::{
    default_templates, is_elementary_submodel, is_extremal, Mismatch, maximizer_closure, minimal_submodel, run_suite, subset_types,
    ClosureError, ElementaryError, MinimalError, Strategy, Suite, SuiteError, SuiteParams, Template,
};
use linlogic::format::{parse_structure, parse_structure_unchecked, serialize_structure, FormatError};
use linlogic::logic::{parse_conditions, parse_formula, Formula, ParseError, Signature};
use linlogic::scalar::parse_rational;
use linlogic::structure::{all_tuples, Assignment, EvalError, FiniteStructure};
use linlogic::typespace::{
    context_names, realized_types, sigma_face, type_metric, Fragment, FragmentError, FragmentMode, FragmentParams, PartialType,
    TypeSpace, TypeSpaceError,
};
use linlogic::ultramean::{build_ultramean, check_los_in, Charge, UltrameanError};
use linlogic::{Rational, Scalar, Tolerance};
use serde_json::{json, Value};
use thiserror::Error;

use crate::report::{fragment_summary, num, nums, Report};
use crate::{Command, FragmentKind, Mode, Opts};

/// Rows produced by exhaustive tabulation before giving up.
const TABLE_LIMIT: usize = 10_000;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Unknown(#[from] UnknownEntry),
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Fragment(#[from] FragmentError),
    #[error(transparent)]
    Types(#[from] TypeSpaceError),
    #[error(transparent)]
    Convex(#[from] ConvexError),
    #[error(transparent)]
    Ultramean(#[from] UltrameanError),
    #[error(transparent)]
    Closure(#[from] ClosureError),
    #[error(transparent)]
    Elementary(#[from] ElementaryError),
    #[error(transparent)]
    Minimal(#[from] MinimalError),
    #[error(transparent)]
    Suite(#[from] SuiteError),
}

fn input(message: impl Into<String>) -> CliError {
    CliError::Input(message.into())
}

fn load_named(name: &str) -> Result<AnyStructure, CliError> {
    if NAMES.contains(&name) {
        return Ok(load_corpus(name)?.structure);
    }
    let text = std::fs::read_to_string(name).map_err(|e| input(format!("cannot read `{name}`: {e}")))?;
    Ok(parse_structure(&text)?)
}

fn source_inputs(opts: &Opts, report: &mut Report) {
    if let Some(c) = &opts.corpus {
        report.input("corpus", c.as_str());
    }
    if let Some(f) = &opts.file {
        report.input("file", f.display().to_string());
    }
}

fn load_structure(opts: &Opts, checked: bool) -> Result<AnyStructure, CliError> {
    let s = match (&opts.corpus, &opts.file) {
        (Some(name), None) => load_corpus(name)?.structure,
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path).map_err(|e| input(format!("cannot read {}: {e}", path.display())))?;
            if checked {
                parse_structure(&text)?
            } else {
                parse_structure_unchecked(&text)?
            }
        }
        (Some(_), Some(_)) => return Err(input("give either --corpus or --file, not both")),
        (None, None) => return Err(input("a structure is required: use --corpus NAME or --file PATH")),
    };
    apply_mode(s, opts)
}

fn apply_mode(s: AnyStructure, opts: &Opts) -> Result<AnyStructure, CliError> {
    match (opts.mode, s) {
        (Some(Mode::Float), AnyStructure::Exact(e)) => Ok(AnyStructure::Float(e.to_float(Tolerance(opts.eps)))),
        (Some(Mode::Exact), AnyStructure::Float(_)) => Err(input("structure is in float mode; exact arithmetic is unavailable")),
        (_, s) => Ok(s),
    }
}

fn fragment_params(opts: &Opts, sig: &Signature) -> Result<FragmentParams, CliError> {
    let mode = match opts.fragment {
        FragmentKind::Listed => FragmentMode::Listed,
        FragmentKind::Enumerated => FragmentMode::Enumerated,
        FragmentKind::Saturated => FragmentMode::Saturated,
    };
    let listed = match (&opts.listed, mode) {
        (Some(text), FragmentMode::Listed) => text
            .split(';')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(|t| parse_formula(t, sig))
            .collect::<Result<Vec<_>, _>>()?,
        (Some(_), _) => return Err(input("--listed needs --fragment listed")),
        (None, FragmentMode::Listed) => return Err(input("--fragment listed needs --listed")),
        (None, _) => Vec::new(),
    };
    Ok(FragmentParams {
        mode,
        term_depth: Some(opts.depth),
        rounds: opts.rounds,
        samples: opts.samples,
        seed: opts.seed,
        extra_contexts: opts.extra,
        listed,
    })
}

fn fragment_inputs(opts: &Opts, report: &mut Report) {
    report.input("n", opts.n);
    report.input("fragment_mode", format!("{:?}", opts.fragment).to_lowercase());
    report.input("seed", opts.seed);
}

/// Points given as labels (or indices), separated by commas or spaces.
fn parse_points<N: Scalar>(s: &FiniteStructure<N>, text: &str) -> Result<Vec<usize>, CliError> {
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| {
            s.point(t)
                .or_else(|| t.parse::<usize>().ok().filter(|&i| i < s.size()))
                .ok_or_else(|| input(format!("unknown point `{t}`")))
        })
        .collect()
}

fn labels<N: Scalar>(s: &FiniteStructure<N>, points: &[usize]) -> Value {
    Value::Array(points.iter().map(|&p| json!(s.label(p))).collect())
}

fn parse_weights(text: &str) -> Result<Vec<Rational>, CliError> {
    text.split(',')
        .map(str::trim)
        .map(|w| parse_rational(w).ok_or_else(|| input(format!("bad weight `{w}`"))))
        .collect()
}

fn vectors_json<N: Scalar>(s: &FiniteStructure<N>, ts: &TypeSpace<N>, extreme: &[usize]) -> Value {
    Value::Array(
        ts.vectors
            .iter()
            .enumerate()
            .map(|(i, v)| {
                json!({
                    "index": i,
                    "coordinates": nums(v.display()),
                    "extreme": extreme.contains(&i),
                    "realizers": v.realizers.iter().map(|t| labels(s, t)).collect::<Vec<_>>(),
                })
            })
            .collect(),
    )
}

fn face_certificate<N: Scalar>(verdict: &FaceVerdict<N>) -> Option<Value> {
    if let Some(f) = &verdict.functional {
        return Some(json!({
            "kind": "supporting-functional",
            "coefficients": nums(&f.coefficients),
            "level": num(&f.level),
        }));
    }
    verdict.certificate.as_ref().map(|c| {
        json!({
            "kind": "midpoint",
            "point": nums(&c.point),
            "outside_vertex": c.outside_vertex,
            "lambda": num(&c.lambda),
            "other": nums(&c.other),
            "other_coefficients": nums(&c.other_coefficients),
        })
    })
}

pub fn execute(command: &Command, opts: &Opts) -> Result<Report, CliError> {
    match command {
        Command::Ultramean { factors, weights } => ultramean_command(opts, factors, weights.as_deref(), None),
        Command::LosCheck { factors, weights, formula, at } => {
            ultramean_command(opts, factors, weights.as_deref(), Some((formula, at.as_deref())))
        }
        Command::Suite { name, cases, no_corpus } => suite_command(opts, name, *cases, !no_corpus),
        Command::Corpus { name } => corpus_command(name.as_deref()),
        Command::Validate => validate_command(opts),
        _ => match load_structure(opts, true)? {
            AnyStructure::Exact(s) => structure_command(command, opts, &s),
            AnyStructure::Float(s) => structure_command(command, opts, &s),
        },
    }
}

fn structure_command<N: Scalar>(command: &Command, opts: &Opts, s: &FiniteStructure<N>) -> Result<Report, CliError> {
    let name = command_name(command);
    let mut report = Report::new(name);
    source_inputs(opts, &mut report);
    report.input("mode", if N::EXACT { "exact" } else { "float" });
    let fragment = |arity: usize, report: &mut Report| -> Result<Fragment<N>, CliError> {
        fragment_inputs(opts, report);
        let f = Fragment::generate(s, arity.max(1), fragment_params(opts, s.signature())?)?;
        report.fragment = Some(fragment_summary(&f));
        Ok(f)
    };
    match command {
        Command::Eval { formula, at } => {
            report.input("formula", formula.as_str());
            let phi = parse_formula(formula, s.signature())?;
            phi.check(s.signature()).map_err(|e| input(e.to_string()))?;
            eval_command(s, &phi, at.as_deref(), &mut report)?;
        }
        Command::Typespace | Command::Extreme => {
            let frag = fragment(opts.n, &mut report)?;
            let ts = realized_types(s, &frag, opts.n)?;
            let extreme = ts.extreme_types()?;
            let names = context_names(opts.n);
            let basis: Vec<Value> = (1..frag.basis(opts.n)?.len())
                .map(|i| json!(frag.basis_formula(opts.n, i).map(|f| f.to_string()).unwrap_or_else(|_| "(large)".into())))
                .collect();
            report.result("variables", names);
            report.result("coordinates", basis);
            report.result("types", ts.len());
            report.result("extreme", extreme.clone());
            report.result("vectors", vectors_json(s, &ts, &extreme));
            if matches!(command, Command::Extreme) {
                let points = ts.points();
                let tol = ts.tolerance();
                let ext_points: Vec<Vec<N>> = extreme.iter().map(|&i| points[i].clone()).collect();
                for i in 0..ts.len() {
                    if extreme.contains(&i) {
                        let f = supporting_functional(&points, &[i], tol)?.expect("extreme points are exposed");
                        let mask: Vec<bool> = (0..points.len()).map(|j| j == i).collect();
                        report.certificates.push(json!({
                            "type": i,
                            "kind": "supporting-functional",
                            "coefficients": nums(&f.coefficients),
                            "level": num(&f.level),
                            "verified": f.verify(&points, &mask, tol),
                        }));
                    } else {
                        let weights = in_hull(&points[i], &ext_points, tol)?.expect("hull of the extreme points");
                        report.certificates.push(json!({
                            "type": i,
                            "kind": "convex-combination",
                            "of": extreme.clone(),
                            "weights": nums(&weights),
                        }));
                    }
                }
            }
        }
        Command::Face { gamma } => {
            report.input("gamma", gamma.as_str());
            let frag = fragment(opts.n, &mut report)?;
            let conditions = parse_conditions(gamma, s.signature(), &context_names(opts.n))?;
            let compiled = PartialType::compile(s, &frag, opts.n, &conditions)?;
            let ts = realized_types(s, &frag, opts.n)?;
            let verdict = ts.face(&compiled)?;
            let verified = verdict.verify(&ts.points(), &compiled.constraints, ts.tolerance());
            let names = context_names(opts.n);
            let sides: Vec<Formula> = conditions.iter().map(|c| c.left.clone()).collect();
            let vertices: Vec<Value> = verdict
                .vertices
                .iter()
                .map(|&i| {
                    let v = &ts.vectors[i];
                    let asg = Assignment::zip(&names, &v.realizers[0]);
                    let values: Vec<N> = sides.iter().map(|phi| s.eval(phi, &asg)).collect::<Result<_, _>>()?;
                    Ok(json!({
                        "index": i,
                        "condition_values": nums(&values),
                        "coordinates": nums(v.display()),
                        "realizers": v.realizers.iter().map(|t| labels(s, t)).collect::<Vec<_>>(),
                    }))
                })
                .collect::<Result<_, CliError>>()?;
            report.result("verdict", verdict.status.name());
            report.result("conditions", compiled.descriptions.clone());
            report.result("vertices", vertices);
            report.result("verified", verified);
            report.certificates.extend(face_certificate(&verdict));
            report.failed = opts.assert_pass && !verdict.is_face();
        }
        Command::TypeMetric { a, b } | Command::SigmaFace { a, b } => {
            let ta = parse_points(s, a)?;
            let tb = parse_points(s, b)?;
            if ta.len() != tb.len() || ta.is_empty() {
                return Err(input("--a and --b must be nonempty tuples of the same length"));
            }
            report.input("a", labels(s, &ta));
            report.input("b", labels(s, &tb));
            let n = ta.len();
            let sigma = matches!(command, Command::SigmaFace { .. });
            let frag = fragment(if sigma { 2 * n } else { n }, &mut report)?;
            let ts = realized_types(s, &frag, n)?;
            let p = ts.class_of(&ta).expect("realized");
            let q = ts.class_of(&tb).expect("realized");
            report.result("p", p);
            report.result("q", q);
            if sigma {
                let sf = sigma_face(s, &frag, &ts, p, q)?;
                let verified = sf.verdict.verify(&sf.space.points(), &sf.gamma.constraints, sf.space.tolerance());
                report.result("radius", num(&sf.radius));
                report.result("verdict", sf.verdict.status.name());
                report.result("marginals_match", sf.marginals_match);
                report.result(
                    "vertices",
                    sf.verdict
                        .vertices
                        .iter()
                        .map(|&i| json!({"index": i, "realizers": sf.space.vectors[i].realizers.iter().map(|t| labels(s, t)).collect::<Vec<_>>()}))
                        .collect::<Vec<_>>(),
                );
                report.result("verified", verified);
                report.certificates.extend(face_certificate(&sf.verdict));
                report.failed = opts.assert_pass && !(sf.verdict.is_face() && sf.marginals_match);
            } else {
                report.result("distance", num(&type_metric(s, &ts, p, q)?));
            }
        }
        Command::Elementary { subset } => {
            let points = parse_points(s, subset)?;
            report.input("subset", labels(s, &points));
            let frag = fragment(opts.n, &mut report)?;
            match is_elementary_submodel(s, &points, &frag) {
                Ok(None) => {
                    report.result("closed", true);
                    report.result("elementary", true);
                }
                Ok(Some(m)) => {
                    report.result("closed", true);
                    report.result("elementary", false);
                    report.counterexamples.push(match m {
                        Mismatch::Value { context, basis_index, derived, tuple, in_sub, in_full, formula } => json!({
                            "kind": "value",
                            "context": context,
                            "derived": derived,
                            "index": basis_index,
                            "tuple": labels(s, &tuple),
                            "in_subset": num(&in_sub),
                            "in_structure": num(&in_full),
                            "formula": formula,
                        }),
                        Mismatch::Extension { context, prefix, witness, coordinates } => json!({
                            "kind": "extension",
                            "context": context,
                            "prefix": labels(s, &prefix),
                            "witness": labels(s, &[witness]),
                            "coordinates": nums(&coordinates),
                        }),
                    });
                    report.failed = opts.assert_pass;
                }
                Err(ElementaryError::NotClosed(e)) => {
                    report.result("closed", false);
                    report.result("elementary", false);
                    report.counterexamples.push(json!({ "reason": e.to_string() }));
                    report.failed = opts.assert_pass;
                }
                Err(e) => return Err(e.into()),
            }
        }
        Command::Closure { seeds, templates, argmin } => {
            let seeds = parse_points(s, seeds)?;
            report.input("seeds", labels(s, &seeds));
            let ts = if templates.is_empty() {
                default_templates(s)
            } else {
                templates.iter().map(|t| Template::parse(t, s)).collect::<Result<_, _>>()?
            };
            let texts: Vec<String> = ts.iter().map(|t| t.formula.to_string()).collect();
            report.input("templates", texts.clone());
            report.input("argmin", *argmin);
            let r = maximizer_closure(s, &seeds, &ts, *argmin)?;
            report.result("points", labels(s, &r.points));
            report.result("complete", r.points.len() == s.size());
            report.result("iterations", r.iterations);
            report.result(
                "steps",
                r.steps
                    .iter()
                    .map(|st| {
                        json!({
                            "template": texts[st.template],
                            "parameters": labels(s, &st.parameters),
                            "added": labels(s, &st.added),
                        })
                    })
                    .collect::<Vec<_>>(),
            );
        }
        Command::Minimal { strategy } => {
            let strat = Strategy::parse(strategy).ok_or_else(|| input(format!("unknown strategy `{strategy}`")))?;
            report.input("strategy", strat.name());
            let frag = fragment(opts.n, &mut report)?;
            let r = minimal_submodel(s, &frag, strat)?;
            let ts = realized_types(s, &frag, opts.n)?;
            let realized = subset_types(s, &frag, &r.points, opts.n)?;
            let extreme = ts.extreme_types()?;
            report.result("points", labels(s, &r.points));
            report.result("proper", r.points.len() < s.size());
            report.result("examined", r.examined);
            report.result("subset_types", realized.clone());
            report.result("extreme_types", extreme.clone());
            report.result("types_are_extreme", realized == extreme);
        }
        Command::Extremal => {
            let frag = fragment(opts.n, &mut report)?;
            let v = is_extremal(s, &frag, opts.n)?;
            report.result("extremal", v.extremal);
            report.result("types_checked", v.checked);
            if let Some((n, t)) = &v.witness {
                report.counterexamples.push(json!({
                    "arity": n,
                    "tuple": labels(s, t),
                    "coordinates": nums(&v.coordinates.clone().unwrap_or_default()[1..]),
                }));
            }
            report.failed = opts.assert_pass && !v.extremal;
        }
        _ => unreachable!("handled in execute"),
    }
    Ok(report)
}

fn command_name(command: &Command) -> &'static str {
    match command {
        Command::Eval { .. } => "eval",
        Command::Validate => "validate",
        Command::Ultramean { .. } => "ultramean",
        Command::LosCheck { .. } => "los-check",
        Command::Typespace => "typespace",
        Command::Extreme => "extreme",
        Command::Face { .. } => "face",
        Command::TypeMetric { .. } => "type-metric",
        Command::SigmaFace { .. } => "sigma-face",
        Command::Elementary { .. } => "elementary",
        Command::Closure { .. } => "closure",
        Command::Minimal { .. } => "minimal",
        Command::Extremal => "extremal",
        Command::Suite { .. } => "suite",
        Command::Corpus { .. } => "corpus",
    }
}

fn eval_command<N: Scalar>(s: &FiniteStructure<N>, phi: &Formula, at: Option<&str>, report: &mut Report) -> Result<(), CliError> {
    let vars = phi.free_variables();
    report.result("free_variables", vars.clone());
    match at {
        Some(text) => {
            let tuple = parse_points(s, text)?;
            if tuple.len() != vars.len() {
                return Err(input(format!("formula has {} free variables, --at gives {} points", vars.len(), tuple.len())));
            }
            report.input("at", labels(s, &tuple));
            report.result("value", num(&s.eval(phi, &Assignment::zip(&vars, &tuple))?));
        }
        None if vars.is_empty() => {
            report.result("value", num(&s.eval(phi, &Assignment::new())?));
        }
        None => {
            let rows = s.size().checked_pow(vars.len() as u32).unwrap_or(usize::MAX);
            if rows > TABLE_LIMIT {
                return Err(input(format!("{rows} assignments; pass --at")));
            }
            let table: Vec<Value> = all_tuples(s.size(), vars.len())
                .map(|t| Ok(json!({ "at": labels(s, &t), "value": num(&s.eval(phi, &Assignment::zip(&vars, &t))?) })))
                .collect::<Result<_, CliError>>()?;
            report.result("table", table);
        }
    }
    Ok(())
}

fn validate_command(opts: &Opts) -> Result<Report, CliError> {
    let mut report = Report::new("validate");
    source_inputs(opts, &mut report);
    let s = load_structure(opts, false)?;
    let (valid, violations) = match &s {
        AnyStructure::Exact(e) => violations_json(e),
        AnyStructure::Float(f) => violations_json(f),
    };
    report.result("points", s.size());
    report.result("valid", valid);
    report.counterexamples = violations;
    report.failed = !valid;
    Ok(report)
}

fn violations_json<N: Scalar>(s: &FiniteStructure<N>) -> (bool, Vec<Value>) {
    let r = s.validate();
    let v = r
        .violations
        .iter()
        .map(|v| {
            json!({
                "axiom": v.axiom.name(),
                "symbol": v.symbol,
                "witness": labels(s, &v.witness),
                "detail": v.detail,
            })
        })
        .collect();
    (r.is_valid(), v)
}

fn ultramean_command(
    opts: &Opts,
    factors: &str,
    weights: Option<&str>,
    los: Option<(&String, Option<&str>)>,
) -> Result<Report, CliError> {
    let mut report = Report::new(if los.is_some() { "los-check" } else { "ultramean" });
    let names: Vec<&str> = factors.split(',').map(str::trim).filter(|t| !t.is_empty()).collect();
    if names.is_empty() {
        return Err(input("--factors is empty"));
    }
    report.input("factors", names.clone());
    let charge = match weights {
        Some(w) => Charge::new(parse_weights(w)?)?,
        None => Charge::uniform(names.len()),
    };
    report.input("weights", charge.weights().iter().map(|w| num(w)).collect::<Vec<_>>());
    let loaded = names.iter().map(|n| load_named(n).and_then(|s| apply_mode(s, opts))).collect::<Result<Vec<_>, _>>()?;
    let float = loaded.iter().any(|s| !s.is_exact());
    report.input("mode", if float { "float" } else { "exact" });
    if float {
        let fs: Vec<FiniteStructure<f64>> = loaded.iter().map(|s| s.as_float(Tolerance(opts.eps))).collect();
        ultramean_body(&fs, &charge, los, AnyStructure::Float, &mut report)?;
    } else {
        let es: Vec<FiniteStructure<Rational>> = loaded
            .into_iter()
            .map(|s| match s {
                AnyStructure::Exact(e) => e,
                AnyStructure::Float(_) => unreachable!(),
            })
            .collect();
        ultramean_body(&es, &charge, los, AnyStructure::Exact, &mut report)?;
    }
    Ok(report)
}

fn ultramean_body<N: Scalar>(
    factors: &[FiniteStructure<N>],
    charge: &Charge,
    los: Option<(&String, Option<&str>)>,
    wrap: fn(FiniteStructure<N>) -> AnyStructure,
    report: &mut Report,
) -> Result<(), CliError> {
    let u = build_ultramean(factors, charge)?;
    let Some((formula, at)) = los else {
        report.result("points", u.structure.size());
        report.result(
            "classes",
            u.representatives
                .iter()
                .enumerate()
                .map(|(c, r)| json!({ "label": u.structure.label(c), "representative": r.clone() }))
                .collect::<Vec<_>>(),
        );
        report.result("structure", serialize_structure(&wrap(u.structure.clone())));
        return Ok(());
    };
    report.input("formula", formula.as_str());
    let sig = factors[0].signature();
    let phi = parse_formula(formula, sig)?;
    phi.check(sig).map_err(|e| input(e.to_string()))?;
    let vars = phi.free_variables();
    let assignments: Vec<Vec<Vec<usize>>> = match at {
        Some(text) => {
            let groups: Vec<&str> = text.split(';').map(str::trim).filter(|g| !g.is_empty()).collect();
            if groups.len() != vars.len() {
                return Err(input(format!("formula has {} free variables, --at gives {} tuples", vars.len(), groups.len())));
            }
            let tuples = groups
                .iter()
                .map(|g| {
                    let words: Vec<&str> = g.split(|c: char| c == ',' || c.is_whitespace()).filter(|w| !w.is_empty()).collect();
                    if words.len() != factors.len() {
                        return Err(input(format!("tuple `{g}` needs one point per factor")));
                    }
                    words
                        .iter()
                        .zip(factors)
                        .map(|(w, f)| f.point(w).ok_or_else(|| input(format!("unknown point `{w}`"))))
                        .collect::<Result<Vec<_>, _>>()
                })
                .collect::<Result<Vec<_>, _>>()?;
            vec![tuples]
        }
        None => {
            let product: Vec<Vec<usize>> = u.representatives.clone();
            let rows = product.len().checked_pow(vars.len() as u32).unwrap_or(usize::MAX);
            if rows > TABLE_LIMIT {
                return Err(input(format!("{rows} assignments; pass --at")));
            }
            all_tuples(product.len(), vars.len()).map(|t| t.iter().map(|&c| product[c].clone()).collect()).collect()
        }
    };
    let mut failures = 0;
    let mut checks = Vec::new();
    for tuples in &assignments {
        let c = check_los_in(&u, factors, charge, &phi, tuples)?;
        if !c.equal {
            failures += 1;
            report.counterexamples.push(json!({ "tuples": tuples, "lhs": num(&c.lhs), "rhs": num(&c.rhs) }));
        }
        checks.push(json!({ "tuples": tuples, "lhs": num(&c.lhs), "rhs": num(&c.rhs), "equal": c.equal }));
    }
    report.result("free_variables", vars);
    report.result("checked", assignments.len());
    report.result("failures", failures);
    report.result("checks", checks);
    report.failed = failures > 0;
    Ok(())
}

fn suite_command(opts: &Opts, name: &str, cases: usize, include_corpus: bool) -> Result<Report, CliError> {
    let suite = Suite::parse(name).ok_or_else(|| {
        let known: Vec<&str> = Suite::ALL.iter().map(|s| s.name()).collect();
        input(format!("unknown suite `{name}` (known: {})", known.join(", ")))
    })?;
    let mut report = Report::new("suite");
    report.input("suite", suite.name());
    report.input("cases", cases);
    report.input("seed", opts.seed);
    report.input("include_corpus", include_corpus);
    if opts.mode == Some(Mode::Float) {
        return Err(input("suites run in exact arithmetic"));
    }
    let params = SuiteParams {
        cases,
        seed: opts.seed,
        include_corpus,
        fragment: fragment_params(opts, &Signature::new())?,
        ..SuiteParams::default()
    };
    let r = run_suite(suite, &params)?;
    report.result("cases_run", r.cases_run);
    report.result("passed", r.passed);
    report.result("skipped_unsaturated", r.skipped_unsaturated);
    report.result("ok", r.ok());
    report.counterexamples = r
        .counterexamples
        .iter()
        .map(|c| {
            json!({
                "case": c.case,
                "dims": c.dims,
                "saturated": c.saturated,
                "tuples": c.witness.tuples,
                "detail": c.witness.detail,
                "structure": c.structure,
            })
        })
        .collect();
    report.failed = !r.ok();
    Ok(report)
}

fn corpus_command(name: Option<&str>) -> Result<Report, CliError> {
    let mut report = Report::new("corpus");
    match name {
        None => {
            let entries = NAMES
                .iter()
                .map(|n| {
                    let e = load_corpus(n).expect("listed entry");
                    json!({
                        "name": e.name,
                        "version": e.version,
                        "points": e.structure.size(),
                        "mode": if e.structure.is_exact() { "exact" } else { "float" },
                        "description": e.description,
                    })
                })
                .collect::<Vec<_>>();
            report.result("entries", entries);
        }
        Some(n) => {
            report.input("name", n);
            let e = load_corpus(n)?;
            let failures = self_check(&e);
            report.result("version", e.version);
            report.result("description", e.description);
            report.result("expectations", e.expectations.to_vec());
            report.result("self_check", failures.is_empty());
            report.result("structure", serialize_structure(&e.structure));
            report.counterexamples = failures.iter().map(|f| json!(f)).collect();
            report.failed = !failures.is_empty();
        }
    }
    Ok(report)
}
