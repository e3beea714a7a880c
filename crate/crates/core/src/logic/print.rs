//! Canonical printing. Output re-parses to the same tree.

use std::fmt;

use super::{Condition, ConditionRel, Formula, Term};
use crate::scalar::format_rational;

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) | Term::Const(v) => f.write_str(v),
            Term::Apply(name, args) => {
                write!(f, "{name}(")?;
                write_list(f, args)?;
                f.write_str(")")
            }
        }
    }
}

fn write_list(f: &mut fmt::Formatter<'_>, terms: &[Term]) -> fmt::Result {
    for (i, t) in terms.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{t}")?;
    }
    Ok(())
}

/// Prints `phi` in atom position, parenthesizing sums and products.
fn write_atom(f: &mut fmt::Formatter<'_>, phi: &Formula) -> fmt::Result {
    match phi {
        Formula::Add(..) | Formula::Scale(..) => write!(f, "({phi})"),
        _ => write!(f, "{phi}"),
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Const(r) => f.write_str(&format_rational(r)),
            Formula::Dist(a, b) => write!(f, "d({a}, {b})"),
            Formula::Rel(name, args) => {
                write!(f, "{name}(")?;
                write_list(f, args)?;
                f.write_str(")")
            }
            Formula::Scale(r, body) => {
                write!(f, "{} * ", format_rational(r))?;
                write_atom(f, body)
            }
            Formula::Add(l, r) => {
                write!(f, "{l} + ")?;
                match **r {
                    Formula::Add(..) => write!(f, "({r})"),
                    _ => write!(f, "{r}"),
                }
            }
            Formula::Quant(q, v, body) => {
                write!(f, "{} {v} . ", q.keyword())?;
                write_atom(f, body)
            }
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rel = match self.relation {
            ConditionRel::Le => "<=",
            ConditionRel::Eq => "=",
        };
        write!(f, "{} {rel} {}", self.left, self.right)
    }
}

#[cfg(test)]
mod tests {
    use super::super::{parse_formula, Signature};
    use super::*;
    use crate::scalar::{int, rat};

    #[test]
    fn canonical_forms() {
        let phi = Formula::sup("x", Formula::rel("P", vec![Term::var("x")]));
        assert_eq!(phi.to_string(), "sup x . P(x)");
        let neg = Formula::scale(int(-1), Formula::constant(int(2)));
        assert_eq!(neg.to_string(), "-1 * 2");
    }

    #[test]
    fn nested_scales_and_sums_round_trip() {
        let sig = Signature::new().with_relation("P", 1, int(1)).unwrap();
        let x = || Formula::rel("P", vec![Term::var("x")]);
        let cases = vec![
            Formula::add(Formula::constant(rat(1, 3)), Formula::dist(Term::var("x"), Term::var("y"))),
            Formula::scale(int(2), Formula::scale(rat(-1, 2), x())),
            Formula::add(x(), Formula::add(x(), Formula::constant(int(-1)))),
            Formula::sup("y", Formula::add(x(), Formula::scale(int(-1), Formula::dist(Term::var("x"), Term::var("y"))))),
            Formula::scale(int(3), Formula::inf("z", Formula::constant(int(-2)))),
        ];
        for phi in cases {
            let text = phi.to_string();
            assert_eq!(parse_formula(&text, &sig).unwrap(), phi, "{text}");
        }
    }
}
