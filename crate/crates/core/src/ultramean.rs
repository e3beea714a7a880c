//! Charges on finite index sets and the ultramean of a family of structures.
//!
//! Distances and relations of the product are integrated against the charge;
//! tuples at distance zero are identified. On a finite index set every
//! finitely additive probability is a weight vector, and a 0-1 valued one is
//! a point mass.

use num_traits::{One, Signed};
use thiserror::Error;

use crate::logic::Formula;
use crate::scalar::{int, Rational, Scalar};
use crate::structure::{Assignment, EvalError, FiniteStructure, ValidationReport};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum UltrameanError {
    #[error("a charge needs at least one index")]
    EmptyCharge,
    #[error("charge weight {0} is negative")]
    NegativeWeight(usize),
    #[error("charge weights sum to {0}, not 1")]
    NotNormalized(String),
    #[error("expected {expected} values, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("factor {0} has a different signature")]
    SignatureMismatch(usize),
    #[error("factor {index} is invalid:\n{report}")]
    InvalidFactor { index: usize, report: ValidationReport },
    #[error("formula has {expected} free variables but {found} classes were given")]
    Arity { expected: usize, found: usize },
    #[error("tuple {0:?} does not index the product")]
    BadTuple(Vec<usize>),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Finitely additive probability on `{0, .., m-1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Charge {
    weights: Vec<Rational>,
}

impl Charge {
    pub fn new(weights: Vec<Rational>) -> Result<Self, UltrameanError> {
        if weights.is_empty() {
            return Err(UltrameanError::EmptyCharge);
        }
        if let Some(i) = weights.iter().position(|w| w.is_negative()) {
            return Err(UltrameanError::NegativeWeight(i));
        }
        let total: Rational = weights.iter().sum();
        if !total.is_one() {
            return Err(UltrameanError::NotNormalized(crate::scalar::format_rational(&total)));
        }
        Ok(Charge { weights })
    }

    pub fn uniform(m: usize) -> Self {
        let w = crate::scalar::rat(1, m as i64);
        Charge { weights: vec![w; m] }
    }

    pub fn point_mass(m: usize, at: usize) -> Self {
        let mut weights = vec![int(0); m];
        weights[at] = int(1);
        Charge { weights }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn is_point_mass(&self) -> Option<usize> {
        let ones: Vec<usize> = (0..self.len()).filter(|&i| self.weights[i].is_one()).collect();
        (ones.len() == 1).then(|| ones[0])
    }

    /// `sum_i w_i v_i`.
    pub fn integrate<N: Scalar>(&self, values: &[N]) -> Result<N, UltrameanError> {
        if values.len() != self.len() {
            return Err(UltrameanError::LengthMismatch { expected: self.len(), found: values.len() });
        }
        Ok(self
            .weights
            .iter()
            .zip(values)
            .fold(N::zero(), |acc, (w, v)| acc + N::from_rational(w) * v.clone()))
    }
}

/// The quotient structure together with the map from product tuples to classes.
#[derive(Debug, Clone)]
pub struct UltrameanResult<N> {
    pub structure: FiniteStructure<N>,
    /// Lexicographically least member of each class, indexed by class.
    pub representatives: Vec<Vec<usize>>,
    sizes: Vec<usize>,
    class_of: Vec<usize>,
}

impl<N: Scalar> UltrameanResult<N> {
    fn product_index(&self, tuple: &[usize]) -> Option<usize> {
        if tuple.len() != self.sizes.len() || tuple.iter().zip(&self.sizes).any(|(&a, &s)| a >= s) {
            return None;
        }
        Some(tuple.iter().zip(&self.sizes).fold(0, |acc, (&a, &s)| acc * s + a))
    }

    /// Class containing a factor tuple `(a_0, .., a_{m-1})`.
    pub fn class_of(&self, tuple: &[usize]) -> Option<usize> {
        self.product_index(tuple).map(|i| self.class_of[i])
    }

    pub fn class_by_label(&self, label: &str) -> Option<usize> {
        self.structure.point(label)
    }
}

fn product_tuples(sizes: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for &s in sizes {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..s).map(move |a| {
                    let mut t = prefix.clone();
                    t.push(a);
                    t
                })
            })
            .collect();
    }
    out
}

pub fn build_ultramean<N: Scalar>(
    factors: &[FiniteStructure<N>],
    charge: &Charge,
) -> Result<UltrameanResult<N>, UltrameanError> {
    if factors.len() != charge.len() {
        return Err(UltrameanError::LengthMismatch { expected: charge.len(), found: factors.len() });
    }
    let sig = factors[0].signature();
    for (i, f) in factors.iter().enumerate() {
        if f.signature() != sig {
            return Err(UltrameanError::SignatureMismatch(i));
        }
        let report = f.validate();
        if !report.is_valid() {
            return Err(UltrameanError::InvalidFactor { index: i, report });
        }
    }
    let tol = factors[0].tolerance();
    let sizes: Vec<usize> = factors.iter().map(|f| f.size()).collect();
    let tuples = product_tuples(&sizes);
    let pseudo = |u: &[usize], v: &[usize]| -> N {
        let ds: Vec<N> = factors.iter().enumerate().map(|(i, f)| f.dist(u[i], v[i]).clone()).collect();
        charge.integrate(&ds).expect("lengths agree")
    };

    let mut representatives: Vec<Vec<usize>> = Vec::new();
    let mut class_of = Vec::with_capacity(tuples.len());
    for t in &tuples {
        match representatives.iter().position(|r| pseudo(r, t).is_zero_tol(tol)) {
            Some(c) => class_of.push(c),
            None => {
                class_of.push(representatives.len());
                representatives.push(t.clone());
            }
        }
    }
    let index_of = |t: &[usize]| t.iter().zip(&sizes).fold(0, |acc, (&a, &s)| acc * s + a);
    let class_of_tuple = |t: &[usize]| class_of[index_of(t)];

    let k = representatives.len();
    let labels: Vec<String> = representatives
        .iter()
        .map(|r| {
            let inner: String = r.iter().enumerate().map(|(i, &a)| factors[i].label(a).to_string()).collect();
            format!("[{inner}]")
        })
        .collect();
    let metric: Vec<Vec<N>> = representatives
        .iter()
        .map(|u| representatives.iter().map(|v| pseudo(u, v)).collect())
        .collect();
    let constants: Vec<usize> = sig
        .constants()
        .iter()
        .map(|c| {
            let t: Vec<usize> = factors.iter().map(|f| f.constant(c).expect("validated")).collect();
            class_of_tuple(&t)
        })
        .collect();
    let class_args = |args: &[usize], factor: usize| -> Vec<usize> {
        args.iter().map(|&c| representatives[c][factor]).collect()
    };
    let functions: Vec<Vec<usize>> = sig
        .functions()
        .iter()
        .enumerate()
        .map(|(fi, sym)| {
            crate::structure::all_tuples(k, sym.arity)
                .map(|args| {
                    let image: Vec<usize> =
                        factors.iter().enumerate().map(|(i, f)| f.apply_function(fi, &class_args(&args, i))).collect();
                    class_of_tuple(&image)
                })
                .collect()
        })
        .collect();
    let relations: Vec<Vec<N>> = sig
        .relations()
        .iter()
        .enumerate()
        .map(|(ri, sym)| {
            crate::structure::all_tuples(k, sym.arity)
                .map(|args| {
                    let vals: Vec<N> = factors
                        .iter()
                        .enumerate()
                        .map(|(i, f)| f.relation_value(ri, &class_args(&args, i)).clone())
                        .collect();
                    charge.integrate(&vals).expect("lengths agree")
                })
                .collect()
        })
        .collect();
    let structure = FiniteStructure::from_parts(sig.clone(), labels, metric, constants, functions, relations, tol)
        .expect("quotient tables are well shaped");
    Ok(UltrameanResult { structure, representatives, sizes, class_of })
}

/// Both sides of the averaging identity for one formula and one class tuple.
#[derive(Debug, Clone, PartialEq)]
pub struct LosCheck<N> {
    pub lhs: N,
    pub rhs: N,
    pub equal: bool,
}

/// `tuples[j]` is the factor tuple assigned to the `j`-th free variable of `phi`.
pub fn check_los_in<N: Scalar>(
    ultramean: &UltrameanResult<N>,
    factors: &[FiniteStructure<N>],
    charge: &Charge,
    phi: &Formula,
    tuples: &[Vec<usize>],
) -> Result<LosCheck<N>, UltrameanError> {
    let vars = phi.free_variables();
    if vars.len() != tuples.len() {
        return Err(UltrameanError::Arity { expected: vars.len(), found: tuples.len() });
    }
    let mut asg = Assignment::new();
    for (v, t) in vars.iter().zip(tuples) {
        let class = ultramean.class_of(t).ok_or_else(|| UltrameanError::BadTuple(t.clone()))?;
        asg.set(v, class);
    }
    let lhs = ultramean.structure.eval(phi, &asg)?;
    let per_factor = factors
        .iter()
        .enumerate()
        .map(|(i, f)| {
            let asg = Assignment::zip(&vars, &tuples.iter().map(|t| t[i]).collect::<Vec<_>>());
            f.eval(phi, &asg)
        })
        .collect::<Result<Vec<N>, _>>()?;
    let rhs = charge.integrate(&per_factor)?;
    let equal = lhs.approx_eq(&rhs, ultramean.structure.tolerance());
    Ok(LosCheck { lhs, rhs, equal })
}

pub fn check_los<N: Scalar>(
    phi: &Formula,
    factors: &[FiniteStructure<N>],
    charge: &Charge,
    tuples: &[Vec<usize>],
) -> Result<LosCheck<N>, UltrameanError> {
    let u = build_ultramean(factors, charge)?;
    check_los_in(&u, factors, charge, phi, tuples)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::logic::parse_formula;
    use crate::scalar::{int, rat};

    #[test]
    fn integrate_examples() {
        let half = Charge::new(vec![rat(1, 2), rat(1, 2)]).unwrap();
        assert_eq!(half.integrate(&[int(0), int(1)]).unwrap(), rat(1, 2));
        let pm = Charge::point_mass(3, 1);
        assert_eq!(pm.integrate(&[int(5), int(7), int(9)]).unwrap(), int(7));
        let c = Charge::new(vec![rat(1, 3), rat(2, 3)]).unwrap();
        assert_eq!(c.integrate(&[int(1), int(1)]).unwrap(), int(1));
        assert!(matches!(c.integrate(&[int(1)]), Err(UltrameanError::LengthMismatch { .. })));
    }

    #[test]
    fn charge_validation() {
        assert!(matches!(Charge::new(vec![]), Err(UltrameanError::EmptyCharge)));
        assert!(matches!(Charge::new(vec![rat(1, 2), rat(1, 3)]), Err(UltrameanError::NotNormalized(_))));
        assert!(matches!(Charge::new(vec![int(2), int(-1)]), Err(UltrameanError::NegativeWeight(1))));
    }

    #[test]
    fn u2_has_four_classes() {
        let m2 = corpus::m2();
        let u = build_ultramean(&[m2.clone(), m2], &Charge::uniform(2)).unwrap();
        let s = &u.structure;
        assert_eq!(s.size(), 4);
        assert_eq!(s.labels(), &["[a0a0]", "[a0a1]", "[a1a0]", "[a1a1]"]);
        let (c00, c01) = (u.class_of(&[0, 0]).unwrap(), u.class_of(&[0, 1]).unwrap());
        assert_eq!(*s.dist(c00, c01), rat(1, 2));
        assert_eq!(*s.relation_value(0, &[c01]), rat(1, 2));
        assert!(s.validate().is_valid());
    }

    #[test]
    fn point_mass_collapses_to_factor() {
        let m2 = corpus::m2();
        let u = build_ultramean(&[m2.clone(), m2.clone()], &Charge::point_mass(2, 0)).unwrap();
        assert_eq!(u.structure.size(), 2);
        assert_eq!(u.representatives, vec![vec![0, 0], vec![1, 0]]);
        assert_eq!(u.class_of(&[1, 1]), Some(1));
        assert_eq!(*u.structure.dist(0, 1), int(1));
        assert_eq!(u.structure.relation_table("P").unwrap(), m2.relation_table("P").unwrap());
    }

    #[test]
    fn single_factor_is_identity() {
        let m2 = corpus::m2();
        let u = build_ultramean(std::slice::from_ref(&m2), &Charge::point_mass(1, 0)).unwrap();
        assert_eq!(u.structure.size(), 2);
        assert_eq!(u.structure.relation_table("P"), m2.relation_table("P"));
    }

    #[test]
    fn los_on_u2() {
        let m2 = corpus::m2();
        let factors = [m2.clone(), m2.clone()];
        let mu = Charge::uniform(2);
        let sig = m2.signature();
        let phi = parse_formula("P(x)", sig).unwrap();
        let c = check_los(&phi, &factors, &mu, &[vec![0, 1]]).unwrap();
        assert_eq!((c.lhs.clone(), c.rhs.clone(), c.equal), (rat(1, 2), rat(1, 2), true));
        let psi = parse_formula("sup x . (P(x) - 2*d(x,y))", sig).unwrap();
        let c = check_los(&psi, &factors, &mu, &[vec![0, 1]]).unwrap();
        assert!(c.equal);
        assert_eq!(c.lhs, rat(1, 2));
    }

    #[test]
    fn mismatched_signature_is_rejected() {
        let err = build_ultramean(&[corpus::m2(), corpus::dc3()], &Charge::uniform(2)).unwrap_err();
        assert!(matches!(err, UltrameanError::SignatureMismatch(1)));
    }
}
