//! Incremental row-echelon basis: independence tests and coordinates of a
//! vector in terms of the vectors inserted so far.

use std::cmp::Ordering;

use crate::scalar::{Scalar, Tolerance};

#[derive(Debug, Clone)]
struct Row<N> {
    pivot: usize,
    values: Vec<N>,
    /// This row as a combination of the inserted vectors.
    combination: Vec<N>,
}

#[derive(Debug, Clone)]
pub struct SpanBasis<N> {
    len: usize,
    rows: Vec<Row<N>>,
    tol: Tolerance,
}

impl<N: Scalar> SpanBasis<N> {
    pub fn new(len: usize, tol: Tolerance) -> Self {
        SpanBasis { len, rows: Vec::new(), tol }
    }

    /// Number of inserted (independent) vectors.
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn vector_len(&self) -> usize {
        self.len
    }

    /// Remainder after elimination and the coefficients used, indexed by row.
    fn reduce(&self, v: &[N]) -> (Vec<N>, Vec<N>) {
        assert_eq!(v.len(), self.len, "vector length");
        let mut rest = v.to_vec();
        let mut alphas = Vec::with_capacity(self.rows.len());
        for row in &self.rows {
            let alpha = rest[row.pivot].clone();
            if !alpha.is_zero_tol(Tolerance::EXACT) {
                for (r, x) in rest.iter_mut().zip(&row.values) {
                    if !x.is_zero_tol(Tolerance::EXACT) {
                        *r = r.clone() - alpha.clone() * x.clone();
                    }
                }
                rest[row.pivot] = N::zero();
            }
            alphas.push(alpha);
        }
        (rest, alphas)
    }

    fn pivot_of(&self, rest: &[N]) -> Option<usize> {
        if N::EXACT {
            rest.iter().position(|x| !x.is_zero_tol(self.tol))
        } else {
            let (i, best) = rest
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.abs().compare(&b.1.abs(), Tolerance::EXACT))?;
            (!best.is_zero_tol(self.tol)).then_some(i)
        }
    }

    pub fn contains(&self, v: &[N]) -> bool {
        let (rest, _) = self.reduce(v);
        self.pivot_of(&rest).is_none()
    }

    /// Inserts `v` when it is independent of the current span.
    pub fn insert(&mut self, v: &[N]) -> bool {
        let (mut rest, alphas) = self.reduce(v);
        let Some(pivot) = self.pivot_of(&rest) else {
            return false;
        };
        let scale = rest[pivot].clone();
        for x in rest.iter_mut() {
            *x = x.clone() / scale.clone();
        }
        rest[pivot] = N::one();
        if !N::EXACT {
            for x in rest.iter_mut() {
                if x.is_zero_tol(self.tol) {
                    *x = N::zero();
                }
            }
        }
        let count = self.rows.len();
        let mut combination = vec![N::zero(); count + 1];
        combination[count] = N::one();
        for (row, alpha) in self.rows.iter().zip(&alphas) {
            if alpha.is_zero_tol(Tolerance::EXACT) {
                continue;
            }
            for (c, r) in combination.iter_mut().zip(&row.combination) {
                *c = c.clone() - alpha.clone() * r.clone();
            }
        }
        for c in combination.iter_mut() {
            *c = c.clone() / scale.clone();
        }
        for row in self.rows.iter_mut() {
            row.combination.push(N::zero());
        }
        self.rows.push(Row { pivot, values: rest, combination });
        true
    }

    /// Coefficients `a` with `v = sum_j a_j inserted_j`, if `v` is in the span.
    pub fn coordinates(&self, v: &[N]) -> Option<Vec<N>> {
        let (rest, alphas) = self.reduce(v);
        if self.pivot_of(&rest).is_some() {
            return None;
        }
        let mut coords = vec![N::zero(); self.rows.len()];
        for (row, alpha) in self.rows.iter().zip(&alphas) {
            if alpha.is_zero_tol(Tolerance::EXACT) {
                continue;
            }
            for (c, r) in coords.iter_mut().zip(&row.combination) {
                *c = c.clone() + alpha.clone() * r.clone();
            }
        }
        Some(coords)
    }
}

/// Componentwise comparison of two vectors under a tolerance.
pub fn vectors_equal<N: Scalar>(a: &[N], b: &[N], tol: Tolerance) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.compare(y, tol) == Ordering::Equal)
}

pub fn dot<N: Scalar>(a: &[N], b: &[N]) -> N {
    a.iter().zip(b).fold(N::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

/// Some `x` with `rows[i] · x = rhs[i]` for all `i` (free unknowns set to
/// zero), or `None` when the system is inconsistent.
pub fn solve_rows<N: Scalar>(rows: &[Vec<N>], rhs: &[N], tol: Tolerance) -> Option<Vec<N>> {
    let k = rows.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<N>> = rows
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            let mut row = r.clone();
            row.push(b.clone());
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut next = 0;
    for col in 0..k {
        let Some(p) = (next..m.len()).find(|&i| !m[i][col].is_zero_tol(tol)) else {
            continue;
        };
        m.swap(next, p);
        let lead = m[next][col].clone();
        for x in m[next].iter_mut() {
            *x = x.clone() / lead.clone();
        }
        let pivot_row = m[next].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == next || row[col].is_zero_tol(Tolerance::EXACT) {
                continue;
            }
            let f = row[col].clone();
            for (x, pv) in row.iter_mut().zip(&pivot_row) {
                *x = x.clone() - f.clone() * pv.clone();
            }
        }
        pivots.push(col);
        next += 1;
        if next == m.len() {
            break;
        }
    }
    if m[next..].iter().any(|row| !row[k].is_zero_tol(tol)) {
        return None;
    }
    let mut x = vec![N::zero(); k];
    for (row, &col) in m.iter().zip(&pivots) {
        x[col] = row[k].clone();
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, Rational};

    fn v(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn solves_consistent_systems() {
        let rows = vec![v(&[1, 1, 0]), v(&[0, 1, 1])];
        let x = solve_rows(&rows, &v(&[2, 3]), Tolerance::EXACT).unwrap();
        assert_eq!((dot(&rows[0], &x), dot(&rows[1], &x)), (int(2), int(3)));
        let clash = vec![v(&[1, 1]), v(&[2, 2])];
        assert_eq!(solve_rows(&clash, &v(&[1, 3]), Tolerance::EXACT), None);
    }

    #[test]
    fn detects_dependence_and_recovers_coordinates() {
        let mut b = SpanBasis::new(3, Tolerance::EXACT);
        assert!(b.insert(&v(&[1, 1, 1])));
        assert!(b.insert(&v(&[0, 1, 2])));
        assert!(!b.insert(&v(&[2, 3, 4])));
        assert_eq!(b.rank(), 2);
        assert_eq!(b.coordinates(&v(&[2, 3, 4])), Some(v(&[2, 1])));
        assert_eq!(b.coordinates(&v(&[0, 0, 1])), None);
        assert!(b.insert(&v(&[0, 0, 1])));
        let coords = b.coordinates(&v(&[5, 7, 3])).unwrap();
        let rebuilt: Vec<Rational> = (0..3)
            .map(|i| coords[0].clone() * v(&[1, 1, 1])[i].clone() + coords[1].clone() * v(&[0, 1, 2])[i].clone() + coords[2].clone() * v(&[0, 0, 1])[i].clone())
            .collect();
        assert_eq!(rebuilt, v(&[5, 7, 3]));
    }

    #[test]
    fn float_tolerance() {
        let mut b = SpanBasis::new(2, Tolerance(1e-9));
        assert!(b.insert(&[1.0, 2.0]));
        assert!(!b.insert(&[2.0, 4.0 + 1e-12]));
        assert!(b.insert(&[0.0, 1.0]));
    }
}
