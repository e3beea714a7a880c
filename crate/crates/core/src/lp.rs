//! Dense two-phase primal simplex with Bland's rule.
//!
//! Exact over rationals; over floats every zero and sign test goes through
//! the configured tolerance.

use std::cmp::Ordering;

use thiserror::Error;

use crate::scalar::{Scalar, Tolerance};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

/// `coefficients · x  (relation)  bound`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearConstraint<N> {
    pub coefficients: Vec<N>,
    pub relation: Relation,
    pub bound: N,
}

impl<N: Scalar> LinearConstraint<N> {
    pub fn new(coefficients: Vec<N>, relation: Relation, bound: N) -> Self {
        LinearConstraint { coefficients, relation, bound }
    }

    pub fn le(coefficients: Vec<N>, bound: N) -> Self {
        Self::new(coefficients, Relation::Le, bound)
    }

    pub fn ge(coefficients: Vec<N>, bound: N) -> Self {
        Self::new(coefficients, Relation::Ge, bound)
    }

    pub fn eq(coefficients: Vec<N>, bound: N) -> Self {
        Self::new(coefficients, Relation::Eq, bound)
    }

    pub fn dim(&self) -> usize {
        self.coefficients.len()
    }

    pub fn satisfied_by(&self, x: &[N], tol: Tolerance) -> bool {
        let lhs = crate::linalg::dot(&self.coefficients, x);
        match self.relation {
            Relation::Le => lhs.le_tol(&self.bound, tol),
            Relation::Ge => self.bound.le_tol(&lhs, tol),
            Relation::Eq => lhs.approx_eq(&self.bound, tol),
        }
    }

    /// Same constraint with coefficients and bound multiplied by `factor > 0`.
    pub fn scaled(&self, factor: &N) -> Self {
        LinearConstraint {
            coefficients: self.coefficients.iter().map(|c| c.clone() * factor.clone()).collect(),
            relation: self.relation,
            bound: self.bound.clone() * factor.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Maximize,
    Minimize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome<N> {
    Infeasible,
    Unbounded,
    Optimal { value: N, witness: Vec<N> },
}

impl<N> LpOutcome<N> {
    pub fn witness(&self) -> Option<&[N]> {
        match self {
            LpOutcome::Optimal { witness, .. } => Some(witness),
            _ => None,
        }
    }

    pub fn is_feasible(&self) -> bool {
        !matches!(self, LpOutcome::Infeasible)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LpError {
    #[error("problem needs at least one unknown")]
    NoUnknowns,
    #[error("constraint {index} has {found} coefficients, expected {expected}")]
    Dimension { index: usize, expected: usize, found: usize },
    #[error("objective has {found} coefficients, expected {expected}")]
    ObjectiveDimension { expected: usize, found: usize },
}

/// Linear program over unknowns that are either free or nonnegative.
#[derive(Debug, Clone)]
pub struct LinearProgram<N> {
    nonnegative: Vec<bool>,
    constraints: Vec<LinearConstraint<N>>,
    tol: Tolerance,
}

impl<N: Scalar> LinearProgram<N> {
    pub fn free(k: usize, tol: Tolerance) -> Self {
        LinearProgram { nonnegative: vec![false; k], constraints: Vec::new(), tol }
    }

    pub fn nonnegative(k: usize, tol: Tolerance) -> Self {
        LinearProgram { nonnegative: vec![true; k], constraints: Vec::new(), tol }
    }

    pub fn with_bounds(nonnegative: Vec<bool>, tol: Tolerance) -> Self {
        LinearProgram { nonnegative, constraints: Vec::new(), tol }
    }

    pub fn unknowns(&self) -> usize {
        self.nonnegative.len()
    }

    pub fn push(&mut self, c: LinearConstraint<N>) -> Result<(), LpError> {
        if c.dim() != self.unknowns() {
            return Err(LpError::Dimension { index: self.constraints.len(), expected: self.unknowns(), found: c.dim() });
        }
        self.constraints.push(c);
        Ok(())
    }

    pub fn constraints(&self) -> &[LinearConstraint<N>] {
        &self.constraints
    }

    pub fn solve(&self, objective: Option<&[N]>, sense: Sense) -> Result<LpOutcome<N>, LpError> {
        let k = self.unknowns();
        if k == 0 {
            return Err(LpError::NoUnknowns);
        }
        if let Some(obj) = objective {
            if obj.len() != k {
                return Err(LpError::ObjectiveDimension { expected: k, found: obj.len() });
            }
        }
        // Column layout: one column per nonnegative unknown, two per free one.
        let mut columns: Vec<(usize, bool)> = Vec::new();
        for (j, &nn) in self.nonnegative.iter().enumerate() {
            columns.push((j, true));
            if !nn {
                columns.push((j, false));
            }
        }
        let expand = |coeffs: &[N]| -> Vec<N> {
            columns.iter().map(|&(j, pos)| if pos { coeffs[j].clone() } else { -coeffs[j].clone() }).collect()
        };
        let rows: Vec<(Vec<N>, Relation, N)> =
            self.constraints.iter().map(|c| (expand(&c.coefficients), c.relation, c.bound.clone())).collect();
        let cost: Vec<N> = match objective {
            None => vec![N::zero(); columns.len()],
            Some(obj) => {
                let e = expand(obj);
                match sense {
                    Sense::Minimize => e,
                    Sense::Maximize => e.into_iter().map(|c| -c).collect(),
                }
            }
        };
        let outcome = Tableau::solve_standard(rows, cost, self.tol);
        Ok(match outcome {
            StdOutcome::Infeasible => LpOutcome::Infeasible,
            StdOutcome::Unbounded => LpOutcome::Unbounded,
            StdOutcome::Optimal(y) => {
                let mut witness = vec![N::zero(); k];
                for (&(j, pos), v) in columns.iter().zip(y) {
                    witness[j] = if pos { witness[j].clone() + v } else { witness[j].clone() - v };
                }
                let value = match objective {
                    None => N::zero(),
                    Some(obj) => crate::linalg::dot(obj, &witness),
                };
                LpOutcome::Optimal { value, witness }
            }
        })
    }
}

/// Solves over free unknowns `x ∈ R^k`.
pub fn lp_solve<N: Scalar>(
    k: usize,
    constraints: &[LinearConstraint<N>],
    objective: Option<&[N]>,
    sense: Sense,
    tol: Tolerance,
) -> Result<LpOutcome<N>, LpError> {
    let mut lp = LinearProgram::free(k, tol);
    for c in constraints {
        lp.push(c.clone())?;
    }
    lp.solve(objective, sense)
}

enum StdOutcome<N> {
    Infeasible,
    Unbounded,
    Optimal(Vec<N>),
}

/// Tableau for `min c·y, A y = b, y >= 0` with `b >= 0`.
struct Tableau<N> {
    /// `rows x (cols + 1)`, right-hand side last.
    a: Vec<Vec<N>>,
    /// Reduced costs, with minus the objective value last.
    z: Vec<N>,
    basis: Vec<usize>,
    cols: usize,
    tol: Tolerance,
}

/// Consecutive degenerate pivots tolerated before switching to Bland's rule.
const DEGENERATE_STREAK: usize = 50;

impl<N: Scalar> Tableau<N> {
    fn solve_standard(rows: Vec<(Vec<N>, Relation, N)>, cost: Vec<N>, tol: Tolerance) -> StdOutcome<N> {
        let n_struct = cost.len();
        let n_slack = rows.iter().filter(|r| r.1 != Relation::Eq).count();
        let m = rows.len();
        let mut a = Vec::with_capacity(m);
        let mut basis: Vec<Option<usize>> = Vec::with_capacity(m);
        let mut slack = n_struct;
        for (coeffs, rel, bound) in rows {
            let mut row = vec![N::zero(); n_struct + n_slack + 1];
            for (j, c) in coeffs.into_iter().enumerate() {
                row[j] = c;
            }
            let own = match rel {
                Relation::Le => Some((slack, N::one())),
                Relation::Ge => Some((slack, -N::one())),
                Relation::Eq => None,
            };
            if let Some((col, v)) = &own {
                row[*col] = v.clone();
                slack += 1;
            }
            row[n_struct + n_slack] = bound;
            if row[n_struct + n_slack].lt_tol(&N::zero(), Tolerance::EXACT) {
                for x in row.iter_mut() {
                    *x = -x.clone();
                }
            }
            // A slack with coefficient +1 can start in the basis.
            let start = own.map(|(col, _)| col).filter(|&col| row[col] == N::one());
            basis.push(start);
            a.push(row);
        }
        let first_art = n_struct + n_slack;
        let arts: Vec<usize> = (0..m).filter(|&i| basis[i].is_none()).collect();
        let cols = first_art + arts.len();
        for row in a.iter_mut() {
            let rhs = row.pop().expect("rhs");
            row.extend(std::iter::repeat_n(N::zero(), arts.len()));
            row.push(rhs);
        }
        for (k, &i) in arts.iter().enumerate() {
            a[i][first_art + k] = N::one();
            basis[i] = Some(first_art + k);
        }
        let basis: Vec<usize> = basis.into_iter().map(|b| b.expect("every row has a basic column")).collect();
        let mut t = Tableau { a, z: Vec::new(), basis, cols, tol };

        if !arts.is_empty() {
            // Phase 1: minimize the sum of artificials.
            let mut phase1 = vec![N::zero(); cols];
            for c in phase1.iter_mut().skip(first_art) {
                *c = N::one();
            }
            t.price(&phase1);
            t.run(cols);
            if !t.z[cols].is_zero_tol(tol) {
                return StdOutcome::Infeasible;
            }
            // Drive remaining artificials out of the basis; drop redundant rows.
            let mut r = 0;
            while r < t.a.len() {
                if t.basis[r] >= first_art {
                    match (0..first_art).find(|&j| !t.a[r][j].is_zero_tol(tol)) {
                        Some(j) => t.pivot(r, j),
                        None => {
                            t.a.remove(r);
                            t.basis.remove(r);
                            continue;
                        }
                    }
                }
                r += 1;
            }
            for row in t.a.iter_mut() {
                let rhs = row.pop().expect("rhs");
                row.truncate(first_art);
                row.push(rhs);
            }
            t.cols = first_art;
        }
        // Phase 2.
        let mut phase2 = cost;
        phase2.extend(std::iter::repeat_n(N::zero(), n_slack));
        t.price(&phase2);
        if !t.run(first_art) {
            return StdOutcome::Unbounded;
        }
        let mut y = vec![N::zero(); n_struct];
        for (row, &b) in t.a.iter().zip(&t.basis) {
            if b < n_struct {
                y[b] = row[t.cols].clone();
            }
        }
        StdOutcome::Optimal(y)
    }

    /// Sets the reduced-cost row for `cost` against the current basis.
    fn price(&mut self, cost: &[N]) {
        let mut z: Vec<N> = cost.to_vec();
        z.push(N::zero());
        for (row, &b) in self.a.iter().zip(&self.basis) {
            let cb = &cost[b];
            if cb.is_zero_tol(Tolerance::EXACT) {
                continue;
            }
            for (zj, x) in z.iter_mut().zip(row) {
                if !x.is_zero_tol(Tolerance::EXACT) {
                    *zj = zj.clone() - cb.clone() * x.clone();
                }
            }
        }
        self.z = z;
    }

    /// Runs simplex iterations over columns `< limit`; false when unbounded.
    fn run(&mut self, limit: usize) -> bool {
        let zero = N::zero();
        let mut bland = false;
        let mut streak = 0;
        loop {
            let candidates = (0..limit).filter(|&j| self.z[j].lt_tol(&zero, self.tol));
            let entering = if bland {
                candidates.into_iter().next()
            } else {
                candidates.min_by(|&x, &y| self.z[x].compare(&self.z[y], Tolerance::EXACT))
            };
            let Some(j) = entering else {
                return true;
            };
            let mut leave: Option<(usize, N)> = None;
            for (r, row) in self.a.iter().enumerate() {
                if row[j].compare(&zero, self.tol) != Ordering::Greater {
                    continue;
                }
                let ratio = row[self.cols].clone() / row[j].clone();
                leave = match leave {
                    None => Some((r, ratio)),
                    Some((br, best)) => match ratio.compare(&best, self.tol) {
                        Ordering::Less => Some((r, ratio)),
                        Ordering::Equal if self.basis[r] < self.basis[br] => Some((r, ratio)),
                        _ => Some((br, best)),
                    },
                };
            }
            let Some((r, ratio)) = leave else {
                return false;
            };
            if ratio.is_zero_tol(self.tol) {
                streak += 1;
                if streak > DEGENERATE_STREAK {
                    bland = true;
                }
            } else {
                streak = 0;
            }
            self.pivot(r, j);
        }
    }

    fn pivot(&mut self, r: usize, j: usize) {
        let p = self.a[r][j].clone();
        for x in self.a[r].iter_mut() {
            if !x.is_zero_tol(Tolerance::EXACT) {
                *x = x.clone() / p.clone();
            }
        }
        self.a[r][j] = N::one();
        let pivot_row = self.a[r].clone();
        let eliminate = |row: &mut Vec<N>, tol: Tolerance| {
            let factor = row[j].clone();
            if factor.is_zero_tol(Tolerance::EXACT) {
                return;
            }
            for (x, pv) in row.iter_mut().zip(&pivot_row) {
                if !pv.is_zero_tol(Tolerance::EXACT) {
                    *x = x.clone() - factor.clone() * pv.clone();
                }
            }
            row[j] = N::zero();
            if !N::EXACT {
                for x in row.iter_mut() {
                    if x.is_zero_tol(tol) {
                        *x = N::zero();
                    }
                }
            }
        };
        for (i, row) in self.a.iter_mut().enumerate() {
            if i != r {
                eliminate(row, self.tol);
            }
        }
        if !self.z.is_empty() {
            eliminate(&mut self.z, self.tol);
        }
        self.basis[r] = j;
    }
}
