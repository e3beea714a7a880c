//! Convex geometry of finite point sets: hull membership, vertices,
//! supporting functionals and the face test for constraint regions.

use thiserror::Error;

use crate::linalg::{dot, solve_rows, vectors_equal, SpanBasis};
use crate::lp::{LinearConstraint, LinearProgram, LpError, LpOutcome, Sense};
use crate::scalar::{Scalar, Tolerance};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConvexError {
    #[error("point set is empty")]
    EmptySet,
    #[error("subset is empty")]
    EmptySubset,
    #[error("vector has dimension {found}, expected {expected}")]
    Dimension { expected: usize, found: usize },
    #[error("index {0} is out of range")]
    IndexOutOfRange(usize),
    #[error(transparent)]
    Lp(#[from] LpError),
}

fn dimension<N>(points: &[Vec<N>]) -> Result<usize, ConvexError> {
    let k = points.first().ok_or(ConvexError::EmptySet)?.len();
    for p in points {
        if p.len() != k {
            return Err(ConvexError::Dimension { expected: k, found: p.len() });
        }
    }
    Ok(k)
}

fn combine<N: Scalar>(points: &[Vec<N>], coefficients: &[N], k: usize) -> Vec<N> {
    let mut out = vec![N::zero(); k];
    for (p, c) in points.iter().zip(coefficients) {
        if c.is_zero_tol(Tolerance::EXACT) {
            continue;
        }
        for (o, x) in out.iter_mut().zip(p) {
            *o = o.clone() + c.clone() * x.clone();
        }
    }
    out
}

/// Hull coefficients `λ >= 0`, `Σλ = 1` with `Σ λ_i points_i` subject to the
/// extra constraints on the combined point.
fn hull_program<N: Scalar>(points: &[Vec<N>], region: &[LinearConstraint<N>], tol: Tolerance) -> LinearProgram<N> {
    let n = points.len();
    let mut lp = LinearProgram::nonnegative(n, tol);
    lp.push(LinearConstraint::eq(vec![N::one(); n], N::one())).expect("dimension");
    for c in region {
        let coeffs = points.iter().map(|p| dot(&c.coefficients, p)).collect();
        lp.push(LinearConstraint::new(coeffs, c.relation, c.bound.clone())).expect("dimension");
    }
    lp
}

fn point_constraints<N: Scalar>(v: &[N]) -> Vec<LinearConstraint<N>> {
    (0..v.len())
        .map(|i| {
            let mut e = vec![N::zero(); v.len()];
            e[i] = N::one();
            LinearConstraint::eq(e, v[i].clone())
        })
        .collect()
}

/// Convex coefficients expressing `v` over `points`, if `v` lies in the hull.
pub fn in_hull<N: Scalar>(v: &[N], points: &[Vec<N>], tol: Tolerance) -> Result<Option<Vec<N>>, ConvexError> {
    let k = dimension(points)?;
    if v.len() != k {
        return Err(ConvexError::Dimension { expected: k, found: v.len() });
    }
    let lp = hull_program(points, &point_constraints(v), tol);
    Ok(match lp.solve(None, Sense::Minimize)? {
        LpOutcome::Optimal { witness, .. } => Some(witness),
        _ => None,
    })
}

/// First-occurrence index of each distinct vector, and for every input the
/// position of its representative in that list.
pub fn dedup_points<N: Scalar>(points: &[Vec<N>], tol: Tolerance) -> (Vec<usize>, Vec<usize>) {
    let mut firsts: Vec<usize> = Vec::new();
    let mut class = Vec::with_capacity(points.len());
    for (i, p) in points.iter().enumerate() {
        match firsts.iter().position(|&f| vectors_equal(&points[f], p, tol)) {
            Some(c) => class.push(c),
            None => {
                class.push(firsts.len());
                firsts.push(i);
            }
        }
    }
    (firsts, class)
}

/// Indices of the vertices of `conv(points)`; duplicates are merged and the
/// first occurrence is reported.
pub fn extreme_subset<N: Scalar>(points: &[Vec<N>], tol: Tolerance) -> Result<Vec<usize>, ConvexError> {
    let k = dimension(points)?;
    let (distinct, _) = dedup_points(points, tol);
    if independent(points, &distinct, tol) {
        return Ok(distinct);
    }
    let mut out = Vec::new();
    for (pos, &i) in distinct.iter().enumerate() {
        let others: Vec<Vec<N>> =
            distinct.iter().enumerate().filter(|&(q, _)| q != pos).map(|(_, &j)| points[j].clone()).collect();
        if others.is_empty() || coordinate_extreme(&points[i], &others, k, tol) {
            out.push(i);
            continue;
        }
        if in_hull(&points[i], &others, tol)?.is_none() {
            out.push(i);
        }
    }
    Ok(out)
}

/// Linear independence of the listed points. With a constant coordinate this
/// is affine independence, and the hull is a simplex.
fn independent<N: Scalar>(points: &[Vec<N>], which: &[usize], tol: Tolerance) -> bool {
    let mut span = SpanBasis::new(points[which[0]].len(), tol);
    which.iter().all(|&i| span.insert(&points[i]))
}

/// A strict coordinate maximum or minimum is always a vertex.
fn coordinate_extreme<N: Scalar>(v: &[N], others: &[Vec<N>], k: usize, tol: Tolerance) -> bool {
    (0..k).any(|c| others.iter().all(|o| o[c].lt_tol(&v[c], tol)) || others.iter().all(|o| v[c].lt_tol(&o[c], tol)))
}

/// `c · e = level` on the chosen points and `c · u <= level - 1` on the rest.
#[derive(Debug, Clone, PartialEq)]
pub struct SupportingFunctional<N> {
    pub coefficients: Vec<N>,
    pub level: N,
}

impl<N: Scalar> SupportingFunctional<N> {
    pub fn value(&self, v: &[N]) -> N {
        dot(&self.coefficients, v)
    }

    pub fn is_trivial(&self) -> bool {
        self.coefficients.iter().all(|c| c.is_zero_tol(Tolerance::EXACT))
    }

    /// Re-checks both sides by direct arithmetic.
    pub fn verify(&self, points: &[Vec<N>], chosen: &[bool], tol: Tolerance) -> bool {
        let one = N::one();
        points.iter().zip(chosen).all(|(p, &inside)| {
            let v = self.value(p);
            if inside {
                v.approx_eq(&self.level, tol)
            } else {
                (v + one.clone()).le_tol(&self.level, tol)
            }
        })
    }
}

/// Membership mask of `subset` after identifying equal vectors.
pub fn subset_mask<N: Scalar>(points: &[Vec<N>], subset: &[usize], tol: Tolerance) -> Result<Vec<bool>, ConvexError> {
    if let Some(&bad) = subset.iter().find(|&&i| i >= points.len()) {
        return Err(ConvexError::IndexOutOfRange(bad));
    }
    Ok(points
        .iter()
        .enumerate()
        .map(|(i, p)| subset.contains(&i) || subset.iter().any(|&e| vectors_equal(&points[e], p, tol)))
        .collect())
}

/// Functional exposing `conv(points[subset])` as a face of `conv(points)`,
/// minimizing the L1 norm of the coefficients; `None` when no such face exists.
pub fn supporting_functional<N: Scalar>(
    points: &[Vec<N>],
    subset: &[usize],
    tol: Tolerance,
) -> Result<Option<SupportingFunctional<N>>, ConvexError> {
    let k = dimension(points)?;
    if subset.is_empty() {
        return Err(ConvexError::EmptySubset);
    }
    let mask = subset_mask(points, subset, tol)?;
    if mask.iter().all(|&m| m) {
        return Ok(Some(SupportingFunctional { coefficients: vec![N::zero(); k], level: N::zero() }));
    }
    let (distinct, _) = dedup_points(points, tol);
    if independent(points, &distinct, tol) {
        // Every vertex subset of a simplex is a face; solve c·p = -[p outside].
        let rhs: Vec<N> = distinct.iter().map(|&i| if mask[i] { N::zero() } else { -N::one() }).collect();
        let rows: Vec<Vec<N>> = distinct.iter().map(|&i| points[i].clone()).collect();
        let c = solve_rows(&rows, &rhs, tol).expect("independent rows");
        return Ok(Some(SupportingFunctional { coefficients: c, level: N::zero() }));
    }
    // Unknowns: c (k, free), level (free), t (k, nonnegative) with |c_j| <= t_j.
    let width = 2 * k + 1;
    let mut bounds = vec![false; k + 1];
    bounds.extend(vec![true; k]);
    let mut lp = LinearProgram::with_bounds(bounds, tol);
    for (p, &inside) in points.iter().zip(&mask) {
        let mut row = vec![N::zero(); width];
        row[..k].clone_from_slice(p);
        row[k] = -N::one();
        if inside {
            lp.push(LinearConstraint::eq(row, N::zero()))?;
        } else {
            lp.push(LinearConstraint::le(row, -N::one()))?;
        }
    }
    for j in 0..k {
        let mut upper = vec![N::zero(); width];
        upper[j] = N::one();
        upper[k + 1 + j] = -N::one();
        lp.push(LinearConstraint::le(upper, N::zero()))?;
        let mut lower = vec![N::zero(); width];
        lower[j] = -N::one();
        lower[k + 1 + j] = -N::one();
        lp.push(LinearConstraint::le(lower, N::zero()))?;
    }
    let mut objective = vec![N::zero(); width];
    for t in objective.iter_mut().skip(k + 1) {
        *t = N::one();
    }
    Ok(match lp.solve(Some(&objective), Sense::Minimize)? {
        LpOutcome::Optimal { witness, .. } => {
            Some(SupportingFunctional { coefficients: witness[..k].to_vec(), level: witness[k].clone() })
        }
        _ => None,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FaceStatus {
    Empty,
    Face,
    NotFace,
}

impl FaceStatus {
    pub fn name(self) -> &'static str {
        match self {
            FaceStatus::Empty => "empty",
            FaceStatus::Face => "face",
            FaceStatus::NotFace => "not-face",
        }
    }
}

/// A point of the region written as `λ u + (1 - λ) w` with `0 < λ < 1`,
/// where the vertex `u` violates the region and `w` lies in the hull.
#[derive(Debug, Clone, PartialEq)]
pub struct NotFaceCertificate<N> {
    pub point: Vec<N>,
    pub outside_vertex: usize,
    pub lambda: N,
    pub other: Vec<N>,
    pub other_coefficients: Vec<N>,
}

impl<N: Scalar> NotFaceCertificate<N> {
    pub fn verify(&self, points: &[Vec<N>], region: &[LinearConstraint<N>], tol: Tolerance) -> bool {
        let k = self.point.len();
        let Some(u) = points.get(self.outside_vertex) else {
            return false;
        };
        if self.other_coefficients.len() != points.len() {
            return false;
        }
        let zero = N::zero();
        let one = N::one();
        let lambda_ok = zero.lt_tol(&self.lambda, tol) && self.lambda.lt_tol(&one, tol);
        let coeffs_ok = self.other_coefficients.iter().all(|c| zero.le_tol(c, tol))
            && self.other_coefficients.iter().fold(N::zero(), |a, c| a + c.clone()).approx_eq(&one, tol);
        let w_ok = vectors_equal(&combine(points, &self.other_coefficients, k), &self.other, tol);
        let mix: Vec<N> = u
            .iter()
            .zip(&self.other)
            .map(|(a, b)| self.lambda.clone() * a.clone() + (one.clone() - self.lambda.clone()) * b.clone())
            .collect();
        let z_ok = vectors_equal(&mix, &self.point, tol);
        let inside = region.iter().all(|c| c.satisfied_by(&self.point, tol));
        let outside = !region.iter().all(|c| c.satisfied_by(u, tol));
        lambda_ok && coeffs_ok && w_ok && z_ok && inside && outside
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FaceVerdict<N> {
    pub status: FaceStatus,
    /// Hull points satisfying the region.
    pub vertices: Vec<usize>,
    pub functional: Option<SupportingFunctional<N>>,
    pub certificate: Option<NotFaceCertificate<N>>,
}

impl<N: Scalar> FaceVerdict<N> {
    pub fn is_face(&self) -> bool {
        self.status == FaceStatus::Face
    }

    /// Re-checks whichever certificate the verdict carries.
    pub fn verify(&self, points: &[Vec<N>], region: &[LinearConstraint<N>], tol: Tolerance) -> bool {
        match self.status {
            FaceStatus::Empty => self.vertices.is_empty(),
            FaceStatus::Face => {
                let Some(f) = &self.functional else {
                    return false;
                };
                let Ok(mask) = subset_mask(points, &self.vertices, tol) else {
                    return false;
                };
                f.verify(points, &mask, tol)
                    && self.vertices.iter().all(|&e| region.iter().all(|c| c.satisfied_by(&points[e], tol)))
            }
            FaceStatus::NotFace => self.certificate.as_ref().is_some_and(|c| c.verify(points, region, tol)),
        }
    }
}

fn check_region<N>(region: &[LinearConstraint<N>], k: usize) -> Result<(), ConvexError> {
    for c in region {
        if c.coefficients.len() != k {
            return Err(ConvexError::Dimension { expected: k, found: c.coefficients.len() });
        }
    }
    Ok(())
}

/// Certificate from a hull representation that puts weight on a vertex
/// outside the region.
fn split_off<N: Scalar>(
    points: &[Vec<N>],
    coefficients: &[N],
    outside: &[bool],
    k: usize,
    tol: Tolerance,
) -> Option<NotFaceCertificate<N>> {
    let one = N::one();
    let i = (0..points.len())
        .find(|&i| outside[i] && !coefficients[i].is_zero_tol(tol) && coefficients[i].lt_tol(&one, tol))?;
    let lambda = coefficients[i].clone();
    let rest = one.clone() - lambda.clone();
    let other_coefficients: Vec<N> = coefficients
        .iter()
        .enumerate()
        .map(|(j, c)| if j == i { N::zero() } else { c.clone() / rest.clone() })
        .collect();
    Some(NotFaceCertificate {
        point: combine(points, coefficients, k),
        outside_vertex: i,
        lambda,
        other: combine(points, &other_coefficients, k),
        other_coefficients,
    })
}

/// Decides whether `conv(points) ∩ region` is a face of `conv(points)`.
pub fn is_face_region<N: Scalar>(
    points: &[Vec<N>],
    region: &[LinearConstraint<N>],
    tol: Tolerance,
) -> Result<FaceVerdict<N>, ConvexError> {
    let k = dimension(points)?;
    check_region(region, k)?;
    let n = points.len();
    let feasible = hull_program(points, region, tol).solve(None, Sense::Minimize)?;
    let LpOutcome::Optimal { witness: feasible_point, .. } = feasible else {
        return Ok(FaceVerdict { status: FaceStatus::Empty, vertices: vec![], functional: None, certificate: None });
    };
    let inside: Vec<bool> = points.iter().map(|p| region.iter().all(|c| c.satisfied_by(p, tol))).collect();
    let outside: Vec<bool> = inside.iter().map(|b| !b).collect();
    let vertices: Vec<usize> = (0..n).filter(|&i| inside[i]).collect();
    let not_face = |certificate: NotFaceCertificate<N>| FaceVerdict {
        status: FaceStatus::NotFace,
        vertices: vertices.clone(),
        functional: None,
        certificate: Some(certificate),
    };

    // Midpoint screen.
    let half = N::one() / N::from_i64(2);
    for u in (0..n).filter(|&i| outside[i]) {
        for w in 0..n {
            if w == u {
                continue;
            }
            let mid: Vec<N> =
                points[u].iter().zip(&points[w]).map(|(a, b)| (a.clone() + b.clone()) * half.clone()).collect();
            if vectors_equal(&mid, &points[u], tol) || !region.iter().all(|c| c.satisfied_by(&mid, tol)) {
                continue;
            }
            let mut other_coefficients = vec![N::zero(); n];
            other_coefficients[w] = N::one();
            return Ok(not_face(NotFaceCertificate {
                point: mid,
                outside_vertex: u,
                lambda: half,
                other: points[w].clone(),
                other_coefficients,
            }));
        }
    }

    if vertices.is_empty() {
        let cert = split_off(points, &feasible_point, &outside, k, tol).expect("a region point without hull vertices");
        return Ok(not_face(cert));
    }

    let Some(functional) = supporting_functional(points, &vertices, tol)? else {
        return Ok(not_face(ray_certificate(points, &vertices, &outside, k, tol)?));
    };

    // Every region point must lie on the exposed face: c·x = level.
    let objective: Vec<N> = points.iter().map(|p| functional.value(p)).collect();
    let lp = hull_program(points, region, tol);
    if let LpOutcome::Optimal { value, witness } = lp.solve(Some(&objective), Sense::Minimize)? {
        if value.lt_tol(&functional.level, tol) {
            let cert = split_off(points, &witness, &outside, k, tol).expect("a region point off the exposed face");
            return Ok(not_face(cert));
        }
    }
    Ok(FaceVerdict { status: FaceStatus::Face, vertices, functional: Some(functional), certificate: None })
}

/// When the region's vertices expose no face, the centroid of those vertices
/// sits inside a larger face; walking away from some outside vertex stays in
/// the hull for a positive distance.
fn ray_certificate<N: Scalar>(
    points: &[Vec<N>],
    vertices: &[usize],
    outside: &[bool],
    k: usize,
    tol: Tolerance,
) -> Result<NotFaceCertificate<N>, ConvexError> {
    let n = points.len();
    let count = N::from_i64(vertices.len() as i64);
    let mut centroid = vec![N::zero(); k];
    for &e in vertices {
        for (c, x) in centroid.iter_mut().zip(&points[e]) {
            *c = c.clone() + x.clone() / count.clone();
        }
    }
    for u in (0..n).filter(|&i| outside[i]) {
        // Unknowns μ (n, nonnegative) and t: Σ μ_i v_i - t (z - u) = z, Σ μ = 1, t <= 1.
        let mut lp = LinearProgram::nonnegative(n + 1, tol);
        let mut sum = vec![N::one(); n];
        sum.push(N::zero());
        lp.push(LinearConstraint::eq(sum, N::one()))?;
        for j in 0..k {
            let mut row: Vec<N> = points.iter().map(|p| p[j].clone()).collect();
            row.push(points[u][j].clone() - centroid[j].clone());
            lp.push(LinearConstraint::eq(row, centroid[j].clone()))?;
        }
        let mut cap = vec![N::zero(); n];
        cap.push(N::one());
        lp.push(LinearConstraint::le(cap.clone(), N::one()))?;
        let LpOutcome::Optimal { value: t, witness } = lp.solve(Some(&cap), Sense::Maximize)? else {
            continue;
        };
        if t.is_zero_tol(tol) {
            continue;
        }
        let lambda = t.clone() / (N::one() + t);
        let other_coefficients = witness[..n].to_vec();
        return Ok(NotFaceCertificate {
            point: centroid,
            outside_vertex: u,
            lambda,
            other: combine(points, &other_coefficients, k),
            other_coefficients,
        });
    }
    unreachable!("vertices that expose no face lie inside a larger face")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat, Rational};

    fn pts(raw: &[&[i64]]) -> Vec<Vec<Rational>> {
        raw.iter().map(|p| p.iter().map(|&x| int(x)).collect()).collect()
    }

    fn square() -> Vec<Vec<Rational>> {
        pts(&[&[0, 0], &[0, 1], &[1, 0], &[1, 1]])
    }

    const EX: Tolerance = Tolerance::EXACT;

    #[test]
    fn hull_membership() {
        let seg = pts(&[&[0], &[1]]);
        assert_eq!(in_hull(&[rat(1, 2)], &seg, EX).unwrap(), Some(vec![rat(1, 2), rat(1, 2)]));
        let tri = pts(&[&[0, 1, 1], &[1, 0, 1], &[1, 1, 0]]);
        assert_eq!(in_hull(&[int(1), int(1), int(1)], &tri, EX).unwrap(), None);
        assert!(in_hull(&tri[1], &tri, EX).unwrap().is_some());
        assert_eq!(in_hull::<Rational>(&[int(0)], &[], EX), Err(ConvexError::EmptySet));
    }

    #[test]
    fn vertices() {
        let line = vec![vec![int(0)], vec![rat(1, 2)], vec![int(1)]];
        assert_eq!(extreme_subset(&line, EX).unwrap(), vec![0, 2]);
        let mut sq = square();
        sq.push(vec![rat(1, 2), rat(1, 2)]);
        assert_eq!(extreme_subset(&sq, EX).unwrap(), vec![0, 1, 2, 3]);
        assert_eq!(extreme_subset(&pts(&[&[3, 4]]), EX).unwrap(), vec![0]);
        let dup = pts(&[&[0], &[1], &[0]]);
        assert_eq!(extreme_subset(&dup, EX).unwrap(), vec![0, 1]);
    }

    #[test]
    fn supporting_functionals() {
        let sq = square();
        let f = supporting_functional(&sq, &[0, 1], EX).unwrap().unwrap();
        assert_eq!(f, SupportingFunctional { coefficients: vec![int(-1), int(0)], level: int(0) });
        assert!(f.verify(&sq, &[true, true, false, false], EX));
        assert_eq!(supporting_functional(&sq, &[0, 3], EX).unwrap(), None);
        let all = supporting_functional(&sq, &[0, 1, 2, 3], EX).unwrap().unwrap();
        assert!(all.is_trivial());
        assert_eq!(supporting_functional(&sq, &[7], EX), Err(ConvexError::IndexOutOfRange(7)));
    }

    #[test]
    fn left_edge_is_a_face() {
        let sq = square();
        let region = [LinearConstraint::le(vec![int(1), int(0)], int(0))];
        let v = is_face_region(&sq, &region, EX).unwrap();
        assert_eq!(v.status, FaceStatus::Face);
        assert_eq!(v.vertices, vec![0, 1]);
        assert!(v.verify(&sq, &region, EX));
    }

    #[test]
    fn slab_of_a_segment_is_not_a_face() {
        let seg = pts(&[&[0], &[1]]);
        let region = [LinearConstraint::le(vec![int(1)], rat(2, 5))];
        let v = is_face_region(&seg, &region, EX).unwrap();
        assert_eq!(v.status, FaceStatus::NotFace);
        assert_eq!(v.vertices, vec![0]);
        let cert = v.certificate.as_ref().unwrap();
        assert_eq!(cert.point, vec![rat(2, 5)]);
        assert_eq!(cert.outside_vertex, 1);
        assert!(v.verify(&seg, &region, EX));
    }

    #[test]
    fn midpoint_screen() {
        let line = vec![vec![int(0)], vec![rat(1, 2)], vec![int(1)]];
        let region = [LinearConstraint::le(vec![int(1)], rat(1, 2))];
        let v = is_face_region(&line, &region, EX).unwrap();
        assert_eq!(v.status, FaceStatus::NotFace);
        assert_eq!(v.certificate.as_ref().unwrap().lambda, rat(1, 2));
        assert!(v.verify(&line, &region, EX));
    }

    #[test]
    fn empty_and_whole_regions() {
        let sq = square();
        let region = [LinearConstraint::ge(vec![int(1), int(1)], int(3))];
        assert_eq!(is_face_region(&sq, &region, EX).unwrap().status, FaceStatus::Empty);
        let v = is_face_region(&sq, &[], EX).unwrap();
        assert_eq!(v.status, FaceStatus::Face);
        assert_eq!(v.vertices, vec![0, 1, 2, 3]);
    }

    #[test]
    fn region_without_vertices_and_diagonal() {
        let sq = square();
        let region = [LinearConstraint::eq(vec![int(1), int(0)], rat(1, 3))];
        let v = is_face_region(&sq, &region, EX).unwrap();
        assert_eq!(v.status, FaceStatus::NotFace);
        assert!(v.verify(&sq, &region, EX));
        // The diagonal through two opposite corners reaches only those corners.
        let region = [LinearConstraint::eq(vec![int(1), int(-1)], int(0))];
        let v = is_face_region(&sq, &region, EX).unwrap();
        assert_eq!(v.status, FaceStatus::NotFace);
        assert!(v.verify(&sq, &region, EX));
    }

    #[test]
    fn ray_certificate_when_vertices_expose_nothing() {
        // Opposite corners of the square expose nothing on their own.
        let sq = square();
        let v = ray_certificate(&sq, &[0, 3], &[false, true, true, false], 2, EX).unwrap();
        let region = [LinearConstraint::eq(vec![int(1), int(-1)], int(0))];
        assert!(v.verify(&sq, &region, EX));
    }

    #[test]
    fn float_face() {
        let seg = vec![vec![0.0], vec![1.0]];
        let region = [LinearConstraint::le(vec![1.0], 1e-12)];
        let v = is_face_region(&seg, &region, Tolerance(1e-9)).unwrap();
        assert_eq!(v.status, FaceStatus::Face);
    }
}
