use std::collections::BTreeSet;

use linlogic::convex::{extreme_subset, is_face_region, FaceStatus};
use linlogic::lp::{LinearConstraint, Relation};
use linlogic::scalar::{int, rat};
use linlogic::{Rational, Tolerance};
use num_traits::{Signed, Zero};
use proptest::prelude::*;

const EXACT: Tolerance = Tolerance::EXACT;

fn point_set() -> impl Strategy<Value = Vec<Vec<Rational>>> {
    (1usize..=3).prop_flat_map(|k| prop::collection::vec(prop::collection::vec((-4i64..=4).prop_map(|v| rat(v, 2)), k), 1..=8))
}

fn region(k: usize) -> impl Strategy<Value = Vec<LinearConstraint<Rational>>> {
    prop::collection::vec(
        (prop::collection::vec(-2i64..=2, k), -3i64..=3, any::<bool>()).prop_map(|(c, b, eq)| {
            let coeffs = c.into_iter().map(int).collect();
            if eq {
                LinearConstraint::eq(coeffs, rat(b, 2))
            } else {
                LinearConstraint::le(coeffs, rat(b, 2))
            }
        }),
        1..=2,
    )
}

/// Unique solution of `rows · λ = rhs` when the columns are independent.
fn solve_unique(mut rows: Vec<Vec<Rational>>, mut rhs: Vec<Rational>) -> Option<Vec<Rational>> {
    let m = rows[0].len();
    let mut pivot_row = 0;
    let mut pivots = Vec::new();
    for col in 0..m {
        let r = (pivot_row..rows.len()).find(|&r| !rows[r][col].is_zero())?;
        rows.swap(pivot_row, r);
        rhs.swap(pivot_row, r);
        for other in 0..rows.len() {
            if other != pivot_row && !rows[other][col].is_zero() {
                let f = rows[other][col].clone() / rows[pivot_row][col].clone();
                for c in 0..m {
                    let v = rows[pivot_row][c].clone() * f.clone();
                    rows[other][c] -= v;
                }
                let v = rhs[pivot_row].clone() * f;
                rhs[other] -= v;
            }
        }
        pivots.push(pivot_row);
        pivot_row += 1;
    }
    if rhs[pivot_row..].iter().any(|v| !v.is_zero()) {
        return None;
    }
    Some((0..m).map(|c| rhs[pivots[c]].clone() / rows[pivots[c]][c].clone()).collect())
}

fn subsets(n: usize, max: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for i in 0..n {
        let grown: Vec<Vec<usize>> =
            out.iter().filter(|s| s.len() < max).map(|s| s.iter().copied().chain([i]).collect()).collect();
        out.extend(grown);
    }
    out.retain(|s| !s.is_empty());
    out
}

/// Extreme points by Carathéodory: `p` is not extreme iff it is a convex
/// combination of at most `k + 1` other distinct points.
fn oracle_extreme(points: &[Vec<Rational>]) -> BTreeSet<Vec<Rational>> {
    let distinct: Vec<Vec<Rational>> = points.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
    let k = distinct[0].len();
    distinct
        .iter()
        .filter(|p| {
            let others: Vec<&Vec<Rational>> = distinct.iter().filter(|q| q != p).collect();
            !subsets(others.len(), k + 1).into_iter().any(|s| {
                let mut rows: Vec<Vec<Rational>> = (0..k).map(|d| s.iter().map(|&i| others[i][d].clone()).collect()).collect();
                rows.push(vec![int(1); s.len()]);
                let mut rhs: Vec<Rational> = p.to_vec();
                rhs.push(int(1));
                solve_unique(rows, rhs).is_some_and(|l| l.iter().all(|x| !x.is_negative()))
            })
        })
        .cloned()
        .collect()
}

fn vertex_set(points: &[Vec<Rational>], idx: &[usize]) -> BTreeSet<Vec<Rational>> {
    idx.iter().map(|&i| points[i].clone()).collect()
}

fn check_face(points: &[Vec<Rational>], region: &[LinearConstraint<Rational>]) -> (FaceStatus, BTreeSet<Vec<Rational>>) {
    let v = is_face_region(points, region, EXACT).unwrap();
    assert!(v.verify(points, region, EXACT), "certificate does not verify");
    (v.status, vertex_set(points, &v.vertices))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn extreme_subset_matches_the_oracle(points in point_set()) {
        let found = vertex_set(&points, &extreme_subset(&points, EXACT).unwrap());
        prop_assert_eq!(found, oracle_extreme(&points));
    }

    #[test]
    fn face_verdicts_verify_and_obey_the_midpoint_law(
        (points, region) in point_set().prop_flat_map(|p| { let k = p[0].len(); (Just(p), region(k)) })
    ) {
        let v = is_face_region(&points, &region, EXACT).unwrap();
        prop_assert!(v.verify(&points, &region, EXACT));
        if v.is_face() {
            let inside = |p: &Vec<Rational>| region.iter().all(|c| c.satisfied_by(p, EXACT));
            for u in &points {
                for w in &points {
                    let mid: Vec<Rational> = u.iter().zip(w).map(|(a, b)| (a + b) / int(2)).collect();
                    if inside(&mid) {
                        prop_assert!(inside(u) && inside(w));
                    }
                }
            }
        }
    }

    #[test]
    fn face_verdicts_are_stable(
        (points, region, dup, scale, shift) in point_set().prop_flat_map(|p| {
            let k = p[0].len();
            let n = p.len();
            (Just(p), region(k), prop::collection::vec(0..n, 0..=3), 1i64..=5, 0..k)
        })
    ) {
        let base = check_face(&points, &region);

        let mut doubled = points.clone();
        doubled.extend(dup.iter().map(|&i| points[i].clone()));
        prop_assert_eq!(check_face(&doubled, &region), base.clone());

        let scaled: Vec<LinearConstraint<Rational>> = region
            .iter()
            .map(|c| {
                let f = rat(scale, 3);
                let coeffs = c.coefficients.iter().map(|x| x * &f).collect();
                LinearConstraint::new(coeffs, c.relation, &c.bound * &f)
            })
            .collect();
        prop_assert_eq!(check_face(&points, &scaled), base.clone());

        let k = points[0].len();
        let rotate = |v: &Vec<Rational>| -> Vec<Rational> { (0..k).map(|i| v[(i + shift) % k].clone()).collect() };
        let moved: Vec<Vec<Rational>> = points.iter().map(rotate).collect();
        let moved_region: Vec<LinearConstraint<Rational>> =
            region.iter().map(|c| LinearConstraint::new(rotate(&c.coefficients), c.relation, c.bound.clone())).collect();
        let (status, vertices) = check_face(&moved, &moved_region);
        prop_assert_eq!(status, base.0);
        prop_assert_eq!(vertices, base.1.iter().map(rotate).collect::<BTreeSet<_>>());
    }
}

#[test]
fn segment_with_interior_cut_is_not_a_face() {
    let points = vec![vec![int(0)], vec![int(4)]];
    let region = vec![LinearConstraint::new(vec![int(1)], Relation::Le, int(2))];
    let v = is_face_region(&points, &region, EXACT).unwrap();
    assert_eq!(v.status, FaceStatus::NotFace);
    assert!(v.verify(&points, &region, EXACT));
}
