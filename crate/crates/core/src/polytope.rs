//! Model polytopes of the 1K model and interior-membership tests.
//!
//! `B_n` is the convex hull of all degree vectors `n^(1)(g)`, `A_{n-1}` its
//! projection onto the first `n - 1` coordinates. The MLE exists exactly when
//! the mean observed statistic lies in the interior of the model polytope.
//!
//! Membership is decided exactly: `x` is interior iff the vertex set is
//! full-dimensional and `x` is a convex combination of the vertices with every
//! weight strictly positive. The largest achievable minimum weight is found
//! with a rational LP.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lp::{maximize, rank, LpOutcome, Q};

/// Barycentric margins at or below this are treated as boundary for float input.
pub const BOUNDARY_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PolytopeLabel {
    /// `B_n`, hull of full degree vectors.
    B(usize),
    /// `A_{n-1}`, hull of reduced degree vectors.
    A(usize),
    /// Hull of an arbitrary finite point set.
    Hull,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PolytopeSpec {
    pub dimension: usize,
    pub vertices: Vec<Vec<Q>>,
    pub label: PolytopeLabel,
}

/// Three-way answer for float queries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Membership {
    Interior,
    NotInterior,
    /// Inside, but within [`BOUNDARY_TOLERANCE`] of the boundary.
    BoundaryUndetermined,
}

pub fn q(v: i64) -> Q {
    BigRational::from_integer(BigInt::from(v))
}

fn unit(len: usize, entries: &[(usize, i64)]) -> Vec<Q> {
    let mut v = vec![Q::zero(); len];
    for &(i, x) in entries {
        v[i] += q(x);
    }
    v
}

/// Vertex set of `B_n` (n even: all `e_k`; n odd: `e_l` for even `l` and
/// `e_{kl}` for odd `k`, even `l`).
pub fn polytope_b(n: usize) -> Result<PolytopeSpec> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("B_n needs n >= 2, got {n}")));
    }
    let nn = n as i64;
    let mut vertices = Vec::new();
    if n.is_multiple_of(2) {
        vertices.extend((0..n).map(|k| unit(n, &[(k, nn)])));
    } else {
        vertices.extend((0..n).step_by(2).map(|l| unit(n, &[(l, nn)])));
        for k in (1..n).step_by(2) {
            for l in (0..n).step_by(2) {
                vertices.push(unit(n, &[(k, nn - 1), (l, 1)]));
            }
        }
    }
    Ok(PolytopeSpec { dimension: n, vertices, label: PolytopeLabel::B(n) })
}

/// `A_{n-1}`: `B_n` projected away from its last coordinate, keeping only the
/// extreme images.
pub fn polytope_a(n: usize) -> Result<PolytopeSpec> {
    let b = polytope_b(n)?;
    let projected = b.vertices.into_iter().map(|mut v| {
        v.pop();
        v
    });
    let mut hull = hull_of(n - 1, projected.collect());
    hull.label = PolytopeLabel::A(n);
    Ok(hull)
}

/// Hull of a point set, reduced to its extreme points (first occurrence order).
pub fn hull_of(dimension: usize, points: Vec<Vec<Q>>) -> PolytopeSpec {
    let mut distinct: Vec<Vec<Q>> = Vec::new();
    for p in points {
        if !distinct.contains(&p) {
            distinct.push(p);
        }
    }
    let keep: Vec<bool> = (0..distinct.len()).map(|i| is_extreme(&distinct, i)).collect();
    let vertices = distinct.into_iter().zip(keep).filter(|(_, k)| *k).map(|(v, _)| v).collect();
    PolytopeSpec { dimension, vertices, label: PolytopeLabel::Hull }
}

/// True when `points[idx]` is not a convex combination of the other points.
pub fn is_extreme(points: &[Vec<Q>], idx: usize) -> bool {
    let others: Vec<&Vec<Q>> =
        points.iter().enumerate().filter(|&(i, _)| i != idx).map(|(_, p)| p).collect();
    if others.is_empty() {
        return true;
    }
    let d = points[idx].len();
    let mut a: Vec<Vec<Q>> = (0..d).map(|r| others.iter().map(|p| p[r].clone()).collect()).collect();
    a.push(vec![Q::one(); others.len()]);
    let mut b = points[idx].clone();
    b.push(Q::one());
    matches!(maximize(&a, &b, &vec![Q::zero(); others.len()]), LpOutcome::Infeasible)
}

/// Largest `t` such that `x = sum w_i p_i` with `sum w_i = 1` and every `w_i >= t`;
/// `None` when `x` is outside the hull.
pub fn max_margin(points: &[Vec<Q>], x: &[Q]) -> Option<Q> {
    let m = points.len();
    if m == 0 {
        return None;
    }
    let d = x.len();
    // w_i = mu_i + t, mu_i >= 0, t >= 0
    let mut a: Vec<Vec<Q>> = Vec::with_capacity(d + 1);
    for r in 0..d {
        let mut row: Vec<Q> = points.iter().map(|p| p[r].clone()).collect();
        let s = row.iter().fold(Q::zero(), |acc, v| acc + v);
        row.push(s);
        a.push(row);
    }
    let mut last = vec![Q::one(); m];
    last.push(q(m as i64));
    a.push(last);
    let mut b = x.to_vec();
    b.push(Q::one());
    let mut c = vec![Q::zero(); m];
    c.push(Q::one());
    match maximize(&a, &b, &c) {
        LpOutcome::Optimal { value, .. } => Some(value),
        _ => None,
    }
}

/// Affine dimension of a point set.
pub fn affine_dimension(points: &[Vec<Q>]) -> usize {
    let Some(base) = points.first() else {
        return 0;
    };
    let diffs: Vec<Vec<Q>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(base).map(|(a, b)| a - b).collect())
        .collect();
    rank(&diffs)
}

/// Exact test: `x` lies in the interior of the hull of `points` in `R^d`.
pub fn interior_of_points(points: &[Vec<Q>], x: &[Q]) -> bool {
    if points.is_empty() || affine_dimension(points) < x.len() {
        return false;
    }
    max_margin(points, x).is_some_and(|t| t.is_positive())
}

/// Exact interior test for a rational point.
pub fn interior_membership(p: &PolytopeSpec, x: &[Q]) -> Result<bool> {
    if x.len() != p.dimension {
        return Err(Error::SizeMismatch { expected: p.dimension, found: x.len() });
    }
    Ok(interior_of_points(&p.vertices, x))
}

pub fn to_rational(x: f64) -> Result<Q> {
    BigRational::from_f64(x)
        .ok_or_else(|| Error::InvalidArgument(format!("{x} is not a finite number")))
}

/// Interior test for a float point, with a boundary band of [`BOUNDARY_TOLERANCE`].
pub fn interior_membership_f64(p: &PolytopeSpec, x: &[f64]) -> Result<Membership> {
    if x.len() != p.dimension {
        return Err(Error::SizeMismatch { expected: p.dimension, found: x.len() });
    }
    let xq = x.iter().map(|&v| to_rational(v)).collect::<Result<Vec<_>>>()?;
    if affine_dimension(&p.vertices) < p.dimension {
        return Ok(Membership::NotInterior);
    }
    let tol = to_rational(BOUNDARY_TOLERANCE)?;
    Ok(match max_margin(&p.vertices, &xq) {
        None => Membership::NotInterior,
        Some(t) if t > tol => Membership::Interior,
        Some(t) if t.is_zero() => Membership::NotInterior,
        Some(_) => Membership::BoundaryUndetermined,
    })
}

/// A violated condition of the closed-form 1K existence criterion.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "clause", rename_all = "kebab-case")]
pub enum Clause {
    /// `n̄_k = 0`.
    ZeroCoordinate { k: usize },
    /// `sum_k n̄_k >= n` (no graph with a node of degree `n - 1` observed).
    SumNotBelowN,
    /// Odd `n`: the mean number of odd-degree nodes `sum_{k odd} n̄_k` reached `n - 1`.
    OddMassAtBound,
    /// Odd `n`, per-coordinate form: `n̄_k >= n - 1` for an odd `k`.
    OddCoordinateAtBound { k: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExistenceVerdict {
    pub exists: bool,
    pub failed: Vec<Clause>,
}

fn check_mean(n: usize, avg: &[Q]) -> Result<()> {
    if n < 2 || avg.len() != n - 1 {
        return Err(Error::InvalidArgument(format!(
            "reduced mean degree vector for n = {n} needs {} entries, got {}",
            n.saturating_sub(1),
            avg.len()
        )));
    }
    let sum = avg.iter().fold(Q::zero(), |acc, v| acc + v);
    if avg.iter().any(Signed::is_negative) || sum > q(n as i64) {
        return Err(Error::InvalidArgument("mean degree counts must be >= 0 and sum to <= n".into()));
    }
    Ok(())
}

fn common_clauses(n: usize, avg: &[Q]) -> Vec<Clause> {
    let mut failed: Vec<Clause> = avg
        .iter()
        .enumerate()
        .filter(|(_, v)| v.is_zero())
        .map(|(k, _)| Clause::ZeroCoordinate { k })
        .collect();
    let sum = avg.iter().fold(Q::zero(), |acc, v| acc + v);
    if sum >= q(n as i64) {
        failed.push(Clause::SumNotBelowN);
    }
    failed
}

/// Closed-form 1K existence criterion.
///
/// `n` even: every `n̄_k > 0` and `sum n̄_k < n`. `n` odd: additionally the mean
/// count of odd-degree nodes `sum_{k odd} n̄_k < n - 1`. Every graph has an even
/// number of odd-degree nodes, so for odd `n` that sum is at most `n - 1` and
/// the hyperplane where it equals `n - 1` carries a facet of `A_{n-1}`.
pub fn existence_verdict_1k(n: usize, avg: &[Q]) -> Result<ExistenceVerdict> {
    check_mean(n, avg)?;
    let mut failed = common_clauses(n, avg);
    if n % 2 == 1 {
        let odd = avg.iter().skip(1).step_by(2).fold(Q::zero(), |acc, v| acc + v);
        if odd >= q(n as i64 - 1) {
            failed.push(Clause::OddMassAtBound);
        }
    }
    Ok(ExistenceVerdict { exists: failed.is_empty(), failed })
}

/// The criterion with the odd-`n` bound applied coordinate by coordinate
/// (`n̄_k < n - 1` for each odd `k`). Agrees with [`existence_verdict_1k`] for
/// `n <= 4`; for odd `n >= 5` it accepts some boundary points of `A_{n-1}`.
pub fn existence_verdict_1k_per_coordinate(n: usize, avg: &[Q]) -> Result<ExistenceVerdict> {
    check_mean(n, avg)?;
    let mut failed = common_clauses(n, avg);
    if n % 2 == 1 {
        let bound = q(n as i64 - 1);
        for k in (1..n - 1).step_by(2) {
            if avg[k] >= bound {
                failed.push(Clause::OddCoordinateAtBound { k });
            }
        }
    }
    Ok(ExistenceVerdict { exists: failed.is_empty(), failed })
}

pub fn mle_exists_1k(n: usize, avg: &[Q]) -> Result<bool> {
    Ok(existence_verdict_1k(n, avg)?.exists)
}

pub fn mle_exists_1k_f64(n: usize, avg: &[f64]) -> Result<bool> {
    let xq = avg.iter().map(|&v| to_rational(v)).collect::<Result<Vec<_>>>()?;
    mle_exists_1k(n, &xq)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qv(v: &[(i64, i64)]) -> Vec<Q> {
        v.iter().map(|&(a, b)| Q::new(a.into(), b.into())).collect()
    }

    fn ints(v: &[i64]) -> Vec<Q> {
        v.iter().map(|&x| q(x)).collect()
    }

    fn sorted(mut v: Vec<Vec<Q>>) -> Vec<Vec<Q>> {
        v.sort();
        v
    }

    #[test]
    fn b_vertices() {
        let b3 = polytope_b(3).unwrap();
        let want = vec![ints(&[3, 0, 0]), ints(&[0, 0, 3]), ints(&[1, 2, 0]), ints(&[0, 2, 1])];
        assert_eq!(sorted(b3.vertices), sorted(want));
        let b4 = polytope_b(4).unwrap();
        assert_eq!(b4.vertices.len(), 4);
        assert!(b4.vertices.contains(&ints(&[0, 0, 0, 4])));
        let b2 = polytope_b(2).unwrap();
        assert_eq!(sorted(b2.vertices), vec![ints(&[0, 2]), ints(&[2, 0])]);
        assert!(polytope_b(1).is_err());
    }

    #[test]
    fn a_vertices() {
        let a3 = polytope_a(3).unwrap();
        let want = vec![ints(&[3, 0]), ints(&[0, 2]), ints(&[1, 2]), ints(&[0, 0])];
        assert_eq!(sorted(a3.vertices), sorted(want));
        let a4 = polytope_a(4).unwrap();
        let want = vec![ints(&[4, 0, 0]), ints(&[0, 4, 0]), ints(&[0, 0, 4]), ints(&[0, 0, 0])];
        assert_eq!(sorted(a4.vertices), sorted(want));
        let a2 = polytope_a(2).unwrap();
        assert_eq!(sorted(a2.vertices), vec![ints(&[0]), ints(&[2])]);
    }

    #[test]
    fn membership_examples() {
        let a3 = polytope_a(3).unwrap();
        assert!(interior_membership(&a3, &qv(&[(1, 3), (4, 3)])).unwrap());
        for v in &a3.vertices {
            assert!(!interior_membership(&a3, v).unwrap());
        }
        let a4 = polytope_a(4).unwrap();
        assert!(interior_membership(&a4, &ints(&[1, 1, 1])).unwrap());
        assert!(!interior_membership(&a4, &ints(&[0, 1, 1])).unwrap());
        assert!(interior_membership(&a4, &ints(&[1, 1])).is_err());
    }

    #[test]
    fn float_membership_band() {
        let a3 = polytope_a(3).unwrap();
        assert_eq!(interior_membership_f64(&a3, &[1.0 / 3.0, 4.0 / 3.0]).unwrap(), Membership::Interior);
        assert_eq!(interior_membership_f64(&a3, &[0.0, 1.0]).unwrap(), Membership::NotInterior);
        assert_eq!(interior_membership_f64(&a3, &[5.0, 1.0]).unwrap(), Membership::NotInterior);
        assert_eq!(
            interior_membership_f64(&a3, &[1e-12, 1.0]).unwrap(),
            Membership::BoundaryUndetermined
        );
    }

    #[test]
    fn lower_dimensional_hull_has_no_interior() {
        let seg = vec![ints(&[0, 0]), ints(&[2, 2])];
        assert!(!interior_of_points(&seg, &ints(&[1, 1])));
        assert!(interior_of_points(&[ints(&[0]), ints(&[3])], &ints(&[1])));
    }

    #[test]
    fn existence_examples() {
        assert!(mle_exists_1k(3, &qv(&[(1, 3), (4, 3)])).unwrap());
        let v = existence_verdict_1k(3, &qv(&[(1, 3), (2, 1)])).unwrap();
        assert!(!v.exists);
        assert_eq!(v.failed, vec![Clause::OddMassAtBound]);
        let v = existence_verdict_1k_per_coordinate(3, &qv(&[(1, 3), (2, 1)])).unwrap();
        assert_eq!(v.failed, vec![Clause::OddCoordinateAtBound { k: 1 }]);
        assert!(mle_exists_1k(3, &ints(&[1])).is_err());
        assert!(mle_exists_1k(3, &ints(&[-1, 1])).is_err());
        assert!(mle_exists_1k_f64(4, &[1.0, 1.0, 1.0]).unwrap());
    }

    #[test]
    fn per_coordinate_form_accepts_a_boundary_point_at_n5() {
        // means of four 5-node graphs, each with four odd-degree nodes:
        // (0,2,1,2,0), (1,4,0,0,0), (1,0,0,4,0), (0,4,0,0,1)
        let avg = qv(&[(1, 2), (5, 2), (1, 4), (3, 2)]);
        assert!(existence_verdict_1k_per_coordinate(5, &avg).unwrap().exists);
        assert!(!mle_exists_1k(5, &avg).unwrap());
        let a5 = polytope_a(5).unwrap();
        assert!(!interior_membership(&a5, &avg).unwrap());
    }
}
