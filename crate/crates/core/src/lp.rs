//! Dense two-phase simplex over exact rationals (Bland's rule).
//!
//! Sized for the polytope oracles: tens of rows, a few hundred columns.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Q = BigRational;

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Infeasible,
    Unbounded,
    Optimal { value: Q, x: Vec<Q> },
}

struct Tableau {
    rows: Vec<Vec<Q>>,
    rhs: Vec<Q>,
    basis: Vec<usize>,
    /// Reduced costs of the current objective (maximization).
    obj: Vec<Q>,
}

impl Tableau {
    fn pivot(&mut self, r: usize, col: usize) {
        let p = self.rows[r][col].clone();
        for v in self.rows[r].iter_mut() {
            *v /= &p;
        }
        self.rhs[r] /= &p;
        let prow = self.rows[r].clone();
        let prhs = self.rhs[r].clone();
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][col].is_zero() {
                continue;
            }
            let f = self.rows[i][col].clone();
            for (v, pv) in self.rows[i].iter_mut().zip(&prow) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
            self.rhs[i] -= &f * &prhs;
        }
        if !self.obj[col].is_zero() {
            let f = self.obj[col].clone();
            for (v, pv) in self.obj.iter_mut().zip(&prow) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
        }
        self.basis[r] = col;
    }

    fn set_objective(&mut self, c: &[Q]) {
        let mut obj: Vec<Q> = c.to_vec();
        for (i, &b) in self.basis.iter().enumerate() {
            if c[b].is_zero() {
                continue;
            }
            for (o, v) in obj.iter_mut().zip(&self.rows[i]) {
                *o -= &c[b] * v;
            }
        }
        self.obj = obj;
    }

    /// Runs simplex iterations; columns `>= allowed` never enter.
    /// Returns false when unbounded.
    fn optimize(&mut self, allowed: usize) -> bool {
        loop {
            let Some(col) = (0..allowed).find(|&j| self.obj[j].is_positive()) else {
                return true;
            };
            let mut best: Option<(usize, Q)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][col];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / a;
                let better = match &best {
                    None => true,
                    Some((bi, br)) => {
                        ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi])
                    }
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            let Some((r, _)) = best else {
                return false;
            };
            self.pivot(r, col);
        }
    }
}

/// Maximizes `c·y` subject to `A y = b`, `y >= 0`.
pub fn maximize(a: &[Vec<Q>], b: &[Q], c: &[Q]) -> LpOutcome {
    let m = a.len();
    let n = c.len();
    let width = n + m;
    let mut rows = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    for (i, (row, bi)) in a.iter().zip(b).enumerate() {
        let flip = bi.is_negative();
        let mut r: Vec<Q> =
            row.iter().map(|v| if flip { -v.clone() } else { v.clone() }).collect();
        r.extend((0..m).map(|k| if k == i { Q::one() } else { Q::zero() }));
        rows.push(r);
        rhs.push(if flip { -bi.clone() } else { bi.clone() });
    }
    let mut t = Tableau { rows, rhs, basis: (n..width).collect(), obj: Vec::new() };

    // phase 1: maximize -sum(artificials)
    let mut c1 = vec![Q::zero(); width];
    for v in &mut c1[n..] {
        *v = -Q::one();
    }
    t.set_objective(&c1);
    t.optimize(n);
    let infeasibility: Q = t
        .basis
        .iter()
        .zip(&t.rhs)
        .filter(|(&bv, _)| bv >= n)
        .fold(Q::zero(), |acc, (_, v)| acc + v);
    if infeasibility.is_positive() {
        return LpOutcome::Infeasible;
    }

    // drive zero-level artificials out of the basis; drop redundant rows
    let mut r = 0;
    while r < t.rows.len() {
        if t.basis[r] >= n {
            match (0..n).find(|&j| !t.rows[r][j].is_zero()) {
                Some(j) => t.pivot(r, j),
                None => {
                    t.rows.remove(r);
                    t.rhs.remove(r);
                    t.basis.remove(r);
                    continue;
                }
            }
        }
        r += 1;
    }

    let mut c2 = c.to_vec();
    c2.resize(width, Q::zero());
    t.set_objective(&c2);
    if !t.optimize(n) {
        return LpOutcome::Unbounded;
    }
    let mut x = vec![Q::zero(); n];
    for (&bv, v) in t.basis.iter().zip(&t.rhs) {
        if bv < n {
            x[bv] = v.clone();
        }
    }
    let value = x.iter().zip(c).fold(Q::zero(), |acc, (xi, ci)| acc + xi * ci);
    LpOutcome::Optimal { value, x }
}

/// Rank of a set of rational vectors (Gaussian elimination).
pub fn rank(vectors: &[Vec<Q>]) -> usize {
    let mut m: Vec<Vec<Q>> = vectors.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(p) = (rank..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let pivot = m[rank].clone();
        for row in m.iter_mut().skip(rank + 1) {
            if row[col].is_zero() {
                continue;
            }
            let f = &row[col] / &pivot[col];
            for (v, pv) in row.iter_mut().zip(&pivot) {
                *v -= &f * pv;
            }
        }
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: i64) -> Q {
        Q::from_integer(v.into())
    }

    fn qs(v: &[i64]) -> Vec<Q> {
        v.iter().map(|&x| q(x)).collect()
    }

    #[test]
    fn small_lp() {
        // max x + y s.t. x + 2y + s1 = 4, 3x + y + s2 = 6
        let a = vec![qs(&[1, 2, 1, 0]), qs(&[3, 1, 0, 1])];
        match maximize(&a, &qs(&[4, 6]), &qs(&[1, 1, 0, 0])) {
            LpOutcome::Optimal { value, x } => {
                assert_eq!(value, Q::new(14.into(), 5.into()));
                assert_eq!(x[0], Q::new(8.into(), 5.into()));
                assert_eq!(x[1], Q::new(6.into(), 5.into()));
            }
            o => panic!("{o:?}"),
        }
    }

    #[test]
    fn infeasible_and_unbounded() {
        // x + y = -1 with x, y >= 0
        assert_eq!(maximize(&[qs(&[1, 1])], &qs(&[-1]), &qs(&[0, 0])), LpOutcome::Infeasible);
        // x - y = 0, maximize x
        assert_eq!(maximize(&[qs(&[1, -1])], &qs(&[0]), &qs(&[1, 0])), LpOutcome::Unbounded);
    }

    #[test]
    fn redundant_rows() {
        let a = vec![qs(&[1, 1]), qs(&[2, 2])];
        match maximize(&a, &qs(&[1, 2]), &qs(&[1, 0])) {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, q(1)),
            o => panic!("{o:?}"),
        }
    }

    #[test]
    fn ranks() {
        assert_eq!(rank(&[qs(&[1, 0]), qs(&[2, 0])]), 1);
        assert_eq!(rank(&[qs(&[1, 0]), qs(&[0, 3]), qs(&[1, 1])]), 2);
        assert_eq!(rank(&[]), 0);
    }
}
