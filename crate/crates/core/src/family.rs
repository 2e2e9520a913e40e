//! Discrete exponential families given by a [`PartitionTable`]: log-partition,
//! moments, and the damped Newton MLE with non-estimable coordinates removed.

use nalgebra::{DMatrix, DVector};
use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};

use crate::enumeration::PartitionTable;
use crate::error::{Error, Result};
use crate::lp::Q;
use crate::numeric::log_sum_exp;
use crate::polytope::{affine_dimension, max_margin};

/// Support points of a family: model statistics with their log-multiplicities.
#[derive(Clone, Debug)]
pub struct Family {
    dim: usize,
    stats: Vec<Vec<f64>>,
    log_mult: Vec<f64>,
}

impl Family {
    /// Statistic of each table key is `key[i] * scales[i]`.
    pub fn from_table(table: &PartitionTable, scales: &[f64]) -> Self {
        let dim = scales.len();
        let mut stats = Vec::with_capacity(table.len());
        let mut log_mult = Vec::with_capacity(table.len());
        for (key, count) in table.iter() {
            stats.push(key.iter().zip(scales).map(|(&k, s)| k as f64 * s).collect());
            log_mult.push((count as f64).ln());
        }
        Self { dim, stats, log_mult }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn check(&self, alpha: &[f64]) -> Result<()> {
        if alpha.len() != self.dim {
            return Err(Error::SizeMismatch { expected: self.dim, found: alpha.len() });
        }
        Ok(())
    }

    /// Unnormalized log-weight of one support point; a `-inf` parameter only
    /// matters where the statistic is positive.
    pub fn log_weight(stat: &[f64], alpha: &[f64]) -> f64 {
        let mut acc = 0.0;
        for (&s, &a) in stat.iter().zip(alpha) {
            if s != 0.0 {
                if a == f64::NEG_INFINITY {
                    return f64::NEG_INFINITY;
                }
                acc += s * a;
            }
        }
        acc
    }

    fn log_weights(&self, alpha: &[f64]) -> Vec<f64> {
        self.stats
            .iter()
            .zip(&self.log_mult)
            .map(|(s, m)| m + Self::log_weight(s, alpha))
            .collect()
    }

    pub fn psi(&self, alpha: &[f64]) -> Result<f64> {
        self.check(alpha)?;
        Ok(log_sum_exp(&self.log_weights(alpha)))
    }

    /// Expected statistic (gradient of `psi`).
    pub fn mean(&self, alpha: &[f64]) -> Result<Vec<f64>> {
        Ok(self.moments(alpha, false)?.1)
    }

    /// `(psi, mean, covariance)`; the covariance is only filled when asked for.
    pub fn moments(&self, alpha: &[f64], cov: bool) -> Result<(f64, Vec<f64>, DMatrix<f64>)> {
        self.check(alpha)?;
        let lw = self.log_weights(alpha);
        let psi = log_sum_exp(&lw);
        let d = self.dim;
        let mut mean = vec![0.0; d];
        let mut second = DMatrix::zeros(if cov { d } else { 0 }, if cov { d } else { 0 });
        for (s, l) in self.stats.iter().zip(&lw) {
            let w = (l - psi).exp();
            if w == 0.0 {
                continue;
            }
            for i in 0..d {
                mean[i] += w * s[i];
            }
            if cov {
                for i in 0..d {
                    if s[i] == 0.0 {
                        continue;
                    }
                    for j in 0..d {
                        second[(i, j)] += w * s[i] * s[j];
                    }
                }
            }
        }
        if cov {
            for i in 0..d {
                for j in 0..d {
                    second[(i, j)] -= mean[i] * mean[j];
                }
            }
        }
        Ok((psi, mean, second))
    }

    /// Keeps the given coordinates and the support points that vanish on all others.
    fn restrict(&self, keep: &[usize]) -> Family {
        let mut stats = Vec::new();
        let mut log_mult = Vec::new();
        for (s, m) in self.stats.iter().zip(&self.log_mult) {
            let off = (0..self.dim).filter(|i| !keep.contains(i)).any(|i| s[i] != 0.0);
            if !off {
                stats.push(keep.iter().map(|&i| s[i]).collect());
                log_mult.push(*m);
            }
        }
        Family { dim: keep.len(), stats, log_mult }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NewtonOptions {
    pub tolerance: f64,
    pub max_iter: usize,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        Self { tolerance: 1e-8, max_iter: 200 }
    }
}

/// Outcome of a Newton solve of `mean(alpha) = target`.
#[derive(Clone, Debug, PartialEq)]
pub struct NewtonResult {
    pub alpha: Vec<f64>,
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Minimizes `psi(alpha) - <alpha, target>` by Newton steps with backtracking.
pub fn newton(family: &Family, target: &[f64], start: &[f64], opts: NewtonOptions) -> Result<NewtonResult> {
    if target.len() != family.dim {
        return Err(Error::SizeMismatch { expected: family.dim, found: target.len() });
    }
    let objective = |a: &[f64]| -> Result<f64> {
        Ok(family.psi(a)? - a.iter().zip(target).map(|(x, y)| x * y).sum::<f64>())
    };
    let mut alpha = start.to_vec();
    let mut iterations = 0;
    loop {
        let (psi, mean, cov) = family.moments(&alpha, true)?;
        let residual = max_abs_diff(&mean, target);
        if residual <= opts.tolerance {
            let (alpha, residual) = polish(family, target, alpha, residual, cov, &mean)?;
            return Ok(NewtonResult { alpha, residual, iterations, converged: true });
        }
        if iterations >= opts.max_iter {
            return Ok(NewtonResult { alpha, residual, iterations, converged: false });
        }
        iterations += 1;
        let grad = DVector::from_iterator(mean.len(), mean.iter().zip(target).map(|(m, t)| m - t));
        let step = solve_spd(cov, &grad);
        let f0 = psi - alpha.iter().zip(target).map(|(x, y)| x * y).sum::<f64>();
        let slope = -grad.dot(&step);
        let mut t = 1.0;
        let mut next = alpha.clone();
        let mut accepted = false;
        for _ in 0..60 {
            for i in 0..alpha.len() {
                next[i] = alpha[i] - t * step[i];
            }
            let f = objective(&next)?;
            if f < f0 && f <= f0 + 1e-4 * t * slope {
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if !accepted {
            // near the optimum the objective stops resolving; judge steps by the residual
            next = best_by_residual(family, target, &alpha, &step, residual)?;
        }
        if next == alpha {
            let (_, mean, _) = family.moments(&alpha, false)?;
            let residual = max_abs_diff(&mean, target);
            return Ok(NewtonResult { alpha, residual, iterations, converged: residual <= opts.tolerance });
        }
        alpha = next;
    }
}

/// First step length in 1, 1/2, 1/4, ... that lowers the moment residual, or `alpha` itself.
fn best_by_residual(family: &Family, target: &[f64], alpha: &[f64], step: &DVector<f64>, residual: f64) -> Result<Vec<f64>> {
    let mut t = 1.0;
    for _ in 0..30 {
        let next: Vec<f64> = alpha.iter().zip(step.iter()).map(|(a, s)| a - t * s).collect();
        if max_abs_diff(&family.mean(&next)?, target) < residual {
            return Ok(next);
        }
        t *= 0.5;
    }
    Ok(alpha.to_vec())
}

/// A few undamped steps past the tolerance, kept only while the residual drops.
fn polish(
    family: &Family,
    target: &[f64],
    mut alpha: Vec<f64>,
    mut residual: f64,
    mut cov: DMatrix<f64>,
    mean: &[f64],
) -> Result<(Vec<f64>, f64)> {
    let mut mean = mean.to_vec();
    for _ in 0..3 {
        let grad = DVector::from_iterator(mean.len(), mean.iter().zip(target).map(|(m, t)| m - t));
        let step = solve_spd(cov, &grad);
        let next: Vec<f64> = alpha.iter().zip(step.iter()).map(|(a, s)| a - s).collect();
        let (_, m, c) = family.moments(&next, true)?;
        let r = max_abs_diff(&m, target);
        if r >= residual {
            break;
        }
        (alpha, residual, cov, mean) = (next, r, c, m);
    }
    Ok((alpha, residual))
}

/// Solves `H x = g` for a covariance matrix, adding a ridge when it is not
/// numerically positive definite.
fn solve_spd(h: DMatrix<f64>, g: &DVector<f64>) -> DVector<f64> {
    let scale = h.diagonal().iter().cloned().fold(0.0, f64::max).max(1e-300);
    let mut ridge = 0.0;
    loop {
        let mut m = h.clone();
        for i in 0..m.nrows() {
            m[(i, i)] += ridge;
        }
        if let Some(ch) = m.cholesky() {
            return ch.solve(g);
        }
        ridge = if ridge == 0.0 { scale * 1e-12 } else { ridge * 10.0 };
    }
}

/// Exact position of the mean statistic relative to the reduced support hull.
#[derive(Clone, Debug, PartialEq)]
pub enum HullPosition {
    /// Every coordinate was dropped.
    Empty,
    /// Hull is lower-dimensional or the mean lies outside / on its boundary.
    NotInterior,
    /// Interior, with the largest attainable minimum barycentric weight.
    Interior { margin: Q },
}

/// Result of the generic fitting pipeline on table keys.
#[derive(Clone, Debug, PartialEq)]
pub struct GenericFit {
    pub position: HullPosition,
    /// Observed mean of the model statistic.
    pub mean: Vec<f64>,
    pub dropped: Vec<usize>,
    /// `None` unless the reduced MLE exists.
    pub newton: Option<NewtonResult>,
}

/// Mean of integer keys as exact rationals.
pub fn mean_key(keys: &[Vec<i64>], dim: usize) -> Result<Vec<Q>> {
    if keys.is_empty() {
        return Err(Error::InvalidArgument("no observations".into()));
    }
    let m = BigInt::from(keys.len());
    let mut acc = vec![BigInt::zero(); dim];
    for k in keys {
        if k.len() != dim {
            return Err(Error::SizeMismatch { expected: dim, found: k.len() });
        }
        for (a, &v) in acc.iter_mut().zip(k) {
            *a += v;
        }
    }
    Ok(acc.into_iter().map(|a| Ratio::new(a, m.clone())).collect())
}

/// Drops zero-mean coordinates, tests the mean against the hull of the
/// remaining support, and solves the moment equations when it is interior.
///
/// `scales` maps key units to statistic units; it is positive per coordinate,
/// so hull membership is decided on the raw integer keys.
pub fn fit_keys(
    table: &PartitionTable,
    scales: &[f64],
    obs: &[Vec<i64>],
    start: Option<&[f64]>,
    opts: NewtonOptions,
) -> Result<GenericFit> {
    let dim = scales.len();
    let mean_q = mean_key(obs, dim)?;
    let mean: Vec<f64> = mean_q
        .iter()
        .zip(scales)
        .map(|(m, s)| m.to_f64().unwrap_or(f64::NAN) * s)
        .collect();
    let dropped: Vec<usize> = (0..dim).filter(|&i| mean_q[i].is_zero()).collect();
    let keep: Vec<usize> = (0..dim).filter(|&i| !mean_q[i].is_zero()).collect();
    let done = |position| Ok(GenericFit { position, mean: mean.clone(), dropped: dropped.clone(), newton: None });
    if keep.is_empty() {
        return done(HullPosition::Empty);
    }

    let mut points: Vec<Vec<Q>> = Vec::new();
    for (key, _) in table.iter() {
        if dropped.iter().any(|&i| key[i] != 0) {
            continue;
        }
        let p: Vec<Q> = keep.iter().map(|&i| Q::from_integer(key[i].into())).collect();
        if !points.contains(&p) {
            points.push(p);
        }
    }
    let x: Vec<Q> = keep.iter().map(|&i| mean_q[i].clone()).collect();
    if affine_dimension(&points) < keep.len() {
        return done(HullPosition::NotInterior);
    }
    let margin = match max_margin(&points, &x) {
        Some(t) if t > Q::zero() => t,
        _ => return done(HullPosition::NotInterior),
    };

    let family = Family::from_table(table, scales).restrict(&keep);
    let target: Vec<f64> = keep.iter().map(|&i| mean[i]).collect();
    let start: Vec<f64> = match start {
        Some(s) if s.len() == dim => keep.iter().map(|&i| if s[i].is_finite() { s[i] } else { 0.0 }).collect(),
        Some(s) => return Err(Error::SizeMismatch { expected: dim, found: s.len() }),
        None => vec![0.0; keep.len()],
    };
    let sol = newton(&family, &target, &start, opts)?;
    let mut alpha = vec![f64::NEG_INFINITY; dim];
    for (&i, &a) in keep.iter().zip(&sol.alpha) {
        alpha[i] = a;
    }
    Ok(GenericFit {
        position: HullPosition::Interior { margin },
        mean,
        dropped,
        newton: Some(NewtonResult { alpha, ..sol }),
    })
}
