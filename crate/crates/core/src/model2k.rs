//! The 2K model on graphs without isolated nodes:
//! `P(g) = exp{<ñ^(2)_-(g), alpha> - psi(alpha)}` with `ñ_{k1k2} = (k1+k2)/(k1k2) n_{k1k2}`
//! and the reference pair `(n-1, n-1)` removed.

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::enumeration::{enumerate, reduced_pair_scales, KeyKind, PartitionTable};
use crate::error::{Error, Result};
use crate::family::{fit_keys, Family, HullPosition, NewtonOptions};
use crate::graph::{bi_degree_vector, degree_pairs, Graph};
use crate::model1k::{common_n, ser_extended, ser_fitted};
use crate::polytope::{to_rational, BOUNDARY_TOLERANCE};

/// Which statistic the parameters multiply.
///
/// Since `ñ_{k1k2} = s_{k1k2} n_{k1k2}` with a fixed positive `s`, the two
/// choices give the same family; `EdgeCount` coordinates are
/// `beta_{k1k2} = s_{k1k2} alpha_{k1k2}`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Coordinates2K {
    /// Paired with the scaled counts `ñ_{k1k2}`.
    #[default]
    Scaled,
    /// Paired with the raw edge counts `n_{k1k2}`.
    EdgeCount,
}

/// Degree pairs carrying a free parameter, in lexicographic order.
pub fn reduced_pairs(n: usize) -> Vec<(usize, usize)> {
    let mut p: Vec<_> = degree_pairs(n).collect();
    p.pop();
    p
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NaturalParams2K {
    n: usize,
    coordinates: Coordinates2K,
    #[serde(serialize_with = "ser_extended")]
    alpha: Vec<f64>,
}

impl AsRef<[f64]> for NaturalParams2K {
    fn as_ref(&self) -> &[f64] {
        &self.alpha
    }
}

impl NaturalParams2K {
    pub fn new(n: usize, coordinates: Coordinates2K, alpha: Vec<f64>) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArgument(format!("2K model needs n >= 2, got {n}")));
        }
        let len = n * (n - 1) / 2 - 1;
        if alpha.len() != len {
            return Err(Error::SizeMismatch { expected: len, found: alpha.len() });
        }
        if let Some(x) = alpha.iter().find(|x| x.is_nan() || **x == f64::INFINITY) {
            return Err(Error::InvalidArgument(format!("parameter {x} not allowed")));
        }
        Ok(Self { n, coordinates, alpha })
    }

    pub fn zero(n: usize) -> Result<Self> {
        Self::new(n, Coordinates2K::Scaled, vec![0.0; (n * n.saturating_sub(1) / 2).saturating_sub(1)])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coordinates(&self) -> Coordinates2K {
        self.coordinates
    }

    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    /// Parameter of pair `(k1, k2)`, `k1 <= k2`; zero for the reference pair.
    pub fn get(&self, k1: usize, k2: usize) -> Option<f64> {
        if k1 == self.n - 1 && k2 == self.n - 1 {
            return Some(0.0);
        }
        reduced_pairs(self.n).iter().position(|&p| p == (k1, k2)).map(|i| self.alpha[i])
    }

    /// The same distribution expressed in the other coordinate system.
    pub fn to_coordinates(&self, target: Coordinates2K) -> Self {
        if target == self.coordinates {
            return self.clone();
        }
        let s = scales_f64(self.n);
        let alpha = self
            .alpha
            .iter()
            .zip(&s)
            .map(|(a, s)| match target {
                Coordinates2K::EdgeCount => a * s,
                Coordinates2K::Scaled => a / s,
            })
            .collect();
        Self { n: self.n, coordinates: target, alpha }
    }

    pub fn dropped_pairs(&self) -> Vec<(usize, usize)> {
        reduced_pairs(self.n)
            .into_iter()
            .zip(&self.alpha)
            .filter(|(_, a)| **a == f64::NEG_INFINITY)
            .map(|(p, _)| p)
            .collect()
    }
}

fn scales_f64(n: usize) -> Vec<f64> {
    reduced_pair_scales(n).iter().map(|s| s.to_f64().unwrap_or(f64::NAN)).collect()
}

fn stat_scales(n: usize, c: Coordinates2K) -> Vec<f64> {
    match c {
        Coordinates2K::Scaled => scales_f64(n),
        Coordinates2K::EdgeCount => vec![1.0; (n * (n - 1) / 2).saturating_sub(1)],
    }
}

pub fn table_2k(n: usize) -> Result<PartitionTable> {
    enumerate(n, KeyKind::ScaledBiDegree, true)
}

fn check_table(params: &NaturalParams2K, table: &PartitionTable) -> Result<()> {
    if table.key_kind() != KeyKind::ScaledBiDegree || !table.restricted() {
        return Err(Error::InvalidArgument("2K needs the restricted bi-degree table".into()));
    }
    if table.n() != params.n {
        return Err(Error::SizeMismatch { expected: params.n, found: table.n() });
    }
    Ok(())
}

fn family(params: &NaturalParams2K, table: &PartitionTable) -> Family {
    Family::from_table(table, &stat_scales(params.n, params.coordinates))
}

pub fn psi_2k(params: &NaturalParams2K, table: &PartitionTable) -> Result<f64> {
    check_table(params, table)?;
    family(params, table).psi(&params.alpha)
}

/// Expected statistic in the coordinates of `params` (scaled or raw counts).
pub fn expected_stats_2k(params: &NaturalParams2K, table: &PartitionTable) -> Result<Vec<f64>> {
    check_table(params, table)?;
    family(params, table).mean(&params.alpha)
}

/// Raw reduced bi-degree counts of `g`.
pub fn reduced_key(g: &Graph) -> Vec<i64> {
    let b = bi_degree_vector(g);
    let mut k: Vec<i64> = b.counts().iter().map(|&x| x as i64).collect();
    k.pop();
    k
}

/// `ñ^(2)_-(g)` as exact rationals.
pub fn reduced_scaled_stats(g: &Graph) -> Vec<BigRational> {
    reduced_key(g)
        .iter()
        .zip(reduced_pair_scales(g.n()))
        .map(|(&k, s): (&i64, Ratio<i64>)| {
            let v = s * k;
            BigRational::new(BigInt::from(*v.numer()), BigInt::from(*v.denom()))
        })
        .collect()
}

fn check_support(g: &Graph) -> Result<()> {
    if g.degrees().contains(&0) {
        return Err(Error::OutOfSupport("graph has an isolated node".into()));
    }
    Ok(())
}

pub fn log_prob_2k(g: &Graph, params: &NaturalParams2K, table: &PartitionTable) -> Result<f64> {
    if g.n() != params.n {
        return Err(Error::SizeMismatch { expected: params.n, found: g.n() });
    }
    check_support(g)?;
    let psi = psi_2k(params, table)?;
    let s = stat_scales(params.n, params.coordinates);
    let stat: Vec<f64> = reduced_key(g).iter().zip(&s).map(|(&k, s)| k as f64 * s).collect();
    Ok(Family::log_weight(&stat, &params.alpha) - psi)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Existence {
    Exists,
    DoesNotExist,
    /// Interior, but the barycentric margin is within the boundary tolerance.
    BoundaryUndetermined,
}

/// Serialized with `exists` as a boolean (true only for [`Existence::Exists`])
/// and the three-way verdict under `existence`.
#[derive(Clone, Debug, PartialEq)]
pub struct FitResult2K {
    pub exists: Existence,
    pub alpha_hat: Option<NaturalParams2K>,
    /// Mean statistic in the fitted coordinates.
    pub observed_mean: Vec<f64>,
    pub moment_residual: Option<f64>,
    pub iterations: usize,
    pub dropped_pairs: Vec<(usize, usize)>,
}

#[derive(Serialize)]
struct FitResult2KJson<'a> {
    exists: bool,
    existence: Existence,
    #[serde(serialize_with = "ser_fitted")]
    alpha: Option<&'a NaturalParams2K>,
    coordinates: Option<Coordinates2K>,
    observed_mean: &'a [f64],
    moment_residual: Option<f64>,
    iterations: usize,
    dropped_pairs: &'a [(usize, usize)],
}

impl Serialize for FitResult2K {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FitResult2KJson {
            exists: self.exists == Existence::Exists,
            existence: self.exists,
            alpha: self.alpha_hat.as_ref(),
            coordinates: self.alpha_hat.as_ref().map(|a| a.coordinates),
            observed_mean: &self.observed_mean,
            moment_residual: self.moment_residual,
            iterations: self.iterations,
            dropped_pairs: &self.dropped_pairs,
        }
        .serialize(s)
    }
}

pub fn fit_2k(observations: &[Graph], opts: NewtonOptions) -> Result<FitResult2K> {
    let n = common_n(observations)?;
    fit_2k_with_table(observations, &table_2k(n)?, Coordinates2K::Scaled, opts)
}

pub fn fit_2k_with_table(
    observations: &[Graph],
    table: &PartitionTable,
    coordinates: Coordinates2K,
    opts: NewtonOptions,
) -> Result<FitResult2K> {
    let n = common_n(observations)?;
    check_table(&NaturalParams2K::zero(n)?, table)?;
    for g in observations {
        check_support(g)?;
    }
    let keys: Vec<Vec<i64>> = observations.iter().map(reduced_key).collect();
    let fit = fit_keys(table, &stat_scales(n, coordinates), &keys, None, opts)?;
    let pairs = reduced_pairs(n);
    let dropped_pairs = fit.dropped.iter().map(|&i| pairs[i]).collect();
    let exists = match &fit.position {
        HullPosition::Interior { margin } if *margin > to_rational(BOUNDARY_TOLERANCE)? => Existence::Exists,
        HullPosition::Interior { margin } if !margin.is_zero() => Existence::BoundaryUndetermined,
        _ => Existence::DoesNotExist,
    };
    let (alpha_hat, moment_residual, iterations) = match fit.newton {
        Some(s) if exists == Existence::Exists => {
            (Some(NaturalParams2K::new(n, coordinates, s.alpha)?), Some(s.residual), s.iterations)
        }
        _ => (None, None, 0),
    };
    Ok(FitResult2K { exists, alpha_hat, observed_mean: fit.mean, moment_residual, iterations, dropped_pairs })
}

/// How the running sum is compared with `n` in [`bidegree_nonzero_upper_bound`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GreedyRule {
    /// Keep adding while the sum stays `<= n`.
    #[default]
    Inclusive,
    /// Keep adding while the sum stays `< n`.
    Strict,
}

/// Upper bound on the number of non-zero entries of `ñ^(2)(g)`: the most
/// values `(k1+k2)/(k1k2)` that fit under the total `n - n_0 <= n`, taken
/// smallest first. Returns `(count, count / (n(n+1)/2))`.
pub fn bidegree_nonzero_upper_bound(n: usize, rule: GreedyRule) -> Result<(usize, f64)> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("need n >= 2, got {n}")));
    }
    let mut values: Vec<Ratio<u64>> =
        degree_pairs(n).map(|(a, b)| Ratio::new((a + b) as u64, (a * b) as u64)).collect();
    values.sort();
    let limit = BigRational::from_integer(BigInt::from(n));
    let mut sum = BigRational::zero();
    let mut count = 0;
    for v in values {
        sum += BigRational::new(BigInt::from(*v.numer()), BigInt::from(*v.denom()));
        let fits = match rule {
            GreedyRule::Inclusive => sum <= limit,
            GreedyRule::Strict => sum < limit,
        };
        if !fits {
            break;
        }
        count += 1;
    }
    Ok((count, count as f64 / (n * (n + 1) / 2) as f64))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    fn path() -> Graph {
        Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap()
    }

    fn triangle() -> Graph {
        Graph::complete(3).unwrap()
    }

    #[test]
    fn pairs_and_coordinates() {
        assert_eq!(reduced_pairs(3), vec![(1, 1), (1, 2)]);
        let a = NaturalParams2K::new(3, Coordinates2K::Scaled, vec![0.0, 2.0]).unwrap();
        assert_eq!(a.get(1, 2), Some(2.0));
        assert_eq!(a.get(2, 2), Some(0.0));
        assert_eq!(a.get(2, 1), None);
        let b = a.to_coordinates(Coordinates2K::EdgeCount);
        assert_eq!(b.alpha(), &[0.0, 3.0]);
        assert_eq!(b.to_coordinates(Coordinates2K::Scaled), a);
        assert!(NaturalParams2K::new(3, Coordinates2K::Scaled, vec![0.0]).is_err());
    }

    #[test]
    fn psi_examples() {
        let t3 = table_2k(3).unwrap();
        assert!(close(psi_2k(&NaturalParams2K::zero(3).unwrap(), &t3).unwrap(), 4f64.ln(), 1e-14));
        let t4 = table_2k(4).unwrap();
        assert!(close(psi_2k(&NaturalParams2K::zero(4).unwrap(), &t4).unwrap(), 41f64.ln(), 1e-14));
        for a in [-1.3, 0.0, 0.8] {
            let e = NaturalParams2K::new(3, Coordinates2K::EdgeCount, vec![0.0, a]).unwrap();
            let want = (1.0 + 3.0 * (2.0 * a).exp()).ln();
            assert!(close(psi_2k(&e, &t3).unwrap(), want, 1e-14));
            let s = NaturalParams2K::new(3, Coordinates2K::Scaled, vec![0.0, a]).unwrap();
            let want = (1.0 + 3.0 * (3.0 * a).exp()).ln();
            assert!(close(psi_2k(&s, &t3).unwrap(), want, 1e-14));
        }
        assert!(psi_2k(&NaturalParams2K::zero(3).unwrap(), &t4).is_err());
    }

    #[test]
    fn log_prob_examples() {
        let t = table_2k(3).unwrap();
        let a = NaturalParams2K::new(3, Coordinates2K::Scaled, vec![0.2, -0.9]).unwrap();
        let psi = psi_2k(&a, &t).unwrap();
        assert!(close(log_prob_2k(&triangle(), &a, &t).unwrap(), -psi, 1e-15));
        let z = NaturalParams2K::zero(3).unwrap();
        assert!(close(log_prob_2k(&path(), &z, &t).unwrap(), 0.25f64.ln(), 1e-14));
        let edge = Graph::from_edges(3, &[(0, 1)]).unwrap();
        assert!(matches!(log_prob_2k(&edge, &z, &t), Err(Error::OutOfSupport(_))));
    }

    #[test]
    fn fit_examples() {
        let r = fit_2k(&[triangle(), path()], NewtonOptions::default()).unwrap();
        assert_eq!(r.exists, Existence::Exists);
        assert_eq!(r.dropped_pairs, vec![(1, 1)]);
        assert!(close(r.observed_mean[1], 1.5, 1e-15));
        assert!(r.moment_residual.unwrap() <= 1e-8);
        // 9 e^{3a} / (1 + 3 e^{3a}) = 3/2  =>  e^{3a} = 1/3
        let a = r.alpha_hat.unwrap().alpha()[1];
        assert!(close(a, (1.0f64 / 3.0).ln() / 3.0, 1e-8));

        assert_eq!(fit_2k(&[triangle()], NewtonOptions::default()).unwrap().exists, Existence::DoesNotExist);
        let relabeled = Graph::from_edges(3, &[(0, 2), (1, 2)]).unwrap();
        assert_eq!(
            fit_2k(&[path(), relabeled], NewtonOptions::default()).unwrap().exists,
            Existence::DoesNotExist
        );
        let edge = Graph::from_edges(3, &[(0, 1)]).unwrap();
        assert!(matches!(fit_2k(&[edge], NewtonOptions::default()), Err(Error::OutOfSupport(_))));
    }

    #[test]
    fn greedy_bound_examples() {
        let (c, r) = bidegree_nonzero_upper_bound(3, GreedyRule::Inclusive).unwrap();
        assert_eq!(c, 2);
        assert!(close(r, 2.0 / 6.0, 1e-15));
        assert_eq!(bidegree_nonzero_upper_bound(2, GreedyRule::Inclusive).unwrap().0, 1);
        assert_eq!(bidegree_nonzero_upper_bound(2, GreedyRule::Strict).unwrap().0, 0);
        assert!(bidegree_nonzero_upper_bound(200, GreedyRule::Inclusive).unwrap().1 < 0.56);
        for n in 2..40 {
            let a = bidegree_nonzero_upper_bound(n, GreedyRule::Inclusive).unwrap().0;
            let b = bidegree_nonzero_upper_bound(n, GreedyRule::Strict).unwrap().0;
            assert!(a - b <= 1);
        }
    }
}
