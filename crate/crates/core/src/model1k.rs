//! The 1K model: `P(g) = exp{<n^(1)_-(g), alpha> - psi(alpha)}` over all
//! labeled graphs on `n` nodes, with `alpha_{n-1} = 0` as reference.

use serde::{Serialize, Serializer};

use crate::enumeration::{enumerate, KeyKind, PartitionTable};
use crate::error::{Error, Result};
use crate::family::{fit_keys, Family, HullPosition, NewtonOptions};
use crate::graph::{degree_vector, Graph};
use crate::numeric::log_sum_exp;

/// Serializes extended reals, writing `-inf` as the string `"-inf"`.
pub(crate) fn ser_extended<S: Serializer>(v: &[f64], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for &x in v {
        if x == f64::NEG_INFINITY {
            seq.serialize_element("-inf")?;
        } else {
            seq.serialize_element(&x)?;
        }
    }
    seq.end()
}

/// Writes only the parameter vector of a fitted model, or `null`.
pub(crate) fn ser_fitted<S: Serializer, P: AsRef<[f64]>>(v: &Option<P>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(p) => ser_extended(p.as_ref(), s),
        None => s.serialize_none(),
    }
}

/// Natural parameters `(alpha_0, ..., alpha_{n-2})`; `-inf` marks a dropped index.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NaturalParams1K {
    n: usize,
    #[serde(serialize_with = "ser_extended")]
    alpha: Vec<f64>,
}

impl AsRef<[f64]> for NaturalParams1K {
    fn as_ref(&self) -> &[f64] {
        &self.alpha
    }
}

impl NaturalParams1K {
    pub fn new(n: usize, alpha: Vec<f64>) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArgument(format!("1K model needs n >= 2, got {n}")));
        }
        if alpha.len() != n - 1 {
            return Err(Error::SizeMismatch { expected: n - 1, found: alpha.len() });
        }
        if let Some(x) = alpha.iter().find(|x| x.is_nan() || **x == f64::INFINITY) {
            return Err(Error::InvalidArgument(format!("parameter {x} not allowed")));
        }
        Ok(Self { n, alpha })
    }

    pub fn zero(n: usize) -> Result<Self> {
        Self::new(n, vec![0.0; n.saturating_sub(1)])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    /// `alpha_k` for `0 <= k <= n-1`, with the reference `alpha_{n-1} = 0`.
    pub fn get(&self, k: usize) -> f64 {
        if k == self.n - 1 {
            0.0
        } else {
            self.alpha[k]
        }
    }

    pub fn dropped(&self) -> Vec<usize> {
        (0..self.alpha.len()).filter(|&k| self.alpha[k] == f64::NEG_INFINITY).collect()
    }
}

/// Degree probabilities `p_0, ..., p_{n-1}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProbabilityParams1K {
    p: Vec<f64>,
}

impl ProbabilityParams1K {
    pub fn new(p: Vec<f64>) -> Result<Self> {
        if p.len() < 2 {
            return Err(Error::InvalidArgument("need at least two probabilities".into()));
        }
        if p.iter().any(|&x| !(0.0..=1.0).contains(&x)) {
            return Err(Error::InvalidArgument("probabilities must lie in [0, 1]".into()));
        }
        let s: f64 = p.iter().sum();
        if (s - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidArgument(format!("probabilities sum to {s}, not 1")));
        }
        Ok(Self { p })
    }

    pub fn p(&self) -> &[f64] {
        &self.p
    }
}

/// `alpha_k = log(p_k / p_{n-1})`.
pub fn alpha_from_p(p: &ProbabilityParams1K) -> Result<NaturalParams1K> {
    let p = p.p();
    let n = p.len();
    let reference = p[n - 1];
    if reference == 0.0 {
        return Err(Error::ReferenceCoordinate);
    }
    let alpha = p[..n - 1].iter().map(|&x| (x / reference).ln()).collect();
    NaturalParams1K::new(n, alpha)
}

/// Inverse of [`alpha_from_p`]: `p_k = e^{alpha_k} / (1 + sum_j e^{alpha_j})`.
pub fn p_from_alpha(params: &NaturalParams1K) -> ProbabilityParams1K {
    let mut logs = params.alpha.clone();
    logs.push(0.0);
    let z = log_sum_exp(&logs);
    ProbabilityParams1K { p: logs.iter().map(|l| (l - z).exp()).collect() }
}

fn check_table(params: &NaturalParams1K, table: &PartitionTable) -> Result<()> {
    if table.key_kind() != KeyKind::ReducedDegreeVector || table.restricted() {
        return Err(Error::InvalidArgument("1K needs the unrestricted reduced-degree table".into()));
    }
    if table.n() != params.n {
        return Err(Error::SizeMismatch { expected: params.n, found: table.n() });
    }
    Ok(())
}

fn family(table: &PartitionTable) -> Family {
    Family::from_table(table, &vec![1.0; table.key_len()])
}

pub fn table_1k(n: usize) -> Result<PartitionTable> {
    enumerate(n, KeyKind::ReducedDegreeVector, false)
}

pub fn psi_1k(params: &NaturalParams1K, table: &PartitionTable) -> Result<f64> {
    check_table(params, table)?;
    family(table).psi(&params.alpha)
}

pub fn expected_stats_1k(params: &NaturalParams1K, table: &PartitionTable) -> Result<Vec<f64>> {
    check_table(params, table)?;
    family(table).mean(&params.alpha)
}

fn reduced_stats(g: &Graph) -> Vec<f64> {
    let d = degree_vector(g);
    d.reduced().iter().map(|&x| x as f64).collect()
}

/// Log-probability of `g`; `-inf` when `g` has a node whose degree is dropped.
pub fn log_prob_1k(g: &Graph, params: &NaturalParams1K, table: &PartitionTable) -> Result<f64> {
    if g.n() != params.n {
        return Err(Error::SizeMismatch { expected: params.n, found: g.n() });
    }
    let psi = psi_1k(params, table)?;
    Ok(Family::log_weight(&reduced_stats(g), &params.alpha) - psi)
}

/// `alpha_{k+1} + alpha_{k'+1} - alpha_k - alpha_{k'}`: log-probability change
/// from joining a node of degree `k` to one of degree `k'`.
pub fn change_statistic(params: &NaturalParams1K, k: usize, k_prime: usize) -> Result<f64> {
    let top = params.n - 2;
    if k > top || k_prime > top {
        return Err(Error::InvalidArgument(format!("degrees must be <= {top}, got {k}, {k_prime}")));
    }
    Ok(params.get(k + 1) + params.get(k_prime + 1) - params.get(k) - params.get(k_prime))
}

/// Sum over graphs with at least one node of degree `k`.
pub fn prob_degree_present(
    k: usize,
    params: &NaturalParams1K,
    full_table: &PartitionTable,
) -> Result<f64> {
    let n = params.n;
    if full_table.key_kind() != KeyKind::DegreeVector || full_table.n() != n || full_table.restricted() {
        return Err(Error::InvalidArgument("need the unrestricted full degree-vector table".into()));
    }
    if k >= n {
        return Err(Error::InvalidArgument(format!("degree {k} out of range for n = {n}")));
    }
    let mut all = Vec::with_capacity(full_table.len());
    let mut hit = Vec::new();
    for (key, count) in full_table.iter() {
        let stat: Vec<f64> = key[..n - 1].iter().map(|&x| x as f64).collect();
        let lw = (count as f64).ln() + Family::log_weight(&stat, &params.alpha);
        all.push(lw);
        if key[k] > 0 {
            hit.push(lw);
        }
    }
    Ok((log_sum_exp(&hit) - log_sum_exp(&all)).exp())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FitResult1K {
    /// The MLE exists on the coordinates that remain after dropping.
    pub exists: bool,
    /// The MLE exists with no coordinate dropped.
    pub exists_full: bool,
    #[serde(rename = "alpha", serialize_with = "ser_fitted")]
    pub alpha_hat: Option<NaturalParams1K>,
    pub observed_mean: Vec<f64>,
    pub moment_residual: Option<f64>,
    pub iterations: usize,
    pub dropped_indices: Vec<usize>,
}

pub fn fit_1k(observations: &[Graph], opts: NewtonOptions) -> Result<FitResult1K> {
    let n = common_n(observations)?;
    fit_1k_with_table(observations, &table_1k(n)?, None, opts)
}

pub(crate) fn common_n(observations: &[Graph]) -> Result<usize> {
    let first = observations
        .first()
        .ok_or_else(|| Error::InvalidArgument("no observations".into()))?
        .n();
    if let Some(g) = observations.iter().find(|g| g.n() != first) {
        return Err(Error::InvalidArgument(format!(
            "observations mix node counts {first} and {}",
            g.n()
        )));
    }
    Ok(first)
}

/// As [`fit_1k`] with a precomputed table and an optional Newton start.
pub fn fit_1k_with_table(
    observations: &[Graph],
    table: &PartitionTable,
    start: Option<&[f64]>,
    opts: NewtonOptions,
) -> Result<FitResult1K> {
    let n = common_n(observations)?;
    check_table(&NaturalParams1K::zero(n)?, table)?;
    let keys: Vec<Vec<i64>> = observations
        .iter()
        .map(|g| degree_vector(g).reduced().iter().map(|&x| x as i64).collect())
        .collect();
    let fit = fit_keys(table, &vec![1.0; n - 1], &keys, start, opts)?;
    let exists = matches!(fit.position, HullPosition::Interior { .. });
    let (alpha_hat, moment_residual, iterations) = match fit.newton {
        Some(s) => (Some(NaturalParams1K::new(n, s.alpha)?), Some(s.residual), s.iterations),
        None => (None, None, 0),
    };
    Ok(FitResult1K {
        exists,
        exists_full: exists && fit.dropped.is_empty(),
        alpha_hat,
        observed_mean: fit.mean,
        moment_residual,
        iterations,
        dropped_indices: fit.dropped,
    })
}

/// `theta` in `alpha_k = (k - (n-1)) * theta` that reproduces `G(n, p)`.
pub fn er_theta(p: f64) -> f64 {
    0.5 * (p / (1.0 - p)).ln()
}

/// The full logit `log(p / (1 - p))`, which does not reproduce G(n, p).
pub fn er_theta_full_logit(p: f64) -> f64 {
    (p / (1.0 - p)).ln()
}

fn check_p(p: f64) -> Result<()> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidArgument(format!("p must lie in (0, 1), got {p}")));
    }
    Ok(())
}

/// 1K parameters with `alpha_k = k * theta`, shifted so the reference degree
/// `n-1` sits at zero. Since `sum_k n_k = n`, the shift does not change the
/// distribution, and `sum_k k n_k = 2 e(g)` gives `P(g) ∝ exp(2 theta e(g))`.
pub fn er_embedding_with_theta(n: usize, theta: f64) -> Result<NaturalParams1K> {
    let top = n as f64 - 1.0;
    NaturalParams1K::new(n, (0..n.saturating_sub(1)).map(|k| (k as f64 - top) * theta).collect())
}

pub fn er_embedding(n: usize, p: f64) -> Result<NaturalParams1K> {
    check_p(p)?;
    er_embedding_with_theta(n, er_theta(p))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ErCalibration {
    pub n: usize,
    pub p: f64,
    pub theta: f64,
    pub theta_full_logit: f64,
    /// Max |P_1K(g) - p^e (1-p)^(C(n,2)-e)| over all graphs, per constant.
    pub max_deviation: f64,
    pub max_deviation_full_logit: f64,
}

/// Compares both embedding constants against `G(n, p)` over every graph.
pub fn er_calibration(n: usize, p: f64) -> Result<ErCalibration> {
    check_p(p)?;
    let table = table_1k(n)?;
    let slots = n * (n - 1) / 2;
    let deviation = |theta: f64| -> Result<f64> {
        let params = er_embedding_with_theta(n, theta)?;
        let psi = psi_1k(&params, &table)?;
        let mut worst: f64 = 0.0;
        for mask in 0..(1u64 << slots) {
            let g = Graph::from_mask(n, mask)?;
            let lp = Family::log_weight(&reduced_stats(&g), params.alpha()) - psi;
            let e = mask.count_ones() as i32;
            let er = p.powi(e) * (1.0 - p).powi(slots as i32 - e);
            worst = worst.max((lp.exp() - er).abs());
        }
        Ok(worst)
    };
    Ok(ErCalibration {
        n,
        p,
        theta: er_theta(p),
        theta_full_logit: er_theta_full_logit(p),
        max_deviation: deviation(er_theta(p))?,
        max_deviation_full_logit: deviation(er_theta_full_logit(p))?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumeration::enumerate;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    fn triangle() -> Graph {
        Graph::complete(3).unwrap()
    }

    #[test]
    fn alpha_p_examples() {
        let u = ProbabilityParams1K::new(vec![0.25; 4]).unwrap();
        assert!(alpha_from_p(&u).unwrap().alpha().iter().all(|&a| a.abs() < 1e-15));
        let p = ProbabilityParams1K::new(vec![1.0 / 6.0, 2.0 / 6.0, 3.0 / 6.0]).unwrap();
        let a = alpha_from_p(&p).unwrap();
        assert!(close(a.alpha()[0], (1.0f64 / 3.0).ln(), 1e-14));
        assert!(close(a.alpha()[1], (2.0f64 / 3.0).ln(), 1e-14));
        let p = ProbabilityParams1K::new(vec![0.0, 0.5, 0.5]).unwrap();
        let a = alpha_from_p(&p).unwrap();
        assert_eq!(a.alpha(), &[f64::NEG_INFINITY, 0.0]);
        assert_eq!(a.dropped(), vec![0]);
        let p = ProbabilityParams1K::new(vec![0.5, 0.5, 0.0]).unwrap();
        assert!(matches!(alpha_from_p(&p), Err(Error::ReferenceCoordinate)));
        let back = p_from_alpha(&alpha_from_p(&ProbabilityParams1K::new(vec![0.2, 0.3, 0.5]).unwrap()).unwrap());
        assert!(back.p().iter().zip([0.2, 0.3, 0.5]).all(|(a, b)| close(*a, b, 1e-15)));
    }

    #[test]
    fn psi_examples() {
        let t = table_1k(3).unwrap();
        let z = NaturalParams1K::zero(3).unwrap();
        assert!(close(psi_1k(&z, &t).unwrap(), 8f64.ln(), 1e-14));
        let a = NaturalParams1K::new(3, vec![2f64.ln(), 3f64.ln()]).unwrap();
        assert!(close(psi_1k(&a, &t).unwrap(), 90f64.ln(), 1e-13));
        let t2 = table_1k(2).unwrap();
        let a = NaturalParams1K::new(2, vec![0.7]).unwrap();
        assert!(close(psi_1k(&a, &t2).unwrap(), (1.0 + 1.4f64.exp()).ln(), 1e-14));
        assert!(psi_1k(&a, &t).is_err());
        let bad = enumerate(3, KeyKind::DegreeVector, false).unwrap();
        assert!(psi_1k(&z, &bad).is_err());
    }

    #[test]
    fn log_prob_examples() {
        let t = table_1k(3).unwrap();
        let z = NaturalParams1K::zero(3).unwrap();
        assert!(close(log_prob_1k(&triangle(), &z, &t).unwrap(), (0.125f64).ln(), 1e-14));
        let a = NaturalParams1K::new(3, vec![2f64.ln(), 3f64.ln()]).unwrap();
        let edge = Graph::from_edges(3, &[(0, 1)]).unwrap();
        assert!(close(log_prob_1k(&edge, &a, &t).unwrap(), 0.2f64.ln(), 1e-13));
        let d = NaturalParams1K::new(3, vec![f64::NEG_INFINITY, 0.0]).unwrap();
        assert_eq!(log_prob_1k(&edge, &d, &t).unwrap(), f64::NEG_INFINITY);
        assert!(log_prob_1k(&Graph::empty(4).unwrap(), &z, &t).is_err());
    }

    #[test]
    fn expected_stats_examples() {
        let t = table_1k(3).unwrap();
        let m = expected_stats_1k(&NaturalParams1K::zero(3).unwrap(), &t).unwrap();
        assert!(close(m[0], 0.75, 1e-14) && close(m[1], 1.5, 1e-14));
        let d = NaturalParams1K::new(3, vec![f64::NEG_INFINITY, 0.4]).unwrap();
        assert_eq!(expected_stats_1k(&d, &t).unwrap()[0], 0.0);
    }

    #[test]
    fn change_statistic_examples() {
        let z = NaturalParams1K::zero(4).unwrap();
        assert_eq!(change_statistic(&z, 0, 2).unwrap(), 0.0);
        let a = NaturalParams1K::new(4, vec![0.0, 1.0, 3.0]).unwrap();
        assert_eq!(change_statistic(&a, 0, 1).unwrap(), 3.0);
        let er = er_embedding_with_theta(6, 0.4).unwrap();
        for k in 0..5 {
            for l in 0..5 {
                assert!(close(change_statistic(&er, k, l).unwrap(), 0.8, 1e-12));
            }
        }
        assert!(change_statistic(&a, 3, 0).is_err());
    }

    #[test]
    fn fit_examples() {
        let path = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let edge = Graph::from_edges(3, &[(0, 1)]).unwrap();
        let r = fit_1k(&[triangle(), edge.clone(), path.clone()], NewtonOptions::default()).unwrap();
        assert!(r.exists && r.exists_full);
        let t = table_1k(3).unwrap();
        let m = expected_stats_1k(r.alpha_hat.as_ref().unwrap(), &t).unwrap();
        assert!(close(m[0], 1.0 / 3.0, 1e-8) && close(m[1], 4.0 / 3.0, 1e-8));

        let r = fit_1k(&[path.clone(), path.clone()], NewtonOptions::default()).unwrap();
        assert!(!r.exists);
        assert_eq!(r.dropped_indices, vec![0]);

        let r = fit_1k(&[edge], NewtonOptions::default()).unwrap();
        assert!(!r.exists_full);
        assert!(fit_1k(&[path, Graph::empty(4).unwrap()], NewtonOptions::default()).is_err());
    }

    #[test]
    fn fit_json_writes_neg_inf_as_string() {
        let p = NaturalParams1K::new(3, vec![f64::NEG_INFINITY, 0.5]).unwrap();
        let v = serde_json::to_value(&p).unwrap();
        assert_eq!(v["alpha"][0], "-inf");
        assert_eq!(v["alpha"][1], 0.5);
    }

    #[test]
    fn er_examples() {
        let a = er_embedding(5, 0.5).unwrap();
        assert!(a.alpha().iter().all(|&x| x == 0.0));
        for (n, p) in [(3, 0.3), (4, 0.7)] {
            let c = er_calibration(n, p).unwrap();
            assert!(c.max_deviation <= 1e-12, "{c:?}");
            assert!(c.max_deviation_full_logit > 1e-3);
        }
        assert!(er_embedding(3, 1.0).is_err());
    }

    #[test]
    fn degree_presence_examples() {
        let t = enumerate(3, KeyKind::DegreeVector, false).unwrap();
        let z = NaturalParams1K::zero(3).unwrap();
        assert!(close(prob_degree_present(2, &z, &t).unwrap(), 0.5, 1e-14));
        let t2 = enumerate(2, KeyKind::DegreeVector, false).unwrap();
        assert!(close(prob_degree_present(1, &NaturalParams1K::zero(2).unwrap(), &t2).unwrap(), 0.5, 1e-14));
        assert!(prob_degree_present(3, &z, &t).is_err());
    }
}
