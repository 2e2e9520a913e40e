//! Desk-scale experiments for the large-`n` behaviour of the 1K model:
//! degree-presence thresholds and distinct-degree counts in `G(n, 1/2)`,
//! `lambda_k(n)`, `h_n`, the parameter-band bound, the degree-band event
//! versus Erdős–Rényi, isolated-node dominance and the 2K non-zero counts.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::constructions::spectrum_bidegree_nonzeros;
use crate::enumeration::{count_no_isolated, enumerate, nu, Cap, KeyKind, PartitionTable};
use crate::error::{Error, Result};
use crate::family::Family;
use crate::model1k::{er_calibration, prob_degree_present, NaturalParams1K};
use crate::model2k::{bidegree_nonzero_upper_bound, GreedyRule};
use crate::numeric::{big_over_pow2, ln_binomial, log_sum_exp};

/// Shape of the offset `a_n` in `k(n) = (n-1)/2 + a_n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SequenceKind {
    /// `a_n = c sqrt(n)`
    SqrtN,
    /// `a_n = c sqrt(n log n)`
    SqrtNLogN,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub n_values: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    pub sequence: SequenceKind,
    pub c: f64,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidArgument("trials must be >= 1".into()));
        }
        if self.n_values.is_empty() {
            return Err(Error::InvalidArgument("no n values".into()));
        }
        if let Some(n) = self.n_values.iter().find(|&&n| n < 2) {
            return Err(Error::InvalidArgument(format!("n must be >= 2, got {n}")));
        }
        if !self.c.is_finite() {
            return Err(Error::InvalidArgument("c must be finite".into()));
        }
        Ok(())
    }

    pub fn a_n(&self, n: usize) -> f64 {
        let n = n as f64;
        match self.sequence {
            SequenceKind::SqrtN => self.c * n.sqrt(),
            SequenceKind::SqrtNLogN => self.c * (n * n.ln()).sqrt(),
        }
    }
}

/// Rows of one experiment plus what is needed to reproduce them.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentReport<R> {
    pub experiment: String,
    pub seed: Option<u64>,
    pub trials: Option<usize>,
    pub rows: Vec<R>,
}

impl<R: Serialize> ExperimentReport<R> {
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for r in &self.rows {
            w.serialize(r)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is utf-8"))
    }
}

/// `lambda_k(n) = n C(n-1, k) 2^{-(n-1)}`, the expected number of degree-`k` nodes in `G(n, 1/2)`.
pub fn lambda_k(n: usize, k: usize) -> Result<f64> {
    if n == 0 || k >= n {
        return Err(Error::InvalidArgument(format!("need 0 <= k < n, got n = {n}, k = {k}")));
    }
    let m = (n - 1) as u64;
    Ok(((n as f64).ln() + ln_binomial(m, k as u64) - m as f64 * std::f64::consts::LN_2).exp())
}

/// `h_n = (1 - 2a/n)^{1/2 - a/n} (1 + 2a/n)^{1/2 + a/n}`, with `0^0 = 1`.
pub fn h_sequence(n: usize, a: f64) -> Result<f64> {
    let half = n as f64 / 2.0;
    if n == 0 || !(0.0..=half).contains(&a) {
        return Err(Error::InvalidArgument(format!("need 0 <= a_n <= n/2, got a_n = {a}, n = {n}")));
    }
    let x = a / n as f64;
    let term = |e: f64, b: f64| if e == 0.0 { 0.0 } else { e * b.ln() };
    Ok((term(0.5 - x, 1.0 - 2.0 * x) + term(0.5 + x, 1.0 + 2.0 * x)).exp())
}

fn trial_rng(seed: u64, n: usize, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (n as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    rng.set_stream(trial as u64);
    rng
}

/// Degrees of a `G(n, 1/2)` sample, drawn row by row as random bit words.
pub fn sample_degrees<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<u32> {
    let mut deg = vec![0u32; n];
    for i in 0..n {
        let mut j0 = i + 1;
        while j0 < n {
            let width = (n - j0).min(64);
            let mut word = rng.next_u64();
            if width < 64 {
                word &= (1u64 << width) - 1;
            }
            deg[i] += word.count_ones();
            while word != 0 {
                deg[j0 + word.trailing_zeros() as usize] += 1;
                word &= word - 1;
            }
            j0 += 64;
        }
    }
    deg
}

fn mean_se(xs: &[f64]) -> (f64, f64) {
    let m = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / m;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (m - 1.0);
    (mean, (var / m).sqrt())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PresenceRow {
    pub n: usize,
    pub a_n: f64,
    pub k: usize,
    /// `k(n)` fell outside `[0, n-1]` and was clipped.
    pub clipped: bool,
    pub trials: usize,
    pub frequency: f64,
    pub std_error: f64,
    pub lambda: f64,
}

/// `k(n) = round((n-1)/2 + a_n)` clipped to `[0, n-1]`.
pub fn target_degree(n: usize, a_n: f64) -> (usize, bool) {
    let raw = ((n as f64 - 1.0) / 2.0 + a_n).round();
    let top = n as f64 - 1.0;
    let k = raw.clamp(0.0, top);
    (k as usize, k != raw)
}

/// Frequency of `n_{k(n)} > 0` over `G(n, 1/2)` samples.
pub fn mc_degree_presence(config: &ExperimentConfig) -> Result<ExperimentReport<PresenceRow>> {
    config.validate()?;
    let mut rows = Vec::new();
    for &n in &config.n_values {
        let a_n = config.a_n(n);
        let (k, clipped) = target_degree(n, a_n);
        let hits: Vec<f64> = (0..config.trials)
            .into_par_iter()
            .map(|t| {
                let deg = sample_degrees(n, &mut trial_rng(config.seed, n, t));
                if deg.contains(&(k as u32)) {
                    1.0
                } else {
                    0.0
                }
            })
            .collect();
        let (frequency, _) = mean_se(&hits);
        let std_error = (frequency * (1.0 - frequency) / config.trials as f64).sqrt();
        rows.push(PresenceRow {
            n,
            a_n,
            k,
            clipped,
            trials: config.trials,
            frequency,
            std_error,
            lambda: lambda_k(n, k)?,
        });
    }
    Ok(ExperimentReport {
        experiment: "prop5".into(),
        seed: Some(config.seed),
        trials: Some(config.trials),
        rows,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NonzeroRow {
    pub n: usize,
    pub trials: usize,
    pub mean: f64,
    pub std_error: f64,
    pub sqrt_n_log_n: f64,
    /// `mean / sqrt(n log n)`
    pub normalized: f64,
}

/// Mean number `N` of non-zero entries of the degree vector of `G(n, 1/2)`.
pub fn mc_nonzero_count(config: &ExperimentConfig) -> Result<ExperimentReport<NonzeroRow>> {
    config.validate()?;
    let mut rows = Vec::new();
    for &n in &config.n_values {
        let counts: Vec<f64> = (0..config.trials)
            .into_par_iter()
            .map(|t| {
                let deg = sample_degrees(n, &mut trial_rng(config.seed, n, t));
                let mut seen = vec![false; n];
                for d in deg {
                    seen[d as usize] = true;
                }
                seen.iter().filter(|&&s| s).count() as f64
            })
            .collect();
        let (mean, std_error) = mean_se(&counts);
        let scale = (n as f64 * (n as f64).ln()).sqrt();
        rows.push(NonzeroRow { n, trials: config.trials, mean, std_error, sqrt_n_log_n: scale, normalized: mean / scale });
    }
    Ok(ExperimentReport {
        experiment: "prop6".into(),
        seed: Some(config.seed),
        trials: Some(config.trials),
        rows,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SingularityRow {
    pub n: usize,
    pub p: f64,
    pub c: f64,
    pub band_low: f64,
    pub band_high: f64,
    pub prob_er: f64,
    pub prob_1k: f64,
}

/// Exact probability of the degree-band event
/// `{all degrees within (n-1)p ± C sqrt(n log n)}` under `G(n, p)` and under
/// the 1K model with `alpha`.
pub fn singularity_experiment(
    n: usize,
    p: f64,
    c: f64,
    alpha: &NaturalParams1K,
    cap: Cap,
) -> Result<SingularityRow> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidArgument(format!("p must lie in (0, 1), got {p}")));
    }
    if alpha.n() != n {
        return Err(Error::SizeMismatch { expected: n, found: alpha.n() });
    }
    let table = crate::enumeration::enumerate_with_cap(n, KeyKind::DegreeVector, false, cap)?;
    let centre = (n as f64 - 1.0) * p;
    let half = c * (n as f64 * (n as f64).ln()).sqrt();
    let (lo, hi) = (centre - half, centre + half);
    let slots = (n * (n - 1) / 2) as f64;
    let (lp, lq) = (p.ln(), (1.0 - p).ln());

    let mut er_in = Vec::new();
    let mut model_all = Vec::new();
    let mut model_in = Vec::new();
    for (key, count) in table.iter() {
        let inside = key.iter().enumerate().all(|(k, &m)| m == 0 || (lo..=hi).contains(&(k as f64)));
        let e = key.iter().enumerate().map(|(k, &m)| k as i64 * m).sum::<i64>() as f64 / 2.0;
        let lc = (count as f64).ln();
        let stat: Vec<f64> = key[..n - 1].iter().map(|&m| m as f64).collect();
        let lw = lc + Family::log_weight(&stat, alpha.alpha());
        model_all.push(lw);
        if inside {
            er_in.push(lc + e * lp + (slots - e) * lq);
            model_in.push(lw);
        }
    }
    Ok(SingularityRow {
        n,
        p,
        c,
        band_low: lo,
        band_high: hi,
        prob_er: log_sum_exp(&er_in).exp(),
        prob_1k: (log_sum_exp(&model_in) - log_sum_exp(&model_all)).exp(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BandBoundRow {
    pub n: usize,
    pub k: usize,
    pub prob_alpha: f64,
    pub prob_zero: f64,
    /// `(C/c)^n P_0(n_k > 0)`
    pub bound: f64,
    /// `(C/c)^n lambda_k(n)`
    pub lambda_bound: f64,
    pub holds: bool,
}

/// Checks `P_alpha(n_k > 0) <= (C/c)^n P_0(n_k > 0) <= (C/c)^n lambda_k(n)`
/// for every `k`, where every `e^{alpha_i}` (reference included) lies in `[c, C]`.
pub fn band_bound(
    alpha: &NaturalParams1K,
    c_low: f64,
    c_high: f64,
    full_table: &PartitionTable,
) -> Result<Vec<BandBoundRow>> {
    let n = alpha.n();
    let lo = c_low.ln();
    let hi = c_high.ln();
    let all = alpha.alpha().iter().chain(std::iter::once(&0.0));
    if !(c_low > 0.0 && c_low <= c_high) || all.clone().any(|&a| a < lo - 1e-15 || a > hi + 1e-15) {
        return Err(Error::InvalidArgument(format!(
            "parameters (and the reference 0) must lie in [log {c_low}, log {c_high}]"
        )));
    }
    let zero = NaturalParams1K::zero(n)?;
    let factor = (c_high / c_low).powi(n as i32);
    (0..n)
        .map(|k| {
            let prob_alpha = prob_degree_present(k, alpha, full_table)?;
            let prob_zero = prob_degree_present(k, &zero, full_table)?;
            let bound = factor * prob_zero;
            let lambda_bound = factor * lambda_k(n, k)?;
            let slack = 1e-12 * bound.max(1.0);
            Ok(BandBoundRow {
                n,
                k,
                prob_alpha,
                prob_zero,
                bound,
                lambda_bound,
                holds: prob_alpha <= bound + slack && bound <= lambda_bound + slack,
            })
        })
        .collect()
}

/// [`band_bound`] for `draws` parameter vectors per `n`, each entry uniform in
/// `[log c_low, log c_high]`.
pub fn band_bound_sweep(
    n_values: &[usize],
    draws: usize,
    c_low: f64,
    c_high: f64,
    seed: u64,
    cap: Cap,
) -> Result<ExperimentReport<BandBoundRow>> {
    if !(c_low > 0.0 && c_low <= c_high) {
        return Err(Error::InvalidArgument(format!("need 0 < c_low <= c_high, got {c_low}, {c_high}")));
    }
    let (lo, hi) = (c_low.ln(), c_high.ln());
    let mut rows = Vec::new();
    for &n in n_values {
        let table = crate::enumeration::enumerate_with_cap(n, KeyKind::DegreeVector, false, cap)?;
        for d in 0..draws {
            let mut rng = trial_rng(seed, n, d);
            let alpha = NaturalParams1K::new(n, (0..n - 1).map(|_| rng.random_range(lo..=hi)).collect())?;
            rows.extend(band_bound(&alpha, c_low, c_high, &table)?);
        }
    }
    Ok(ExperimentReport { experiment: "band-bound".into(), seed: Some(seed), trials: Some(draws), rows })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SequenceRow {
    pub n: usize,
    pub a_n: f64,
    pub k: usize,
    pub clipped: bool,
    pub lambda: f64,
    /// Empty when `a_n > n/2`.
    pub h: Option<f64>,
}

/// `lambda_{k(n)}(n)` and `h_n` along the configured offset sequence.
pub fn sequence_rows(config: &ExperimentConfig) -> Result<ExperimentReport<SequenceRow>> {
    if config.n_values.is_empty() || config.n_values.contains(&0) || config.n_values.contains(&1) {
        return Err(Error::InvalidArgument("n values must be >= 2".into()));
    }
    let rows = config
        .n_values
        .iter()
        .map(|&n| {
            let a_n = config.a_n(n);
            let (k, clipped) = target_degree(n, a_n);
            let h = if (0.0..=n as f64 / 2.0).contains(&a_n) { Some(h_sequence(n, a_n)?) } else { None };
            Ok(SequenceRow { n, a_n, k, clipped, lambda: lambda_k(n, k)?, h })
        })
        .collect::<Result<_>>()?;
    Ok(ExperimentReport { experiment: "lambda".into(), seed: None, trials: None, rows })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NuRow {
    pub n: usize,
    /// `f(n)`, graphs without isolated nodes.
    pub f: String,
    pub dominance_ratio: f64,
    /// `sum_j nu_n(j) = 2^C(n,2)` holds exactly.
    pub nu_sum_ok: bool,
}

pub fn nu_dominance(n_max: usize) -> Result<ExperimentReport<NuRow>> {
    let mut rows = Vec::new();
    for n in 1..=n_max {
        let slots = n * (n - 1) / 2;
        let mut sum = num_bigint::BigUint::from(0u32);
        for j in 0..=n {
            sum += nu(n, j)?;
        }
        let f = count_no_isolated(n);
        rows.push(NuRow {
            n,
            dominance_ratio: big_over_pow2(&f, slots as u64),
            f: f.to_string(),
            nu_sum_ok: sum == (num_bigint::BigUint::from(1u32) << slots),
        });
    }
    Ok(ExperimentReport { experiment: "nu-dominance".into(), seed: None, trials: None, rows })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GreedyBoundRow {
    pub n: usize,
    pub count: usize,
    /// `count / (n(n+1)/2)`
    pub ratio: f64,
}

/// Greedy upper bound on estimable 2K parameters for `n = step, 2 step, ..., <= n_max`.
pub fn greedy_bound_rows(n_max: usize, step: usize, rule: GreedyRule) -> Result<ExperimentReport<GreedyBoundRow>> {
    if step == 0 {
        return Err(Error::InvalidArgument("step must be >= 1".into()));
    }
    let rows = (1..=n_max / step)
        .map(|i| i * step)
        .filter(|&n| n >= 2)
        .map(|n| {
            let (count, ratio) = bidegree_nonzero_upper_bound(n, rule)?;
            Ok(GreedyBoundRow { n, count, ratio })
        })
        .collect::<Result<_>>()?;
    Ok(ExperimentReport { experiment: "fig4".into(), seed: None, trials: None, rows })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectrumRow {
    pub n: usize,
    pub nonzeros: usize,
    /// `((n-1)/2)^2` for odd `n`, `((n-2)/2)^2 + n/2` for even `n`.
    pub closed_form: usize,
    /// `nonzeros / (n(n+1)/2)`
    pub ratio: f64,
}

pub fn spectrum_closed_form(n: usize) -> usize {
    if n % 2 == 1 {
        ((n - 1) / 2).pow(2)
    } else {
        ((n - 2) / 2).pow(2) + n / 2
    }
}

pub fn spectrum_rows(n_values: &[usize]) -> Result<ExperimentReport<SpectrumRow>> {
    let rows = n_values
        .iter()
        .map(|&n| {
            let nonzeros = spectrum_bidegree_nonzeros(n)?;
            Ok(SpectrumRow {
                n,
                nonzeros,
                closed_form: spectrum_closed_form(n),
                ratio: nonzeros as f64 / (n * (n + 1) / 2) as f64,
            })
        })
        .collect::<Result<_>>()?;
    Ok(ExperimentReport { experiment: "spectrum".into(), seed: None, trials: None, rows })
}

pub fn er_embedding_rows(
    n_values: &[usize],
    p_values: &[f64],
) -> Result<ExperimentReport<crate::model1k::ErCalibration>> {
    let mut rows = Vec::new();
    for &n in n_values {
        for &p in p_values {
            rows.push(er_calibration(n, p)?);
        }
    }
    Ok(ExperimentReport { experiment: "er-embedding".into(), seed: None, trials: None, rows })
}

/// Exact `P(n_k > 0)` under the uniform model, for cross-checking the sampler.
pub fn exact_presence_uniform(n: usize, k: usize) -> Result<f64> {
    let table = enumerate(n, KeyKind::DegreeVector, false)?;
    prob_degree_present(k, &NaturalParams1K::zero(n)?, &table)
}
