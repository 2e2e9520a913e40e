//! Exhaustive sweeps over all labeled graphs on `n` nodes.
//!
//! Every edge-slot bitmask in `0..2^C(n,2)` is visited once. Workers take
//! contiguous mask ranges, tally statistic keys privately, and the tallies are
//! merged into an ordered map, so the resulting [`PartitionTable`] does not
//! depend on how the work was split.

use std::collections::{BTreeMap, HashMap};

use num_bigint::{BigInt, BigUint};
use num_rational::{BigRational, Ratio};
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{degree_pairs, pair_index, pair_scale, slot_count, slot_pair};
use crate::numeric::{big_over_pow2, binomial};

/// Which statistic a [`PartitionTable`] is keyed by.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KeyKind {
    /// Full `n^(1)`, length `n`.
    DegreeVector,
    /// `n^(1)` without the reference entry `n_{n-1}`, length `n - 1`.
    ReducedDegreeVector,
    /// `n^(2)` without the reference pair `(n-1, n-1)`. Keys hold the integer
    /// counts; coordinate `c` of the scaled statistic is `key[c] * scale[c]`
    /// (see [`PartitionTable::coordinate_scales`]). The scaling is a positive
    /// per-coordinate constant, so equal keys are exactly equal `ñ^(2)_-`.
    ScaledBiDegree,
    /// `[n_0]`.
    IsolatedNodeCount,
    Custom,
}

/// Largest `n` a sweep may visit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Cap {
    /// `n <= 7`: 2,097,152 graphs.
    #[default]
    Default,
    /// `n <= 8`: 268,435,456 graphs.
    Extended,
}

impl Cap {
    pub fn max_n(self) -> usize {
        match self {
            Cap::Default => 7,
            Cap::Extended => 8,
        }
    }

    fn check(self, n: usize) -> Result<()> {
        if n == 0 {
            return Err(Error::InvalidArgument("n must be at least 1".into()));
        }
        if n > self.max_n() {
            let graphs = BigUint::one() << slot_count(n);
            return Err(Error::CapExceeded { n, cap: self.max_n(), graphs: graphs.to_string() });
        }
        Ok(())
    }
}

/// Multiplicities of a statistic over all (or all isolated-node-free) labeled graphs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionTable {
    n: usize,
    key_kind: KeyKind,
    restricted: bool,
    entries: BTreeMap<Vec<i64>, u64>,
}

#[derive(Serialize, Deserialize)]
struct EntryJson {
    key: Vec<i64>,
    count: u64,
}

#[derive(Serialize, Deserialize)]
struct TableJson {
    n: usize,
    key_kind: KeyKind,
    restricted: bool,
    entries: Vec<EntryJson>,
}

impl PartitionTable {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn key_kind(&self) -> KeyKind {
        self.key_kind
    }

    /// True when the universe is `G_{n-}` (no isolated nodes).
    pub fn restricted(&self) -> bool {
        self.restricted
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, key: &[i64]) -> Option<u64> {
        self.entries.get(key).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[i64], u64)> + '_ {
        self.entries.iter().map(|(k, &c)| (k.as_slice(), c))
    }

    /// Sum of multiplicities: `2^C(n,2)`, or `f(n)` when restricted.
    pub fn total(&self) -> u64 {
        self.entries.values().sum()
    }

    pub fn key_len(&self) -> usize {
        key_len(self.key_kind, self.n).unwrap_or_else(|| {
            self.entries.keys().next().map_or(0, Vec::len)
        })
    }

    /// Per-coordinate factor turning a key into the model statistic.
    pub fn coordinate_scales(&self) -> Vec<Ratio<i64>> {
        match self.key_kind {
            KeyKind::ScaledBiDegree => reduced_pair_scales(self.n),
            _ => vec![Ratio::from_integer(1); self.key_len()],
        }
    }

    /// The model statistic of `key` as exact rationals.
    pub fn key_rationals(&self, key: &[i64]) -> Vec<BigRational> {
        key.iter()
            .zip(self.coordinate_scales())
            .map(|(&k, s)| {
                let v = s * k;
                BigRational::new(BigInt::from(*v.numer()), BigInt::from(*v.denom()))
            })
            .collect()
    }

    /// The model statistic of `key` as floats.
    pub fn key_reals(&self, key: &[i64]) -> Vec<f64> {
        key.iter()
            .zip(self.coordinate_scales())
            .map(|(&k, s)| (s * k).to_f64().unwrap_or(f64::NAN))
            .collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let t = TableJson {
            n: self.n,
            key_kind: self.key_kind,
            restricted: self.restricted,
            entries: self
                .entries
                .iter()
                .map(|(k, &c)| EntryJson { key: k.clone(), count: c })
                .collect(),
        };
        serde_json::to_value(t).expect("table serializes")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let t: TableJson = serde_json::from_value(v.clone())?;
        let mut entries = BTreeMap::new();
        for e in t.entries {
            if e.count == 0 || entries.insert(e.key, e.count).is_some() {
                return Err(Error::InvalidArgument("zero or duplicate table entry".into()));
            }
        }
        Ok(Self { n: t.n, key_kind: t.key_kind, restricted: t.restricted, entries })
    }
}

/// Scales for every degree pair except the reference `(n-1, n-1)`.
pub fn reduced_pair_scales(n: usize) -> Vec<Ratio<i64>> {
    let mut s: Vec<_> = degree_pairs(n).map(|(a, b)| pair_scale(a, b)).collect();
    s.pop();
    s
}

fn key_len(kind: KeyKind, n: usize) -> Option<usize> {
    match kind {
        KeyKind::DegreeVector => Some(n),
        KeyKind::ReducedDegreeVector => Some(n - 1),
        KeyKind::ScaledBiDegree => Some(slot_count(n).saturating_sub(1)),
        KeyKind::IsolatedNodeCount => Some(1),
        KeyKind::Custom => None,
    }
}

const MAX_KEY: usize = 32;
const CHUNK: u64 = 1 << 15;

struct Sweep {
    n: usize,
    slots: usize,
    ends: Vec<(u8, u8)>,
}

impl Sweep {
    fn new(n: usize) -> Self {
        let slots = slot_count(n);
        let ends = (0..slots).map(|s| {
            let (i, j) = slot_pair(s);
            (i as u8, j as u8)
        });
        Self { n, slots, ends: ends.collect() }
    }

    #[inline]
    fn degrees(&self, mask: u64, deg: &mut [u8; 8]) {
        *deg = [0; 8];
        let mut rest = mask;
        while rest != 0 {
            let (i, j) = self.ends[rest.trailing_zeros() as usize];
            deg[i as usize] += 1;
            deg[j as usize] += 1;
            rest &= rest - 1;
        }
    }

    fn run<K, F>(&self, restricted: bool, key: F) -> HashMap<K, u64>
    where
        K: std::hash::Hash + Eq + Send,
        F: Fn(u64, &[u8]) -> K + Sync,
    {
        let total = 1u64 << self.slots;
        let chunks = total.div_ceil(CHUNK);
        (0..chunks)
            .into_par_iter()
            .map(|c| {
                let mut local: HashMap<K, u64> = HashMap::new();
                let mut deg = [0u8; 8];
                for mask in c * CHUNK..((c + 1) * CHUNK).min(total) {
                    self.degrees(mask, &mut deg);
                    let d = &deg[..self.n];
                    if restricted && d.contains(&0) {
                        continue;
                    }
                    *local.entry(key(mask, d)).or_insert(0) += 1;
                }
                local
            })
            .reduce(HashMap::new, |mut a, b| {
                for (k, c) in b {
                    *a.entry(k).or_insert(0) += c;
                }
                a
            })
    }
}

pub fn enumerate(n: usize, key_kind: KeyKind, restricted: bool) -> Result<PartitionTable> {
    enumerate_with_cap(n, key_kind, restricted, Cap::Default)
}

pub fn enumerate_with_cap(
    n: usize,
    key_kind: KeyKind,
    restricted: bool,
    cap: Cap,
) -> Result<PartitionTable> {
    if key_kind == KeyKind::Custom {
        return Err(Error::InvalidArgument("custom keys need enumerate_custom".into()));
    }
    cap.check(n)?;
    let len = key_len(key_kind, n).expect("built-in kind");
    let sweep = Sweep::new(n);
    let raw = sweep.run(restricted, |mask, d| {
        let mut k = [0u8; MAX_KEY];
        match key_kind {
            KeyKind::DegreeVector | KeyKind::ReducedDegreeVector => {
                for &x in d {
                    if (x as usize) < len {
                        k[x as usize] += 1;
                    }
                }
            }
            KeyKind::IsolatedNodeCount => k[0] = d.iter().filter(|&&x| x == 0).count() as u8,
            KeyKind::ScaledBiDegree => {
                let mut rest = mask;
                while rest != 0 {
                    let (i, j) = sweep.ends[rest.trailing_zeros() as usize];
                    let (a, b) = (d[i as usize], d[j as usize]);
                    let idx = pair_index(n, a.min(b) as usize, a.max(b) as usize);
                    if idx < len {
                        k[idx] += 1;
                    }
                    rest &= rest - 1;
                }
            }
            KeyKind::Custom => unreachable!(),
        }
        k
    });
    let entries = raw
        .into_iter()
        .map(|(k, c)| (k[..len].iter().map(|&x| x as i64).collect(), c))
        .collect();
    Ok(PartitionTable { n, key_kind, restricted, entries })
}

/// Sweep with a caller-supplied statistic of `(mask, degrees)`.
pub fn enumerate_custom<F>(n: usize, restricted: bool, cap: Cap, key: F) -> Result<PartitionTable>
where
    F: Fn(u64, &[u8]) -> Vec<i64> + Sync,
{
    cap.check(n)?;
    let entries = Sweep::new(n).run(restricted, key).into_iter().collect();
    Ok(PartitionTable { n, key_kind: KeyKind::Custom, restricted, entries })
}

/// `f(n)`: labeled `n`-node graphs without isolated nodes, for every size up to `n`,
/// from `f(m) = 2^C(m,2) - sum_{i<m} C(m,i) f(i)`.
pub fn count_no_isolated_upto(n: usize) -> Vec<BigUint> {
    let mut f: Vec<BigUint> = Vec::with_capacity(n + 1);
    for m in 0..=n {
        let all = BigUint::one() << slot_count(m);
        let with_isolated: BigUint =
            (0..m).map(|i| binomial(m as u64, i as u64) * &f[i]).sum();
        f.push(all - with_isolated);
    }
    f
}

pub fn count_no_isolated(n: usize) -> BigUint {
    count_no_isolated_upto(n).pop().expect("non-empty")
}

/// `ν_n(j) = C(n, j) f(n - j)`: graphs with exactly `j` isolated nodes.
pub fn nu(n: usize, j: usize) -> Result<BigUint> {
    if j > n {
        return Err(Error::InvalidArgument(format!("j = {j} exceeds n = {n}")));
    }
    Ok(binomial(n as u64, j as u64) * count_no_isolated(n - j))
}

/// `f(n) / 2^C(n,2)`.
pub fn dominance_ratio(n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    Ok(big_over_pow2(&count_no_isolated(n), slot_count(n) as u64))
}
