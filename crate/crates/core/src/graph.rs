//! Labeled simple graphs and their degree / bi-degree statistics.
//!
//! A graph on `n` nodes is a bitmask over the `n(n-1)/2` unordered node pairs.
//! Pair `(i, j)` with `i < j` lives in slot `j(j-1)/2 + i`, so for small `n` the
//! integers `0..2^C(n,2)` enumerate every labeled graph exactly once.

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::Zero;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Number of edge slots for `n` nodes.
#[inline]
pub const fn slot_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Slot index of the unordered pair `{i, j}`, `i < j`.
#[inline]
pub const fn slot(i: usize, j: usize) -> usize {
    debug_assert!(i < j);
    j * (j - 1) / 2 + i
}

/// Inverse of [`slot`].
pub fn slot_pair(s: usize) -> (usize, usize) {
    // largest j with j(j-1)/2 <= s
    let mut j = ((1.0 + (1.0 + 8.0 * s as f64).sqrt()) / 2.0) as usize;
    while j * (j - 1) / 2 > s {
        j -= 1;
    }
    while (j + 1) * j / 2 <= s {
        j += 1;
    }
    (s - j * (j - 1) / 2, j)
}

/// A labeled simple undirected graph.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Graph {
    n: usize,
    words: Vec<u64>,
}

impl Graph {
    /// The graph on `n` nodes with no edges.
    pub fn empty(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGraph("a graph needs at least one node".into()));
        }
        Ok(Self { n, words: vec![0; slot_count(n).div_ceil(64)] })
    }

    pub fn complete(n: usize) -> Result<Self> {
        let mut g = Self::empty(n)?;
        for s in 0..slot_count(n) {
            g.words[s / 64] |= 1 << (s % 64);
        }
        Ok(g)
    }

    /// Builds a graph from an edge list, rejecting loops, duplicates and
    /// out-of-range endpoints. Endpoint order within a pair is irrelevant.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::empty(n)?;
        for &(a, b) in edges {
            g.try_add_edge(a, b)?;
        }
        Ok(g)
    }

    /// Decodes an edge-slot bitmask; requires `C(n,2) <= 64`.
    pub fn from_mask(n: usize, mask: u64) -> Result<Self> {
        let slots = slot_count(n);
        if slots > 64 {
            return Err(Error::InvalidArgument(format!("{n} nodes do not fit a 64-bit mask")));
        }
        if slots < 64 && mask >> slots != 0 {
            return Err(Error::InvalidGraph(format!("mask has bits beyond slot {slots}")));
        }
        let mut g = Self::empty(n)?;
        if slots > 0 {
            g.words[0] = mask;
        }
        Ok(g)
    }

    /// The edge-slot bitmask, when it fits in 64 bits.
    pub fn mask(&self) -> Option<u64> {
        match self.words.len() {
            0 => Some(0),
            1 => Some(self.words[0]),
            _ => None,
        }
    }

    /// Erdős–Rényi G(n, p) sample.
    pub fn random<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Result<Self> {
        let mut g = Self::empty(n)?;
        for s in 0..slot_count(n) {
            if rng.random_bool(p) {
                g.words[s / 64] |= 1 << (s % 64);
            }
        }
        Ok(g)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    fn check_pair(&self, a: usize, b: usize) -> Result<(usize, usize)> {
        if a >= self.n || b >= self.n {
            return Err(Error::InvalidGraph(format!(
                "edge ({a}, {b}) out of range for {} nodes",
                self.n
            )));
        }
        if a == b {
            return Err(Error::InvalidGraph(format!("self-loop at node {a}")));
        }
        Ok((a.min(b), a.max(b)))
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        match self.check_pair(a, b) {
            Ok((i, j)) => {
                let s = slot(i, j);
                self.words[s / 64] >> (s % 64) & 1 == 1
            }
            Err(_) => false,
        }
    }

    /// Adds an edge; an already present edge is an error.
    pub fn try_add_edge(&mut self, a: usize, b: usize) -> Result<()> {
        let (i, j) = self.check_pair(a, b)?;
        let s = slot(i, j);
        if self.words[s / 64] >> (s % 64) & 1 == 1 {
            return Err(Error::InvalidGraph(format!("duplicate edge ({i}, {j})")));
        }
        self.words[s / 64] |= 1 << (s % 64);
        Ok(())
    }

    pub fn remove_edge(&mut self, a: usize, b: usize) -> Result<()> {
        let (i, j) = self.check_pair(a, b)?;
        let s = slot(i, j);
        if self.words[s / 64] >> (s % 64) & 1 == 0 {
            return Err(Error::InvalidGraph(format!("edge ({i}, {j}) not present")));
        }
        self.words[s / 64] &= !(1 << (s % 64));
        Ok(())
    }

    pub fn edge_count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Edges as `(i, j)` with `i < j`, in slot order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let b = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(slot_pair(wi * 64 + b))
            })
        })
    }

    /// Per-node degrees `d_0, ..., d_{n-1}`.
    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.n];
        for (i, j) in self.edges() {
            d[i] += 1;
            d[j] += 1;
        }
        d
    }

    /// The graph with node `v` renamed to `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.n {
            return Err(Error::SizeMismatch { expected: self.n, found: perm.len() });
        }
        let mut seen = vec![false; self.n];
        for &p in perm {
            if p >= self.n || std::mem::replace(&mut seen[p], true) {
                return Err(Error::InvalidArgument("relabeling is not a permutation".into()));
            }
        }
        let mut g = Self::empty(self.n)?;
        for (i, j) in self.edges() {
            g.try_add_edge(perm[i], perm[j])?;
        }
        Ok(g)
    }
}

/// `n^(1)(g)`: entry `k` is the number of nodes of degree `k`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DegreeVector(Vec<u64>);

impl DegreeVector {
    /// Wraps raw counts; their total must equal their length (the node count).
    pub fn new(counts: Vec<u64>) -> Result<Self> {
        let total: u64 = counts.iter().sum();
        if counts.is_empty() || total != counts.len() as u64 {
            return Err(Error::InvalidDegreeVector(format!(
                "counts sum to {total} but describe {} nodes",
                counts.len()
            )));
        }
        Ok(Self(counts))
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn counts(&self) -> &[u64] {
        &self.0
    }

    /// `n^(1)_-`: the vector with the reference entry `n_{n-1}` removed.
    pub fn reduced(&self) -> &[u64] {
        &self.0[..self.0.len() - 1]
    }

    pub fn isolated(&self) -> u64 {
        self.0[0]
    }

    /// Number of degrees that occur at least once.
    pub fn nonzero_count(&self) -> usize {
        self.0.iter().filter(|&&c| c > 0).count()
    }
}

/// Lexicographic position of the degree pair `(k1, k2)`, `1 <= k1 <= k2 <= n-1`.
pub fn pair_index(n: usize, k1: usize, k2: usize) -> usize {
    debug_assert!(1 <= k1 && k1 <= k2 && k2 < n);
    (k1 - 1) * n - (k1 - 1) * k1 / 2 + (k2 - k1)
}

/// All degree pairs for `n` nodes in lexicographic order.
pub fn degree_pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (1..n).flat_map(move |k1| (k1..n).map(move |k2| (k1, k2)))
}

/// The factor `(k1 + k2) / (k1 k2)` applied to `n_{k1 k2}`.
pub fn pair_scale(k1: usize, k2: usize) -> Ratio<i64> {
    Ratio::new((k1 + k2) as i64, (k1 * k2) as i64)
}

/// `n^(2)(g)`: counts of edges by unordered endpoint-degree pair.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct BiDegreeVector {
    n: usize,
    counts: Vec<u64>,
}

impl BiDegreeVector {
    pub fn new(n: usize, counts: Vec<u64>) -> Result<Self> {
        if n == 0 || counts.len() != slot_count(n) {
            return Err(Error::SizeMismatch { expected: slot_count(n), found: counts.len() });
        }
        Ok(Self { n, counts })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn get(&self, k1: usize, k2: usize) -> u64 {
        let (a, b) = (k1.min(k2), k1.max(k2));
        self.counts[pair_index(self.n, a, b)]
    }

    pub fn edge_count(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn nonzero_count(&self) -> usize {
        self.counts.iter().filter(|&&c| c > 0).count()
    }
}

/// `ñ^(2)(g)`: the bi-degree counts scaled by `(k1 + k2) / (k1 k2)`, exactly.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ScaledBiDegreeVector {
    n: usize,
    entries: Vec<Ratio<i64>>,
}

impl ScaledBiDegreeVector {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[Ratio<i64>] {
        &self.entries
    }

    /// Exact sum of all entries.
    pub fn sum(&self) -> BigRational {
        self.entries
            .iter()
            .filter(|e| !e.is_zero())
            .map(|e| BigRational::new(BigInt::from(*e.numer()), BigInt::from(*e.denom())))
            .fold(BigRational::zero(), |acc, x| acc + x)
    }
}

pub fn degree_vector(g: &Graph) -> DegreeVector {
    let mut counts = vec![0u64; g.n()];
    for d in g.degrees() {
        counts[d] += 1;
    }
    DegreeVector(counts)
}

pub fn bi_degree_vector(g: &Graph) -> BiDegreeVector {
    let n = g.n();
    let deg = g.degrees();
    let mut counts = vec![0u64; slot_count(n)];
    for (i, j) in g.edges() {
        let (a, b) = (deg[i].min(deg[j]), deg[i].max(deg[j]));
        counts[pair_index(n, a, b)] += 1;
    }
    BiDegreeVector { n, counts }
}

pub fn scaled_bi_degree(g: &Graph) -> ScaledBiDegreeVector {
    scale_bi_degrees(&bi_degree_vector(g))
}

pub fn scale_bi_degrees(b: &BiDegreeVector) -> ScaledBiDegreeVector {
    let entries = degree_pairs(b.n)
        .zip(&b.counts)
        .map(|((k1, k2), &c)| pair_scale(k1, k2) * c as i64)
        .collect();
    ScaledBiDegreeVector { n: b.n, entries }
}

/// Edge count recovered from the degree counts: `e = (1/2) sum_k k n_k`.
pub fn edges_from_degrees(d: &DegreeVector) -> Result<u64> {
    let twice: u64 = d.0.iter().enumerate().map(|(k, &c)| k as u64 * c).sum();
    if twice % 2 == 1 {
        return Err(Error::InvalidDegreeVector(format!("degree sum {twice} is odd")));
    }
    Ok(twice / 2)
}

/// Recovers `n^(1)` from `n^(2)`:
/// `n_k = (1/k) (sum_{k'<=k} n_{k'k} + sum_{k'>=k} n_{kk'})` and `n_0 = n - sum n_k`.
pub fn degrees_from_bidegrees(b: &BiDegreeVector) -> Result<DegreeVector> {
    let n = b.n;
    let mut counts = vec![0u64; n];
    for (k, count) in counts.iter_mut().enumerate().skip(1) {
        let endpoint_slots: u64 =
            (1..=k).map(|k1| b.get(k1, k)).sum::<u64>() + (k..n).map(|k2| b.get(k, k2)).sum::<u64>();
        if !endpoint_slots.is_multiple_of(k as u64) {
            return Err(Error::InconsistentBiDegree(format!(
                "{endpoint_slots} edge endpoints at degree {k} is not a multiple of {k}"
            )));
        }
        *count = endpoint_slots / k as u64;
    }
    let positive: u64 = counts[1..].iter().sum();
    if positive > n as u64 {
        return Err(Error::InconsistentBiDegree(format!(
            "{positive} non-isolated nodes exceed n = {n}"
        )));
    }
    counts[0] = n as u64 - positive;
    for (k1, k2) in degree_pairs(n) {
        let cap = if k1 == k2 {
            counts[k1] * counts[k1].saturating_sub(1) / 2
        } else {
            counts[k1] * counts[k2]
        };
        if b.get(k1, k2) > cap {
            return Err(Error::InconsistentBiDegree(format!(
                "{} edges between degrees {k1} and {k2} exceed the {cap} possible node pairs",
                b.get(k1, k2)
            )));
        }
    }
    Ok(DegreeVector(counts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn four_node_example() -> Graph {
        // a=0, b=1, c=2, d=3: edges ab, bc, bd, cd
        Graph::from_edges(4, &[(0, 1), (1, 2), (1, 3), (2, 3)]).unwrap()
    }

    fn path3() -> Graph {
        Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap()
    }

    #[test]
    fn slot_roundtrip() {
        for j in 1..80 {
            for i in 0..j {
                assert_eq!(slot_pair(slot(i, j)), (i, j));
            }
        }
        assert_eq!(slot(0, 1), 0);
        assert_eq!(slot(0, 2), 1);
        assert_eq!(slot(1, 2), 2);
        assert_eq!(slot(0, 3), 3);
    }

    #[test]
    fn four_node_statistics() {
        let g = four_node_example();
        assert_eq!(degree_vector(&g).counts(), &[0, 1, 2, 1]);
        assert_eq!(bi_degree_vector(&g).counts(), &[0, 0, 1, 1, 2, 0]);
        let s = scaled_bi_degree(&g);
        let want = [(0, 1), (0, 1), (4, 3), (1, 1), (5, 3), (0, 1)];
        for (e, (a, b)) in s.entries().iter().zip(want) {
            assert_eq!(*e, Ratio::new(a, b));
        }
        assert_eq!(s.sum(), BigRational::from_integer(4.into()));
    }

    #[test]
    fn trivial_degree_vectors() {
        assert_eq!(degree_vector(&Graph::empty(5).unwrap()).counts(), &[5, 0, 0, 0, 0]);
        assert_eq!(degree_vector(&Graph::complete(4).unwrap()).counts(), &[0, 0, 0, 4]);
    }

    #[test]
    fn small_bi_degree_vectors() {
        let k2 = Graph::from_edges(2, &[(0, 1)]).unwrap();
        assert_eq!(bi_degree_vector(&k2).counts(), &[1]);
        assert_eq!(bi_degree_vector(&path3()).counts(), &[0, 2, 0]);
        let s = scaled_bi_degree(&path3());
        assert_eq!(s.entries(), &[Ratio::from(0), Ratio::from(3), Ratio::from(0)]);
        assert_eq!(s.sum().to_i64(), Some(3));
        let e = scaled_bi_degree(&Graph::empty(4).unwrap());
        assert!(e.entries().iter().all(Zero::is_zero));
        assert!(e.sum().is_zero());
    }

    #[test]
    fn single_node_graph() {
        let g = Graph::empty(1).unwrap();
        assert_eq!(degree_vector(&g).counts(), &[1]);
        assert!(bi_degree_vector(&g).counts().is_empty());
        assert_eq!(degrees_from_bidegrees(&bi_degree_vector(&g)).unwrap().counts(), &[1]);
    }

    #[test]
    fn edges_from_degree_counts() {
        let d = |v: Vec<u64>| DegreeVector::new(v).unwrap();
        assert_eq!(edges_from_degrees(&d(vec![0, 1, 2, 1])).unwrap(), 4);
        assert_eq!(edges_from_degrees(&d(vec![6, 0, 0, 0, 0, 0])).unwrap(), 0);
        assert_eq!(edges_from_degrees(&d(vec![0, 0, 0, 4])).unwrap(), 6);
        assert!(matches!(
            edges_from_degrees(&d(vec![2, 1, 0])),
            Err(Error::InvalidDegreeVector(_))
        ));
    }

    #[test]
    fn degrees_recovered_from_bidegrees() {
        let b = |n, v: Vec<u64>| BiDegreeVector::new(n, v).unwrap();
        let r = |b: BiDegreeVector| degrees_from_bidegrees(&b).unwrap().counts().to_vec();
        assert_eq!(r(b(4, vec![0, 0, 1, 1, 2, 0])), vec![0, 1, 2, 1]);
        assert_eq!(r(b(2, vec![1])), vec![0, 2]);
        assert_eq!(r(b(3, vec![0, 2, 0])), vec![0, 2, 1]);
        assert_eq!(r(b(3, vec![0, 2, 0])), degree_vector(&path3()).counts());
    }

    #[test]
    fn inconsistent_bidegrees_rejected() {
        // one edge between two degree-2 nodes cannot exist alone
        let b = BiDegreeVector::new(3, vec![0, 0, 1]).unwrap();
        assert!(matches!(degrees_from_bidegrees(&b), Err(Error::InconsistentBiDegree(_))));
        // too many degree-1 nodes
        let b = BiDegreeVector::new(3, vec![2, 0, 0]).unwrap();
        assert!(matches!(degrees_from_bidegrees(&b), Err(Error::InconsistentBiDegree(_))));
    }

    #[test]
    fn construction_errors() {
        assert!(Graph::empty(0).is_err());
        assert!(Graph::from_edges(3, &[(0, 3)]).is_err());
        assert!(Graph::from_edges(3, &[(1, 1)]).is_err());
        assert!(Graph::from_edges(3, &[(0, 1), (1, 0)]).is_err());
        assert!(Graph::from_mask(3, 0b1000).is_err());
        assert!(Graph::from_mask(12, 0).is_err());
    }

    #[test]
    fn mask_bijection_small_n() {
        for mask in 0..64u64 {
            let g = Graph::from_mask(4, mask).unwrap();
            assert_eq!(g.mask(), Some(mask));
            assert_eq!(g.edge_count(), mask.count_ones() as usize);
            let rebuilt = Graph::from_edges(4, &g.edges().collect::<Vec<_>>()).unwrap();
            assert_eq!(rebuilt, g);
        }
    }

    #[test]
    fn pair_indexing_is_lexicographic() {
        for n in 1..12 {
            for (idx, (k1, k2)) in degree_pairs(n).enumerate() {
                assert_eq!(pair_index(n, k1, k2), idx);
            }
            assert_eq!(degree_pairs(n).count(), slot_count(n));
        }
    }
}
