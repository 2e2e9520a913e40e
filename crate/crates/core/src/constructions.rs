//! The special graphs whose degree vectors span the 1K model polytope:
//! k-regular graphs `R_k`, near-regular graphs `R_kl` and the full-spectrum
//! graphs `T_n`.

use crate::error::{Error, Result};
use crate::graph::{bi_degree_vector, Graph};

/// A `k`-regular graph on `n` nodes. Exists iff `kn` is even.
///
/// Circulant: node `i` is joined to `i ± 1, ..., i ± ⌊k/2⌋ (mod n)`, plus the
/// antipode `i + n/2` when `k` is odd (which forces `n` even).
pub fn regular_graph(n: usize, k: usize) -> Result<Graph> {
    if n == 0 || k >= n {
        return Err(Error::InvalidArgument(format!("need 0 <= k < n, got n = {n}, k = {k}")));
    }
    if k * n % 2 == 1 {
        return Err(Error::Nonexistent(format!(
            "no {k}-regular graph on {n} nodes: kn = {} is odd",
            k * n
        )));
    }
    let mut g = Graph::empty(n)?;
    for i in 0..n {
        for off in 1..=k / 2 {
            let j = (i + off) % n;
            if !g.has_edge(i, j) {
                g.try_add_edge(i, j)?;
            }
        }
        if k % 2 == 1 && i < n / 2 {
            g.try_add_edge(i, i + n / 2)?;
        }
    }
    Ok(g)
}

/// A graph with `n - 1` nodes of degree `k` and one node of degree `l`
/// (`n`, `k` odd). Exists iff `l` is even.
///
/// Built from the `k`-regular circulant `H` on nodes `0..n-1`, whose antipodal
/// chords `(i, i + (n-1)/2)` form a perfect matching, plus the extra node
/// `h = n - 1`. Each of the first `l/2` chords is replaced by the two edges
/// through `h`, which keeps the chord endpoints at degree `k` and raises `h`
/// by two.
pub fn near_regular_graph(n: usize, k: usize, l: usize) -> Result<Graph> {
    if n.is_multiple_of(2) || k.is_multiple_of(2) || k >= n || l >= n {
        return Err(Error::InvalidArgument(format!(
            "need odd n, odd k and 0 <= k, l < n; got n = {n}, k = {k}, l = {l}"
        )));
    }
    if l % 2 == 1 {
        return Err(Error::Nonexistent(format!(
            "degree sum (n-1)k + l = {} is odd",
            (n - 1) * k + l
        )));
    }
    let h = regular_graph(n - 1, k)?;
    let mut g = Graph::empty(n)?;
    for (i, j) in h.edges() {
        g.try_add_edge(i, j)?;
    }
    let half = (n - 1) / 2;
    let hub = n - 1;
    for i in 0..l / 2 {
        g.remove_edge(i, i + half)?;
        g.try_add_edge(i, hub)?;
        g.try_add_edge(i + half, hub)?;
    }
    Ok(g)
}

/// `T_n`: no isolated node, and every degree `1..=n-1` present.
///
/// Grown from `K_2`. With `m` nodes every degree `1..m-1` occurs once except a
/// single duplicated degree `k'`. The new node is joined to existing nodes in
/// decreasing order of degree (ties by ascending label), stopping right after
/// the first node of degree `k'`.
pub fn spectrum_graph(n: usize) -> Result<Graph> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("T_n needs n >= 2, got {n}")));
    }
    let mut g = Graph::from_edges(2, &[(0, 1)])?;
    for m in 2..n {
        let deg = g.degrees();
        let mut seen = vec![false; m];
        let dup = deg
            .iter()
            .find(|&&d| std::mem::replace(&mut seen[d], true))
            .copied()
            .expect("exactly one degree repeats");
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by_key(|&v| (std::cmp::Reverse(deg[v]), v));

        let mut next = Graph::empty(m + 1)?;
        for (i, j) in g.edges() {
            next.try_add_edge(i, j)?;
        }
        for v in order {
            next.try_add_edge(v, m)?;
            if deg[v] == dup {
                break;
            }
        }
        g = next;
    }
    Ok(g)
}

/// Number of non-zero entries in the bi-degree vector of [`spectrum_graph`].
pub fn spectrum_bidegree_nonzeros(n: usize) -> Result<usize> {
    Ok(bi_degree_vector(&spectrum_graph(n)?).nonzero_count())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::degree_vector;

    fn dv(g: &Graph) -> Vec<u64> {
        degree_vector(g).counts().to_vec()
    }

    #[test]
    fn regular_examples() {
        let c4 = regular_graph(4, 2).unwrap();
        assert_eq!(dv(&c4), vec![0, 0, 4, 0]);
        assert!(matches!(regular_graph(5, 3), Err(Error::Nonexistent(_))));
        assert_eq!(dv(&regular_graph(6, 3).unwrap()), vec![0, 0, 0, 6, 0, 0]);
        assert_eq!(dv(&regular_graph(3, 0).unwrap()), vec![3, 0, 0]);
        assert!(matches!(regular_graph(3, 3), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn regular_parity_law() {
        for n in 1..=40 {
            for k in 0..n {
                match regular_graph(n, k) {
                    Ok(g) => {
                        assert_eq!(k * n % 2, 0);
                        assert!(g.degrees().iter().all(|&d| d == k), "n={n} k={k}");
                    }
                    Err(Error::Nonexistent(_)) => assert_eq!(k * n % 2, 1),
                    Err(e) => panic!("{e}"),
                }
            }
        }
    }

    #[test]
    fn near_regular_examples() {
        assert_eq!(dv(&near_regular_graph(5, 3, 0).unwrap()), vec![1, 0, 0, 4, 0]);
        assert_eq!(dv(&near_regular_graph(5, 3, 2).unwrap()), vec![0, 0, 1, 4, 0]);
        assert!(matches!(near_regular_graph(5, 3, 3), Err(Error::Nonexistent(_))));
        assert!(matches!(near_regular_graph(6, 3, 2), Err(Error::InvalidArgument(_))));
        assert!(matches!(near_regular_graph(5, 2, 2), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn near_regular_parity_law() {
        for n in (3..=21).step_by(2) {
            for k in (1..n).step_by(2) {
                for l in 0..n {
                    match near_regular_graph(n, k, l) {
                        Ok(g) => {
                            assert_eq!(l % 2, 0);
                            let mut want = vec![0u64; n];
                            want[k] += n as u64 - 1;
                            want[l] += 1;
                            assert_eq!(dv(&g), want, "n={n} k={k} l={l}");
                        }
                        Err(Error::Nonexistent(_)) => assert_eq!(l % 2, 1),
                        Err(e) => panic!("{e}"),
                    }
                }
            }
        }
    }

    #[test]
    fn spectrum_examples() {
        assert_eq!(spectrum_graph(2).unwrap(), Graph::from_edges(2, &[(0, 1)]).unwrap());
        assert_eq!(dv(&spectrum_graph(3).unwrap()), vec![0, 2, 1]);
        assert_eq!(dv(&spectrum_graph(4).unwrap()), vec![0, 1, 2, 1]);
        assert!(spectrum_graph(1).is_err());
    }

    #[test]
    fn spectrum_covers_all_degrees() {
        for n in 2..=200 {
            let d = degree_vector(&spectrum_graph(n).unwrap());
            assert_eq!(d.isolated(), 0);
            assert!(d.counts()[1..].iter().all(|&c| c >= 1), "n={n}");
        }
    }

    #[test]
    fn spectrum_nonzero_bidegrees() {
        assert_eq!(spectrum_bidegree_nonzeros(2).unwrap(), 1);
        assert_eq!(spectrum_bidegree_nonzeros(3).unwrap(), 1);
        assert_eq!(spectrum_bidegree_nonzeros(4).unwrap(), 3);
    }
}
