"""Independent brute-force oracle for the reference values frozen in
crates/core/tests/fixtures/oracle.json.

Nothing here shares code with the Rust crate: graphs come from itertools
over node pairs, hulls from scipy (qhull), roots from scipy.optimize, exact
sums from fractions.Fraction.

    python3 tools/oracle.py > crates/core/tests/fixtures/oracle.json
"""

import itertools
import json
import math
import random
from collections import Counter
from fractions import Fraction

import numpy as np
from scipy.optimize import brentq, fsolve
from scipy.spatial import ConvexHull


def pairs(n):
    return list(itertools.combinations(range(n), 2))


def all_graphs(n):
    ps = pairs(n)
    for bits in itertools.product((0, 1), repeat=len(ps)):
        yield [e for e, b in zip(ps, bits) if b]


def degrees(n, edges):
    d = [0] * n
    for a, b in edges:
        d[a] += 1
        d[b] += 1
    return d


def degree_vector(n, edges):
    c = Counter(degrees(n, edges))
    return [c.get(k, 0) for k in range(n)]


def bidegree(n, edges):
    d = degrees(n, edges)
    c = Counter(tuple(sorted((d[a], d[b]))) for a, b in edges)
    return [c.get((k1, k2), 0) for k1 in range(1, n) for k2 in range(k1, n)]


def frac(x):
    return [x.numerator, x.denominator]


def lse(xs):
    m = max(xs)
    return m + math.log(sum(math.exp(x - m) for x in xs))


def psi1(n, alpha):
    return lse([sum(a * x for a, x in zip(alpha, degree_vector(n, e)[: n - 1])) for e in all_graphs(n)])


def mean1(n, alpha):
    ws, ss = [], []
    for e in all_graphs(n):
        s = degree_vector(n, e)[: n - 1]
        ws.append(sum(a * x for a, x in zip(alpha, s)))
        ss.append(s)
    z = lse(ws)
    return [sum(math.exp(w - z) * s[i] for w, s in zip(ws, ss)) for i in range(n - 1)]


def hull_vertices(points):
    pts = np.array(sorted(set(map(tuple, points))), dtype=float)
    if pts.shape[1] == 1:
        return sorted([[int(pts.min())], [int(pts.max())]])
    h = ConvexHull(pts)
    return sorted([list(map(int, pts[i])) for i in h.vertices])


def facets(points):
    pts = np.array(sorted(set(map(tuple, points))), dtype=float)
    if pts.shape[1] == 1:
        lo, hi = pts.min(), pts.max()
        return lambda x: min(x[0] - lo, hi - x[0])
    h = ConvexHull(pts)
    eq = h.equations
    return lambda x: float(np.min(-(eq[:, :-1] @ np.array(x, dtype=float) + eq[:, -1])))


def a_points(n):
    return [degree_vector(n, e)[: n - 1] for e in all_graphs(n)]


def existence_cases(n, count, rng):
    slack = facets(a_points(n))
    graphs = list(all_graphs(n))
    out = []
    for _ in range(count):
        m = rng.randint(1, 5)
        obs = [rng.randrange(len(graphs)) for _ in range(m)]
        stats = [degree_vector(n, graphs[i])[: n - 1] for i in obs]
        mean = [Fraction(sum(s[i] for s in stats), m) for i in range(n - 1)]
        inside = slack([float(x) for x in mean]) > 1e-9
        out.append({"mean": [frac(x) for x in mean], "interior": bool(inside)})
    return out


def greedy(n, strict=False):
    vals = sorted(Fraction(k1 + k2, k1 * k2) for k1 in range(1, n) for k2 in range(k1, n))
    s, c = Fraction(0), 0
    for v in vals:
        s += v
        if (s < n) if strict else (s <= n):
            c += 1
        else:
            break
    return c


def spectrum_nonzeros(n):
    adj = {0: {1}, 1: {0}}
    for m in range(2, n):
        deg = {v: len(adj[v]) for v in adj}
        dup = [d for d, c in Counter(deg.values()).items() if c == 2][0]
        adj[m] = set()
        for v in sorted(adj, key=lambda v: (-deg.get(v, -1), v)):
            if v == m:
                continue
            adj[v].add(m)
            adj[m].add(v)
            if deg[v] == dup:
                break
    edges = [(a, b) for a in adj for b in adj[a] if a < b]
    return sum(1 for x in bidegree(n, edges) if x)


def singularity(n, p, C):
    ps = pairs(n)
    masks = np.arange(1 << len(ps), dtype=np.int64)
    deg = np.zeros((len(masks), n), dtype=np.int64)
    for s, (a, b) in enumerate(ps):
        bit = (masks >> s) & 1
        deg[:, a] += bit
        deg[:, b] += bit
    e = deg.sum(axis=1) // 2
    half = C * math.sqrt(n * math.log(n))
    lo, hi = (n - 1) * p - half, (n - 1) * p + half
    inside = np.all((deg >= lo) & (deg <= hi), axis=1)
    er = float(np.sum(np.where(inside, p ** e * (1 - p) ** (len(ps) - e), 0.0)))
    return er, float(inside.mean())


def main():
    rng = random.Random(20240611)
    out = {}

    out["table_deg_n3"] = sorted([list(k) + [c] for k, c in Counter(tuple(degree_vector(3, e)) for e in all_graphs(3)).items()])
    out["table_2k_keys_n4"] = sorted(
        [list(k) + [c] for k, c in Counter(tuple(bidegree(4, e)[:-1]) for e in all_graphs(4) if 0 not in degrees(4, e)).items()]
    )
    out["f_brute"] = [sum(1 for e in all_graphs(n) if 0 not in degrees(n, e)) for n in range(1, 7)]
    out["nu_4_1"] = sum(1 for e in all_graphs(4) if degrees(4, e).count(0) == 1)

    four_node = [(0, 1), (1, 2), (1, 3), (2, 3)]
    scale = [Fraction(k1 + k2, k1 * k2) for k1 in range(1, 4) for k2 in range(k1, 4)]
    out["four_node_scaled"] = [frac(s * x) for s, x in zip(scale, bidegree(4, four_node))]

    out["psi1_n3_log2_log3"] = psi1(3, [math.log(2), math.log(3)])
    out["mean1_zero"] = {str(n): mean1(n, [0.0] * (n - 1)) for n in (3, 4, 5)}
    out["mean1_random_n4"] = {"alpha": [0.3, -0.4, 0.8], "mean": mean1(4, [0.3, -0.4, 0.8])}

    target = [1 / 3, 4 / 3]
    sol = fsolve(lambda a: np.array(mean1(3, list(a))) - target, [0.0, 0.0], xtol=1e-14)
    out["fit1_n3"] = {"alpha": list(map(float, sol)), "target": target}

    out["a_vertices"] = {str(n): hull_vertices(a_points(n)) for n in range(3, 8)}

    out["existence"] = {str(n): existence_cases(n, 200, rng) for n in (3, 4, 5)}
    slack3 = facets(a_points(3))
    out["degenerate_n3_half_one"] = slack3([0.5, 1.0]) > 1e-9

    # 2K at n=3, scaled coordinate for (1,2): path has 3, triangle 0
    a = brentq(lambda t: 9 * math.exp(3 * t) / (1 + 3 * math.exp(3 * t)) - 1.5, -10, 10, xtol=1e-15)
    out["fit2_n3_alpha12"] = a

    out["greedy_counts"] = {str(n): greedy(n) for n in range(2, 201)}
    out["greedy_counts_strict"] = {str(n): greedy(n, True) for n in range(2, 60)}
    out["spectrum_nonzeros"] = {str(n): spectrum_nonzeros(n) for n in list(range(2, 61)) + [101, 201]}

    out["presence_uniform"] = {
        str(n): [sum(1 for e in all_graphs(n) if k in degrees(n, e)) / 2 ** len(pairs(n)) for k in range(n)] for n in range(2, 6)
    }

    er, uni = singularity(7, 0.9, 0.5)
    out["singularity_n7"] = {"p": 0.9, "c": 0.5, "prob_er": er, "prob_uniform": uni}

    out["lambda_201_100"] = 201 * math.comb(200, 100) / 2 ** 200
    out["h_100_10"] = 0.8 ** 0.4 * 1.2 ** 0.6
    print(json.dumps(out, indent=1))


if __name__ == "__main__":
    main()
