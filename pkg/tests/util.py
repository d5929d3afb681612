"""Shared test helpers: graph builders and independent naive oracles.

The oracles deliberately use different algorithms from the package
(matrix-power reachability, Floyd-Warshall distances, exhaustive triple
enumeration, peel-one-node-at-a-time cores) so agreement is meaningful.
"""

from __future__ import annotations

from itertools import combinations, permutations

import numpy as np
from hypothesis import strategies as st

from diffnet import DiffusionNetwork
from diffnet.graphlets import CATALOG, N_ORBITS


def node_name(i: int) -> str:
    return f"n{i:03d}"


def make_network(n: int, arcs, network_id: str = "g", **kwargs) -> DiffusionNetwork:
    """Network over nodes n000..n{n-1}; zero-padded names keep the sorted
    node order aligned with the integer indices used by the oracles."""
    return DiffusionNetwork(
        network_id=network_id,
        nodes=frozenset(node_name(i) for i in range(n)),
        edges=frozenset((node_name(u), node_name(v)) for u, v in arcs),
        **kwargs,
    )


def random_graph(rng: np.random.Generator, n: int, p: float) -> tuple[int, list[tuple[int, int]]]:
    arcs = [(u, v) for u in range(n) for v in range(n) if u != v and rng.random() < p]
    return n, arcs


@st.composite
def graphs(draw, min_nodes: int = 1, max_nodes: int = 8):
    """Hypothesis strategy for (n, arcs) over small directed simple graphs."""
    n = draw(st.integers(min_nodes, max_nodes))
    pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
    if pairs:
        arcs = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=len(pairs)))
    else:
        arcs = []
    return n, arcs


def adjacency(n: int, arcs) -> np.ndarray:
    a = np.zeros((n, n), dtype=bool)
    for u, v in arcs:
        a[u, v] = True
    return a


# --- component oracles (matrix-power reachability) --------------------------


def reachability(a: np.ndarray) -> np.ndarray:
    r = np.eye(len(a), dtype=bool) | a
    while True:
        nxt = r | (r @ r)
        if np.array_equal(nxt, r):
            return r
        r = nxt


def oracle_scc_sizes(n: int, arcs) -> list[int]:
    r = reachability(adjacency(n, arcs))
    mutual = r & r.T
    seen, sizes = set(), []
    for u in range(n):
        if u in seen:
            continue
        comp = {v for v in range(n) if mutual[u, v]}
        seen |= comp
        sizes.append(len(comp))
    return sorted(sizes)


def oracle_wcc_members(n: int, arcs) -> list[frozenset[int]]:
    a = adjacency(n, arcs)
    r = reachability(a | a.T)
    seen, comps = set(), []
    for u in range(n):
        if u in seen:
            continue
        comp = frozenset(v for v in range(n) if r[u, v])
        seen |= comp
        comps.append(comp)
    return comps


def oracle_undirected_distances(n: int, arcs) -> np.ndarray:
    """All-pairs shortest paths on the undirected view, by Floyd-Warshall."""
    d = np.full((n, n), np.inf)
    np.fill_diagonal(d, 0.0)
    for u, v in arcs:
        d[u, v] = d[v, u] = 1.0
    for k in range(n):
        d = np.minimum(d, d[:, k : k + 1] + d[k : k + 1, :])
    return d


def oracle_dwcc_values(n: int, arcs) -> set[int]:
    """Diameters of every maximum-size WCC (ties allow any of these)."""
    comps = oracle_wcc_members(n, arcs)
    top = max(len(c) for c in comps)
    d = oracle_undirected_distances(n, arcs)
    values = set()
    for comp in comps:
        if len(comp) != top:
            continue
        members = sorted(comp)
        values.add(int(max(d[u][v] for u in members for v in members)) if len(members) > 1 else 0)
    return values


# --- clustering oracles (triple enumeration) --------------------------------


def oracle_avg_clustering(n: int, arcs) -> float:
    # per-node values by exhaustive pair enumeration; the final average uses
    # np.mean so float summation order matches the implementation under test
    a = adjacency(n, arcs)
    und = a | a.T
    per_node = np.zeros(n)
    for u in range(n):
        nbrs = [v for v in range(n) if und[u, v]]
        if len(nbrs) < 2:
            continue
        closed = sum(1 for x, y in combinations(nbrs, 2) if und[x, y])
        per_node[u] = closed / (len(nbrs) * (len(nbrs) - 1) / 2)
    return float(np.mean(per_node))


def oracle_directed_clustering(n: int, arcs) -> float:
    """Directed clustering via the symmetrized-adjacency cube."""
    a = adjacency(n, arcs).astype(np.float64)
    s = a + a.T
    cube = s @ s @ s
    d_tot = (a.sum(axis=0) + a.sum(axis=1)).astype(int)
    d_bi = (a.astype(bool) & a.T.astype(bool)).sum(axis=1).astype(int)
    total = 0.0
    for u in range(n):
        denom = d_tot[u] * (d_tot[u] - 1) - 2 * d_bi[u]
        if denom > 0:
            total += cube[u, u] / (2 * denom)
    return total / n


# --- core number oracle (one-node-at-a-time peeling) ------------------------


def oracle_main_kcore(n: int, arcs) -> int:
    und = {u: set() for u in range(n)}
    for u, v in arcs:
        und[u].add(v)
        und[v].add(u)
    remaining = set(range(n))
    k = 0
    while remaining:
        u = min(remaining, key=lambda x: (len(und[x]), x))
        k = max(k, len(und[u]))
        for v in und[u]:
            und[v].discard(u)
        und.pop(u)
        remaining.remove(u)
    return k


def oracle_feature_check(n: int, arcs, fv) -> None:
    """Assert a FeatureVector against all naive oracles (tie-aware dwcc)."""
    scc_sizes = oracle_scc_sizes(n, arcs)
    wccs = oracle_wcc_members(n, arcs)
    assert fv.scc == len(scc_sizes)
    assert fv.lscc == max(scc_sizes)
    assert fv.wcc == len(wccs)
    assert fv.lwcc == max(len(c) for c in wccs)
    assert fv.dwcc in oracle_dwcc_values(n, arcs)
    assert fv.cc == oracle_avg_clustering(n, arcs)
    assert fv.kc == oracle_main_kcore(n, arcs)


# --- graphlet oracle (exhaustive induced-subgraph enumeration) --------------

_TRIPLE_CATALOG = tuple(g for g in CATALOG if g.n_nodes == 3)


def oracle_orbit_counts(n: int, arcs) -> np.ndarray:
    """Brute-force orbit tally over all node pairs and triples.

    Orbits 0/1 are tallied per arc; a triple is counted when its induced
    subgraph is reciprocal-free, weakly connected and touches all three
    nodes, using the first catalog match (orbits are automorphism
    invariant, so any matching bijection yields the same assignment).
    """
    counts = np.zeros((n, N_ORBITS), dtype=np.int64)
    arc_set = set(arcs)
    for u, v in arc_set:
        counts[u, 0] += 1
        counts[v, 1] += 1
    for trip in combinations(range(n), 3):
        sub = {(a, b) for (a, b) in arc_set if a in trip and b in trip}
        if any((b, a) in sub for (a, b) in sub):
            continue
        if {x for e in sub for x in e} != set(trip):
            continue
        assignment = None
        for g in _TRIPLE_CATALOG:
            if len(g.arcs) != len(sub):
                continue
            for perm in permutations(range(3)):
                mapping = {trip[i]: perm[i] for i in range(3)}
                if {(mapping[a], mapping[b]) for a, b in sub} == set(g.arcs):
                    assignment = {node: g.node_orbits[pos] for node, pos in mapping.items()}
                    break
            if assignment:
                break
        assert assignment is not None, f"connected reciprocal-free triple missing from catalog: {sub}"
        for node, orbit in assignment.items():
            counts[node, orbit] += 1
    return counts


# --- rank correlation oracle (rank transform then Pearson) ------------------


def oracle_average_ranks(values) -> np.ndarray:
    values = np.asarray(values, dtype=np.float64)
    ranks = np.empty(len(values))
    for i, v in enumerate(values):
        less = np.sum(values < v)
        equal = np.sum(values == v)
        ranks[i] = less + (equal + 1) / 2.0
    return ranks


def oracle_spearman(x, y) -> float:
    """Rank both columns then Pearson; degenerate columns follow the
    package convention (1 for identical ranks, else 0)."""
    rx = oracle_average_ranks(x)
    ry = oracle_average_ranks(y)
    cx = rx - rx.mean()
    cy = ry - ry.mean()
    nx = np.sqrt((cx**2).sum())
    ny = np.sqrt((cy**2).sum())
    if nx == 0.0 or ny == 0.0:
        return 1.0 if np.array_equal(rx, ry) else 0.0
    return float(np.clip(cx @ cy / (nx * ny), -1.0, 1.0))


# --- portrait oracle (dict-based BFS histograms) ----------------------------


def oracle_portrait(n: int, arcs, undirected: bool = False) -> dict[tuple[int, int], int]:
    """Portrait as a sparse {(l, k): count} dict from per-source BFS."""
    adj = {u: set() for u in range(n)}
    for u, v in arcs:
        adj[u].add(v)
        if undirected:
            adj[v].add(u)
    per_source = []
    for s in range(n):
        dist = {s: 0}
        frontier = [s]
        while frontier:
            nxt = []
            for u in frontier:
                for v in adj[u]:
                    if v not in dist:
                        dist[v] = dist[u] + 1
                        nxt.append(v)
            frontier = nxt
        hist: dict[int, int] = {}
        for d in dist.values():
            hist[d] = hist.get(d, 0) + 1
        per_source.append(hist)
    max_ecc = max(max(h) for h in per_source)
    b: dict[tuple[int, int], int] = {}
    for ell in range(max_ecc + 1):
        for h in per_source:
            k = h.get(ell, 0)
            b[(ell, k)] = b.get((ell, k), 0) + 1
    return b


def portrait_to_dict(b: np.ndarray) -> dict[tuple[int, int], int]:
    return {
        (int(ell), int(k)): int(b[ell, k])
        for ell, k in zip(*np.nonzero(b))
    }


def oracle_divergence(pa: dict, pb: dict) -> float:
    """Hand-rolled pair-distribution JSD from two sparse portraits."""

    def dist(b: dict) -> dict[tuple[int, int], float]:
        weighted = {lk: k * c for lk, c in b.items() if (k := lk[1]) > 0}
        total = sum(weighted.values())
        return {lk: w / total for lk, w in weighted.items()}

    p, q = dist(pa), dist(pb)
    support = set(p) | set(q)
    js = 0.0
    for lk in support:
        pv, qv = p.get(lk, 0.0), q.get(lk, 0.0)
        m = 0.5 * (pv + qv)
        if pv > 0:
            js += 0.5 * pv * np.log2(pv / m)
        if qv > 0:
            js += 0.5 * qv * np.log2(qv / m)
    return float(js)


# --- AUC oracle (exhaustive pair counting) ----------------------------------


def oracle_auc(scores, labels) -> float:
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels)
    pos = scores[labels == 1]
    neg = scores[labels == 0]
    wins = sum(1.0 if p > q else (0.5 if p == q else 0.0) for p in pos for q in neg)
    return wins / (len(pos) * len(neg))
