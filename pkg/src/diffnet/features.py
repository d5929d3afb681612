"""Global topological features of a diffusion network.

The seven features, in their fixed emission order: number of strongly
connected components (scc), size of the largest SCC (lscc), number of
weakly connected components (wcc), size of the largest WCC (lwcc),
diameter of the largest WCC (dwcc), average clustering coefficient (cc)
and main k-core number (kc). SCCs use directed reachability; everything
else works on the undirected simple projection.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import EmptyGraphError
from .graphs import DiffusionNetwork

FEATURE_NAMES = ("scc", "lscc", "wcc", "lwcc", "dwcc", "cc", "kc")


class ClusteringVariant(str, Enum):
    UNDIRECTED = "undirected"
    DIRECTED = "directed"


@dataclass(frozen=True)
class FeatureVector:
    scc: int
    lscc: int
    wcc: int
    lwcc: int
    dwcc: int
    cc: float
    kc: int

    def to_array(self) -> np.ndarray:
        """The features as float64 in the fixed order expected downstream."""
        return np.array(
            [self.scc, self.lscc, self.wcc, self.lwcc, self.dwcc, self.cc, self.kc],
            dtype=np.float64,
        )


def _require_nonempty(network: DiffusionNetwork) -> None:
    if network.n_nodes == 0:
        raise EmptyGraphError(f"network {network.network_id!r} has no nodes")


def strongly_connected_component_sizes(network: DiffusionNetwork) -> list[int]:
    """Sizes of all SCCs, via an iterative Tarjan traversal."""
    _require_nonempty(network)
    n = network.n_nodes
    out = network.out_lists
    index = [-1] * n
    lowlink = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    sizes: list[int] = []
    counter = 0

    for root in range(n):
        if index[root] != -1:
            continue
        # frame: (node, iterator position over successors)
        work = [(root, 0)]
        while work:
            v, pos = work.pop()
            if pos == 0:
                index[v] = lowlink[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            advanced = False
            succ = out[v]
            for i in range(pos, len(succ)):
                w = succ[i]
                if index[w] == -1:
                    work.append((v, i + 1))
                    work.append((w, 0))
                    advanced = True
                    break
                if on_stack[w]:
                    lowlink[v] = min(lowlink[v], index[w])
            if advanced:
                continue
            if lowlink[v] == index[v]:
                size = 0
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    size += 1
                    if w == v:
                        break
                sizes.append(size)
            if work:
                parent = work[-1][0]
                lowlink[parent] = min(lowlink[parent], lowlink[v])
    return sizes


def weakly_connected_components(network: DiffusionNetwork) -> list[list[int]]:
    """Node-index lists of the WCCs (connectivity ignoring edge direction)."""
    _require_nonempty(network)
    n = network.n_nodes
    und = network.und_lists
    seen = [False] * n
    components: list[list[int]] = []
    for start in range(n):
        if seen[start]:
            continue
        seen[start] = True
        comp = [start]
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for v in und[u]:
                if not seen[v]:
                    seen[v] = True
                    comp.append(v)
                    queue.append(v)
        components.append(comp)
    return components


def component_features(network: DiffusionNetwork) -> tuple[int, int, int, int]:
    """(scc count, largest SCC size, wcc count, largest WCC size)."""
    scc_sizes = strongly_connected_component_sizes(network)
    wccs = weakly_connected_components(network)
    return len(scc_sizes), max(scc_sizes), len(wccs), max(len(c) for c in wccs)


def _bfs_eccentricity(und, start: int) -> int:
    dist = {start: 0}
    queue = deque([start])
    ecc = 0
    while queue:
        u = queue.popleft()
        du = dist[u]
        for v in und[u]:
            if v not in dist:
                dist[v] = du + 1
                ecc = max(ecc, du + 1)
                queue.append(v)
    return ecc


def lwcc_diameter(network: DiffusionNetwork) -> int:
    """Diameter of the largest WCC in its undirected view (0 for a singleton).

    Directed eccentricities inside a weakly connected digraph can be
    infinite, so the undirected view is the only total definition.
    """
    wccs = weakly_connected_components(network)
    largest = max(wccs, key=len)
    if len(largest) == 1:
        return 0
    und = network.und_lists
    return max(_bfs_eccentricity(und, s) for s in largest)


def local_clustering(network: DiffusionNetwork, variant: ClusteringVariant = ClusteringVariant.UNDIRECTED) -> np.ndarray:
    """Per-node clustering coefficients.

    ``UNDIRECTED``: triangles over connected triples in the undirected
    simple projection; nodes of degree < 2 contribute 0. ``DIRECTED``:
    the directed generalization over all edge orientations, with the
    node's bilateral degree removed from the normalization.
    """
    _require_nonempty(network)
    n = network.n_nodes
    coeffs = np.zeros(n, dtype=np.float64)
    if variant is ClusteringVariant.UNDIRECTED:
        und = network.und_sets
        for u in range(n):
            nbrs = und[u]
            d = len(nbrs)
            if d < 2:
                continue
            links = sum(len(nbrs & und[v]) for v in nbrs) // 2
            coeffs[u] = links / (d * (d - 1) / 2)
        return coeffs

    out, inc = network.out_sets, network.in_sets

    def w(a: int, b: int) -> int:
        return (b in out[a]) + (a in out[b])

    und = network.und_sets
    for u in range(n):
        d_tot = len(out[u]) + len(inc[u])
        d_bi = len(out[u] & inc[u])
        denom = d_tot * (d_tot - 1) - 2 * d_bi
        if denom <= 0:
            continue
        nbrs = sorted(und[u])
        triangles = 0
        for i, v in enumerate(nbrs):
            for x in nbrs[i + 1 :]:
                triangles += w(u, v) * w(v, x) * w(x, u)
        coeffs[u] = triangles / denom
    return coeffs


def average_clustering(network: DiffusionNetwork, variant: ClusteringVariant = ClusteringVariant.UNDIRECTED) -> float:
    """Mean local clustering coefficient over all nodes."""
    return float(local_clustering(network, variant).mean())


def core_numbers(network: DiffusionNetwork) -> list[int]:
    """Core number of every node in the undirected simple projection.

    Batagelj-Zaversnik peeling: repeatedly remove a minimum-degree node;
    its degree at removal (capped from below by previously removed cores)
    is its core number.
    """
    _require_nonempty(network)
    n = network.n_nodes
    und = network.und_lists
    degree = [len(und[u]) for u in range(n)]
    max_deg = max(degree)
    # bucket sort nodes by current degree
    bins = [0] * (max_deg + 1)
    for d in degree:
        bins[d] += 1
    start = 0
    for d in range(max_deg + 1):
        bins[d], start = start, start + bins[d]
    pos = [0] * n
    order = [0] * n
    for u in range(n):
        pos[u] = bins[degree[u]]
        order[pos[u]] = u
        bins[degree[u]] += 1
    for d in range(max_deg, 0, -1):
        bins[d] = bins[d - 1]
    bins[0] = 0

    core = degree[:]
    removed = [False] * n
    for i in range(n):
        u = order[i]
        removed[u] = True
        for v in und[u]:
            if removed[v] or core[v] <= core[u]:
                continue
            # swap v to the front of its degree bucket, then decrement
            dv = core[v]
            first = bins[dv]
            w_node = order[first]
            if w_node != v:
                order[first], order[pos[v]] = v, w_node
                pos[w_node], pos[v] = pos[v], first
            bins[dv] += 1
            core[v] -= 1
    return core


def main_kcore(network: DiffusionNetwork) -> int:
    """Largest k with a nonempty k-core; 0 iff the graph has no edges."""
    return max(core_numbers(network))


def extract_features(
    network: DiffusionNetwork,
    clustering: ClusteringVariant = ClusteringVariant.UNDIRECTED,
) -> FeatureVector:
    """Assemble the seven-feature tuple for one network."""
    scc, lscc, wcc, lwcc = component_features(network)
    return FeatureVector(
        scc=scc,
        lscc=lscc,
        wcc=wcc,
        lwcc=lwcc,
        dwcc=lwcc_diameter(network),
        cc=average_clustering(network, clustering),
        kc=main_kcore(network),
    )
