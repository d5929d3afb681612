"""Network portraits and the portrait divergence between two networks.

The portrait of a graph is the matrix ``B`` with ``B[l][k]`` = number of
nodes that have exactly ``k`` nodes at shortest-path distance ``l``. It is
a graph invariant: isomorphic graphs share a portrait. Row 0 is always
``B[0][1] = n`` (each node sees itself at distance 0) and every row sums
to ``n`` because nodes with no peers at distance ``l`` land in the
``k = 0`` tally. Unreachable pairs therefore never contribute mass.

The divergence compares the pair-weighted distributions
``P(k, l) ~ k * B[l][k]`` of two graphs by Jensen-Shannon divergence with
base-2 logarithms, giving a value in [0, 1].
"""

from __future__ import annotations

import csv
from collections import deque
from pathlib import Path

import numpy as np

from .errors import EmptyGraphError
from .graphs import DiffusionNetwork


def portrait(network: DiffusionNetwork, undirected: bool = False) -> np.ndarray:
    """Shortest-path shell histogram matrix via per-source BFS.

    Distances follow edge direction unless ``undirected`` is set. Rows run
    from l = 0 to the largest finite eccentricity; columns from k = 0 to
    n - 1 (a single-node graph still gets a k = 1 column for its self row).
    """
    if network.n_nodes == 0:
        raise EmptyGraphError(f"network {network.network_id!r} has no nodes")
    n = network.n_nodes
    adj = network.und_lists if undirected else network.out_lists

    # shells[source] = count of nodes per distance, contiguous from 0
    shells: list[list[int]] = []
    max_ecc = 0
    dist = [-1] * n
    for source in range(n):
        dist[source] = 0
        queue = deque([source])
        counts = [1]
        visited = [source]
        while queue:
            u = queue.popleft()
            du1 = dist[u] + 1
            for v in adj[u]:
                if dist[v] < 0:
                    dist[v] = du1
                    visited.append(v)
                    if du1 == len(counts):
                        counts.append(0)
                    counts[du1] += 1
                    queue.append(v)
        for v in visited:
            dist[v] = -1
        shells.append(counts)
        max_ecc = max(max_ecc, len(counts) - 1)

    b = np.zeros((max_ecc + 1, max(n, 2)), dtype=np.int64)
    for counts in shells:
        for ell, k in enumerate(counts):
            b[ell, k] += 1
        for ell in range(len(counts), max_ecc + 1):
            b[ell, 0] += 1
    return b


def pad_portraits(b1: np.ndarray, b2: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Extend both portraits onto a common (l, k) grid.

    Extra rows get ``B[l][0] = n`` (every node has zero peers beyond its
    eccentricity), preserving the row-sum invariant; extra columns are 0.
    """
    rows = max(b1.shape[0], b2.shape[0])
    cols = max(b1.shape[1], b2.shape[1])
    out = []
    for b in (b1, b2):
        n = int(b[0].sum())
        padded = np.zeros((rows, cols), dtype=np.int64)
        padded[: b.shape[0], : b.shape[1]] = b
        padded[b.shape[0] :, 0] = n
        out.append(padded)
    return out[0], out[1]


def pair_distribution(b: np.ndarray) -> np.ndarray:
    """Probability mass ``P(l, k) ~ k * B[l][k]``, normalized over k >= 1."""
    weighted = b * np.arange(b.shape[1], dtype=np.float64)
    total = weighted.sum()
    return weighted / total


def divergence_from_portraits(b1: np.ndarray, b2: np.ndarray) -> float:
    """Jensen-Shannon divergence (base 2) of two pair-weighted portraits."""
    b1, b2 = pad_portraits(np.asarray(b1), np.asarray(b2))
    p = pair_distribution(b1).ravel()
    q = pair_distribution(b2).ravel()
    m = 0.5 * (p + q)

    def kl(x: np.ndarray) -> float:
        mask = x > 0
        return float(np.sum(x[mask] * np.log2(x[mask] / m[mask])))

    return 0.5 * kl(p) + 0.5 * kl(q)


def portrait_divergence(
    a: DiffusionNetwork, b: DiffusionNetwork, undirected: bool = False
) -> float:
    """Portrait divergence between two networks, in [0, 1]."""
    return divergence_from_portraits(
        portrait(a, undirected=undirected), portrait(b, undirected=undirected)
    )


# --- portrait cache (sparse triplet CSV) ------------------------------------


def save_portrait(b: np.ndarray, path) -> None:
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["l", "k", "count"])
        for ell, k in zip(*np.nonzero(b)):
            writer.writerow([int(ell), int(k), int(b[ell, k])])


def load_portrait(path) -> np.ndarray:
    triplets = []
    with Path(path).open("r", newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        next(reader)  # header
        for row in reader:
            triplets.append((int(row[0]), int(row[1]), int(row[2])))
    if not triplets:
        raise ValueError(f"portrait cache {path} is empty")
    rows = max(t[0] for t in triplets) + 1
    cols = max(max(t[1] for t in triplets) + 1, 2)
    b = np.zeros((rows, cols), dtype=np.int64)
    for ell, k, count in triplets:
        b[ell, k] = count
    return b
