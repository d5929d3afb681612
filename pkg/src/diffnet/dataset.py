"""Corpus manifests, dataset assembly, and tabular I/O.

The manifest is the corpus index: one row per network file with its label,
bias and tweet count. ``assemble`` turns a manifest into a LabeledDataset
by loading each network, applying the corpus filters and computing the
feature vectors.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import DatasetError, FileFormatError
from .features import (
    FEATURE_NAMES,
    ClusteringVariant,
    FeatureVector,
    extract_features,
)
from .graphs import Bias, DiffusionNetwork, Label, SizeBucket, bucket_of, load_network
from .ml import LabeledDataset, Sample

MANIFEST_COLUMNS = ("network_id", "path", "label", "bias", "tweet_count")
FEATURE_TABLE_COLUMNS = ("network_id", "label", "bias", "n_nodes") + FEATURE_NAMES


@dataclass(frozen=True)
class ManifestEntry:
    network_id: str
    path: str
    label: Label
    bias: Bias
    tweet_count: int
    n_nodes: int | None = None

    def resolve_path(self, base: Path | None) -> Path:
        p = Path(self.path)
        if not p.is_absolute() and base is not None:
            p = base / p
        return p


def write_manifest(entries: Sequence[ManifestEntry], path: str | Path) -> None:
    """Write a manifest CSV; n_nodes is an optional extra column."""
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(MANIFEST_COLUMNS + ("n_nodes",))
        for e in sorted(entries, key=lambda e: e.network_id):
            writer.writerow(
                [
                    e.network_id,
                    e.path,
                    e.label.value,
                    e.bias.value,
                    e.tweet_count,
                    "" if e.n_nodes is None else e.n_nodes,
                ]
            )


def read_manifest(path: str | Path) -> list[ManifestEntry]:
    path = Path(path)
    entries = []
    with path.open(newline="") as fh:
        reader = csv.DictReader(fh)
        missing = set(MANIFEST_COLUMNS) - set(reader.fieldnames or ())
        if missing:
            raise FileFormatError(
                f"manifest missing columns: {', '.join(sorted(missing))}", path=path
            )
        for line_no, row in enumerate(reader, start=2):
            try:
                n_nodes_raw = (row.get("n_nodes") or "").strip()
                entries.append(
                    ManifestEntry(
                        network_id=row["network_id"],
                        path=row["path"],
                        label=Label(row["label"]),
                        bias=Bias(row["bias"]),
                        tweet_count=int(row["tweet_count"]),
                        n_nodes=int(n_nodes_raw) if n_nodes_raw else None,
                    )
                )
            except (KeyError, ValueError) as exc:
                raise FileFormatError(f"bad manifest row: {exc}", path=path, line_no=line_no)
    return entries


# --- feature tables ---------------------------------------------------------


def write_feature_table(
    rows: Sequence[tuple[str, Label, Bias, int, FeatureVector]], path: str | Path
) -> None:
    """CSV with one row per network in the fixed seven-feature order."""
    with Path(path).open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(FEATURE_TABLE_COLUMNS)
        for network_id, label, bias, n_nodes, fv in sorted(rows, key=lambda r: r[0]):
            writer.writerow(
                [network_id, label.value, bias.value, n_nodes]
                + [repr(float(v)) for v in fv.to_array()]
            )


def read_feature_table(path: str | Path) -> list[Sample]:
    path = Path(path)
    samples = []
    with path.open(newline="") as fh:
        reader = csv.DictReader(fh)
        missing = set(FEATURE_TABLE_COLUMNS) - set(reader.fieldnames or ())
        if missing:
            raise FileFormatError(
                f"feature table missing columns: {', '.join(sorted(missing))}", path=path
            )
        for line_no, row in enumerate(reader, start=2):
            try:
                n_nodes = int(row["n_nodes"])
                fv = FeatureVector(**{name: float(row[name]) for name in FEATURE_NAMES})
                samples.append(
                    Sample(
                        network_id=row["network_id"],
                        features=fv,
                        label=Label(row["label"]),
                        bias=Bias(row["bias"]),
                        bucket=SizeBucket.from_node_count(n_nodes),
                        n_nodes=n_nodes,
                    )
                )
            except (KeyError, ValueError) as exc:
                raise FileFormatError(f"bad feature row: {exc}", path=path, line_no=line_no)
    return samples


# --- distance matrices ------------------------------------------------------


def write_distance_matrix(ids: Sequence[str], matrix: np.ndarray, path: str | Path) -> None:
    """Square CSV with the network ids as both header row and first column."""
    matrix = np.asarray(matrix, dtype=np.float64)
    if matrix.shape != (len(ids), len(ids)):
        raise ValueError(f"matrix shape {matrix.shape} does not match {len(ids)} ids")
    with Path(path).open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["network_id", *ids])
        for i, network_id in enumerate(ids):
            writer.writerow([network_id] + [repr(float(v)) for v in matrix[i]])


def read_distance_matrix(path: str | Path) -> tuple[list[str], np.ndarray]:
    path = Path(path)
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise FileFormatError("empty distance matrix", path=path)
        ids = header[1:]
        matrix = np.zeros((len(ids), len(ids)))
        row_ids = []
        for line_no, row in enumerate(reader, start=2):
            if len(row) != len(ids) + 1:
                raise FileFormatError(
                    f"expected {len(ids) + 1} cells, found {len(row)}", path=path, line_no=line_no
                )
            row_ids.append(row[0])
            matrix[len(row_ids) - 1] = [float(v) for v in row[1:]]
        if row_ids != ids:
            raise FileFormatError("row ids do not match header ids", path=path)
    return ids, matrix


# --- dataset assembly -------------------------------------------------------


def load_manifest_networks(
    entries: Iterable[ManifestEntry], base: Path | None = None
) -> list[tuple[ManifestEntry, DiffusionNetwork]]:
    """Load every entry's network file; unresolvable paths are reported
    together in one error listing the offending ids."""
    loaded, bad = [], []
    for entry in entries:
        p = entry.resolve_path(base)
        if not p.exists():
            bad.append(entry.network_id)
            continue
        network = load_network(p, fmt="edgelist")
        network = replace(
            network,
            network_id=entry.network_id,
            label=entry.label,
            bias=entry.bias,
            tweet_count=entry.tweet_count,
        )
        loaded.append((entry, network))
    if bad:
        raise DatasetError(f"unresolvable network paths for ids: {', '.join(sorted(bad))}")
    return loaded


def assemble(
    manifest_path: str | Path,
    *,
    min_tweets: int = 50,
    bias_filter: frozenset[Bias] | None = None,
    exclude_sources: Sequence[str] = (),
    clustering: ClusteringVariant = ClusteringVariant.UNDIRECTED,
    distances: tuple[Sequence[str], np.ndarray] | None = None,
) -> LabeledDataset:
    """Build a LabeledDataset from a manifest file.

    Applies, in order: the min_tweets corpus filter, the unlabeled-network
    drop, the optional bias slice, and the exclude-source slice (an entry
    is excluded when any given source string occurs in its network_id).
    Samples are ordered by network_id. When a precomputed distance matrix
    is supplied it is re-indexed to the surviving samples.
    """
    manifest_path = Path(manifest_path)
    entries = read_manifest(manifest_path)
    kept = []
    for entry in entries:
        if entry.tweet_count < min_tweets:
            continue
        if entry.label is Label.UNLABELED:
            continue
        if bias_filter is not None and entry.bias not in bias_filter:
            continue
        if any(src in entry.network_id for src in exclude_sources):
            continue
        kept.append(entry)
    kept.sort(key=lambda e: e.network_id)

    samples = []
    for entry, network in load_manifest_networks(kept, base=manifest_path.parent):
        fv = extract_features(network, clustering=clustering)
        samples.append(
            Sample(
                network_id=entry.network_id,
                features=fv,
                label=entry.label,
                bias=entry.bias,
                bucket=bucket_of(network),
                n_nodes=len(network.nodes),
            )
        )

    matrix = None
    if distances is not None:
        ids, full = distances
        index = {network_id: i for i, network_id in enumerate(ids)}
        missing = [s.network_id for s in samples if s.network_id not in index]
        if missing:
            raise DatasetError(
                f"distance matrix lacks ids: {', '.join(sorted(missing))}"
            )
        order = [index[s.network_id] for s in samples]
        matrix = np.asarray(full)[np.ix_(order, order)]
    return LabeledDataset(samples=samples, distances=matrix)


def dataset_from_samples(
    samples: Sequence[Sample], distances: tuple[Sequence[str], np.ndarray] | None = None
) -> LabeledDataset:
    """LabeledDataset from already-computed samples, ordered by network_id."""
    ordered = sorted(samples, key=lambda s: s.network_id)
    matrix = None
    if distances is not None:
        ids, full = distances
        index = {network_id: i for i, network_id in enumerate(ids)}
        missing = [s.network_id for s in ordered if s.network_id not in index]
        if missing:
            raise DatasetError(f"distance matrix lacks ids: {', '.join(sorted(missing))}")
        order = [index[s.network_id] for s in ordered]
        matrix = np.asarray(full)[np.ix_(order, order)]
    return LabeledDataset(samples=list(ordered), distances=matrix)
