"""Command-line front end.

Subcommands: build, features, distances, classify, generate, report.
Every command is deterministic given its inputs and seed. Exit codes:
0 = success, 1 = fatal error, 2 = completed with skipped items.

The DIFFNET_WORKERS environment variable sets the process pool size used
for per-network signature and portrait computation (default 1).
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import os
import sys
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import dataset as ds
from .errors import DiffnetError
from .features import ClusteringVariant, extract_features
from .graphs import (
    Bias,
    DiffusionNetwork,
    EdgeDirection,
    Label,
    SizeBucket,
    build_network,
    group_events_by_url,
    load_network,
    read_events,
    save_network,
)
from .graphlets import (
    LARGE_NETWORK_THRESHOLD,
    LargeNetworkWarning,
    dgcd_from_correlations,
    network_correlations,
)
from .ml import (
    EvalConfig,
    LogisticConfig,
    evaluate,
    feature_ks_tests,
)
from .portraits import divergence_from_portraits, pad_portraits, portrait
from .synth import ClassProfile, generate_ensemble

EXIT_OK = 0
EXIT_FATAL = 1
EXIT_PARTIAL = 2


@dataclass(frozen=True)
class RunConfig:
    """Parsed and validated command-line options."""

    subcommand: str
    bucket: SizeBucket = SizeBucket.D_ALL
    distance: str = "dgcd13"
    classifier: str = "lr"
    k: int = 10
    folds: int = 10
    test_fraction: float = 0.1
    seed: int = 0
    min_tweets: int = 50
    direction: EdgeDirection = EdgeDirection.INFO_FLOW
    clustering: ClusteringVariant = ClusteringVariant.UNDIRECTED
    portrait_undirected: bool = False
    include_large: bool = False

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.folds < 1:
            raise ValueError("folds must be >= 1")
        if not 0.0 < self.test_fraction < 1.0:
            raise ValueError("test_fraction must be in (0, 1)")
        if self.min_tweets < 0:
            raise ValueError("min_tweets must be >= 0")

    def provenance(self) -> dict:
        return {
            "bucket": self.bucket.value,
            "distance": self.distance,
            "classifier": self.classifier,
            "k": self.k,
            "folds": self.folds,
            "test_fraction": self.test_fraction,
            "seed": self.seed,
            "min_tweets": self.min_tweets,
            "direction": self.direction.value,
            "clustering": self.clustering.value,
            "portrait_undirected": self.portrait_undirected,
            "include_large": self.include_large,
        }


def worker_count() -> int:
    try:
        return max(1, int(os.environ.get("DIFFNET_WORKERS", "1")))
    except ValueError:
        return 1


def network_id_for_url(url: str) -> str:
    """Stable filesystem-safe id: last path segment slug plus a URL hash."""
    tail = url.rstrip("/").rsplit("/", 1)[-1]
    slug = "".join(c if c.isalnum() or c in "-_" else "-" for c in tail)[:40].strip("-")
    digest = hashlib.sha1(url.encode()).hexdigest()[:8]
    return f"{slug}-{digest}" if slug else digest


def _merge_manifest(out_dir: Path, new_entries: list[ds.ManifestEntry]) -> Path:
    """Append entries to out_dir/manifest.csv, newer rows replacing same ids."""
    manifest_path = out_dir / "manifest.csv"
    merged: dict[str, ds.ManifestEntry] = {}
    if manifest_path.exists():
        for entry in ds.read_manifest(manifest_path):
            merged[entry.network_id] = entry
    for entry in new_entries:
        merged[entry.network_id] = entry
    ds.write_manifest(list(merged.values()), manifest_path)
    return manifest_path


# --- build ------------------------------------------------------------------


def cmd_build(args: argparse.Namespace, config: RunConfig) -> int:
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    events, skipped = read_events(args.events_file, skip_malformed=True)
    if not events:
        raise DiffnetError(f"no events in {args.events_file}")
    if skipped:
        print(f"warning: skipped {skipped} malformed event lines", file=sys.stderr)

    entries = []
    total_nodes = total_edges = 0
    below_min = []
    for url, url_events in sorted(group_events_by_url(events).items()):
        network_id = network_id_for_url(url)
        network = build_network(
            url_events,
            url,
            direction=config.direction,
            network_id=network_id,
            label=Label.UNLABELED,
            bias=Bias.NONE,
        )
        edges_path = out_dir / f"{network_id}.edges"
        save_network(network, edges_path, nodes_path=out_dir / f"{network_id}.nodes")
        entries.append(
            ds.ManifestEntry(
                network_id=network_id,
                path=edges_path.name,
                label=network.label,
                bias=network.bias,
                tweet_count=network.tweet_count,
                n_nodes=len(network.nodes),
            )
        )
        total_nodes += len(network.nodes)
        total_edges += len(network.edges)
        if network.tweet_count < config.min_tweets:
            below_min.append(network_id)

    manifest_path = _merge_manifest(out_dir, entries)
    print(
        f"built {len(entries)} networks ({total_nodes} nodes, {total_edges} edges) "
        f"-> {manifest_path}"
    )
    if below_min:
        print(
            f"note: {len(below_min)} networks below min_tweets={config.min_tweets}: "
            + ", ".join(below_min)
        )
    return EXIT_PARTIAL if skipped else EXIT_OK


# --- features ---------------------------------------------------------------


def cmd_features(args: argparse.Namespace, config: RunConfig) -> int:
    manifest_path = Path(args.manifest)
    entries = sorted(ds.read_manifest(manifest_path), key=lambda e: e.network_id)
    rows = []
    failures = []
    for entry in entries:
        try:
            network = load_network(entry.resolve_path(manifest_path.parent), fmt="edgelist")
            fv = extract_features(network, clustering=config.clustering)
        except (DiffnetError, OSError, ValueError) as exc:
            failures.append((entry.network_id, str(exc)))
            continue
        rows.append((entry.network_id, entry.label, entry.bias, len(network.nodes), fv))
    ds.write_feature_table(rows, args.out)
    print(f"wrote {len(rows)} feature rows -> {args.out}")
    for network_id, message in failures:
        print(f"warning: skipped {network_id}: {message}", file=sys.stderr)
    return EXIT_PARTIAL if failures else EXIT_OK


# --- distances --------------------------------------------------------------


def _correlation_task(network: DiffusionNetwork) -> np.ndarray:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", LargeNetworkWarning)
        return network_correlations(network)


def _portrait_task(network_and_flag: tuple[DiffusionNetwork, bool]) -> np.ndarray:
    network, undirected = network_and_flag
    return portrait(network, undirected=undirected)


def _map_tasks(fn, items):
    workers = worker_count()
    if workers == 1 or len(items) < 2:
        return [fn(item) for item in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def cmd_distances(args: argparse.Namespace, config: RunConfig) -> int:
    manifest_path = Path(args.manifest)
    entries = sorted(ds.read_manifest(manifest_path), key=lambda e: e.network_id)
    loaded = ds.load_manifest_networks(entries, base=manifest_path.parent)
    networks = [network for _, network in loaded]

    if config.distance == "dgcd13" and not config.include_large:
        excluded = [n.network_id for n in networks if len(n.nodes) >= LARGE_NETWORK_THRESHOLD]
        if excluded:
            print(
                f"excluded {len(excluded)} networks with >= {LARGE_NETWORK_THRESHOLD} nodes: "
                + ", ".join(excluded)
            )
        networks = [n for n in networks if len(n.nodes) < LARGE_NETWORK_THRESHOLD]
    if not networks:
        raise DiffnetError("no networks left to compare")

    ids = [n.network_id for n in networks]
    m = len(networks)
    matrix = np.zeros((m, m))
    if config.distance == "dgcd13":
        correlations = _map_tasks(_correlation_task, networks)
        for i in range(m):
            for j in range(i + 1, m):
                matrix[i, j] = matrix[j, i] = dgcd_from_correlations(
                    correlations[i], correlations[j]
                )
    elif config.distance == "portrait":
        portraits = _map_tasks(
            _portrait_task, [(n, config.portrait_undirected) for n in networks]
        )
        for i in range(m):
            for j in range(i + 1, m):
                matrix[i, j] = matrix[j, i] = divergence_from_portraits(
                    *pad_portraits(portraits[i], portraits[j])
                )
    else:
        raise DiffnetError(f"unknown distance {config.distance!r}")

    ds.write_distance_matrix(ids, matrix, args.out)
    print(f"wrote {m}x{m} {config.distance} matrix -> {args.out}")
    return EXIT_OK


# --- classify ---------------------------------------------------------------


def _filtered_samples(args: argparse.Namespace, config: RunConfig):
    samples = ds.read_feature_table(args.features)
    if args.manifest:
        by_id = {e.network_id: e for e in ds.read_manifest(Path(args.manifest))}
        missing = [s.network_id for s in samples if s.network_id not in by_id]
        if missing:
            raise DiffnetError(
                f"manifest lacks feature-table ids: {', '.join(sorted(missing))}"
            )
        samples = [
            s for s in samples if by_id[s.network_id].tweet_count >= config.min_tweets
        ]
    if args.bias:
        allowed = frozenset(Bias(b) for b in args.bias)
        samples = [s for s in samples if s.bias in allowed]
    if args.exclude_source:
        samples = [
            s
            for s in samples
            if not any(src in s.network_id for src in args.exclude_source)
        ]
    samples = [s for s in samples if s.label is not Label.UNLABELED]
    return samples


def cmd_classify(args: argparse.Namespace, config: RunConfig) -> int:
    samples = _filtered_samples(args, config)
    distances = None
    if args.distances:
        distances = ds.read_distance_matrix(args.distances)
        matrix_ids = set(distances[0])
        samples = [s for s in samples if s.network_id in matrix_ids]
    if config.classifier == "knn-distance" and distances is None:
        raise DiffnetError("classifier knn-distance requires --distances")
    dataset = ds.dataset_from_samples(samples, distances=distances)

    eval_config = EvalConfig(
        classifier=config.classifier,
        k=config.k,
        folds=config.folds,
        test_fraction=config.test_fraction,
        seed=config.seed,
        logistic=LogisticConfig(),
    )
    report = evaluate(dataset, eval_config, bucket=config.bucket)
    payload = report.to_dict()
    payload["config"].update(config.provenance())

    out = Path(args.out)
    out.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    if args.roc_out:
        with Path(args.roc_out).open("w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["fold", "threshold", "fpr", "tpr"])
            for fold_no, fold in enumerate(report.folds):
                for t, fp, tp in zip(fold.roc.thresholds, fold.roc.fpr, fold.roc.tpr):
                    writer.writerow(
                        [fold_no, "inf" if np.isinf(t) else repr(float(t)), repr(float(fp)), repr(float(tp))]
                    )
    print(
        f"{config.classifier} bucket={config.bucket.value}: "
        f"mean AUC {report.mean('auc'):.3f} +/- {report.std('auc'):.3f} "
        f"(pooled {report.pooled_auc:.3f}, {report.n_samples} samples) -> {out}"
    )
    return EXIT_OK


# --- generate ---------------------------------------------------------------


def cmd_generate(args: argparse.Namespace, config: RunConfig) -> int:
    if args.count < 1:
        raise DiffnetError("--count must be >= 1")
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    profile = ClassProfile(args.profile)
    networks = generate_ensemble(
        profile, config.bucket, count=args.count, seed=config.seed
    )
    entries = []
    for network in networks:
        edges_path = out_dir / f"{network.network_id}.edges"
        save_network(network, edges_path, nodes_path=out_dir / f"{network.network_id}.nodes")
        entries.append(
            ds.ManifestEntry(
                network_id=network.network_id,
                path=edges_path.name,
                label=network.label,
                bias=network.bias,
                tweet_count=network.tweet_count,
                n_nodes=len(network.nodes),
            )
        )
    manifest_path = _merge_manifest(out_dir, entries)
    sizes = sorted(len(n.nodes) for n in networks)
    print(
        f"generated {len(networks)} {profile.value} networks "
        f"(nodes {sizes[0]}..{sizes[-1]}) -> {manifest_path}"
    )
    return EXIT_OK


# --- report -----------------------------------------------------------------


def _five_number(values: np.ndarray) -> dict:
    qs = np.percentile(values, [0, 25, 50, 75, 100])
    return {
        "min": float(qs[0]),
        "q1": float(qs[1]),
        "median": float(qs[2]),
        "q3": float(qs[3]),
        "max": float(qs[4]),
    }


def cmd_report(args: argparse.Namespace, config: RunConfig) -> int:
    samples = _filtered_samples(args, config)
    if config.bucket is not SizeBucket.D_ALL:
        samples = [s for s in samples if config.bucket.contains(s.n_nodes)]
    dataset = ds.dataset_from_samples(samples)
    x = dataset.feature_matrix()
    y = dataset.label_vector()
    if not (np.any(y == 0) and np.any(y == 1)):
        raise DiffnetError("both classes required for a report")

    ks = feature_ks_tests(x, y)
    payload = {
        "config": config.provenance(),
        "n_samples": len(samples),
        "n_positive": int(np.sum(y == 1)),
        "n_negative": int(np.sum(y == 0)),
        "features": {
            name: {
                "ks_statistic": stat,
                "ks_p_value": p,
                "rejected_at_0.05": bool(p < 0.05),
                "disinformation": _five_number(x[y == 1, j]),
                "mainstream": _five_number(x[y == 0, j]),
            }
            for j, (name, stat, p) in enumerate(ks)
        },
    }
    Path(args.out).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    print(f"wrote feature report ({len(samples)} samples) -> {args.out}")
    return EXIT_OK


# --- argument parsing -------------------------------------------------------


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument(
        "--bucket",
        choices=[b.value for b in SizeBucket],
        default=SizeBucket.D_ALL.value,
    )
    parser.add_argument("--min-tweets", type=int, default=50)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="diffnet",
        description="Reconstruct, measure, compare and classify news diffusion networks.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("build", help="build networks from an interaction event file")
    p.add_argument("events_file")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--direction", choices=[d.value for d in EdgeDirection], default="flow")
    _add_common(p)

    p = sub.add_parser("features", help="compute the seven-feature table for a manifest")
    p.add_argument("manifest")
    p.add_argument("--out", required=True)
    p.add_argument(
        "--clustering", choices=[c.value for c in ClusteringVariant], default="undirected"
    )
    _add_common(p)

    p = sub.add_parser("distances", help="compute a pairwise distance matrix")
    p.add_argument("manifest")
    p.add_argument("--out", required=True)
    p.add_argument("--which", choices=["dgcd13", "portrait"], default="dgcd13")
    p.add_argument("--include-large", action="store_true")
    p.add_argument("--portrait-undirected", action="store_true")
    _add_common(p)

    p = sub.add_parser("classify", help="cross-validated classification from a feature table")
    p.add_argument("--features", required=True)
    p.add_argument("--distances")
    p.add_argument("--manifest")
    p.add_argument("--out", required=True)
    p.add_argument("--roc-out")
    p.add_argument("--classifier", choices=["lr", "knn", "knn-distance"], default="lr")
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--folds", type=int, default=10)
    p.add_argument("--test-fraction", type=float, default=0.1)
    p.add_argument("--bias", action="append", choices=[b.value for b in Bias])
    p.add_argument("--exclude-source", action="append", default=[])
    _add_common(p)

    p = sub.add_parser("generate", help="generate a synthetic labeled ensemble")
    p.add_argument("--profile", choices=[c.value for c in ClassProfile], required=True)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--out-dir", required=True)
    _add_common(p)

    p = sub.add_parser("report", help="per-feature class comparison (KS tests, box-plot data)")
    p.add_argument("--features", required=True)
    p.add_argument("--manifest")
    p.add_argument("--out", required=True)
    p.add_argument("--bias", action="append", choices=[b.value for b in Bias])
    p.add_argument("--exclude-source", action="append", default=[])
    _add_common(p)

    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        subcommand=args.subcommand,
        bucket=SizeBucket(getattr(args, "bucket", "all")),
        distance=getattr(args, "which", "dgcd13"),
        classifier=getattr(args, "classifier", "lr"),
        k=getattr(args, "k", 10),
        folds=getattr(args, "folds", 10),
        test_fraction=getattr(args, "test_fraction", 0.1),
        seed=getattr(args, "seed", 0),
        min_tweets=getattr(args, "min_tweets", 50),
        direction=EdgeDirection(getattr(args, "direction", "flow")),
        clustering=ClusteringVariant(getattr(args, "clustering", "undirected")),
        portrait_undirected=getattr(args, "portrait_undirected", False),
        include_large=getattr(args, "include_large", False),
    )


_COMMANDS = {
    "build": cmd_build,
    "features": cmd_features,
    "distances": cmd_distances,
    "classify": cmd_classify,
    "generate": cmd_generate,
    "report": cmd_report,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = config_from_args(args)
    except ValueError as exc:
        parser.error(str(exc))
    try:
        return _COMMANDS[args.subcommand](args, config)
    except (DiffnetError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FATAL


if __name__ == "__main__":
    sys.exit(main())
