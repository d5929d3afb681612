"""Diffusion-network data model and construction from raw interaction events.

A diffusion network is a directed, unweighted, simple graph: one node per
user, one edge per realized (information source -> information receiver)
pair. Isolated nodes are users whose tweets were never re-shared, replied
to, quoted or mentioned; they are preserved by every operation here.
"""

from __future__ import annotations

import json
import warnings
from collections import defaultdict
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .errors import FileFormatError, MalformedEventError


class Interaction(str, Enum):
    ORIGINAL = "original"
    RETWEET = "retweet"
    QUOTE = "quote"
    REPLY = "reply"
    MENTION = "mention"


class Label(str, Enum):
    MAINSTREAM = "mainstream"
    DISINFORMATION = "disinformation"
    UNLABELED = "unlabeled"


class Bias(str, Enum):
    LEFT = "left"
    CENTRE = "centre"
    RIGHT = "right"
    SATIRE = "satire"
    NONE = "none"


class EdgeDirection(str, Enum):
    """Orientation convention for interaction edges.

    ``INFO_FLOW`` (default) orients edges along the flow of information:
    a retweet/quote/reply creates (target_user -> acting_user), a mention
    creates (acting_user -> mentioned user). ``REVERSED`` flips every edge.
    """

    INFO_FLOW = "flow"
    REVERSED = "reversed"


class SizeBucket(Enum):
    """Node-count ranges used to split a corpus into comparable subsets."""

    D_ALL = "all"
    D_0_100 = "0-100"
    D_100_1000 = "100-1000"
    D_1000_INF = "1000+"

    @classmethod
    def from_node_count(cls, n: int) -> "SizeBucket":
        if n < 100:
            return cls.D_0_100
        if n < 1000:
            return cls.D_100_1000
        return cls.D_1000_INF

    def contains(self, n: int) -> bool:
        if self is SizeBucket.D_ALL:
            return True
        return SizeBucket.from_node_count(n) is self


@dataclass(frozen=True)
class InteractionEvent:
    """One typed interaction extracted from a tweet.

    ``user`` is the acting user. ``target_user`` is required for every
    interaction except ``original`` and must be absent for ``original``;
    violating either raises :class:`MalformedEventError` at construction.
    """

    tweet_id: str
    user: str
    target_user: str | None
    interaction: Interaction
    url: str
    timestamp: float

    def __post_init__(self):
        if not self.user:
            raise MalformedEventError(f"event {self.tweet_id!r}: empty acting user")
        if self.interaction is Interaction.ORIGINAL:
            if self.target_user is not None:
                raise MalformedEventError(
                    f"event {self.tweet_id!r}: original tweet carries a target user"
                )
        elif not self.target_user:
            raise MalformedEventError(
                f"event {self.tweet_id!r}: {self.interaction.value} without a target user"
            )


@dataclass(frozen=True)
class DiffusionNetwork:
    """Directed, unweighted, simple interaction graph for one news URL.

    Immutable after construction; derived adjacency views are cached and
    the instance is safe to share across concurrent readers.
    """

    network_id: str
    nodes: frozenset[str]
    edges: frozenset[tuple[str, str]]
    label: Label = Label.UNLABELED
    bias: Bias = Bias.NONE
    tweet_count: int = 0

    def __post_init__(self):
        object.__setattr__(self, "nodes", frozenset(self.nodes))
        object.__setattr__(self, "edges", frozenset(self.edges))
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"self-loop on node {u!r}")
            if u not in self.nodes or v not in self.nodes:
                raise ValueError(f"edge ({u!r}, {v!r}) has endpoint outside node set")
        if self.tweet_count < 0:
            raise ValueError("tweet_count must be non-negative")

    @property
    def n_nodes(self) -> int:
        return len(self.nodes)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @cached_property
    def sorted_nodes(self) -> tuple[str, ...]:
        return tuple(sorted(self.nodes))

    @cached_property
    def node_index(self) -> dict[str, int]:
        return {u: i for i, u in enumerate(self.sorted_nodes)}

    @cached_property
    def arcs(self) -> tuple[tuple[int, int], ...]:
        """Edges as (source index, target index), deterministically ordered."""
        idx = self.node_index
        return tuple(sorted((idx[u], idx[v]) for u, v in self.edges))

    @cached_property
    def out_sets(self) -> tuple[frozenset[int], ...]:
        out = [set() for _ in range(self.n_nodes)]
        for a, b in self.arcs:
            out[a].add(b)
        return tuple(frozenset(s) for s in out)

    @cached_property
    def in_sets(self) -> tuple[frozenset[int], ...]:
        inc = [set() for _ in range(self.n_nodes)]
        for a, b in self.arcs:
            inc[b].add(a)
        return tuple(frozenset(s) for s in inc)

    @cached_property
    def out_lists(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(sorted(s)) for s in self.out_sets)

    @cached_property
    def in_lists(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(sorted(s)) for s in self.in_sets)

    @cached_property
    def und_sets(self) -> tuple[frozenset[int], ...]:
        """Neighbor sets of the undirected simple projection."""
        return tuple(a | b for a, b in zip(self.out_sets, self.in_sets))

    @cached_property
    def und_lists(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(sorted(s)) for s in self.und_sets)

    def relabeled(self, mapping: Mapping[str, str], network_id: str | None = None) -> "DiffusionNetwork":
        """Return an isomorphic copy with nodes renamed through ``mapping``."""
        return DiffusionNetwork(
            network_id=network_id or self.network_id,
            nodes=frozenset(mapping[u] for u in self.nodes),
            edges=frozenset((mapping[u], mapping[v]) for u, v in self.edges),
            label=self.label,
            bias=self.bias,
            tweet_count=self.tweet_count,
        )


def interaction_edge(event: InteractionEvent, direction: EdgeDirection) -> tuple[str, str] | None:
    """Directed edge realized by one event, or None for originals/self-interactions."""
    if event.interaction is Interaction.ORIGINAL:
        return None
    if event.user == event.target_user:
        return None  # self-replies and self-mentions carry no diffusion edge
    if event.interaction is Interaction.MENTION:
        edge = (event.user, event.target_user)
    else:
        edge = (event.target_user, event.user)
    if direction is EdgeDirection.REVERSED:
        edge = (edge[1], edge[0])
    return edge


def build_network(
    events: Sequence[InteractionEvent],
    url: str,
    *,
    direction: EdgeDirection = EdgeDirection.INFO_FLOW,
    network_id: str | None = None,
    label: Label = Label.UNLABELED,
    bias: Bias = Bias.NONE,
) -> DiffusionNetwork:
    """Build the diffusion network for one URL from its interaction events.

    One node per unique user appearing as actor or target; one edge per
    distinct realized source/receiver pair (repeat interactions between the
    same pair collapse to a single edge). Authors whose tweets drew no
    interaction remain as isolated nodes.
    """
    nodes: set[str] = set()
    edges: set[tuple[str, str]] = set()
    for event in events:
        if event.url != url:
            raise MalformedEventError(
                f"event {event.tweet_id!r} carries url {event.url!r}, expected {url!r}"
            )
        nodes.add(event.user)
        if event.target_user is not None:
            nodes.add(event.target_user)
        edge = interaction_edge(event, direction)
        if edge is not None:
            edges.add(edge)
    return DiffusionNetwork(
        network_id=network_id if network_id is not None else url,
        nodes=frozenset(nodes),
        edges=frozenset(edges),
        label=label,
        bias=bias,
        tweet_count=len(events),
    )


def bucket_of(network: DiffusionNetwork) -> SizeBucket:
    """The unique non-all size bucket containing the network's node count."""
    return SizeBucket.from_node_count(network.n_nodes)


# --- event file ingestion (one JSON object per line) -----------------------

_EVENT_KEYS = ("tweet_id", "user", "target_user", "interaction", "url", "timestamp")


def parse_event(obj: Mapping) -> InteractionEvent:
    """Build an event from a decoded JSON object, validating the schema."""
    missing = [k for k in _EVENT_KEYS if k != "target_user" and k not in obj]
    if missing:
        raise MalformedEventError(f"event object missing keys: {', '.join(missing)}")
    try:
        interaction = Interaction(obj["interaction"])
    except ValueError:
        raise MalformedEventError(f"unknown interaction type {obj['interaction']!r}") from None
    target = obj.get("target_user")
    return InteractionEvent(
        tweet_id=str(obj["tweet_id"]),
        user=str(obj["user"]),
        target_user=None if target is None else str(target),
        interaction=interaction,
        url=str(obj["url"]),
        timestamp=float(obj["timestamp"]),
    )


def read_events(path, *, skip_malformed: bool = False) -> tuple[list[InteractionEvent], int]:
    """Read a JSONL events file.

    Returns (events, number of skipped lines). With ``skip_malformed=False``
    the first bad line raises :class:`FileFormatError` with its line number.
    """
    path = Path(path)
    events: list[InteractionEvent] = []
    skipped = 0
    with path.open("r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                events.append(parse_event(json.loads(line)))
            except (json.JSONDecodeError, MalformedEventError, ValueError, TypeError) as exc:
                if skip_malformed:
                    skipped += 1
                    continue
                raise FileFormatError(str(exc), path=path, line_no=line_no) from exc
    return events, skipped


def group_events_by_url(events: Iterable[InteractionEvent]) -> dict[str, list[InteractionEvent]]:
    by_url: dict[str, list[InteractionEvent]] = defaultdict(list)
    for event in events:
        by_url[event.url].append(event)
    return dict(by_url)


# --- edge-list serialization ------------------------------------------------

DIRECTED_HEADER = "#directed"


def save_network(network: DiffusionNetwork, edges_path, nodes_path=None) -> None:
    """Write ``src<TAB>dst`` lines plus a node manifest preserving isolates."""
    edges_path = Path(edges_path)
    with edges_path.open("w", encoding="utf-8") as fh:
        fh.write(DIRECTED_HEADER + "\n")
        for u, v in sorted(network.edges):
            fh.write(f"{u}\t{v}\n")
    if nodes_path is not None:
        with Path(nodes_path).open("w", encoding="utf-8") as fh:
            for u in network.sorted_nodes:
                fh.write(u + "\n")


def load_network(
    path,
    fmt: str = "edgelist",
    *,
    nodes_path=None,
    network_id: str | None = None,
    label: Label = Label.UNLABELED,
    bias: Bias = Bias.NONE,
    tweet_count: int = 0,
    direction: EdgeDirection = EdgeDirection.INFO_FLOW,
) -> DiffusionNetwork:
    """Load a network from disk.

    ``fmt="edgelist"``: tab-separated edge lines, ``#``-prefixed lines are
    comments, duplicate lines collapse with a warning, self-loop lines are
    rejected. A companion node-manifest file (``nodes_path``, defaulting to
    the edge file with a ``.nodes`` suffix when present) restores isolated
    nodes. ``fmt="events"``: a JSONL events file that must contain exactly
    one distinct URL.
    """
    path = Path(path)
    if fmt == "events":
        events, _ = read_events(path)
        if not events:
            raise FileFormatError("no events in file", path=path)
        urls = sorted({e.url for e in events})
        if len(urls) > 1:
            raise FileFormatError(
                f"events file contains {len(urls)} distinct URLs; expected one", path=path
            )
        return build_network(
            events,
            urls[0],
            direction=direction,
            network_id=network_id or path.stem,
            label=label,
            bias=bias,
        )
    if fmt != "edgelist":
        raise ValueError(f"unknown network format {fmt!r}")

    edges: set[tuple[str, str]] = set()
    nodes: set[str] = set()
    duplicates = 0
    with path.open("r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t") if "\t" in line else line.split()
            if len(parts) != 2 or not parts[0] or not parts[1]:
                raise FileFormatError(
                    f"expected 'src<TAB>dst', got {line!r}", path=path, line_no=line_no
                )
            u, v = parts
            if u == v:
                raise FileFormatError(f"self-loop on node {u!r}", path=path, line_no=line_no)
            if (u, v) in edges:
                duplicates += 1
            edges.add((u, v))
            nodes.add(u)
            nodes.add(v)
    if duplicates:
        warnings.warn(f"{path}: collapsed {duplicates} duplicate edge line(s)", stacklevel=2)

    if nodes_path is None:
        candidate = path.with_suffix(".nodes")
        if candidate.exists():
            nodes_path = candidate
    if nodes_path is not None:
        with Path(nodes_path).open("r", encoding="utf-8") as fh:
            for line in fh:
                name = line.strip()
                if name:
                    nodes.add(name)

    return DiffusionNetwork(
        network_id=network_id or path.stem,
        nodes=frozenset(nodes),
        edges=frozenset(edges),
        label=label,
        bias=bias,
        tweet_count=tweet_count,
    )
