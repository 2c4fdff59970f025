"""Temporal edge streams, snapshot binning and delta-node detection.

Node labels found in the input file are mapped to a dense ``0..n-1`` range
(in ascending label order) when snapshots are built; the original labels are
kept on the :class:`SnapshotSequence` for output.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

__all__ = [
    "EdgeStreamError",
    "TemporalEdge",
    "Snapshot",
    "SnapshotSequence",
    "parse_edge_stream",
    "read_edge_stream",
    "bin_snapshots",
    "degree",
    "delta_nodes",
    "describe",
    "write_snapshots",
    "read_snapshots",
]

COMMENT_PREFIXES = ("#", "%")


class EdgeStreamError(ValueError):
    pass


@dataclass(frozen=True)
class TemporalEdge:
    source: int
    target: int
    timestamp: int
    weight: float = 1.0


@dataclass(frozen=True, eq=False)
class Snapshot:
    """One static, undirected, simple graph of a dynamic graph.

    ``adjacency`` maps every node to the sorted tuple of its neighbours.
    Build instances with :meth:`from_edges`.
    """

    index: int
    adjacency: Mapping[int, tuple[int, ...]]
    _edges: frozenset = field(repr=False, default=frozenset())

    @classmethod
    def from_edges(cls, index: int, pairs: Iterable[tuple[int, int]]) -> "Snapshot":
        neighbours: dict[int, set[int]] = {}
        edges = set()
        for u, v in pairs:
            u, v = int(u), int(v)
            if u == v:
                continue
            neighbours.setdefault(u, set()).add(v)
            neighbours.setdefault(v, set()).add(u)
            edges.add((u, v) if u < v else (v, u))
        adjacency = {n: tuple(sorted(nb)) for n, nb in sorted(neighbours.items())}
        return cls(index, adjacency, frozenset(edges))

    @property
    def nodes(self) -> frozenset[int]:
        return frozenset(self.adjacency)

    @property
    def edges(self) -> frozenset[tuple[int, int]]:
        """Undirected edges as ``(u, v)`` pairs with ``u < v``."""
        return self._edges

    @property
    def num_nodes(self) -> int:
        return len(self.adjacency)

    @property
    def num_edges(self) -> int:
        return len(self._edges)

    def neighbors(self, v: int) -> tuple[int, ...]:
        try:
            return self.adjacency[v]
        except KeyError:
            raise KeyError(f"node {v} is not in snapshot {self.index}") from None

    def degree(self, v: int) -> int:
        return len(self.neighbors(v))

    def has_edge(self, u: int, v: int) -> bool:
        return ((u, v) if u < v else (v, u)) in self._edges

    def __eq__(self, other):
        if not isinstance(other, Snapshot):
            return NotImplemented
        return self.index == other.index and self._edges == other._edges

    def __hash__(self):
        return hash((self.index, self._edges))


@dataclass(frozen=True)
class SnapshotSequence:
    snapshots: tuple[Snapshot, ...]
    labels: tuple[int, ...] = ()

    def __post_init__(self):
        if not self.snapshots:
            raise ValueError("a snapshot sequence needs at least one snapshot")
        indices = [s.index for s in self.snapshots]
        if indices != list(range(1, len(indices) + 1)):
            raise ValueError(f"snapshot indices must be 1..N, got {indices}")
        if not self.labels:
            n = max(max(s.adjacency) for s in self.snapshots) + 1
            object.__setattr__(self, "labels", tuple(range(n)))

    def __len__(self) -> int:
        return len(self.snapshots)

    def __iter__(self) -> Iterator[Snapshot]:
        return iter(self.snapshots)

    def __getitem__(self, i):
        return self.snapshots[i]

    def label(self, node: int) -> int:
        return self.labels[node]

    @property
    def all_nodes(self) -> frozenset[int]:
        return frozenset().union(*(s.nodes for s in self.snapshots))

    @property
    def all_edges(self) -> frozenset[tuple[int, int]]:
        return frozenset().union(*(s.edges for s in self.snapshots))


def _parse_lines(lines: Iterable[str]) -> list[TemporalEdge]:
    edges = []
    seen_any = False
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith(COMMENT_PREFIXES):
            continue
        seen_any = True
        fields = line.split()
        if len(fields) not in (3, 4):
            raise EdgeStreamError(
                f"line {lineno}: expected 3 or 4 fields "
                f"(source target timestamp [weight]), got {len(fields)}"
            )
        try:
            source, target, timestamp = (int(f) for f in fields[:3])
            weight = float(fields[3]) if len(fields) == 4 else 1.0
        except ValueError:
            raise EdgeStreamError(f"line {lineno}: non-numeric field in {line!r}") from None
        if timestamp < 0:
            raise EdgeStreamError(f"line {lineno}: negative timestamp {timestamp}")
        if not weight > 0:
            raise EdgeStreamError(f"line {lineno}: weight must be positive, got {weight}")
        if source == target:
            continue
        edges.append(TemporalEdge(source, target, timestamp, weight))
    if not seen_any:
        raise EdgeStreamError("no edges")
    return edges


def parse_edge_stream(text: str | Iterable[str]) -> list[TemporalEdge]:
    """Parse a whitespace separated temporal edge list.

    Each data line is ``source target timestamp [weight]``.  Lines starting
    with ``#`` or ``%`` are comments.  Self-loops are dropped.

    >>> parse_edge_stream("1 2 100\\n2 3 200")
    [TemporalEdge(source=1, target=2, timestamp=100, weight=1.0), TemporalEdge(source=2, target=3, timestamp=200, weight=1.0)]
    """
    if isinstance(text, str):
        text = text.splitlines()
    return _parse_lines(text)


def read_edge_stream(path: str | os.PathLike) -> list[TemporalEdge]:
    with open(path, encoding="utf-8") as fh:
        return _parse_lines(fh)


def bin_snapshots(
    edges: Sequence[TemporalEdge],
    *,
    count: int | None = None,
    width: float | None = None,
) -> SnapshotSequence:
    """Split an edge stream into snapshots.

    Exactly one of ``count`` (number of equal-width bins over the observed
    time range, last bin closed on the right) or ``width`` (bin width in
    seconds, bins half-open and anchored at the earliest timestamp) must be
    given.  Empty bins are dropped and the remaining snapshots re-indexed
    from 1.
    """
    if (count is None) == (width is None):
        raise ValueError("give exactly one of count= or width=")
    if not edges:
        raise ValueError("no edges to bin")

    times = np.fromiter((e.timestamp for e in edges), dtype=np.int64, count=len(edges))
    t_min, t_max = int(times.min()), int(times.max())
    if count is not None:
        if count < 1:
            raise ValueError(f"snapshot count must be >= 1, got {count}")
        span = t_max - t_min
        if span == 0:
            bins = np.zeros(len(edges), dtype=np.int64)
        else:
            # integer arithmetic keeps bin boundaries exact
            bins = np.minimum((times - t_min) * count // span, count - 1)
    else:
        if not width > 0:
            raise ValueError(f"bin width must be positive, got {width}")
        bins = np.floor((times - t_min) / width).astype(np.int64)

    labels = sorted({e.source for e in edges} | {e.target for e in edges})
    dense = {label: i for i, label in enumerate(labels)}

    grouped: dict[int, list[tuple[int, int]]] = {}
    for e, b in zip(edges, bins.tolist()):
        grouped.setdefault(b, []).append((dense[e.source], dense[e.target]))
    snapshots = tuple(
        Snapshot.from_edges(i, grouped[b]) for i, b in enumerate(sorted(grouped), start=1)
    )
    return SnapshotSequence(snapshots, tuple(labels))


def degree(snapshot: Snapshot, v: int) -> int:
    return snapshot.degree(v)


def delta_nodes(current: Snapshot, previous: Snapshot) -> set[int]:
    """Nodes of ``current`` that are new or whose incident edge set changed."""
    changed = set()
    for v, nbrs in current.adjacency.items():
        before = previous.adjacency.get(v)
        if before is None or before != nbrs:
            changed.add(v)
    return changed


def describe(seq: SnapshotSequence) -> dict:
    """Dataset summary: total nodes/edges, snapshot count and mean activations."""
    all_nodes = seq.all_nodes
    all_edges = seq.all_edges
    node_act = sum(s.num_nodes for s in seq)
    edge_act = sum(s.num_edges for s in seq)
    return {
        "nodes": len(all_nodes),
        "edges": len(all_edges),
        "snapshots": len(seq),
        "node_activation": node_act / len(all_nodes),
        "edge_activation": edge_act / len(all_edges),
        "snapshot_nodes": [s.num_nodes for s in seq],
        "snapshot_edges": [s.num_edges for s in seq],
    }


def write_snapshots(seq: SnapshotSequence, directory: str | os.PathLike) -> list[Path]:
    """Dump one ``snapshot_NNN.edges`` file per snapshot, using original labels."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    paths = []
    for snap in seq:
        path = directory / f"snapshot_{snap.index:03d}.edges"
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(f"# snapshot {snap.index}: {snap.num_nodes} nodes, {snap.num_edges} edges\n")
            for u, v in sorted(snap.edges):
                fh.write(f"{seq.labels[u]} {seq.labels[v]}\n")
        paths.append(path)
    return paths


def read_snapshots(directory: str | os.PathLike) -> SnapshotSequence:
    """Inverse of :func:`write_snapshots`."""
    paths = sorted(Path(directory).glob("snapshot_*.edges"))
    if not paths:
        raise FileNotFoundError(f"no snapshot_*.edges files in {directory}")
    raw = []
    for path in paths:
        pairs = []
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                line = line.strip()
                if not line or line.startswith(COMMENT_PREFIXES):
                    continue
                try:
                    u, v = (int(x) for x in line.split())
                except ValueError:
                    raise EdgeStreamError(f"{path.name} line {lineno}: expected 'source target'") from None
                pairs.append((u, v))
        raw.append(pairs)
    labels = sorted({x for pairs in raw for pair in pairs for x in pair})
    dense = {label: i for i, label in enumerate(labels)}
    snapshots = tuple(
        Snapshot.from_edges(i, ((dense[u], dense[v]) for u, v in pairs))
        for i, pairs in enumerate(raw, start=1)
    )
    return SnapshotSequence(snapshots, tuple(labels))
