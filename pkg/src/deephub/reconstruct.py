"""Graph reconstruction from embedding distances and its per-node scores.

A snapshot with ``|E|`` edges is rebuilt by linking the ``|E|`` closest node
pairs in Euclidean distance.  Each node then gets precision (correct links
over reconstructed links), recall (correct links over original links) and
F1; graph-level scores are micro-averaged.  Macro (per-node mean) scores are
reported alongside because, with the budget equal to ``|E|``, micro
precision and micro recall always coincide.
"""

from __future__ import annotations

import csv
import os
from dataclasses import dataclass, asdict
from typing import Mapping, Sequence

import numpy as np
from scipy.spatial.distance import pdist

from .temporal_graph import Snapshot, SnapshotSequence

__all__ = [
    "NodeMetrics",
    "Scores",
    "SnapshotResult",
    "reconstruct_graph",
    "score_reconstruction",
    "evaluate_sequence",
    "write_metrics_csv",
]


def _f1(p: float, r: float) -> float:
    return 2 * p * r / (p + r) if p + r > 0 else 0.0


@dataclass(frozen=True)
class NodeMetrics:
    node: int
    correct: int
    recon_degree: int
    orig_degree: int
    precision: float
    recall: float
    f1: float


@dataclass(frozen=True)
class Scores:
    precision: float
    recall: float
    f1: float


@dataclass
class SnapshotResult:
    index: int
    nodes: list[NodeMetrics]
    micro: Scores
    macro: Scores
    reconstructed_edges: int


def reconstruct_graph(embedding: Mapping[int, np.ndarray], edge_budget: int) -> set[tuple[int, int]]:
    """The ``edge_budget`` closest node pairs, as ``(u, v)`` with ``u < v``.

    Distance ties are broken by lexicographic pair order.
    """
    nodes = sorted(embedding)
    n = len(nodes)
    if n < 2:
        raise ValueError("reconstruction needs at least two embedded nodes")
    n_pairs = n * (n - 1) // 2
    if not 0 <= edge_budget <= n_pairs:
        raise ValueError(f"edge budget {edge_budget} outside [0, {n_pairs}]")
    X = np.stack([np.asarray(embedding[v], dtype=np.float64) for v in nodes])
    dist = pdist(X)
    # pdist order is row-major over i < j, i.e. already lexicographic
    order = np.argsort(dist, kind="stable")[:edge_budget]
    iu, ju = np.triu_indices(n, k=1)
    return {(nodes[i], nodes[j]) for i, j in zip(iu[order].tolist(), ju[order].tolist())}


def score_reconstruction(
    snapshot: Snapshot, reconstructed: set[tuple[int, int]]
) -> tuple[list[NodeMetrics], Scores, Scores]:
    """Per-node metrics plus micro and macro aggregates.

    Returns ``(node_metrics, micro, macro)``.
    """
    recon_adj: dict[int, set[int]] = {}
    for u, v in reconstructed:
        recon_adj.setdefault(u, set()).add(v)
        recon_adj.setdefault(v, set()).add(u)

    metrics = []
    for v, nbrs in snapshot.adjacency.items():
        rec = recon_adj.get(v, set())
        correct = len(rec.intersection(nbrs))
        p = correct / len(rec) if rec else 0.0
        r = correct / len(nbrs)
        metrics.append(NodeMetrics(v, correct, len(rec), len(nbrs), p, r, _f1(p, r)))

    total_correct = sum(m.correct for m in metrics)
    total_recon = sum(m.recon_degree for m in metrics)
    total_orig = sum(m.orig_degree for m in metrics)
    micro_p = total_correct / total_recon if total_recon else 0.0
    micro_r = total_correct / total_orig if total_orig else 0.0
    micro = Scores(micro_p, micro_r, _f1(micro_p, micro_r))
    macro = Scores(
        float(np.mean([m.precision for m in metrics])),
        float(np.mean([m.recall for m in metrics])),
        float(np.mean([m.f1 for m in metrics])),
    )
    return metrics, micro, macro


def evaluate_sequence(embeddings, seq: SnapshotSequence) -> tuple[list[SnapshotResult], float]:
    """Reconstruct and score every snapshot with budget ``|E_i|``.

    ``embeddings`` is an :class:`~deephub.trainer.EmbeddingSequence` or any
    sequence of ``(index, {node: vector})`` pairs.  Returns the per-snapshot
    results and the last snapshot's micro F1.
    """
    embeddings = list(embeddings)
    if len(embeddings) != len(seq):
        raise ValueError(f"{len(embeddings)} embeddings for {len(seq)} snapshots")
    results = []
    for (index, emb), snap in zip(embeddings, seq):
        restricted = {v: emb[v] for v in snap.adjacency}
        recon = reconstruct_graph(restricted, snap.num_edges)
        metrics, micro, macro = score_reconstruction(snap, recon)
        results.append(SnapshotResult(snap.index, metrics, micro, macro, len(recon)))
    return results, results[-1].micro.f1


def write_metrics_csv(
    results: Sequence[SnapshotResult], path: str | os.PathLike, labels: Sequence[int] | None = None
) -> None:
    """Per-(snapshot, node) rows followed by micro/macro summary rows."""
    fields = ["snapshot", "node", "correct", "recon_degree", "orig_degree", "precision", "recall", "f1"]
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(fields)
        for res in results:
            for m in res.nodes:
                row = asdict(m)
                row["node"] = labels[m.node] if labels is not None else m.node
                w.writerow([res.index] + [_fmt(row[k]) for k in fields[1:]])
        for res in results:
            for kind, s in (("micro", res.micro), ("macro", res.macro)):
                w.writerow([res.index, kind, "", "", "", _fmt(s.precision), _fmt(s.recall), _fmt(s.f1)])


def _fmt(x):
    return f"{x:.6f}" if isinstance(x, float) else x
