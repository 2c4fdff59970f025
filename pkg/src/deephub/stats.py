"""Hub partitioning and the degree/embedding-quality statistics."""

from __future__ import annotations

import math
from dataclasses import dataclass, asdict
from typing import Sequence

import numpy as np
from scipy.stats import rankdata

from .reconstruct import SnapshotResult
from .temporal_graph import Snapshot, SnapshotSequence

__all__ = [
    "HubPartition",
    "MwuResult",
    "hub_partition",
    "spearman",
    "mann_whitney_u",
    "degree_quality_correlation",
    "hub_comparison",
    "analysis_report",
    "EXACT_MAX_TOTAL",
    "ALPHA",
]

ALPHA = 0.05
EXACT_MAX_TOTAL = 20


@dataclass(frozen=True)
class HubPartition:
    hubs: frozenset[int]
    non_hubs: frozenset[int]


@dataclass(frozen=True)
class MwuResult:
    U: float
    p_value: float
    reject_null: bool
    ps_hubs: float
    ps_non_hubs: float
    ties: float
    method: str


def hub_partition(snapshot: Snapshot) -> HubPartition:
    """Shortest degree-ordered prefix whose total degree beats the rest.

    Nodes are ordered by degree descending, ties by ascending node id.
    """
    if not snapshot.adjacency:
        raise ValueError("empty snapshot")
    order = sorted(snapshot.adjacency, key=lambda v: (-len(snapshot.adjacency[v]), v))
    remaining = sum(len(nb) for nb in snapshot.adjacency.values())
    taken = 0
    for k, v in enumerate(order, start=1):
        d = len(snapshot.adjacency[v])
        taken += d
        remaining -= d
        if taken > remaining:
            return HubPartition(frozenset(order[:k]), frozenset(order[k:]))
    raise AssertionError("unreachable: the full node set always qualifies")


def spearman(x: Sequence[float], y: Sequence[float]) -> float:
    """Spearman rank correlation with mid-ranks for ties."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("spearman needs two 1-D sequences of equal length")
    if len(x) < 2:
        raise ValueError("spearman needs at least two observations")
    if np.all(x == x[0]) or np.all(y == y[0]):
        raise ValueError("undefined correlation: constant input")
    rx = rankdata(x) - (len(x) + 1) / 2
    ry = rankdata(y) - (len(y) + 1) / 2
    r = float(rx @ ry / math.sqrt((rx @ rx) * (ry @ ry)))
    return max(-1.0, min(1.0, r))


def _exact_two_sided(pooled_ranks2: np.ndarray, n1: int, observed2: int) -> float:
    # subset-sum counts of doubled mid-ranks over all size-n1 subsets
    total = int(pooled_ranks2.sum())
    ways = np.zeros((n1 + 1, total + 1), dtype=object)
    ways[0, 0] = 1
    for r in pooled_ranks2.tolist():
        ways[1:, r:] = ways[1:, r:] + ways[:-1, : total + 1 - r]
    dist = ways[n1]
    denom = math.comb(len(pooled_ranks2), n1)
    lower = int(dist[: observed2 + 1].sum())
    upper = int(dist[observed2:].sum())
    return min(1.0, 2 * min(lower, upper) / denom)


def mann_whitney_u(a: Sequence[float], b: Sequence[float], method: str = "auto") -> MwuResult:
    """Two-sided Mann-Whitney U test of ``a`` against ``b``.

    ``U`` counts pairs with ``a_i > b_j`` plus half the ties.  The p-value is
    exact (permutation distribution, ties included) when ``method='exact'``
    or ``'auto'`` with at most 20 observations in total, otherwise normal
    with tie and continuity correction.  ``ps_hubs``/``ps_non_hubs`` are the
    strict probabilities of superiority of ``a`` over ``b`` and vice versa.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    n1, n2 = len(a), len(b)
    if n1 == 0 or n2 == 0:
        raise ValueError("mann_whitney_u needs two non-empty samples")
    if method not in ("auto", "exact", "normal"):
        raise ValueError(f"unknown method {method!r}")

    bs = np.sort(b)
    less = np.searchsorted(bs, a, side="left").sum()  # b_j < a_i
    greater = (n2 - np.searchsorted(bs, a, side="right")).sum()  # b_j > a_i
    pairs = n1 * n2
    ties = pairs - less - greater
    U = less + 0.5 * ties

    pooled = np.concatenate([a, b])
    ranks = rankdata(pooled)
    if method == "exact" or (method == "auto" and n1 + n2 <= EXACT_MAX_TOTAL):
        ranks2 = np.rint(2 * ranks).astype(np.int64)
        observed2 = int(ranks2[:n1].sum())
        p = _exact_two_sided(ranks2, n1, observed2)
        used = "exact"
    else:
        n = n1 + n2
        _, counts = np.unique(pooled, return_counts=True)
        tie_term = float((counts**3 - counts).sum()) / (n * (n - 1))
        var = n1 * n2 / 12.0 * ((n + 1) - tie_term)
        if var <= 0:
            p = 1.0
        else:
            z = (abs(U - pairs / 2.0) - 0.5) / math.sqrt(var)
            p = min(1.0, math.erfc(z / math.sqrt(2.0)))
        used = "normal"
    return MwuResult(
        U=float(U),
        p_value=float(p),
        reject_null=bool(p < ALPHA),
        ps_hubs=float(less / pairs),
        ps_non_hubs=float(greater / pairs),
        ties=float(ties / pairs),
        method=used,
    )


def _pooled_pairs(seq: SnapshotSequence, results: Sequence[SnapshotResult]):
    if len(results) != len(seq):
        raise ValueError(f"{len(results)} results for {len(seq)} snapshots")
    for snap, res in zip(seq, results):
        if snap.index != res.index:
            raise ValueError(f"result {res.index} does not match snapshot {snap.index}")
        for m in res.nodes:
            yield snap, m


def degree_quality_correlation(
    seq: SnapshotSequence, results: Sequence[SnapshotResult]
) -> dict[str, float]:
    """Spearman correlation of node degree with F1, precision and recall.

    Every (node, snapshot) observation is one data point.
    """
    rows = [(snap.degree(m.node), m.f1, m.precision, m.recall) for snap, m in _pooled_pairs(seq, results)]
    deg, f1, prec, rec = (list(col) for col in zip(*rows))
    return {"f1": spearman(deg, f1), "precision": spearman(deg, prec), "recall": spearman(deg, rec)}


def _hub_split(snap: Snapshot, res: SnapshotResult):
    part = hub_partition(snap)
    hubs = [m.f1 for m in res.nodes if m.node in part.hubs]
    rest = [m.f1 for m in res.nodes if m.node in part.non_hubs]
    return part, hubs, rest


def hub_comparison(seq: SnapshotSequence, results: Sequence[SnapshotResult]) -> dict:
    """Hub vs non-hub F1 comparison, pooled over snapshots and per snapshot."""
    pooled_h: list[float] = []
    pooled_o: list[float] = []
    per_snapshot = []
    for snap, res in zip(seq, results):
        part, hubs, rest = _hub_split(snap, res)
        pooled_h += hubs
        pooled_o += rest
        entry = {"snapshot": snap.index, "hubs": len(part.hubs), "non_hubs": len(part.non_hubs)}
        if hubs and rest:
            entry.update(_summary(hubs, rest))
        per_snapshot.append(entry)
    pooled = {"hubs": len(pooled_h), "non_hubs": len(pooled_o)}
    if pooled_h and pooled_o:
        pooled.update(_summary(pooled_h, pooled_o))
    return {"pooled": pooled, "per_snapshot": per_snapshot}


def _summary(hubs, rest) -> dict:
    res = mann_whitney_u(hubs, rest)
    out = {"f1_hubs": float(np.mean(hubs)), "f1_non_hubs": float(np.mean(rest))}
    out.update(asdict(res))
    return out


def analysis_report(seq: SnapshotSequence, results: Sequence[SnapshotResult]) -> dict:
    """Everything the ``analyze`` command writes out as JSON."""
    try:
        corr: dict = degree_quality_correlation(seq, results)
    except ValueError as exc:
        corr = {"error": str(exc)}
    return {
        "correlations": corr,
        "mwu": hub_comparison(seq, results),
        "hub_sizes": [len(hub_partition(s).hubs) for s in seq],
    }
