"""Random-walk corpora over a single snapshot.

Three next-node strategies are available: uniform (DeepWalk), second-order
node2vec and DeepHub's degree-scored selection with backtracking and random
moves.  Every walk draws from its own generator seeded by
``(seed, snapshot index, start node, replica)``, so a corpus does not depend
on the order in which walks are produced.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Union

import numpy as np

from .temporal_graph import Snapshot

__all__ = [
    "DeadEnd",
    "WalkContext",
    "Uniform",
    "Node2Vec",
    "DeepHubConfig",
    "SCORING_MODES",
    "SamplingPlan",
    "WalkCorpus",
    "transition_distribution",
    "next_node_uniform",
    "next_node_node2vec",
    "next_node_deephub",
    "sample_walks",
    "walk_rng",
]


class DeadEnd(LookupError):
    """The current node has no neighbour to move to."""


@dataclass(frozen=True)
class WalkContext:
    start_node: int
    current_node: int
    prev_node: int | None = None


@dataclass(frozen=True)
class Uniform:
    name = "uniform"


@dataclass(frozen=True)
class Node2Vec:
    p: float = 1.0
    q: float = 1.0
    name = "node2vec"

    def __post_init__(self):
        if not (self.p > 0 and self.q > 0):
            raise ValueError(f"node2vec p and q must be positive, got p={self.p}, q={self.q}")


SCORING_MODES = {
    "normal": (False, False),
    "log": (False, True),
    "inverse": (True, False),
    "inverse-log": (True, True),
}


@dataclass(frozen=True)
class DeepHubConfig:
    """DeepHub selection parameters.

    ``p`` is the backtracking probability and ``u`` the probability of a
    uniform move; the remaining mass goes to degree-scored selection.
    """

    p: float = 0.0
    u: float = 0.0
    inverse: bool = False
    log_scaling: bool = False
    name = "deephub"

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"backtrack probability must lie in [0, 1], got {self.p}")
        if not 0.0 <= self.u <= 1.0:
            raise ValueError(f"random-move probability must lie in [0, 1], got {self.u}")

    @classmethod
    def from_scoring(cls, scoring: str, p: float = 0.0, u: float = 0.0) -> "DeepHubConfig":
        try:
            inverse, log_scaling = SCORING_MODES[scoring]
        except KeyError:
            raise ValueError(f"unknown scoring {scoring!r}; choose from {sorted(SCORING_MODES)}") from None
        return cls(p=p, u=u, inverse=inverse, log_scaling=log_scaling)

    @property
    def scoring(self) -> str:
        for name, flags in SCORING_MODES.items():
            if flags == (self.inverse, self.log_scaling):
                return name
        raise AssertionError("unreachable")


Strategy = Union[Uniform, Node2Vec, DeepHubConfig]


@dataclass(frozen=True)
class SamplingPlan:
    num_walks_per_node: int = 10
    walk_length: int = 32
    strategy: Strategy = field(default_factory=Uniform)
    seed: int = 0

    def __post_init__(self):
        if self.num_walks_per_node < 1:
            raise ValueError("num_walks_per_node must be >= 1")
        if self.walk_length < 1:
            raise ValueError("walk_length must be >= 1")


@dataclass
class WalkCorpus:
    walks: list[list[int]] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.walks)

    def __iter__(self) -> Iterator[list[int]]:
        return iter(self.walks)

    def __getitem__(self, i):
        return self.walks[i]

    @property
    def num_tokens(self) -> int:
        return sum(len(w) for w in self.walks)

    def nodes(self) -> set[int]:
        return {n for w in self.walks for n in w}

    def dump(self, path, labels=None) -> None:
        """One walk per line, space separated (original labels if given)."""
        with open(path, "w", encoding="utf-8") as fh:
            for walk in self.walks:
                fh.write(" ".join(str(labels[n] if labels is not None else n) for n in walk))
                fh.write("\n")


def transition_distribution(
    snapshot: Snapshot, current: int, inverse: bool = False, log_scaling: bool = False
) -> np.ndarray:
    """Degree-based probabilities over ``snapshot.neighbors(current)``.

    Scores are ``1 + max_deg - deg`` in inverse mode and ``1 + deg``
    otherwise, optionally passed through ``ln(1 + score)``.
    """
    nbrs = snapshot.neighbors(current)
    if not nbrs:
        raise DeadEnd(f"dead end at node {current}")
    deg = np.array([len(snapshot.adjacency[n]) for n in nbrs], dtype=np.float64)
    scores = 1.0 + deg.max() - deg if inverse else 1.0 + deg
    if log_scaling:
        scores = np.log1p(scores)
    return scores / scores.sum()


def _pick(nbrs: tuple[int, ...], cdf: np.ndarray, r):
    idx = np.searchsorted(cdf, r * cdf[-1], side="right")
    idx = np.minimum(idx, len(nbrs) - 1)
    if np.ndim(idx) == 0:
        return nbrs[int(idx)]
    return np.asarray(nbrs)[idx]


def _uniform_pick(nbrs, rng, size):
    idx = rng.integers(len(nbrs), size=size)
    if size is None:
        return nbrs[int(idx)]
    return np.asarray(nbrs)[idx]


def next_node_uniform(ctx: WalkContext, snapshot: Snapshot, rng: np.random.Generator, size=None):
    nbrs = snapshot.neighbors(ctx.current_node)
    if not nbrs:
        raise DeadEnd(f"dead end at node {ctx.current_node}")
    return _uniform_pick(nbrs, rng, size)


def _node2vec_weights(snapshot: Snapshot, prev: int, nbrs, p: float, q: float) -> np.ndarray:
    w = np.empty(len(nbrs))
    for i, x in enumerate(nbrs):
        if x == prev:
            w[i] = 1.0 / p
        elif snapshot.has_edge(x, prev):
            w[i] = 1.0
        else:
            w[i] = 1.0 / q
    return w


def next_node_node2vec(
    ctx: WalkContext, snapshot: Snapshot, p: float, q: float, rng: np.random.Generator, size=None
):
    """Second-order node2vec step; the first step of a walk is uniform.

    With ``size`` set, returns an array of that many independent draws.
    """
    nbrs = snapshot.neighbors(ctx.current_node)
    if not nbrs:
        raise DeadEnd(f"dead end at node {ctx.current_node}")
    if ctx.prev_node is None:
        return _uniform_pick(nbrs, rng, size)
    cdf = np.cumsum(_node2vec_weights(snapshot, ctx.prev_node, nbrs, p, q))
    return _pick(nbrs, cdf, rng.random(size))


def next_node_deephub(
    ctx: WalkContext,
    snapshot: Snapshot,
    cfg: DeepHubConfig,
    rng: np.random.Generator,
    size=None,
    _cdf: np.ndarray | None = None,
):
    """DeepHub step: backtrack with prob. ``p``, else uniform move with
    prob. ``u``, else sample from :func:`transition_distribution`.

    The backtrack test is skipped when there is no previous node.  With
    ``size`` set, returns an array of that many independent draws.
    """
    nbrs = snapshot.neighbors(ctx.current_node)
    if not nbrs:
        raise DeadEnd(f"dead end at node {ctx.current_node}")
    if _cdf is None:
        _cdf = np.cumsum(transition_distribution(snapshot, ctx.current_node, cfg.inverse, cfg.log_scaling))

    if size is None:
        if ctx.prev_node is not None and rng.random() < cfg.p:
            return ctx.prev_node
        if rng.random() < cfg.u:
            return _uniform_pick(nbrs, rng, None)
        return _pick(nbrs, _cdf, rng.random())

    out = _pick(nbrs, _cdf, rng.random(size))
    uniform = rng.random(size) < cfg.u
    out[uniform] = _uniform_pick(nbrs, rng, int(uniform.sum()))
    if ctx.prev_node is not None:
        back = rng.random(size) < cfg.p
        out[back] = ctx.prev_node
    return out


def walk_rng(seed: int, snapshot_index: int, start: int, replica: int) -> np.random.Generator:
    return np.random.default_rng([seed, snapshot_index, start, replica])


def _walk(snapshot: Snapshot, start: int, length: int, strategy: Strategy, rng, cdf_cache: dict) -> list[int]:
    walk = [start]
    prev = None
    cur = start
    while len(walk) < length:
        nbrs = snapshot.adjacency[cur]
        if not nbrs:
            break
        ctx = WalkContext(start, cur, prev)
        if isinstance(strategy, DeepHubConfig):
            cdf = cdf_cache.get(cur)
            if cdf is None:
                cdf = cdf_cache[cur] = np.cumsum(
                    transition_distribution(snapshot, cur, strategy.inverse, strategy.log_scaling)
                )
            nxt = next_node_deephub(ctx, snapshot, strategy, rng, _cdf=cdf)
        elif isinstance(strategy, Node2Vec):
            nxt = next_node_node2vec(ctx, snapshot, strategy.p, strategy.q, rng)
        else:
            nxt = next_node_uniform(ctx, snapshot, rng)
        prev, cur = cur, int(nxt)
        walk.append(cur)
    return walk


def sample_walks(snapshot: Snapshot, start_nodes: Iterable[int], plan: SamplingPlan) -> WalkCorpus:
    """``plan.num_walks_per_node`` walks from every start node.

    Walks are ordered by (start node, replica index).
    """
    starts = sorted(set(start_nodes))
    missing = [v for v in starts if v not in snapshot.adjacency]
    if missing:
        raise KeyError(f"start nodes not in snapshot {snapshot.index}: {missing[:10]}")
    cdf_cache: dict = {}
    walks = []
    for v in starts:
        for r in range(plan.num_walks_per_node):
            rng = walk_rng(plan.seed, snapshot.index, v, r)
            walks.append(_walk(snapshot, v, plan.walk_length, plan.strategy, rng, cdf_cache))
    return WalkCorpus(walks)
