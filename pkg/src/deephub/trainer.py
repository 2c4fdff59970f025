"""Incremental skip-gram training over walk corpora (dynnode2vec scheme).

The first snapshot is embedded from walks started at every node; each later
snapshot only contributes walks started at its delta nodes, which update the
running model in place of retraining.
"""

from __future__ import annotations

import copy
import os
from dataclasses import dataclass, field
from typing import Iterable, Iterator

import numpy as np

from . import _sgns
from .sampler import SamplingPlan, WalkCorpus, sample_walks
from .temporal_graph import SnapshotSequence, delta_nodes

__all__ = [
    "TrainerConfig",
    "EmbeddingModel",
    "EmbeddingSequence",
    "train_model",
    "update_model",
    "extract_embedding",
    "embed_dynamic",
    "sgns_update",
    "write_word2vec",
    "read_word2vec",
]

UNIGRAM_POWER = 0.75


@dataclass(frozen=True)
class TrainerConfig:
    dimension: int = 128
    window: int = 5
    negative_samples: int = 5
    epochs: int = 5
    initial_learning_rate: float = 0.025
    min_learning_rate: float = 0.0001
    seed: int = 0
    workers: int = 1  # >1 selects lock-free parallel training (not reproducible)

    def __post_init__(self):
        for name in ("dimension", "window", "negative_samples", "workers"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")
        if self.epochs < 0:
            raise ValueError("epochs must be >= 0")
        if not self.initial_learning_rate > 0 or self.min_learning_rate < 0:
            raise ValueError("learning rates must be positive (min may be 0)")


@dataclass
class EmbeddingModel:
    config: TrainerConfig
    vocabulary: dict[int, int]
    input_vectors: np.ndarray
    output_vectors: np.ndarray
    counts: np.ndarray
    rng: np.random.Generator = field(repr=False)

    def __len__(self) -> int:
        return len(self.vocabulary)

    @property
    def nodes(self) -> list[int]:
        return list(self.vocabulary)

    @property
    def negative_cdf(self) -> np.ndarray:
        """Cumulative unigram^0.75 weights, indexed like the vocabulary."""
        return np.cumsum(self.counts ** UNIGRAM_POWER)

    def vector(self, node: int) -> np.ndarray:
        return self.input_vectors[self.vocabulary[node]]

    def copy(self) -> "EmbeddingModel":
        return EmbeddingModel(
            self.config,
            dict(self.vocabulary),
            self.input_vectors.copy(),
            self.output_vectors.copy(),
            self.counts.copy(),
            copy.deepcopy(self.rng),
        )

    def _grow(self, corpus: WalkCorpus) -> None:
        new = sorted(corpus.nodes() - self.vocabulary.keys())
        if new:
            dim = self.config.dimension
            start = len(self.vocabulary)
            for i, node in enumerate(new):
                self.vocabulary[node] = start + i
            fresh = (self.rng.random((len(new), dim)) - 0.5) / dim
            self.input_vectors = np.vstack([self.input_vectors, fresh])
            self.output_vectors = np.vstack([self.output_vectors, np.zeros((len(new), dim))])
            self.counts = np.concatenate([self.counts, np.zeros(len(new))])
        idx = np.fromiter((self.vocabulary[n] for w in corpus for n in w), dtype=np.int64)
        self.counts += np.bincount(idx, minlength=len(self.counts))

    def _train(self, corpus: WalkCorpus) -> None:
        cfg = self.config
        tokens = np.fromiter(
            (self.vocabulary[n] for w in corpus for n in w), dtype=np.int64, count=corpus.num_tokens
        )
        offsets = np.zeros(len(corpus) + 1, dtype=np.int64)
        np.cumsum([len(w) for w in corpus], out=offsets[1:])
        neg_cdf = self.negative_cdf
        seed = self.rng.integers(0, 2**63, dtype=np.uint64)
        args = (
            tokens,
            offsets,
            self.input_vectors,
            self.output_vectors,
            neg_cdf,
            cfg.window,
            cfg.negative_samples,
            cfg.epochs,
            cfg.initial_learning_rate,
            cfg.min_learning_rate,
        )
        if cfg.workers > 1:
            _sgns.train_parallel(*args, seed)
        else:
            _sgns.train_serial(*args, np.array([seed], dtype=np.uint64))


def _empty_model(cfg: TrainerConfig) -> EmbeddingModel:
    return EmbeddingModel(
        cfg,
        {},
        np.empty((0, cfg.dimension)),
        np.empty((0, cfg.dimension)),
        np.empty(0),
        np.random.default_rng(cfg.seed),
    )


def train_model(corpus: WalkCorpus, cfg: TrainerConfig) -> EmbeddingModel:
    """Train a fresh SGNS model on ``corpus``."""
    if not len(corpus):
        raise ValueError("cannot train on an empty corpus")
    model = _empty_model(cfg)
    model._grow(corpus)
    model._train(corpus)
    return model


def update_model(model: EmbeddingModel, corpus: WalkCorpus) -> EmbeddingModel:
    """Continue training ``model`` on ``corpus``, adding unseen nodes.

    Returns a new model; the argument is not modified.  The learning-rate
    schedule restarts from its initial value.
    """
    model = model.copy()
    if not len(corpus):
        return model
    model._grow(corpus)
    model._train(corpus)
    return model


def extract_embedding(model: EmbeddingModel, nodes: Iterable[int]) -> dict[int, np.ndarray]:
    out = {}
    for node in sorted(nodes):
        try:
            out[node] = model.input_vectors[model.vocabulary[node]].copy()
        except KeyError:
            raise KeyError(f"node {node} is missing from the model vocabulary") from None
    return out


@dataclass
class EmbeddingSequence:
    per_snapshot: list[tuple[int, dict[int, np.ndarray]]] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.per_snapshot)

    def __iter__(self) -> Iterator[tuple[int, dict[int, np.ndarray]]]:
        return iter(self.per_snapshot)

    def __getitem__(self, i):
        return self.per_snapshot[i]

    def append(self, index: int, embedding: dict[int, np.ndarray]) -> None:
        self.per_snapshot.append((index, embedding))


def embed_dynamic(
    seq: SnapshotSequence, plan: SamplingPlan, cfg: TrainerConfig, return_model: bool = False
):
    """Embed every snapshot of ``seq``; one embedding per snapshot."""
    first = seq[0]
    model = train_model(sample_walks(first, first.nodes, plan), cfg)
    result = EmbeddingSequence()
    result.append(first.index, extract_embedding(model, first.nodes))
    for prev, cur in zip(seq.snapshots, seq.snapshots[1:]):
        corpus = sample_walks(cur, delta_nodes(cur, prev), plan)
        model = update_model(model, corpus)
        result.append(cur.index, extract_embedding(model, cur.nodes))
    if return_model:
        return result, model
    return result


def sgns_update(
    input_vectors: np.ndarray,
    output_vectors: np.ndarray,
    center: int,
    context: int,
    negatives: Iterable[int],
    lr: float,
) -> None:
    """Apply a single SGNS step in place (row indices, not node ids)."""
    negatives = list(negatives)
    targets = np.array([context] + negatives, dtype=np.int64)
    labels = np.array([1.0] + [0.0] * len(negatives))
    _sgns.apply_update(
        input_vectors,
        output_vectors,
        center,
        targets,
        labels,
        len(targets),
        lr,
        np.empty(input_vectors.shape[1]),
        np.empty(len(targets)),
    )


def write_word2vec(embedding: dict[int, np.ndarray], path: str | os.PathLike, labels=None) -> None:
    """word2vec text format, 6 significant digits per component."""
    vectors = list(embedding.items())
    dim = len(vectors[0][1]) if vectors else 0
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{len(vectors)} {dim}\n")
        for node, vec in vectors:
            name = labels[node] if labels is not None else node
            fh.write(f"{name} " + " ".join(f"{x:.6g}" for x in vec) + "\n")


def read_word2vec(path: str | os.PathLike) -> dict[int, np.ndarray]:
    with open(path, encoding="utf-8") as fh:
        count, dim = (int(x) for x in fh.readline().split())
        out = {}
        for line in fh:
            fields = line.split()
            if not fields:
                continue
            if len(fields) != dim + 1:
                raise ValueError(f"{path}: expected {dim + 1} fields, got {len(fields)}")
            out[int(fields[0])] = np.array([float(x) for x in fields[1:]])
    if len(out) != count:
        raise ValueError(f"{path}: header says {count} vectors, found {len(out)}")
    return out
