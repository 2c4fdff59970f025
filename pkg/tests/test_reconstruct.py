import csv
import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from deephub.reconstruct import evaluate_sequence, reconstruct_graph, score_reconstruction, write_metrics_csv
from deephub.temporal_graph import Snapshot, SnapshotSequence


def oracle_reconstruct(embedding, budget):
    """Exhaustive sort of all pairs by exact squared distance, then by pair."""
    def sqdist(u, v):
        return sum((Fraction(float(x)) - Fraction(float(y))) ** 2 for x, y in zip(embedding[u], embedding[v]))

    pairs = sorted(itertools.combinations(sorted(embedding), 2), key=lambda e: (sqdist(*e), e))
    return set(pairs[:budget])


def test_unique_nearest_pair():
    emb = {0: np.array([0.0]), 1: np.array([1.0]), 2: np.array([5.0])}
    assert reconstruct_graph(emb, 1) == {(0, 1)}


def test_equidistant_points():
    h = np.sqrt(3) / 2
    emb = {0: np.array([0.0, 0.0]), 1: np.array([1.0, 0.0]), 2: np.array([0.5, h])}
    assert reconstruct_graph(emb, 3) == {(0, 1), (0, 2), (1, 2)}


def test_tie_at_cutoff_is_lexicographic():
    # distances: 01=1, 03=2, 12=2, 02=3, 13=3, 23=5 -> second slot tied between (0,3) and (1,2)
    emb = {0: np.array([0.0]), 1: np.array([1.0]), 2: np.array([3.0]), 3: np.array([-2.0])}
    assert reconstruct_graph(emb, 2) == {(0, 1), (0, 3)}
    assert reconstruct_graph(emb, 2) == oracle_reconstruct(emb, 2)


def test_reconstruct_errors():
    with pytest.raises(ValueError):
        reconstruct_graph({0: np.zeros(2)}, 0)
    with pytest.raises(ValueError):
        reconstruct_graph({0: np.zeros(2), 1: np.ones(2)}, 2)


def test_path_example(path3):
    metrics, micro, macro = score_reconstruction(path3, {(0, 1), (0, 2)})
    by_node = {m.node: m for m in metrics}
    a, b, c = by_node[0], by_node[1], by_node[2]
    assert (a.correct, a.recon_degree, a.orig_degree) == (1, 2, 1)
    assert (a.precision, a.recall) == (0.5, 1.0)
    assert a.f1 == pytest.approx(2 / 3, abs=1e-12)
    assert (b.correct, b.recon_degree, b.orig_degree) == (1, 1, 2)
    assert (b.precision, b.recall) == (1.0, 0.5)
    assert b.f1 == pytest.approx(2 / 3, abs=1e-12)
    assert (c.correct, c.precision, c.recall, c.f1) == (0, 0.0, 0.0, 0.0)
    assert (micro.precision, micro.recall, micro.f1) == (0.5, 0.5, 0.5)
    assert macro.f1 == pytest.approx(4 / 9, abs=1e-12)


def test_perfect_reconstruction(star):
    metrics, micro, macro = score_reconstruction(star, set(star.edges))
    assert all((m.precision, m.recall, m.f1) == (1.0, 1.0, 1.0) for m in metrics)
    assert micro.f1 == 1.0 and macro.f1 == 1.0


def test_total_miss(star):
    metrics, micro, macro = score_reconstruction(star, {(1, 2), (3, 4)})
    assert all((m.precision, m.recall, m.f1) == (0.0, 0.0, 0.0) for m in metrics)
    assert micro.f1 == 0.0 and macro.f1 == 0.0


@st.composite
def graph_and_embedding(draw):
    n = draw(st.integers(3, 12))
    all_pairs = list(itertools.combinations(range(n), 2))
    edges = draw(st.lists(st.sampled_from(all_pairs), min_size=1, max_size=len(all_pairs), unique=True))
    dim = draw(st.integers(1, 4))
    coords = draw(st.lists(st.integers(-6, 6), min_size=n * dim, max_size=n * dim))
    snap = Snapshot.from_edges(1, edges)
    X = np.array(coords, dtype=float).reshape(n, dim)
    return snap, {v: X[v] for v in snap.nodes}


@given(graph_and_embedding())
@settings(max_examples=80, deadline=None)
def test_reconstruction_invariants(case):
    snap, emb = case
    budget = min(snap.num_edges, len(emb) * (len(emb) - 1) // 2)
    if len(emb) < 2:
        return
    recon = reconstruct_graph(emb, budget)
    assert len(recon) == budget
    assert recon == oracle_reconstruct(emb, budget)
    metrics, micro, _ = score_reconstruction(snap, recon)
    assert sum(m.correct for m in metrics) == 2 * len(recon & snap.edges)
    assert sum(m.recon_degree for m in metrics) == 2 * budget
    for m in metrics:
        assert 0 <= m.precision <= 1 and 0 <= m.recall <= 1 and 0 <= m.f1 <= 1
    if budget == snap.num_edges:
        assert micro.precision == micro.recall


@given(graph_and_embedding(), st.integers(-5, 5), st.data())
@settings(max_examples=50, deadline=None)
def test_isometry_invariance(case, shift, data):
    # translations, axis permutations and reflections are exact on integer coordinates
    _, emb = case
    if len(emb) < 2:
        return
    dim = len(next(iter(emb.values())))
    perm = data.draw(st.permutations(range(dim)))
    signs = np.array(data.draw(st.lists(st.sampled_from([-1.0, 1.0]), min_size=dim, max_size=dim)))
    moved = {v: signs * x[list(perm)] + shift for v, x in emb.items()}
    budget = len(emb) - 1
    assert reconstruct_graph(moved, budget) == reconstruct_graph(emb, budget)


def test_random_embeddings_match_oracle():
    rng = np.random.default_rng(0)
    for _ in range(20):
        n = int(rng.integers(2, 31))
        emb = {int(v): rng.normal(size=4) for v in rng.choice(100, size=n, replace=False)}
        budget = int(rng.integers(1, n * (n - 1) // 2 + 1))
        assert reconstruct_graph(emb, budget) == oracle_reconstruct(emb, budget)


def test_evaluate_sequence_restricts_to_snapshot_nodes(path3, triangle):
    seq = SnapshotSequence((path3, Snapshot.from_edges(2, triangle.edges)))
    # node 7 is in the vocabulary but absent from both snapshots
    vectors = {0: np.array([0.0]), 1: np.array([1.0]), 2: np.array([2.0]), 7: np.array([0.5])}
    results, last_f1 = evaluate_sequence([(1, vectors), (2, vectors)], seq)
    assert [r.reconstructed_edges for r in results] == [2, 3]
    assert results[0].micro.f1 == 1.0
    assert last_f1 == results[1].micro.f1 == 1.0
    assert {m.node for m in results[0].nodes} == {0, 1, 2}
    with pytest.raises(ValueError):
        evaluate_sequence([(1, vectors)], seq)


def test_metrics_csv(tmp_path, path3):
    seq = SnapshotSequence((path3,))
    emb = {0: np.array([0.0]), 1: np.array([1.0]), 2: np.array([0.1])}
    results, _ = evaluate_sequence([(1, emb)], seq)
    out = tmp_path / "m.csv"
    write_metrics_csv(results, out, labels=[10, 20, 30])
    rows = list(csv.DictReader(out.open()))
    assert [r["node"] for r in rows] == ["10", "20", "30", "micro", "macro"]
    assert rows[3]["f1"] == f"{results[0].micro.f1:.6f}"
