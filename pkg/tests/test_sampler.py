import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.stats import chisquare

from deephub.sampler import (
    DeadEnd,
    DeepHubConfig,
    Node2Vec,
    SamplingPlan,
    Uniform,
    WalkContext,
    next_node_deephub,
    next_node_node2vec,
    next_node_uniform,
    sample_walks,
    transition_distribution,
)
from deephub.temporal_graph import Snapshot

from conftest import clique, star_of_degrees

N_DRAWS = 100_000


def freqs(draws, nbrs):
    draws = np.asarray(draws)
    return np.array([(draws == n).mean() for n in nbrs])


def test_transition_examples():
    snap = star_of_degrees([1, 3])
    np.testing.assert_allclose(transition_distribution(snap, 0, inverse=True), [0.75, 0.25], atol=1e-12)
    np.testing.assert_allclose(transition_distribution(snap, 0), [1 / 3, 2 / 3], atol=1e-12)
    for inv in (False, True):
        for log in (False, True):
            np.testing.assert_allclose(
                transition_distribution(star_of_degrees([1, 1]), 0, inv, log), [0.5, 0.5], atol=1e-12
            )


def test_transition_log_scaling_uses_natural_log():
    snap = star_of_degrees([1, 3])
    # normal scores 2, 4 -> ln 3, ln 5
    expected = np.log([3.0, 5.0]) / np.log(15.0)
    np.testing.assert_allclose(transition_distribution(snap, 0, log_scaling=True), expected, atol=1e-12)


def test_transition_dead_end():
    snap = Snapshot(1, {0: ()})
    with pytest.raises(DeadEnd):
        transition_distribution(snap, 0)


degree_lists = st.lists(st.integers(1, 12), min_size=1, max_size=8)


@given(degree_lists, st.booleans(), st.booleans())
@settings(max_examples=80, deadline=None)
def test_transition_properties(degrees, inverse, log_scaling):
    snap = star_of_degrees(degrees)
    probs = transition_distribution(snap, 0, inverse, log_scaling)
    assert abs(probs.sum() - 1) < 1e-12
    assert (probs > 0).all()
    deg = [snap.degree(n) for n in snap.neighbors(0)]
    for i in range(len(deg)):
        for j in range(len(deg)):
            if deg[i] < deg[j]:
                if inverse:
                    assert probs[i] >= probs[j]
                else:
                    assert probs[i] <= probs[j]


@given(st.lists(st.integers(1, 40), min_size=2, max_size=8, unique=True), st.booleans())
@settings(max_examples=60, deadline=None)
def test_log_scaling_flattens(degrees, inverse):
    snap = star_of_degrees(degrees)
    plain = transition_distribution(snap, 0, inverse, False)
    logged = transition_distribution(snap, 0, inverse, True)
    assert logged.max() / logged.min() <= plain.max() / plain.min() + 1e-12


def test_deephub_forced_backtrack(triangle):
    rng = np.random.default_rng(0)
    cfg = DeepHubConfig(p=1.0)
    ctx = WalkContext(0, 1, prev_node=0)
    assert all(next_node_deephub(ctx, triangle, cfg, rng) == 0 for _ in range(200))
    assert (next_node_deephub(ctx, triangle, cfg, rng, size=1000) == 0).all()


def test_deephub_forced_uniform(triangle):
    rng = np.random.default_rng(1)
    draws = next_node_deephub(WalkContext(0, 0), triangle, DeepHubConfig(p=0, u=1), rng, size=N_DRAWS)
    np.testing.assert_allclose(freqs(draws, [1, 2]), [0.5, 0.5], atol=0.01)


def test_deephub_degree_biased_frequencies():
    snap = star_of_degrees([1, 3])
    rng = np.random.default_rng(2)
    cfg = DeepHubConfig(inverse=True)
    draws = next_node_deephub(WalkContext(0, 0), snap, cfg, rng, size=N_DRAWS)
    f = freqs(draws, snap.neighbors(0))
    np.testing.assert_allclose(f, [0.75, 0.25], atol=0.01)
    expected = transition_distribution(snap, 0, inverse=True) * N_DRAWS
    assert chisquare(f * N_DRAWS, expected).pvalue > 0.001


def test_deephub_scalar_path_matches_distribution():
    snap = star_of_degrees([1, 2, 5])
    rng = np.random.default_rng(3)
    cfg = DeepHubConfig(inverse=True, log_scaling=True)
    n = 20_000
    draws = [next_node_deephub(WalkContext(0, 0, None), snap, cfg, rng) for _ in range(n)]
    f = freqs(draws, snap.neighbors(0)) * n
    assert chisquare(f, transition_distribution(snap, 0, True, True) * n).pvalue > 0.001


def test_deephub_mixture_with_prev():
    # backtrack to 1 w.p. p, else uniform w.p. u, else degree-scored
    snap = star_of_degrees([1, 3, 2])
    p, u = 0.3, 0.2
    nbrs = snap.neighbors(0)
    dist = transition_distribution(snap, 0)
    expected = (1 - p) * (1 - u) * dist + (1 - p) * u / len(nbrs)
    expected[nbrs.index(1)] += p
    rng = np.random.default_rng(4)
    draws = next_node_deephub(WalkContext(1, 0, prev_node=1), snap, DeepHubConfig(p=p, u=u), rng, size=N_DRAWS)
    assert chisquare(freqs(draws, nbrs) * N_DRAWS, expected * N_DRAWS).pvalue > 0.001


def test_deephub_first_step_skips_backtrack(triangle):
    rng = np.random.default_rng(5)
    draws = next_node_deephub(WalkContext(0, 0, None), triangle, DeepHubConfig(p=1.0, u=1.0), rng, size=10_000)
    assert set(np.unique(draws)) == {1, 2}


def test_backtrack_rate_matches_p():
    # on a long path interior node, backtracking is the only way to return to prev
    snap = Snapshot.from_edges(1, [(0, 1), (1, 2)])
    p = 0.35
    rng = np.random.default_rng(6)
    draws = next_node_deephub(WalkContext(0, 1, prev_node=0), snap, DeepHubConfig(p=p, u=0, inverse=True), rng, size=N_DRAWS)
    # non-backtrack moves hit 0 and 2 equally (both have degree 1)
    backtrack_rate = (draws == 0).mean() - (draws == 2).mean()
    assert abs(backtrack_rate - p) < 0.01


def test_deephub_config_validation():
    with pytest.raises(ValueError):
        DeepHubConfig(p=1.5)
    with pytest.raises(ValueError):
        DeepHubConfig(u=-0.1)
    assert DeepHubConfig.from_scoring("inverse-log").scoring == "inverse-log"
    with pytest.raises(ValueError):
        DeepHubConfig.from_scoring("bogus")


def test_node2vec_degenerates_to_uniform():
    snap = clique([0, 1, 2, 3])
    rng = np.random.default_rng(7)
    draws = next_node_node2vec(WalkContext(0, 1, prev_node=0), snap, 1.0, 1.0, rng, size=N_DRAWS)
    np.testing.assert_allclose(freqs(draws, [0, 2, 3]), [1 / 3] * 3, atol=0.01)


def test_node2vec_path_weights(path3):
    rng = np.random.default_rng(8)
    draws = next_node_node2vec(WalkContext(0, 1, prev_node=0), path3, 0.25, 4.0, rng, size=N_DRAWS)
    # weights {a: 1/0.25, c: 1/4} -> {16/17, 1/17}
    np.testing.assert_allclose(freqs(draws, [0, 2]), [16 / 17, 1 / 17], atol=0.01)


def test_node2vec_distance_one_weight():
    # prev=0, current=1; 2 is adjacent to 0 (weight 1), 3 is not (weight 1/q)
    snap = Snapshot.from_edges(1, [(0, 1), (1, 2), (0, 2), (1, 3)])
    p, q = 2.0, 0.5
    w = np.array([1 / p, 1.0, 1 / q])
    rng = np.random.default_rng(9)
    draws = next_node_node2vec(WalkContext(0, 1, prev_node=0), snap, p, q, rng, size=N_DRAWS)
    f = freqs(draws, [0, 2, 3]) * N_DRAWS
    assert chisquare(f, w / w.sum() * N_DRAWS).pvalue > 0.001


def test_node2vec_first_step_uniform(path3):
    rng = np.random.default_rng(10)
    draws = next_node_node2vec(WalkContext(1, 1), path3, 0.25, 4.0, rng, size=N_DRAWS)
    np.testing.assert_allclose(freqs(draws, [0, 2]), [0.5, 0.5], atol=0.01)


def test_uniform_step(triangle):
    rng = np.random.default_rng(11)
    draws = next_node_uniform(WalkContext(0, 0), triangle, rng, size=N_DRAWS)
    np.testing.assert_allclose(freqs(draws, [1, 2]), [0.5, 0.5], atol=0.01)


def test_default_plan():
    plan = SamplingPlan()
    assert (plan.num_walks_per_node, plan.walk_length) == (10, 32)
    with pytest.raises(ValueError):
        SamplingPlan(num_walks_per_node=0)


STRATEGIES = [Uniform(), Node2Vec(0.5, 2.0), DeepHubConfig.from_scoring("inverse-log", 0.25, 0.25)]


@pytest.mark.parametrize("strategy", STRATEGIES)
def test_k3_corpus_shape(triangle, strategy):
    corpus = sample_walks(triangle, triangle.nodes, SamplingPlan(10, 32, strategy, seed=1))
    assert len(corpus) == 30
    assert all(len(w) == 32 for w in corpus)
    assert [w[0] for w in corpus] == [0] * 10 + [1] * 10 + [2] * 10


@pytest.mark.parametrize("strategy", STRATEGIES)
def test_k2_forced_alternation(strategy):
    snap = Snapshot.from_edges(1, [(0, 1)])
    corpus = sample_walks(snap, {0}, SamplingPlan(1, 4, strategy, seed=3))
    assert corpus.walks == [[0, 1, 0, 1]]


def test_empty_start_set(triangle):
    assert len(sample_walks(triangle, set(), SamplingPlan())) == 0


def test_unknown_start_node(triangle):
    with pytest.raises(KeyError):
        sample_walks(triangle, {7}, SamplingPlan())


@pytest.mark.parametrize("strategy", STRATEGIES)
def test_walks_follow_edges_and_are_reproducible(two_cliques, strategy):
    snap, _, _ = two_cliques
    plan = SamplingPlan(3, 20, strategy, seed=42)
    a = sample_walks(snap, snap.nodes, plan)
    b = sample_walks(snap, snap.nodes, plan)
    assert a.walks == b.walks
    for walk in a:
        assert 1 <= len(walk) <= 20
        for u, v in zip(walk, walk[1:]):
            assert snap.has_edge(u, v)
    c = sample_walks(snap, snap.nodes, SamplingPlan(3, 20, strategy, seed=43))
    assert c.walks != a.walks


def test_walks_independent_of_other_start_nodes(two_cliques):
    snap, left, _ = two_cliques
    plan = SamplingPlan(4, 16, DeepHubConfig(p=0.2, u=0.3, inverse=True), seed=5)
    full = sample_walks(snap, snap.nodes, plan)
    part = sample_walks(snap, {3}, plan)
    assert part.walks == [w for w in full if w[0] == 3]


def test_corpus_dump(tmp_path, path3):
    corpus = sample_walks(path3, {0}, SamplingPlan(2, 3, Uniform(), seed=0))
    out = tmp_path / "walks.txt"
    corpus.dump(out, labels=[10, 11, 12])
    lines = out.read_text().splitlines()
    assert len(lines) == 2
    assert all(line.split()[0] == "10" for line in lines)
