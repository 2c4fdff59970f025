# How the walkers choose their next step

import numpy as np

from deephub.sampler import (
    DeepHubConfig,
    Node2Vec,
    SamplingPlan,
    WalkContext,
    next_node_deephub,
    sample_walks,
    transition_distribution,
)
from deephub.temporal_graph import Snapshot

# node 0 has three neighbours: a leaf (degree 1), a node of degree 3, a node of degree 6
pairs = [(0, 1), (0, 2), (0, 3), (2, 10), (2, 11), (3, 20), (3, 21), (3, 22), (3, 23), (3, 24)]
snap = Snapshot.from_edges(1, pairs)
print("neighbour degrees:", [snap.degree(v) for v in snap.neighbors(0)])

# four scoring modes; inverse favours low-degree neighbours, log flattens
for inverse in (False, True):
    for log in (False, True):
        probs = transition_distribution(snap, 0, inverse, log)
        print(f"inverse={inverse!s:5} log={log!s:5}", np.round(probs, 3))

# empirical frequencies agree with the table
rng = np.random.default_rng(0)
cfg = DeepHubConfig(inverse=True)
draws = next_node_deephub(WalkContext(0, 0), snap, cfg, rng, size=100_000)
print("sampled:", [round(float((draws == v).mean()), 3) for v in snap.neighbors(0)])

# backtracking and uniform moves mix in on top of the degree scores
cfg = DeepHubConfig(p=0.5, u=0.5, inverse=True)
draws = next_node_deephub(WalkContext(1, 0, prev_node=1), snap, cfg, rng, size=100_000)
print("with p=u=0.5, coming from node 1:", [round(float((draws == v).mean()), 3) for v in snap.neighbors(0)])

# a whole corpus: 10 walks of length 32 from every node
for strategy in (Node2Vec(0.5, 4), DeepHubConfig.from_scoring("inverse", 0.5, 0.5)):
    corpus = sample_walks(snap, snap.nodes, SamplingPlan(strategy=strategy, seed=1))
    visits = np.bincount(np.concatenate(corpus.walks), minlength=25)
    print(strategy.name, "visits to node 3 (the hub):", visits[3], "of", corpus.num_tokens)
