# Are hubs embedded better than everyone else?

from pathlib import Path

from deephub.experiment import load_sequence, run_once
from deephub.sampler import Node2Vec
from deephub.stats import degree_quality_correlation, hub_comparison, hub_partition
from deephub.trainer import TrainerConfig

DATA = Path(__file__).resolve().parents[1] / "tests" / "data" / "ia-hospital.edges"
seq = load_sequence(DATA, count=4)

# hubs: the fewest top-degree nodes that together hold more than half the degree
for snap in seq:
    hubs = hub_partition(snap).hubs
    print(f"snapshot {snap.index}: {len(hubs)} hubs of {snap.num_nodes} nodes")

_, results, _ = run_once(seq, Node2Vec(0.5, 4), TrainerConfig(dimension=25), seed=0)

print("Spearman(degree, metric):", {k: round(v, 3) for k, v in degree_quality_correlation(seq, results).items()})

pooled = hub_comparison(seq, results)["pooled"]
print(f"mean F1 hubs {pooled['f1_hubs']:.3f}, non-hubs {pooled['f1_non_hubs']:.3f}")
print(f"PS(hubs) {pooled['ps_hubs']:.3f}  PS(non-hubs) {pooled['ps_non_hubs']:.3f}  p = {pooled['p_value']:.2e}")
