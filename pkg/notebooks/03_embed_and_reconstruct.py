# Embedding the hospital network and rebuilding it from distances
#
# Each snapshot is reconstructed by linking its |E| closest node pairs in the
# embedding.  Micro scores pool all links; macro scores average per node.

from pathlib import Path

import numpy as np

from deephub.experiment import load_sequence, run_once
from deephub.sampler import DeepHubConfig, Node2Vec
from deephub.trainer import TrainerConfig

DATA = Path(__file__).resolve().parents[1] / "tests" / "data" / "ia-hospital.edges"
seq = load_sequence(DATA, count=4)

strategies = {
    "node2vec p=0.5 q=4": Node2Vec(0.5, 4),
    "deephub inverse p=u=0.5": DeepHubConfig.from_scoring("inverse", 0.5, 0.5),
}
cfg = TrainerConfig(dimension=25)

for name, strategy in strategies.items():
    scores = [run_once(seq, strategy, cfg, seed=s)[2] for s in range(3)]
    micro = np.mean([s.micro_f1 for s in scores])
    macro = np.mean([s.macro_f1 for s in scores])
    print(f"{name:26} last-snapshot micro F1 {micro:.3f}  macro F1 {macro:.3f}")

# per snapshot, for one run
emb, results, _ = run_once(seq, strategies["deephub inverse p=u=0.5"], cfg, seed=0)
for r in results:
    print(r.index, f"micro {r.micro.f1:.3f}", f"macro P {r.macro.precision:.3f} R {r.macro.recall:.3f}")
