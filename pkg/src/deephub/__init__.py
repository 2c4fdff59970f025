"""Dynamic graph embedding with hub-aware random walks.

Submodules: :mod:`~deephub.temporal_graph` (edge streams and snapshots),
:mod:`~deephub.sampler` (random walks), :mod:`~deephub.trainer`
(incremental skip-gram), :mod:`~deephub.reconstruct` (graph reconstruction
scores), :mod:`~deephub.stats` (hubs, Spearman, Mann-Whitney U) and
:mod:`~deephub.experiment` (grid search bundles).
"""

from .reconstruct import evaluate_sequence, reconstruct_graph, score_reconstruction
from .sampler import DeepHubConfig, Node2Vec, SamplingPlan, Uniform, sample_walks, transition_distribution
from .stats import hub_partition, mann_whitney_u, spearman
from .temporal_graph import Snapshot, SnapshotSequence, bin_snapshots, delta_nodes, parse_edge_stream, read_edge_stream
from .trainer import TrainerConfig, embed_dynamic, extract_embedding, train_model, update_model

__version__ = "0.1.0"
