"""Grid search over sampling strategies and trainer settings.

A *bundle* is the on-disk result of :func:`run_experiment`::

    manifest.json            dataset, binning, grid and run settings
    configs.csv              one row per configuration, mean scores
    runs.csv                 one row per (configuration, run)
    configs/<id>/config.json configuration and its run scores
    best/                    best configuration: per-node metrics, stats
                             report and the embeddings of its best run

Every file is written deterministically (sorted keys, fixed float
formatting, no timestamps) so identical inputs give identical bytes.
"""

from __future__ import annotations

import csv
import hashlib
import itertools
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, replace
from pathlib import Path
from typing import Sequence

import numpy as np

from .reconstruct import evaluate_sequence, write_metrics_csv
from .sampler import DeepHubConfig, Node2Vec, SamplingPlan, Uniform
from .stats import analysis_report
from .temporal_graph import SnapshotSequence, bin_snapshots, describe, read_edge_stream
from .trainer import TrainerConfig, embed_dynamic, write_word2vec

__all__ = [
    "DIMENSIONS",
    "NODE2VEC_PQ",
    "DEEPHUB_PU",
    "ExperimentSpec",
    "RunScore",
    "strategy_key",
    "derive_seed",
    "node2vec_grid",
    "deephub_grid",
    "load_sequence",
    "run_once",
    "run_experiment",
    "compare_scores",
    "compare_strategies",
]

DIMENSIONS = (10, 25, 50, 100, 200)
NODE2VEC_PQ = (0.25, 0.5, 1.0, 2.0, 4.0)
DEEPHUB_PU = (0.0, 0.15, 0.25, 0.5)


@dataclass(frozen=True)
class ExperimentSpec:
    dataset: str
    strategies: Sequence
    trainers: Sequence[TrainerConfig]
    out_dir: str
    count: int | None = None
    width: float | None = None
    runs_per_config: int = 10
    master_seed: int = 0
    num_walks: int = 10
    walk_length: int = 32
    threads: int = 1
    deterministic: bool = True

    def __post_init__(self):
        if (self.count is None) == (self.width is None):
            raise ValueError("give exactly one of count= or width= for snapshot binning")
        if not self.strategies or not self.trainers:
            raise ValueError("strategy and trainer grids must be non-empty")
        if self.runs_per_config < 1:
            raise ValueError("runs_per_config must be >= 1")
        if not Path(self.dataset).is_file():
            raise FileNotFoundError(f"dataset not readable: {self.dataset}")


@dataclass(frozen=True)
class RunScore:
    run: int
    seed: int
    micro_precision: float
    micro_recall: float
    micro_f1: float
    macro_precision: float
    macro_recall: float
    macro_f1: float


def strategy_key(strategy) -> str:
    if isinstance(strategy, Node2Vec):
        return f"node2vec_p{strategy.p:g}_q{strategy.q:g}"
    if isinstance(strategy, DeepHubConfig):
        return f"deephub_p{strategy.p:g}_u{strategy.u:g}_{strategy.scoring}"
    if isinstance(strategy, Uniform):
        return "uniform"
    raise TypeError(f"unknown strategy {strategy!r}")


def _trainer_key(cfg: TrainerConfig) -> str:
    return (
        f"d{cfg.dimension}_w{cfg.window}_n{cfg.negative_samples}_e{cfg.epochs}"
        f"_lr{cfg.initial_learning_rate:g}-{cfg.min_learning_rate:g}"
    )


def config_key(strategy, cfg: TrainerConfig) -> str:
    return f"{strategy_key(strategy)}__{_trainer_key(cfg)}"


def derive_seed(master_seed: int, key: str, run: int) -> int:
    """63-bit seed from the master seed, a configuration key and a run index.

    Keyed by configuration content rather than grid position, so reordering
    or extending a grid leaves existing configurations' runs unchanged.
    """
    h = hashlib.blake2b(digest_size=8)
    h.update(f"{master_seed}\x00{key}\x00{run}".encode())
    return int.from_bytes(h.digest(), "little") >> 1


def node2vec_grid(values=NODE2VEC_PQ) -> list[Node2Vec]:
    return [Node2Vec(p, q) for p, q in itertools.product(values, values)]


def deephub_grid(values=DEEPHUB_PU, scorings=("normal", "log", "inverse", "inverse-log")) -> list[DeepHubConfig]:
    return [DeepHubConfig.from_scoring(s, p, u) for s in scorings for p, u in itertools.product(values, values)]


def load_sequence(path, count=None, width=None) -> SnapshotSequence:
    return bin_snapshots(read_edge_stream(path), count=count, width=width)


def run_once(seq: SnapshotSequence, strategy, cfg: TrainerConfig, seed: int, num_walks=10, walk_length=32):
    """One embedding run; returns ``(embeddings, results, RunScore)``."""
    plan = SamplingPlan(num_walks, walk_length, strategy, seed)
    emb = embed_dynamic(seq, plan, replace(cfg, seed=seed))
    results, _ = evaluate_sequence(emb, seq)
    last = results[-1]
    score = RunScore(
        -1,
        seed,
        last.micro.precision,
        last.micro.recall,
        last.micro.f1,
        last.macro.precision,
        last.macro.recall,
        last.macro.f1,
    )
    return emb, results, score


def _job(args):
    seq, strategy, cfg, seed, run, num_walks, walk_length = args
    _, _, score = run_once(seq, strategy, cfg, seed, num_walks, walk_length)
    return replace(score, run=run)


def _fmt(x: float) -> str:
    return f"{x:.10f}"


def _write_json(path: Path, obj) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _strategy_dict(strategy) -> dict:
    d = {"strategy": strategy.name}
    if not isinstance(strategy, Uniform):
        d.update(asdict(strategy))
    if isinstance(strategy, DeepHubConfig):
        d["scoring"] = strategy.scoring
    return d


def _trainer_dict(cfg: TrainerConfig) -> dict:
    d = asdict(cfg)
    d.pop("seed")
    d.pop("workers")
    return d


def run_experiment(spec: ExperimentSpec) -> dict:
    """Run the full grid and write a bundle to ``spec.out_dir``.

    Returns the summary that is also stored as ``summary.json``.
    """
    seq = load_sequence(spec.dataset, spec.count, spec.width)
    out = Path(spec.out_dir)
    out.mkdir(parents=True, exist_ok=True)

    workers = 1 if spec.deterministic else max(1, spec.threads)
    configs = []
    for strategy, cfg in itertools.product(spec.strategies, spec.trainers):
        key = config_key(strategy, cfg)
        configs.append((key, strategy, replace(cfg, workers=workers)))
    keys = [k for k, _, _ in configs]
    if len(set(keys)) != len(keys):
        raise ValueError("grid contains duplicate configurations")

    jobs = [
        (seq, strategy, cfg, derive_seed(spec.master_seed, key, run), run, spec.num_walks, spec.walk_length)
        for key, strategy, cfg in configs
        for run in range(spec.runs_per_config)
    ]
    if spec.threads > 1 and spec.deterministic:
        with ProcessPoolExecutor(max_workers=spec.threads) as pool:
            scores = list(pool.map(_job, jobs, chunksize=1))
    else:
        scores = [_job(j) for j in jobs]

    per_config = {}
    it = iter(scores)
    for key, strategy, cfg in configs:
        per_config[key] = [next(it) for _ in range(spec.runs_per_config)]

    manifest = {
        "dataset": os.path.basename(spec.dataset),
        "dataset_sha256": hashlib.sha256(Path(spec.dataset).read_bytes()).hexdigest(),
        "binning": {"count": spec.count, "width": spec.width},
        "dataset_summary": describe(seq),
        "runs_per_config": spec.runs_per_config,
        "master_seed": spec.master_seed,
        "num_walks": spec.num_walks,
        "walk_length": spec.walk_length,
        "deterministic": spec.deterministic,
        "configurations": keys,
    }
    _write_json(out / "manifest.json", manifest)

    run_fields = [f for f in RunScore.__dataclass_fields__]
    rows = []
    with open(out / "runs.csv", "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["config"] + run_fields)
        for key, _, _ in configs:
            for s in per_config[key]:
                w.writerow([key] + [v if isinstance(v, int) else _fmt(v) for v in asdict(s).values()])

    for key, strategy, cfg in configs:
        runs = per_config[key]
        micro = [s.micro_f1 for s in runs]
        macro = [s.macro_f1 for s in runs]
        row = {
            "config": key,
            **_strategy_dict(strategy),
            **_trainer_dict(cfg),
            "mean_micro_f1": float(np.mean(micro)),
            "std_micro_f1": float(np.std(micro)),
            "mean_macro_f1": float(np.mean(macro)),
            "mean_micro_precision": float(np.mean([s.micro_precision for s in runs])),
            "mean_micro_recall": float(np.mean([s.micro_recall for s in runs])),
            "mean_macro_precision": float(np.mean([s.macro_precision for s in runs])),
            "mean_macro_recall": float(np.mean([s.macro_recall for s in runs])),
        }
        rows.append(row)
        cdir = out / "configs" / key
        cdir.mkdir(parents=True, exist_ok=True)
        _write_json(cdir / "config.json", {**row, "runs": [asdict(s) for s in runs]})

    columns = sorted({k for r in rows for k in r} - {"config"})
    with open(out / "configs.csv", "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["config"] + columns)
        for r in rows:
            w.writerow([r["config"]] + [_cell(r.get(c)) for c in columns])

    # first-listed configuration wins ties
    best_i = max(range(len(rows)), key=lambda i: (rows[i]["mean_micro_f1"], -i))
    best_key, best_strategy, best_cfg = configs[best_i]
    best_run = max(per_config[best_key], key=lambda s: (s.micro_f1, -s.run))
    emb, results, _ = run_once(seq, best_strategy, best_cfg, best_run.seed, spec.num_walks, spec.walk_length)

    best_dir = out / "best"
    (best_dir / "embeddings").mkdir(parents=True, exist_ok=True)
    write_metrics_csv(results, best_dir / "metrics.csv", seq.labels)
    report = analysis_report(seq, results)
    _write_json(best_dir / "analysis.json", _clean(report))
    for index, vectors in emb:
        write_word2vec(vectors, best_dir / "embeddings" / f"snapshot_{index:03d}.emb", seq.labels)

    summary = {
        "dataset": manifest["dataset"],
        "dataset_sha256": manifest["dataset_sha256"],
        "binning": manifest["binning"],
        "best_config": best_key,
        "best": rows[best_i],
        "best_run": asdict(best_run),
        "configurations": len(rows),
    }
    _write_json(out / "summary.json", _clean(summary))
    return summary


def _cell(v):
    if isinstance(v, float):
        return _fmt(v)
    return "" if v is None else v


def _clean(obj):
    """Round floats so JSON output does not depend on repr quirks."""
    if isinstance(obj, float):
        return float(_fmt(obj))
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return obj


def compare_scores(baseline: float, challenger: float) -> tuple[float, float]:
    """Absolute difference and relative improvement in percent."""
    if baseline == 0:
        raise ValueError("baseline F1 is zero; relative improvement undefined")
    diff = challenger - baseline
    return diff, 100.0 * diff / baseline


def compare_strategies(baseline_dir, challenger_dir, out_csv=None) -> list[dict]:
    """Table of baseline vs challenger best mean micro F1 for one dataset."""
    summaries = []
    for d in (baseline_dir, challenger_dir):
        with open(Path(d) / "summary.json", encoding="utf-8") as fh:
            summaries.append(json.load(fh))
    base, chal = summaries
    for field_ in ("dataset_sha256", "binning"):
        if base[field_] != chal[field_]:
            raise ValueError(f"bundles differ in {field_}: {base[field_]!r} vs {chal[field_]!r}")
    b = base["best"]["mean_micro_f1"]
    c = chal["best"]["mean_micro_f1"]
    diff, imp = compare_scores(b, c)
    rows = [
        {
            "dataset": base["dataset"],
            "baseline_config": base["best_config"],
            "challenger_config": chal["best_config"],
            "baseline_f1": b,
            "challenger_f1": c,
            "f1_diff": diff,
            "f1_imp_percent": imp,
        }
    ]
    if out_csv is not None:
        with open(out_csv, "w", newline="", encoding="utf-8") as fh:
            w = csv.DictWriter(fh, fieldnames=list(rows[0]), lineterminator="\n")
            w.writeheader()
            for r in rows:
                w.writerow({k: f"{v:.4f}" if isinstance(v, float) else v for k, v in r.items()})
    return rows
