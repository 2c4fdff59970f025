"""Command line entry point: ``deephub <command> ...``.

Commands: ingest, embed, tune, evaluate, analyze, compare.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import experiment
from .reconstruct import evaluate_sequence, write_metrics_csv
from .sampler import DeepHubConfig, Node2Vec, SamplingPlan, Uniform
from .stats import analysis_report
from .temporal_graph import describe, write_snapshots
from .trainer import EmbeddingSequence, TrainerConfig, embed_dynamic, read_word2vec, write_word2vec


def _add_dataset(p: argparse.ArgumentParser) -> None:
    p.add_argument("--dataset", required=True, help="temporal edge list: source target timestamp [weight]")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--snapshots", type=int, metavar="N", help="split the time range into N equal bins")
    g.add_argument("--width", type=float, metavar="SECONDS", help="fixed bin width in seconds")


def _add_sampling(p: argparse.ArgumentParser, grid: bool) -> None:
    nargs = "+" if grid else None
    p.add_argument("--strategy", choices=["uniform", "node2vec", "deephub"], default="node2vec")
    p.add_argument("--dim", type=int, nargs=nargs, default=None)
    p.add_argument("--p", type=float, nargs=nargs, default=None, help="node2vec return / DeepHub backtrack")
    p.add_argument("--q", type=float, nargs=nargs, default=None, help="node2vec in-out parameter")
    p.add_argument("--u", type=float, nargs=nargs, default=None, help="DeepHub random-move probability")
    p.add_argument(
        "--scoring", nargs=nargs, default=None, choices=["normal", "log", "inverse", "inverse-log"]
    )
    p.add_argument("--walks", type=int, default=10, help="walks per start node")
    p.add_argument("--walk-length", type=int, default=32)
    p.add_argument("--window", type=int, default=5)
    p.add_argument("--negative", type=int, default=5)
    p.add_argument("--epochs", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--deterministic", action="store_true")
    p.add_argument("--out", required=True, metavar="DIR")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="deephub", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="parse and bin a dataset, print summary statistics")
    _add_dataset(p)
    p.add_argument("--out", metavar="DIR", help="also dump one edge list per snapshot")

    p = sub.add_parser("embed", help="embed a dataset with one configuration")
    _add_dataset(p)
    _add_sampling(p, grid=False)

    p = sub.add_parser("tune", help="grid search; writes a result bundle")
    _add_dataset(p)
    _add_sampling(p, grid=True)
    p.add_argument("--runs", type=int, default=10, help="independent runs per configuration")

    for name, help_ in (("evaluate", "score embedding dumps by graph reconstruction"),
                        ("analyze", "degree correlations and hub/non-hub tests")):
        p = sub.add_parser(name, help=help_)
        _add_dataset(p)
        p.add_argument("--embeddings", required=True, metavar="DIR", help="snapshot_NNN.emb files")
        p.add_argument("--out", required=True, metavar="FILE")

    p = sub.add_parser("compare", help="compare two tune bundles")
    p.add_argument("--baseline", required=True, metavar="DIR")
    p.add_argument("--challenger", required=True, metavar="DIR")
    p.add_argument("--out", required=True, metavar="FILE")
    return parser


def _strategy(args):
    if args.strategy == "uniform":
        return Uniform()
    if args.strategy == "node2vec":
        return Node2Vec(1.0 if args.p is None else args.p, 1.0 if args.q is None else args.q)
    return DeepHubConfig.from_scoring(args.scoring or "normal", args.p or 0.0, args.u or 0.0)


def _strategy_grid(args):
    if args.strategy == "uniform":
        return [Uniform()]
    if args.strategy == "node2vec":
        return [Node2Vec(p, q) for p in args.p or experiment.NODE2VEC_PQ for q in args.q or experiment.NODE2VEC_PQ]
    scorings = args.scoring or ["normal", "log", "inverse", "inverse-log"]
    return [
        DeepHubConfig.from_scoring(s, p, u)
        for s in scorings
        for p in args.p or experiment.DEEPHUB_PU
        for u in args.u or experiment.DEEPHUB_PU
    ]


def _trainer(args, dim: int) -> TrainerConfig:
    return TrainerConfig(
        dimension=dim,
        window=args.window,
        negative_samples=args.negative,
        epochs=args.epochs,
        seed=args.seed,
        workers=1 if args.deterministic else max(1, args.threads),
    )


def _read_embeddings(directory, seq) -> EmbeddingSequence:
    dense = {label: i for i, label in enumerate(seq.labels)}
    out = EmbeddingSequence()
    for snap in seq:
        path = Path(directory) / f"snapshot_{snap.index:03d}.emb"
        if not path.is_file():
            raise FileNotFoundError(f"missing embedding file {path}")
        vectors = read_word2vec(path)
        out.append(snap.index, {dense[label]: v for label, v in vectors.items()})
    return out


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)

    if args.command == "compare":
        rows = experiment.compare_strategies(args.baseline, args.challenger, args.out)
        for r in rows:
            print(f"{r['dataset']}: {r['baseline_f1']:.4f} -> {r['challenger_f1']:.4f} "
                  f"({r['f1_diff']:+.4f}, {r['f1_imp_percent']:+.4f} %)")
        return 0

    try:
        seq = experiment.load_sequence(args.dataset, args.snapshots, args.width)
    except (OSError, ValueError) as exc:
        print(f"deephub: {exc}", file=sys.stderr)
        return 2

    if args.command == "ingest":
        print(json.dumps(describe(seq), indent=2))
        if args.out:
            write_snapshots(seq, args.out)
        return 0

    if args.command == "embed":
        plan = SamplingPlan(args.walks, args.walk_length, _strategy(args), args.seed)
        emb = embed_dynamic(seq, plan, _trainer(args, args.dim or 128))
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        for index, vectors in emb:
            write_word2vec(vectors, out / f"snapshot_{index:03d}.emb", seq.labels)
        _, f1 = evaluate_sequence(emb, seq)
        print(f"last-snapshot micro F1: {f1:.4f}")
        return 0

    if args.command == "tune":
        spec = experiment.ExperimentSpec(
            dataset=args.dataset,
            count=args.snapshots,
            width=args.width,
            strategies=_strategy_grid(args),
            trainers=[_trainer(args, d) for d in args.dim or experiment.DIMENSIONS],
            runs_per_config=args.runs,
            master_seed=args.seed,
            num_walks=args.walks,
            walk_length=args.walk_length,
            threads=args.threads,
            deterministic=args.deterministic,
            out_dir=args.out,
        )
        summary = experiment.run_experiment(spec)
        print(f"{summary['configurations']} configurations; best {summary['best_config']} "
              f"mean micro F1 {summary['best']['mean_micro_f1']:.4f}")
        return 0

    emb = _read_embeddings(args.embeddings, seq)
    results, f1 = evaluate_sequence(emb, seq)
    if args.command == "evaluate":
        write_metrics_csv(results, args.out, seq.labels)
        print(f"last-snapshot micro F1: {f1:.4f}")
    else:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(analysis_report(seq, results), fh, indent=2, sort_keys=True)
            fh.write("\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
