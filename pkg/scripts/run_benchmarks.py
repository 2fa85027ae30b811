#!/usr/bin/env python3
"""
Reproduce the citation benchmark table.

Trains MLP, 2-layer GCN and DAGNN on every citation dataset found under
the dataset root and prints their mean accuracy next to the published
fixed-split numbers. Datasets that are not present are skipped.

Usage:
    python scripts/run_benchmarks.py
    python scripts/run_benchmarks.py --datasets cora --runs 100 --threads 4 --output results/table.csv
    python scripts/run_benchmarks.py --split random

Requirements:
    - DEEP_GNN_DATASET_ROOT in .env (or --root) pointing at cora/, citeseer/, pubmed/
"""

import argparse
import sys
from pathlib import Path

# Add src to path for imports
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from deep_gnn.config import get_config
from deep_gnn.data import export_csv, load_dataset, resolve_dataset
from deep_gnn.errors import DatasetError, DeepGnnError
from deep_gnn.observability import ExperimentMetrics
from deep_gnn.training import TrainConfig, multi_run

# Published fixed-split means (percent)
PUBLISHED = {
    "cora": {"mlp": 61.6, "gcn": 81.3, "dagnn": 84.4},
    "citeseer": {"mlp": 61.0, "gcn": 71.1, "dagnn": 73.3},
    "pubmed": {"mlp": 74.2, "gcn": 78.8, "dagnn": 80.5},
}

FIELDS = ["dataset", "model", "split", "runs", "acc_mean", "acc_std", "published"]


def model_configs(seed: int) -> dict[str, TrainConfig]:
    """Baseline settings for the shallow models, defaults for DAGNN."""
    return {
        "mlp": TrainConfig(model="mlp", depth=0, dropout=0.5, weight_decay=5e-4, seed=seed),
        "gcn": TrainConfig(model="gcn", depth=2, dropout=0.5, weight_decay=5e-4, seed=seed),
        "dagnn": TrainConfig(model="dagnn", seed=seed),
    }


def main():
    config = get_config()
    parser = argparse.ArgumentParser(description="Citation benchmark table")
    parser.add_argument("--root", default=config.dataset_root, help="Dataset root directory")
    parser.add_argument("--datasets", default="cora,citeseer,pubmed", help="Comma-separated names")
    parser.add_argument("--runs", type=int, default=10, help="Runs per model")
    parser.add_argument("--split", choices=["fixed", "random"], default="fixed", help="Split kind")
    parser.add_argument("--threads", type=int, default=config.threads, help="Worker processes")
    parser.add_argument("--seed", type=int, default=config.seed, help="Base seed")
    parser.add_argument("--output", "-o", default=None, help="CSV file (default: stdout)")

    args = parser.parse_args()

    metrics = ExperimentMetrics("benchmarks")
    metrics.start()
    rows = []
    try:
        for name in [n.strip().lower() for n in args.datasets.split(",") if n.strip()]:
            try:
                bundle = load_dataset(resolve_dataset(name, args.root), normalize_features=True)
            except DatasetError as e:
                print(f"⏭️  Skipping {name}: {e}", file=sys.stderr)
                continue

            for model, cfg in model_configs(args.seed).items():
                report = multi_run(cfg, bundle, args.runs, args.split, threads=args.threads,
                                   compute_smoothness=False, metrics=metrics)
                published = PUBLISHED.get(name, {}).get(model) if args.split == "fixed" else None
                rows.append({
                    "dataset": name, "model": model, "split": args.split, "runs": args.runs,
                    "acc_mean": round(100 * report.acc_mean, 2),
                    "acc_std": round(100 * report.acc_std, 2),
                    "published": published,
                })
                print(f"   ✓ {name:<9} {model:<6} {100 * report.acc_mean:5.1f} ± {100 * report.acc_std:.1f}"
                      f"{f'  (published {published})' if published is not None else ''}", file=sys.stderr)

        export_csv(rows, args.output, FIELDS)
    except DeepGnnError as e:
        metrics.record_failure(str(e))
        print(f"error: {e}", file=sys.stderr)
        sys.exit(e.exit_code)
    finally:
        metrics.finish()
        metrics.log_summary()


if __name__ == "__main__":
    main()
