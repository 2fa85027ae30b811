#!/usr/bin/env python3
"""
Write a seeded stochastic block model dataset in the on-disk layout.

Blocks are the classes. Each node's features are its class mean plus
Gaussian noise, so the graph and the features both carry the labels.
The result loads with `deep-gnn ... --dataset <output>` and is handy for
trying the commands without downloading a citation dataset.

Usage:
    python scripts/make_sbm_dataset.py --output data/datasets/sbm
    python scripts/make_sbm_dataset.py --sizes 200,200,200 --p-in 0.05 --p-out 0.005 --fixed-split 20,30
"""

import argparse
import sys
from pathlib import Path

import numpy as np

# Add src to path for imports
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from deep_gnn.data import DatasetBundle, FixedSplit, write_dataset
from deep_gnn.errors import DeepGnnError
from deep_gnn.graph import GraphSpec, is_connected, sbm_blocks, synth_graph


def make_bundle(
    sizes: list[int],
    p_in: float,
    p_out: float,
    features: int,
    noise: float,
    seed: int,
    fixed_split: tuple[int, int] | None,
    name: str,
) -> DatasetBundle:
    """Sample the graph, features and optional fixed split."""
    spec = GraphSpec(kind="sbm", sizes=tuple(sizes), probs=(p_in, p_out), seed=seed)
    graph = synth_graph(spec)
    if not is_connected(graph):
        print("   ⚠️ sampled graph is disconnected; limits apply per component")

    labels = sbm_blocks(spec)
    rng = np.random.default_rng(seed)
    means = rng.normal(size=(len(sizes), features))
    x = means[labels] + noise * rng.normal(size=(graph.n, features))

    split = None
    if fixed_split is not None:
        per_class_train, val_size = fixed_split
        train = np.concatenate([
            rng.permutation(np.flatnonzero(labels == c))[:per_class_train] for c in range(len(sizes))
        ])
        rest = rng.permutation(np.setdiff1d(np.arange(graph.n), train))
        split = FixedSplit(np.sort(train), np.sort(rest[:val_size]), np.sort(rest[val_size:]))

    return DatasetBundle(name=name, graph=graph, features=x, labels=labels,
                         num_classes=len(sizes), fixed_split=split)


def _ints(text: str) -> list[int]:
    return [int(p) for p in text.split(",") if p.strip()]


def main():
    parser = argparse.ArgumentParser(description="Write a synthetic SBM dataset directory")
    parser.add_argument("--output", "-o", default="data/datasets/sbm", help="Target directory")
    parser.add_argument("--name", default="sbm", help="Dataset name stored in meta.json")
    parser.add_argument("--sizes", type=_ints, default=[100, 100, 100], help="Block sizes")
    parser.add_argument("--p-in", type=float, default=0.05, help="Edge probability inside a block")
    parser.add_argument("--p-out", type=float, default=0.01, help="Edge probability across blocks")
    parser.add_argument("--features", type=int, default=32, help="Feature dimension")
    parser.add_argument("--noise", type=float, default=1.5, help="Feature noise scale")
    parser.add_argument("--seed", type=int, default=0, help="Random seed")
    parser.add_argument("--fixed-split", type=_ints, default=None,
                        help="TRAIN_PER_CLASS,VAL_SIZE: also write train/val/test files")

    args = parser.parse_args()
    fixed = tuple(args.fixed_split) if args.fixed_split else None
    if fixed is not None and len(fixed) != 2:
        parser.error("--fixed-split takes exactly two values")

    try:
        bundle = make_bundle(args.sizes, args.p_in, args.p_out, args.features, args.noise,
                             args.seed, fixed, args.name)
        write_dataset(bundle, args.output)
    except DeepGnnError as e:
        print(f"error: {e}", file=sys.stderr)
        sys.exit(e.exit_code)

    print(f"✓ Wrote {args.output}: n={bundle.n}, m={bundle.graph.m}, "
          f"c={bundle.num_classes}, d={bundle.d}{', fixed split' if fixed else ''}")


if __name__ == "__main__":
    main()
