"""Command-line entry point for deep GNN experiments."""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Optional

import numpy as np

from .config import ExperimentConfig, get_config
from .data import (
    check_known_statistics,
    dataset_statistics,
    export_csv,
    export_embeddings,
    largest_connected_component,
    load_dataset,
    lookup_known,
    resolve_dataset,
)
from .errors import ConfigError, ConvergenceError, DataError, DeepGnnError, VerificationError
from .graph import OperatorKind, load_graph_arg, normalize, parse_graph_spec, sbm_blocks
from .models import MODEL_KINDS, build_model, save_checkpoint
from .nn import finite_diff_check
from .observability import ExperimentMetrics, logger
from .smoothness import propagation_smoothness_curve
from .spectral import (
    CORRESPONDENCE_LIMIT,
    limit_for,
    power_converge,
    spectral_report,
    verify_eigenpair_correspondence,
)
from .training import (
    GRID_FIELDS,
    SWEEP_FIELDS,
    SplitKind,
    SplitProtocol,
    TrainConfig,
    depth_sweep,
    grid_search,
    multi_run,
    train_size_sweep,
)

GRADCHECK_TOL = 1e-4
GRADCHECK_GRAPH = "sbm:15,15,15,0.3,0.05,7"
SMOOTHNESS_FIELDS = ["layer_or_hop", "smv_g", "accuracy"]

EPILOG = """\
output schemas (CSV with a header row, JSON pretty-printed):
  train            JSON: config, split_mode, runs, acc_mean, acc_std, val_mean,
                   smv_g_mean, entries[seed, test_acc, val_acc, best_epoch,
                   epochs_run, initial_loss, train_loss[], val_loss[], smv_g,
                   clamped_probabilities]
  sweep-depth      CSV: key,acc_mean,acc_std,smv_g   (key = depth / hops)
  sweep-trainsize  CSV: key,acc_mean,acc_std,smv_g   (key = train nodes per class)
  smoothness       CSV: layer_or_hop,smv_g,accuracy   (accuracy empty without --model)
  converge         CSV: k,frobenius_residual
  verify           JSON: one report per operator kind plus correspondence_residual
  gradcheck        CSV: model,max_rel_error,passed
  stats            JSON: name,n,m,c,d,edge_density,has_fixed_split,known_mismatches
  grid             CSV: k,weight_decay,dropout,val_mean,acc_mean,acc_std

graph specs: path:n  cycle:n  complete:n  sbm:a,b,...,p_in,p_out,seed  file:<edge list>

exit codes: 0 success, 1 usage error, 2 data error, 3 numeric or verification failure
"""


class _Parser(argparse.ArgumentParser):
    """Usage errors exit with 1 like every other configuration error."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _int_list(text: str) -> list[int]:
    try:
        values = [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("expected at least one value")
    return values


def _graph_spec(text: str) -> str:
    if not text.startswith("file:"):
        try:
            parse_graph_spec(text)
        except ConfigError as e:
            raise argparse.ArgumentTypeError(str(e))
    return text


def _emit(text: str, output: Optional[str]):
    """Write machine output to --output or stdout."""
    if output is None or output == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    path = Path(output)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
    except OSError as e:
        raise DataError(f"cannot write {path}: {e}")
    logger.info(f"Wrote {path}")


def _emit_json(data: dict, output: Optional[str]):
    _emit(json.dumps(data, indent=2) + "\n", output)


def _load(args, config: ExperimentConfig):
    path = resolve_dataset(args.dataset, config.dataset_root)
    bundle = load_dataset(path, normalize_features=args.normalize_features)
    known = lookup_known(bundle.name)
    if args.lcc or (known is not None and known.largest_component_only):
        bundle = largest_connected_component(bundle)
    return bundle


def _train_config(args, config: ExperimentConfig) -> TrainConfig:
    """Merge flags with env defaults; gcn and mlp keep their usual 0.5 / 5e-4 regularization."""
    shallow = args.model in ("gcn", "mlp")
    depth = args.depth
    if depth is None:
        depth = {"mlp": 0, "gcn": 2}.get(args.model, config.k)
    dropout = args.dropout if args.dropout is not None else (0.5 if shallow else config.dropout)
    weight_decay = args.weight_decay
    if weight_decay is None:
        weight_decay = 5e-4 if shallow else config.weight_decay
    return TrainConfig(
        model=args.model,
        depth=depth,
        lr=args.lr if args.lr is not None else config.lr,
        weight_decay=weight_decay,
        dropout=dropout,
        hidden=args.hidden if args.hidden is not None else config.hidden,
        max_epochs=args.max_epochs if args.max_epochs is not None else config.max_epochs,
        patience=args.patience if args.patience is not None else config.patience,
        seed=args.seed,
        operator=args.operator,
        smoothness_exact_limit=config.smoothness_exact_limit,
    )


def _split_mode(args, bundle) -> SplitKind:
    if args.split is not None:
        return SplitKind(args.split)
    return SplitKind.FIXED if bundle.fixed_split is not None else SplitKind.RANDOM


def cmd_train(args, config, metrics):
    cfg = _train_config(args, config)
    bundle = _load(args, config)
    want_params = bool(args.checkpoint or args.embeddings)
    report = multi_run(
        cfg, bundle, args.runs, _split_mode(args, bundle),
        train_per_class=args.train_per_class, protocol=args.protocol,
        threads=args.threads, keep_first_params=want_params, metrics=metrics,
    )
    first = report.entries[0]
    if args.checkpoint:
        save_checkpoint(args.checkpoint, first.best_params,
                        {"kind": cfg.model, **cfg.model_dump(mode="json")}, first.seed)
        logger.info(f"Checkpoint written to {args.checkpoint}")
    if args.embeddings:
        model = build_model(cfg.model, cfg.depth, cfg.hidden, cfg.dropout)
        params = model.init_params(bundle.d, bundle.num_classes, np.random.default_rng(first.seed))
        params.restore(first.best_params)
        _, cache = model.forward(params, normalize(bundle.graph, cfg.operator), bundle.features)
        export_embeddings(model.representations(cache), range(bundle.n), args.embeddings)
    _emit(report.to_json(), args.output)


def cmd_sweep_depth(args, config, metrics):
    cfg = _train_config(args, config)
    bundle = _load(args, config)
    rows = depth_sweep(cfg, bundle, args.depths, args.runs, _split_mode(args, bundle),
                       threads=args.threads, metrics=metrics)
    export_csv(rows, args.output, SWEEP_FIELDS)


def cmd_sweep_trainsize(args, config, metrics):
    cfg = _train_config(args, config)
    bundle = _load(args, config)
    rows = train_size_sweep(cfg, bundle, args.sizes, args.runs, protocol=args.protocol,
                            threads=args.threads, metrics=metrics)
    export_csv(rows, args.output, SWEEP_FIELDS)


def cmd_smoothness(args, config, metrics):
    bundle = _load(args, config)
    if args.model is None:
        with metrics.track_phase("propagation curve"):
            op = normalize(bundle.graph, args.operator)
            curve = propagation_smoothness_curve(op, bundle.features, args.hops, seed=args.seed,
                                                 exact_limit=config.smoothness_exact_limit)
        rows = [{"layer_or_hop": hop, "smv_g": value, "accuracy": None} for hop, value in curve]
        export_csv(rows, args.output, SMOOTHNESS_FIELDS)
        return
    cfg = _train_config(args, config)
    sweep = depth_sweep(cfg, bundle, args.depths, args.runs, _split_mode(args, bundle),
                        threads=args.threads, metrics=metrics)
    rows = [{"layer_or_hop": r["key"], "smv_g": r["smv_g"], "accuracy": r["acc_mean"]} for r in sweep]
    export_csv(rows, args.output, SMOOTHNESS_FIELDS)


def cmd_converge(args, config, metrics):
    graph = load_graph_arg(args.graph)
    op = normalize(graph, args.kind)
    with metrics.track_phase(f"converge {args.kind}"):
        result = power_converge(op, limit_for(graph, args.kind), tol=args.tol, max_k=args.max_k)
    rows = [{"k": k, "frobenius_residual": r} for k, r in enumerate(result.residuals, start=1)]
    export_csv(rows, args.output, ["k", "frobenius_residual"])
    if not result.converged:
        raise ConvergenceError(f"no convergence to tol={args.tol} within {args.max_k} steps")


def cmd_verify(args, config, metrics):
    graph = load_graph_arg(args.graph)
    kinds = [OperatorKind(args.kind)] if args.kind else list(OperatorKind)
    out = {"graph": args.graph, "n": graph.n, "m": graph.m, "reports": []}
    for kind in kinds:
        with metrics.track_phase(f"verify {kind.value}"):
            report = spectral_report(graph, kind, tol=args.tol, max_k=args.max_k)
        out["reports"].append(report.to_dict())
    if graph.n <= CORRESPONDENCE_LIMIT:
        out["correspondence_residual"] = verify_eigenpair_correspondence(graph)
    _emit_json(out, args.output)
    missing = [r["kind"] for r in out["reports"] if r["k_converge"] is None]
    if missing:
        raise VerificationError(f"no convergence within {args.max_k} steps for {missing}")


def cmd_gradcheck(args, config, metrics):
    spec = parse_graph_spec(args.graph) if not args.graph.startswith("file:") else None
    graph = load_graph_arg(args.graph)
    rng = np.random.default_rng(args.seed)
    x = rng.normal(size=(graph.n, args.features))
    if spec is not None and spec.kind == "sbm":
        labels = sbm_blocks(spec)
    else:
        labels = np.arange(graph.n) % args.classes
    num_classes = int(labels.max()) + 1
    train_ids = np.arange(graph.n)
    op = normalize(graph, args.operator)

    kinds = [args.model] if args.model else list(MODEL_KINDS)
    rows = []
    for kind in kinds:
        depth = args.depth if args.depth is not None else (3 if kind == "gcn" else 5)
        model = build_model(kind, depth, hidden=args.hidden, dropout=0.0)
        params = model.init_params(args.features, num_classes, np.random.default_rng(args.seed))
        with metrics.track_phase(f"gradcheck {kind}"):
            error = finite_diff_check(
                lambda: model.loss_and_grad(params, op, x, labels, train_ids),
                params.named_tensors(),
                samples=args.samples,
                seed=args.seed,
            )
        logger.info(f"gradcheck {kind}(depth={depth}): max relative error {error:.3e}")
        rows.append({"model": kind, "max_rel_error": error, "passed": error < GRADCHECK_TOL})
    export_csv(rows, args.output, ["model", "max_rel_error", "passed"])
    failed = [r["model"] for r in rows if not r["passed"]]
    if failed:
        raise VerificationError(f"gradient check failed for {failed} (tolerance {GRADCHECK_TOL})")


def cmd_stats(args, config, metrics):
    bundle = _load(args, config)
    out = dataset_statistics(bundle).to_dict()
    mismatches = check_known_statistics(bundle)
    for problem in mismatches:
        logger.warning(f"{bundle.name}: {problem}")
    out["known_mismatches"] = mismatches
    _emit_json(out, args.output)
    if args.check and mismatches:
        raise DataError(f"{bundle.name} does not match its published statistics: {mismatches}")


def cmd_grid(args, config, metrics):
    cfg = _train_config(args, config)
    bundle = _load(args, config)
    result = grid_search(cfg, bundle, args.runs, _split_mode(args, bundle),
                         threads=args.threads, metrics=metrics)
    export_csv(result.rows, args.output, GRID_FIELDS)


def _common_parent(config: ExperimentConfig) -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--seed", type=int, default=config.seed,
                        help=f"Base random seed (default: {config.seed})")
    parent.add_argument("--threads", type=int, default=config.threads,
                        help="Worker processes for independent runs (default: %(default)s)")
    parent.add_argument("--output", "-o", default=None,
                        help="Output file (default: stdout)")
    parent.add_argument("--debug", action="store_true", help="Enable debug logging")
    return parent


def _dataset_parent(config: ExperimentConfig) -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--dataset", required=True,
                        help=f"Dataset directory, or a name under {config.dataset_root}")
    parent.add_argument("--normalize-features", action=argparse.BooleanOptionalAction,
                        default=config.normalize_features,
                        help="Row-normalize features at load (default: %(default)s)")
    parent.add_argument("--lcc", action="store_true",
                        help="Keep only the largest connected component")
    return parent


def _model_parent(config: ExperimentConfig, model_required: bool = True) -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--model", choices=MODEL_KINDS, required=model_required,
                        default=None, help="Model kind")
    parent.add_argument("--k", "--depth", dest="depth", type=int, default=None,
                        help=f"Hops for decoupled/dagnn (default: {config.k}), layers for gcn (default: 2)")
    parent.add_argument("--lr", type=float, default=None, help=f"Adam learning rate (default: {config.lr})")
    parent.add_argument("--weight-decay", type=float, default=None,
                        help=f"L2 weight decay (default: {config.weight_decay}; 5e-4 for gcn/mlp)")
    parent.add_argument("--dropout", type=float, default=None,
                        help=f"Dropout rate (default: {config.dropout}; 0.5 for gcn/mlp)")
    parent.add_argument("--hidden", type=int, default=None, help=f"Hidden width (default: {config.hidden})")
    parent.add_argument("--max-epochs", type=int, default=None,
                        help=f"Epoch cap (default: {config.max_epochs})")
    parent.add_argument("--patience", type=int, default=None,
                        help=f"Early stopping patience (default: {config.patience})")
    parent.add_argument("--operator", choices=[k.value for k in OperatorKind],
                        default=OperatorKind.SYMMETRIC.value, help="Propagation operator (default: %(default)s)")
    parent.add_argument("--runs", type=int, default=10, help="Independent runs (default: %(default)s)")
    parent.add_argument("--split", choices=[k.value for k in SplitKind], default=None,
                        help="Split kind (default: fixed when the dataset ships one, else random)")
    parent.add_argument("--train-per-class", type=int, default=20,
                        help="Labeled nodes per class for random splits (default: %(default)s)")
    parent.add_argument("--protocol", choices=[p.value for p in SplitProtocol], default=None,
                        help="Random split protocol (default: per dataset)")
    return parent


def _graph_parent() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--graph", type=_graph_spec, required=True,
                        help="Graph spec: path:n, cycle:n, complete:n, sbm:...,seed or file:<path>")
    parent.add_argument("--tol", type=float, default=1e-6,
                        help="Frobenius tolerance for ‖Âᵏ − Π‖ (default: %(default)s)")
    parent.add_argument("--max-k", type=int, default=5000, help="Step cap (default: %(default)s)")
    return parent


def build_parser(config: Optional[ExperimentConfig] = None) -> argparse.ArgumentParser:
    config = config or get_config()
    common = _common_parent(config)
    dataset = _dataset_parent(config)

    parser = _Parser(
        prog="deep-gnn",
        description="Over-smoothing analysis and deep decoupled graph neural networks",
        epilog=EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name, handler, help_text, parents):
        p = sub.add_parser(name, help=help_text, description=help_text, parents=parents,
                           epilog=EPILOG, formatter_class=argparse.RawDescriptionHelpFormatter)
        p.set_defaults(handler=handler)
        return p

    p = add("train", cmd_train, "Train a model over several runs and report accuracy as JSON",
            [common, dataset, _model_parent(config)])
    p.add_argument("--checkpoint", default=None, help="Write the first run's best parameters here")
    p.add_argument("--embeddings", default=None,
                   help="Write the first run's final node representations here as CSV")

    p = add("sweep-depth", cmd_sweep_depth, "Accuracy and smoothness across depths",
            [common, dataset, _model_parent(config)])
    p.add_argument("--depths", type=_int_list, default=[1, 2, 3, 4, 5, 6, 7, 8],
                   help="Comma-separated depths (default: 1..8)")

    p = add("sweep-trainsize", cmd_sweep_trainsize, "Accuracy across labeled nodes per class",
            [common, dataset, _model_parent(config)])
    p.add_argument("--sizes", type=_int_list, default=[1, 2, 3, 4, 5, 10, 20],
                   help="Comma-separated train nodes per class (default: 1,2,3,4,5,10,20)")

    p = add("smoothness", cmd_smoothness, "Smoothness of propagated features or trained representations",
            [common, dataset, _model_parent(config, model_required=False)])
    p.add_argument("--hops", type=_int_list, default=[0],
                   help="Propagation steps applied to the raw features (default: 0)")
    p.add_argument("--depths", type=_int_list, default=[1, 2, 4, 8],
                   help="Depths trained when --model is given (default: 1,2,4,8)")

    p = add("converge", cmd_converge, "Residual ‖Âᵏ − Π‖_F per step on a connected graph",
            [common, _graph_parent()])
    p.add_argument("--kind", choices=[k.value for k in OperatorKind], default=OperatorKind.SYMMETRIC.value,
                   help="Operator kind (default: %(default)s)")

    p = add("verify", cmd_verify, "Eigen-identity, |λ₂| and convergence checks",
            [common, _graph_parent()])
    p.add_argument("--kind", choices=[k.value for k in OperatorKind], default=None,
                   help="Operator kind (default: both)")

    p = add("gradcheck", cmd_gradcheck, "Compare analytic gradients with central finite differences",
            [common])
    p.add_argument("--model", choices=MODEL_KINDS, default=None, help="Model kind (default: all)")
    p.add_argument("--k", "--depth", dest="depth", type=int, default=None,
                   help="Hops or layers (default: 5, or 3 layers for gcn)")
    p.add_argument("--graph", type=_graph_spec, default=GRADCHECK_GRAPH,
                   help="Graph spec (default: %(default)s)")
    p.add_argument("--features", type=int, default=8, help="Random input features (default: %(default)s)")
    p.add_argument("--classes", type=int, default=3,
                   help="Classes for non-sbm graphs (default: %(default)s)")
    p.add_argument("--hidden", type=int, default=8, help="Hidden width (default: %(default)s)")
    p.add_argument("--samples", type=int, default=20,
                   help="Coordinates checked per tensor (default: %(default)s)")
    p.add_argument("--operator", choices=[k.value for k in OperatorKind],
                   default=OperatorKind.SYMMETRIC.value, help="Propagation operator (default: %(default)s)")

    p = add("stats", cmd_stats, "Dataset statistics and comparison with the published numbers",
            [common, dataset])
    p.add_argument("--check", action="store_true",
                   help="Fail with exit code 2 if a known dataset does not match")

    add("grid", cmd_grid, "Grid search over k, weight decay and dropout",
        [common, dataset, _model_parent(config)])

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    """Run one command and return its exit code."""
    config = get_config()
    parser = build_parser(config)
    args = parser.parse_args(argv)

    if args.debug:
        logging.getLogger("deep_gnn").setLevel(logging.DEBUG)
    if args.threads < 1:
        parser.error(f"--threads must be at least 1, got {args.threads}")

    metrics = ExperimentMetrics(args.command)
    metrics.start()
    try:
        args.handler(args, config, metrics)
        return 0
    except DeepGnnError as e:
        metrics.record_failure(str(e))
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code
    finally:
        metrics.finish()
        metrics.log_summary()


def cli():
    """CLI entry point."""
    sys.exit(main())


if __name__ == "__main__":
    cli()
