"""Experiment protocols built from repeated training runs."""

from concurrent.futures import ProcessPoolExecutor
from contextlib import nullcontext
from dataclasses import dataclass, field
from typing import Optional, Sequence

from ..data import DatasetBundle, lookup_known
from ..errors import ConfigError
from ..observability import ExperimentMetrics, logger
from .report import RunReport
from .splits import SplitKind, SplitProtocol, SplitSpec, make_split
from .trainer import DROPOUT_GRID, K_GRID, WEIGHT_DECAY_GRID, RunEntry, TrainConfig, train

SWEEP_FIELDS = ["key", "acc_mean", "acc_std", "smv_g"]
GRID_FIELDS = ["k", "weight_decay", "dropout", "val_mean", "acc_mean", "acc_std"]


def default_protocol(data: DatasetBundle) -> SplitProtocol:
    """Co-author and co-purchase benchmarks use per-class validation sets."""
    known = lookup_known(data.name)
    if known is not None and known.protocol == "coauthor_copurchase":
        return SplitProtocol.PER_CLASS
    return SplitProtocol.CITATION


@dataclass(frozen=True)
class _Job:
    cfg: TrainConfig
    data: DatasetBundle
    spec: SplitSpec
    compute_smoothness: bool
    keep_params: bool


def _run_job(job: _Job) -> RunEntry:
    split = make_split(job.data.labels, job.spec, job.data.num_classes, job.data.fixed_split)
    return train(job.cfg, job.data, split,
                 compute_smoothness=job.compute_smoothness, keep_params=job.keep_params)


def _phase(metrics: Optional[ExperimentMetrics], name: str):
    return metrics.track_phase(name) if metrics is not None else nullcontext()


def multi_run(
    cfg: TrainConfig,
    data: DatasetBundle,
    n_runs: int,
    split_mode: SplitKind | str = SplitKind.FIXED,
    train_per_class: int = 20,
    protocol: Optional[SplitProtocol | str] = None,
    threads: int = 1,
    compute_smoothness: bool = True,
    keep_first_params: bool = False,
    metrics: Optional[ExperimentMetrics] = None,
) -> RunReport:
    """
    Train `n_runs` models with seeds cfg.seed .. cfg.seed + n_runs − 1.

    With random splits the run seed also draws the split, so both the split
    and the initialization vary between runs. Runs may execute in worker
    processes; entries are always ordered by seed.

    Raises:
        ConfigError: if n_runs < 1
        the first training error in seed order
    """
    if n_runs < 1:
        raise ConfigError(f"n_runs must be at least 1, got {n_runs}")
    split_mode = SplitKind(split_mode)
    protocol = SplitProtocol(protocol) if protocol is not None else default_protocol(data)

    jobs = []
    for i in range(n_runs):
        seed = cfg.seed + i
        if split_mode == SplitKind.FIXED:
            spec = SplitSpec.fixed()
        else:
            spec = SplitSpec.random(seed, train_per_class, protocol)
        jobs.append(_Job(cfg.with_updates(seed=seed), data, spec, compute_smoothness,
                         keep_first_params and i == 0))

    with _phase(metrics, f"{cfg.model}(depth={cfg.depth}) x{n_runs}"):
        if threads > 1 and n_runs > 1:
            with ProcessPoolExecutor(max_workers=min(threads, n_runs)) as pool:
                entries = list(pool.map(_run_job, jobs))
        else:
            entries = [_run_job(job) for job in jobs]
    if metrics is not None:
        metrics.record_run(len(entries))

    entries.sort(key=lambda e: e.seed)
    report = RunReport(
        config=cfg.model_dump(mode="json"),
        split_mode=split_mode.value,
        entries=entries,
    )
    logger.info(f"{cfg.model}(depth={cfg.depth}) over {n_runs} runs: "
                f"{100 * report.acc_mean:.2f} ± {100 * report.acc_std:.2f}")
    return report


def depth_sweep(
    cfg: TrainConfig,
    data: DatasetBundle,
    depths: Sequence[int],
    n_runs: int,
    split_mode: SplitKind | str = SplitKind.FIXED,
    threads: int = 1,
    metrics: Optional[ExperimentMetrics] = None,
) -> list[dict]:
    """
    Accuracy and smoothness of the final representations per depth.

    Returns:
        rows with keys key (depth), acc_mean, acc_std, smv_g
    """
    rows = []
    for depth in depths:
        report = multi_run(cfg.with_updates(depth=int(depth)), data, n_runs, split_mode,
                           threads=threads, metrics=metrics)
        rows.append({"key": int(depth), "acc_mean": report.acc_mean,
                     "acc_std": report.acc_std, "smv_g": report.smv_mean})
    return rows


def train_size_sweep(
    cfg: TrainConfig,
    data: DatasetBundle,
    sizes: Sequence[int],
    n_runs: int,
    protocol: Optional[SplitProtocol | str] = None,
    threads: int = 1,
    metrics: Optional[ExperimentMetrics] = None,
) -> list[dict]:
    """
    Accuracy per training-set size (labeled nodes per class), random splits only.

    Returns:
        rows with keys key (nodes per class), acc_mean, acc_std, smv_g
    """
    rows = []
    for size in sizes:
        if size < 1:
            raise ConfigError(f"training sizes must be at least 1 per class, got {size}")
        report = multi_run(cfg, data, n_runs, SplitKind.RANDOM, train_per_class=int(size),
                           protocol=protocol, threads=threads, metrics=metrics)
        rows.append({"key": int(size), "acc_mean": report.acc_mean,
                     "acc_std": report.acc_std, "smv_g": report.smv_mean})
    return rows


@dataclass
class GridResult:
    best: TrainConfig
    rows: list[dict] = field(default_factory=list)


def grid_search(
    cfg: TrainConfig,
    data: DatasetBundle,
    n_runs: int,
    split_mode: SplitKind | str = SplitKind.FIXED,
    threads: int = 1,
    metrics: Optional[ExperimentMetrics] = None,
) -> GridResult:
    """
    Try every (k, weight decay, dropout) combination of the tuning grid and
    pick the one with the highest mean validation accuracy. The first
    combination in grid order wins ties. k is only searched for the
    decoupled models.
    """
    depths = K_GRID if cfg.model in ("decoupled", "dagnn") else (cfg.depth,)
    best: Optional[TrainConfig] = None
    best_val = -1.0
    rows = []
    for depth in depths:
        for wd in WEIGHT_DECAY_GRID:
            for rate in DROPOUT_GRID:
                candidate = cfg.with_updates(depth=depth, weight_decay=wd, dropout=rate, grid_mode=True)
                report = multi_run(candidate, data, n_runs, split_mode, threads=threads,
                                   compute_smoothness=False, metrics=metrics)
                rows.append({"k": depth, "weight_decay": wd, "dropout": rate,
                             "val_mean": report.val_mean, "acc_mean": report.acc_mean,
                             "acc_std": report.acc_std})
                if report.val_mean > best_val:
                    best, best_val = candidate, report.val_mean

    logger.info(f"grid search best: k={best.depth} weight_decay={best.weight_decay} "
                f"dropout={best.dropout} (val {100 * best_val:.2f})")
    return GridResult(best=best, rows=rows)
