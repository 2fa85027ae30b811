"""Logging and timing for experiment runs."""

import logging
import time
from dataclasses import dataclass, field, asdict
from typing import Optional
from uuid import uuid4

# Configure logging
logging.basicConfig(
    level=logging.INFO,
    format="%(asctime)s - %(name)s - %(levelname)s - %(message)s"
)
logger = logging.getLogger("deep_gnn")


@dataclass
class ExperimentRecord:
    """Timing and failure data collected during one CLI command."""

    run_id: str = field(default_factory=lambda: str(uuid4())[:8])
    command: str = ""

    # Work done
    runs_completed: int = 0
    phase_durations_ms: dict[str, int] = field(default_factory=dict)
    total_duration_ms: int = 0

    # Errors
    failures: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        """Convert to dictionary for logging."""
        return asdict(self)


class ExperimentMetrics:
    """
    Collects and logs timings for an experiment command.

    Usage:
        metrics = ExperimentMetrics("sweep-depth")
        metrics.start()

        with metrics.track_phase("depth=2"):
            # train and evaluate

        metrics.finish()
        metrics.log_summary()

    Durations are only logged. They never end up in CSV/JSON outputs,
    which must stay byte-identical across repeated runs.
    """

    def __init__(self, command: str = ""):
        self.record = ExperimentRecord(command=command)
        self._start_time: Optional[float] = None

    def start(self):
        """Start command timing."""
        self._start_time = time.perf_counter()
        logger.info(f"{self.record.command or 'experiment'} started: {self.record.run_id}")

    def finish(self):
        """Finish command timing."""
        if self._start_time is not None:
            self.record.total_duration_ms = int(
                (time.perf_counter() - self._start_time) * 1000
            )

    def record_run(self, count: int = 1):
        """Count completed training runs."""
        self.record.runs_completed += count

    def record_phase_duration(self, phase: str, duration_ms: int):
        """Record duration for a phase."""
        self.record.phase_durations_ms[phase] = duration_ms

    def record_failure(self, error: str):
        """Record a failure."""
        self.record.failures.append(error)
        logger.error(f"Experiment failure: {error}")

    def track_phase(self, phase: str) -> "PhaseTimer":
        """Context manager for tracking a phase duration."""
        return PhaseTimer(self, phase)

    def log_summary(self):
        """Log a summary of the command."""
        r = self.record

        logger.info(f"Summary {r.command} [{r.run_id}]: {r.total_duration_ms}ms, "
                    f"{r.runs_completed} training runs")
        for phase, ms in r.phase_durations_ms.items():
            logger.debug(f"  - {phase}: {ms}ms")

        if r.failures:
            logger.warning(f"Failures: {len(r.failures)}")
            for failure in r.failures:
                logger.warning(f"  - {failure}")


class PhaseTimer:
    """Context manager for timing one phase."""

    def __init__(self, metrics: ExperimentMetrics, phase: str):
        self.metrics = metrics
        self.phase = phase
        self.start_time: Optional[float] = None

    def __enter__(self):
        self.start_time = time.perf_counter()
        logger.debug(f"Starting phase: {self.phase}")
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        if self.start_time is not None:
            duration_ms = int((time.perf_counter() - self.start_time) * 1000)
            self.metrics.record_phase_duration(self.phase, duration_ms)
            logger.debug(f"Phase {self.phase} completed in {duration_ms}ms")

        if exc_type:
            self.metrics.record_failure(
                f"{self.phase}: {exc_type.__name__}: {exc_val}"
            )

        return False  # Don't suppress exceptions
