"""
Validation, benchmark and epsilon-sweep pipelines.

All pipelines work on in-memory event sequences so that timings cover only
the AUC computation, never parsing or output.
"""
import logging
import math
import time
from decimal import Decimal
from fractions import Fraction
from typing import Callable, List, Optional, Sequence

from app.core.errors import GuaranteeBreachError
from app.core.oracle import relative_error
from app.models.events import AucValue, LabeledScore
from app.models.schemas import BenchReport, EstimatorConfig, SweepRow, ValidationSummary
from app.services.sliding_window import ExactSlidingAuc, SlidingAucEstimator

logger = logging.getLogger(__name__)

GUARANTEE_SLACK = 1e-9

StepCallback = Callable[[int, AucValue, AucValue, float], None]


def guarantee_limit(epsilon: Decimal) -> float:
    """Largest admissible relative error for a given epsilon."""
    return float(Fraction(epsilon) / 2) + GUARANTEE_SLACK


def check_invariants(window: SlidingAucEstimator, index: int) -> None:
    report = window.verify_invariants()
    if not report.ok:
        raise GuaranteeBreachError(f"invariant violated after event {index}: {report.violation}")


class _ErrorStats:
    """Running average and maximum of relative errors over defined windows."""

    def __init__(self):
        self.total = 0.0
        self.count = 0
        self.maximum = 0.0

    def add(self, error: float) -> None:
        if math.isnan(error):
            return
        self.total += error
        self.count += 1
        self.maximum = max(self.maximum, error)

    @property
    def average(self) -> float:
        return self.total / self.count if self.count else 0.0


def validate_stream(
    events: Sequence[LabeledScore],
    window: int,
    config: EstimatorConfig,
    emit_every: int = 1,
    verify_every: int = 0,
    on_step: Optional[StepCallback] = None
) -> ValidationSummary:
    """
    Compare the estimate with the exact AUC at every emitted step.

    Args:
        events: Stream to replay
        window: Sliding window capacity
        config: Estimator settings
        emit_every: Compare every n-th event
        verify_every: Run the full invariant check every n-th event (0 = never)
        on_step: Called with (index, estimate, exact, rel_error) per emitted step

    Returns:
        ValidationSummary over windows with a defined AUC
    """
    estimator = SlidingAucEstimator(window, config)
    limit = guarantee_limit(config.epsilon)
    stats = _ErrorStats()
    summary = ValidationSummary()

    for index, event in enumerate(events):
        estimator.push(event)
        if verify_every and (index + 1) % verify_every == 0:
            check_invariants(estimator, index)
        if (index + 1) % emit_every:
            continue
        estimate = estimator.estimate()
        exact = estimator.exact()
        error = relative_error(estimate, exact, flipped=config.flipped_mode)
        stats.add(error)
        summary.steps += 1
        if not math.isnan(error) and error > limit:
            summary.breaches += 1
            if summary.first_breach_index is None:
                summary.first_breach_index = index
                logger.error(f"Guarantee breached at event {index}: rel_error={error} > {limit}")
        if on_step is not None:
            on_step(index, estimate, exact, error)

    summary.defined_steps = stats.count
    summary.avg_rel_error = stats.average
    summary.max_rel_error = stats.maximum
    logger.info(
        f"Validated {len(events)} events: avg_rel_error={summary.avg_rel_error:.3g}, "
        f"max_rel_error={summary.max_rel_error:.3g}, breaches={summary.breaches}"
    )
    return summary


def _split_warmup(events: Sequence[LabeledScore], window: int) -> "tuple[Sequence[LabeledScore], Sequence[LabeledScore]]":
    if len(events) <= window:
        return [], events
    return events[:window], events[window:]


def run_benchmark(
    events: Sequence[LabeledScore],
    window: int,
    config: EstimatorConfig,
    baseline_events: int = 0
) -> BenchReport:
    """
    Time the estimator against exact recomputation on the same stream.

    Both pipelines are first filled with one window of events untimed. The
    estimator is then timed over the rest of the stream; the baseline over
    the first `baseline_events` of them (all when 0).

    Args:
        events: In-memory stream
        window: Sliding window capacity
        config: Estimator settings
        baseline_events: Cap on timed baseline events

    Returns:
        BenchReport with throughput, speedup, mean |C| and error statistics
    """
    warmup, timed = _split_warmup(events, window)

    estimator = SlidingAucEstimator(window, config)
    for event in warmup:
        estimator.push(event)
    estimates: List[AucValue] = []
    size_total = 0
    start = time.perf_counter()
    for event in timed:
        estimator.push(event)
        estimates.append(estimator.estimate())
        size_total += estimator.compressed_size()
    approx_seconds = time.perf_counter() - start

    baseline_timed = timed if baseline_events == 0 else timed[:baseline_events]
    baseline = ExactSlidingAuc(window)
    for event in warmup:
        baseline.push(event)
    exacts: List[AucValue] = []
    start = time.perf_counter()
    for event in baseline_timed:
        baseline.push(event)
        exacts.append(baseline.exact())
    baseline_seconds = time.perf_counter() - start

    stats = _ErrorStats()
    for estimate, exact in zip(estimates, exacts):
        stats.add(relative_error(estimate, exact, flipped=config.flipped_mode))

    approx_rate = len(timed) / approx_seconds if approx_seconds > 0 else math.inf
    baseline_rate = len(baseline_timed) / baseline_seconds if baseline_seconds > 0 else math.inf
    report = BenchReport(
        window=window,
        epsilon=config.epsilon,
        events=len(events),
        approx_events=len(timed),
        baseline_events=len(baseline_timed),
        approx_events_per_sec=approx_rate,
        baseline_events_per_sec=baseline_rate,
        speedup=approx_rate / baseline_rate if baseline_rate > 0 else math.inf,
        mean_compressed_size=size_total / len(timed) if timed else 0.0,
        avg_rel_error=stats.average,
        max_rel_error=stats.maximum,
    )
    logger.info(
        f"Benchmark k={window} eps={config.epsilon}: approx {approx_rate:.0f} ev/s, "
        f"baseline {baseline_rate:.0f} ev/s, speedup {report.speedup:.2f}x"
    )
    return report


def exact_series(events: Sequence[LabeledScore], window: int) -> List[AucValue]:
    """Exact AUC after every event, by recomputation."""
    baseline = ExactSlidingAuc(window)
    series = []
    for event in events:
        baseline.push(event)
        series.append(baseline.exact())
    return series


def run_sweep(
    events: Sequence[LabeledScore],
    window: int,
    epsilons: Sequence[Decimal],
    flipped_mode: bool = False
) -> List[SweepRow]:
    """
    Error and cost of the estimator for several epsilons on one stream.

    Exact values are computed once and shared by every epsilon.
    """
    exacts = exact_series(events, window)
    rows = []
    for epsilon in epsilons:
        estimator = SlidingAucEstimator(window, EstimatorConfig(epsilon=epsilon, flipped_mode=flipped_mode))
        estimates: List[AucValue] = []
        size_total = 0
        start = time.perf_counter()
        for event in events:
            estimator.push(event)
            estimates.append(estimator.estimate())
            size_total += estimator.compressed_size()
        seconds = time.perf_counter() - start

        stats = _ErrorStats()
        for estimate, exact in zip(estimates, exacts):
            stats.add(relative_error(estimate, exact, flipped=flipped_mode))
        rows.append(SweepRow(
            epsilon=epsilon,
            avg_rel_error=stats.average,
            max_rel_error=stats.maximum,
            mean_compressed_size=size_total / len(events) if events else 0.0,
            events_per_sec=len(events) / seconds if seconds > 0 else math.inf,
        ))
        logger.info(f"Sweep eps={epsilon}: avg_rel_error={stats.average:.3g}, max={stats.maximum:.3g}")
    return rows
