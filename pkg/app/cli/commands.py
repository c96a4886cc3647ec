"""
Command handlers. Each takes validated settings and returns an exit code;
failures surface as SlidingAucError subclasses for the dispatcher to map.
"""
import logging
import sys
from contextlib import contextmanager
from pathlib import Path
from typing import IO, Iterator, List, Optional

from app.core.errors import GuaranteeBreachError
from app.models.events import AucValue, LabeledScore
from app.models.schemas import GenParams, RunConfig
from app.services.evaluation import check_invariants, run_benchmark, run_sweep, validate_stream
from app.services.sliding_window import SlidingAucEstimator
from app.services.synthetic import generate_arrays
from app.utils.csv_io import CsvSink, format_float, read_events, write_events

logger = logging.getLogger(__name__)


@contextmanager
def open_input(path: Optional[Path]) -> Iterator[IO[str]]:
    """Open path for reading, or hand out standard input without closing it."""
    if path is None:
        yield sys.stdin
        return
    with open(path, "r", encoding="utf-8", errors="surrogateescape") as stream:
        yield stream


@contextmanager
def open_output(path: Optional[Path]) -> Iterator[IO[str]]:
    if path is None:
        yield sys.stdout
        sys.stdout.flush()
        return
    with open(path, "w", encoding="utf-8", newline="") as stream:
        yield stream


def load_events(path: Optional[Path]) -> List[LabeledScore]:
    """Parse the whole input up front so later timings exclude parsing."""
    with open_input(path) as source:
        events = list(read_events(source))
    logger.info(f"Loaded {len(events)} events from {path or 'standard input'}")
    return events


def run_stream(config: RunConfig) -> int:
    """
    Stream events through the estimator, writing "index,estimate" rows.

    Rows are emitted every `emit_every` events; "nan" while the window lacks
    either class.
    """
    estimator = SlidingAucEstimator(config.window, config.estimator_config())
    count = 0
    with open_input(config.input) as source, open_output(config.output) as target:
        sink = CsvSink(target)
        sink.header(["index", "estimate"])
        for index, event in enumerate(read_events(source)):
            estimator.push(event)
            count += 1
            if config.verify_every and count % config.verify_every == 0:
                check_invariants(estimator, index)
            if count % config.emit_every == 0:
                sink.row([index, estimator.estimate().format()])
    logger.info(f"Processed {count} events with window={config.window}")
    return 0


def validate_mode(config: RunConfig) -> int:
    """
    Compare estimates with the exact AUC and report relative errors.

    Raises:
        GuaranteeBreachError: if any relative error exceeds epsilon/2 + 1e-9
    """
    events = load_events(config.input)
    with open_output(config.output) as target:
        sink = CsvSink(target)
        sink.header(["index", "estimate", "exact", "rel_error"])

        def emit(index: int, estimate: AucValue, exact: AucValue, error: float) -> None:
            sink.row([index, estimate.format(), exact.format(), format_float(error)])

        summary = validate_stream(
            events,
            config.window,
            config.estimator_config(),
            emit_every=config.emit_every,
            verify_every=config.verify_every,
            on_step=emit,
        )
        sink.comment("avg_rel_error", format_float(summary.avg_rel_error))
        sink.comment("max_rel_error", format_float(summary.max_rel_error))
        sink.comment("breaches", str(summary.breaches))

    if summary.breaches:
        raise GuaranteeBreachError(
            f"{summary.breaches} windows exceed the error guarantee, first at event {summary.first_breach_index}"
        )
    return 0


def bench_mode(config: RunConfig) -> int:
    """Time estimator against recomputation and write "metric,value" rows."""
    events = load_events(config.input)
    report = run_benchmark(events, config.window, config.estimator_config(), config.baseline_events)
    with open_output(config.output) as target:
        sink = CsvSink(target)
        sink.header(["metric", "value"])
        for name, value in report.model_dump().items():
            sink.row([name, format_float(value) if isinstance(value, float) else str(value)])
    return 0


def sweep_mode(config: RunConfig) -> int:
    """Run the same stream under several epsilons, one CSV row per epsilon."""
    events = load_events(config.input)
    epsilons = config.sweep_epsilons or [config.epsilon]
    rows = run_sweep(events, config.window, epsilons, flipped_mode=config.flip)
    with open_output(config.output) as target:
        sink = CsvSink(target)
        sink.header(["epsilon", "avg_rel_error", "max_rel_error", "mean_compressed_size", "events_per_sec"])
        for row in rows:
            sink.row([
                str(row.epsilon),
                format_float(row.avg_rel_error),
                format_float(row.max_rel_error),
                format_float(row.mean_compressed_size),
                format_float(row.events_per_sec),
            ])
    return 0


def gen_synthetic(params: GenParams, output: Optional[Path] = None) -> int:
    """Write a synthetic "score,label" stream."""
    scores, labels = generate_arrays(params)
    with open_output(output) as target:
        count = write_events(target, scores, labels)
    logger.info(
        f"Generated {count} events (positive_rate={params.positive_rate}, "
        f"separation={params.separation}, seed={params.seed})"
    )
    return 0
