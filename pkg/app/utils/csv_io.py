"""
CSV reading and writing for event streams.

Input rows are "score,label" with label 0 or 1 (1 = positive). Lines starting
with "#" and blank lines are skipped. A first data row is a header only when
neither field parses (e.g. "score,label"). Files opened with
errors="surrogateescape" get undecodable bytes reported on the right line.
"""
import csv
import logging
import math
from typing import IO, Iterable, Iterator, Sequence

from app.core.errors import MalformedRowError
from app.models.events import Label, LabeledScore

logger = logging.getLogger(__name__)

LABELS = {"0": Label.NEGATIVE, "1": Label.POSITIVE}


def _is_number(text: str) -> bool:
    try:
        float(text)
    except ValueError:
        return False
    return True


def _is_header(fields: Sequence[str]) -> bool:
    return not _is_number(fields[0].strip()) and fields[-1].strip() not in LABELS


def _lines(stream: IO[str]) -> Iterator["tuple[int, str]"]:
    """Numbered lines; decoding failures become malformed rows."""
    lines = iter(stream)
    line_number = 0
    while True:
        try:
            line = next(lines)
        except StopIteration:
            return
        except UnicodeDecodeError:
            raise MalformedRowError(line_number + 1, "invalid UTF-8") from None
        line_number += 1
        try:
            line.encode("utf-8")
        except UnicodeEncodeError:
            raise MalformedRowError(line_number, "invalid UTF-8") from None
        yield line_number, line


def read_events(stream: IO[str]) -> Iterator[LabeledScore]:
    """
    Parse events lazily from a text stream.

    Raises:
        MalformedRowError: with the 1-based line number of the offending row
    """
    header_allowed = True
    for line_number, line in _lines(stream):
        text = line.strip()
        if not text or text.startswith("#"):
            continue
        fields = next(csv.reader([text]))
        if header_allowed:
            header_allowed = False
            if fields and _is_header(fields):
                logger.debug(f"Skipping header row {text!r}")
                continue
        if len(fields) != 2:
            raise MalformedRowError(line_number, f"expected 2 fields, got {len(fields)}", text)
        score_text, label_text = fields[0].strip(), fields[1].strip()
        try:
            score = float(score_text)
        except ValueError:
            raise MalformedRowError(line_number, f"score {score_text!r} is not a number", text) from None
        if not math.isfinite(score):
            raise MalformedRowError(line_number, f"score {score_text!r} is not finite", text)
        if label_text not in LABELS:
            raise MalformedRowError(line_number, f"label {label_text!r} is not 0 or 1", text)
        yield LabeledScore(score, LABELS[label_text])


def format_float(value: float) -> str:
    """Shortest round-tripping representation, nan for missing values."""
    if value is None or math.isnan(value):
        return "nan"
    return repr(float(value))


class CsvSink:
    """Thin csv.writer wrapper with LF line endings."""

    def __init__(self, stream: IO[str]):
        self.stream = stream
        self._writer = csv.writer(stream, lineterminator="\n")

    def header(self, names: Sequence[str]) -> None:
        self._writer.writerow(names)

    def row(self, values: Iterable) -> None:
        self._writer.writerow(list(values))

    def comment(self, name: str, value: str) -> None:
        self.stream.write(f"# {name},{value}\n")


def write_events(stream: IO[str], scores: Sequence[float], labels: Sequence[int]) -> int:
    """Write a "score,label" CSV; returns the number of rows written."""
    sink = CsvSink(stream)
    sink.header(["score", "label"])
    count = 0
    for score, label in zip(scores, labels):
        sink.row([repr(float(score)), int(label)])
        count += 1
    return count
