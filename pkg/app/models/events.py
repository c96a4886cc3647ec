"""
Stream event types and the AUC result domain.

Score convention: the larger the score, the more the classifier believes the
label is NEGATIVE. Positives are therefore expected to carry low scores, and
AUC is the probability that a random negative outscores a random positive
(ties count one half).
"""
import math
from dataclasses import dataclass
from enum import IntEnum
from fractions import Fraction
from typing import NamedTuple, Optional

from app.core.errors import RejectedInputError


class Label(IntEnum):
    """Binary ground-truth label. Wire encoding is 0/1 with 1 = positive."""
    NEGATIVE = 0
    POSITIVE = 1

    def flipped(self) -> "Label":
        return Label.NEGATIVE if self is Label.POSITIVE else Label.POSITIVE


def require_finite(score: float) -> float:
    """Return score as float, rejecting NaN and infinities."""
    try:
        value = float(score)
    except (TypeError, ValueError) as e:
        raise RejectedInputError(f"score is not a number: {score!r}") from e
    if not math.isfinite(value):
        raise RejectedInputError(f"score must be finite, got {value!r}")
    return value


@dataclass(frozen=True)
class LabeledScore:
    """One stream event: a classifier score plus its binary label."""
    score: float
    label: Label

    def __post_init__(self) -> None:
        object.__setattr__(self, "score", require_finite(self.score))
        try:
            object.__setattr__(self, "label", Label(self.label))
        except ValueError as e:
            raise RejectedInputError(f"label must be 0 or 1, got {self.label!r}") from e

    @property
    def is_positive(self) -> bool:
        return self.label is Label.POSITIVE

    def flipped(self) -> "LabeledScore":
        """Same score with the label exchanged."""
        return LabeledScore(self.score, self.label.flipped())


@dataclass(frozen=True)
class AucValue:
    """
    AUC result: an exact rational in [0, 1], or undefined when the window
    lacks either class (normalization factor of zero).
    """
    ratio: Optional[Fraction] = None

    @classmethod
    def undefined(cls) -> "AucValue":
        return cls(None)

    @classmethod
    def from_counts(cls, doubled_sum: int, positives: int, negatives: int) -> "AucValue":
        """
        Build from an accumulator scaled by 2 and the class totals.

        Args:
            doubled_sum: Sum of (2*HP + p) * n over the enumerated groups
            positives: Number of positive labels
            negatives: Number of negative labels

        Returns:
            Defined value doubled_sum / (2 * positives * negatives), or undefined
        """
        normalizer = positives * negatives
        if normalizer == 0:
            return cls(None)
        return cls(Fraction(doubled_sum, 2 * normalizer))

    @property
    def is_defined(self) -> bool:
        return self.ratio is not None

    @property
    def value(self) -> Optional[float]:
        return None if self.ratio is None else float(self.ratio)

    def complement(self) -> "AucValue":
        """1 - auc, used by the flipped-label estimate."""
        if self.ratio is None:
            return self
        return AucValue(1 - self.ratio)

    def format(self) -> str:
        """CSV rendering: shortest float repr, or the literal nan."""
        return "nan" if self.ratio is None else repr(float(self.ratio))


class NodeKey(NamedTuple):
    """
    Tree key. Tier -1 is the lower sentinel, tier 1 the upper sentinel and
    tier 0 a finite score, so plain tuple comparison gives the total order.
    """
    tier: int
    score: float

    @property
    def is_sentinel(self) -> bool:
        return self.tier != 0


MIN_KEY = NodeKey(-1, 0.0)
MAX_KEY = NodeKey(1, 0.0)


def finite_key(score: float) -> NodeKey:
    """Key for a finite score; non-finite input is rejected."""
    return NodeKey(0, require_finite(score))
