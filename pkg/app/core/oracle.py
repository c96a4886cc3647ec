"""
Exact AUC oracles over a finite collection of events.

Both functions compute the same statistic by independent routes and are used
to validate the streaming estimator.
"""
import math
from fractions import Fraction
from itertools import groupby
from typing import Iterable, List, Sequence

import numpy as np

from app.models.events import AucValue, LabeledScore, require_finite


def _validated(events: Iterable[LabeledScore]) -> List[LabeledScore]:
    checked = list(events)
    for event in checked:
        require_finite(event.score)
    return checked


def exact_auc(events: Iterable[LabeledScore]) -> AucValue:
    """
    Compute AUC by sorting and sweeping over distinct scores.

    For each distinct score s with p positives and n negatives, adds
    (2 * HP(s) + p) * n where HP(s) counts positives strictly below s.
    The doubled integer sum is divided by 2 * #pos * #neg at the end.

    Args:
        events: Any iterable of LabeledScore (empty allowed)

    Returns:
        AucValue, undefined when either class is absent
    """
    ordered = sorted(_validated(events), key=lambda e: e.score)

    head_pos = 0
    total_neg = 0
    doubled = 0
    for _, group in groupby(ordered, key=lambda e: e.score):
        pos = neg = 0
        for event in group:
            if event.is_positive:
                pos += 1
            else:
                neg += 1
        doubled += (2 * head_pos + pos) * neg
        head_pos += pos
        total_neg += neg

    return AucValue.from_counts(doubled, head_pos, total_neg)


def pairwise_auc_oracle(events: Iterable[LabeledScore]) -> AucValue:
    """
    Brute-force AUC over all (positive, negative) pairs.

    A pair scores 1 when the negative outscores the positive, 1/2 on a tie
    and 0 otherwise. Quadratic in the input size; meant for tests.
    """
    checked = _validated(events)
    pos = np.array([e.score for e in checked if e.is_positive], dtype=float)
    neg = np.array([e.score for e in checked if not e.is_positive], dtype=float)
    if pos.size == 0 or neg.size == 0:
        return AucValue.undefined()

    greater = int(np.count_nonzero(neg[np.newaxis, :] > pos[:, np.newaxis]))
    ties = int(np.count_nonzero(neg[np.newaxis, :] == pos[:, np.newaxis]))
    return AucValue.from_counts(2 * greater + ties, int(pos.size), int(neg.size))


def relative_error(estimate: AucValue, exact: AucValue, flipped: bool = False) -> float:
    """
    Relative error of an estimate against the exact value.

    Measured against auc, or against 1 - auc for flipped-label estimates.
    Zero when both agree; infinite when the reference is zero and they differ.
    NaN when the exact value is undefined.
    """
    if not exact.is_defined or not estimate.is_defined:
        return math.nan
    reference = (1 - exact.ratio) if flipped else exact.ratio
    diff = abs(estimate.ratio - exact.ratio)
    if diff == 0:
        return 0.0
    if reference == 0:
        return math.inf
    return float(Fraction(diff) / reference)


def within_guarantee(estimate: AucValue, exact: AucValue, epsilon: Fraction, flipped: bool = False) -> bool:
    """Exact-arithmetic check of |est - auc| <= eps/2 * auc (or * (1 - auc) when flipped)."""
    if not exact.is_defined:
        return not estimate.is_defined
    if not estimate.is_defined:
        return False
    reference = (1 - exact.ratio) if flipped else exact.ratio
    return abs(estimate.ratio - exact.ratio) <= epsilon / 2 * reference


def events_from_pairs(pairs: Sequence) -> List[LabeledScore]:
    """Convenience constructor from (score, label) pairs."""
    return [LabeledScore(score, label) for score, label in pairs]
