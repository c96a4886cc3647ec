"""
Count-based sliding windows over a labeled score stream.

SlidingAucEstimator couples a FIFO of the last k events to a CompressedAuc;
ExactSlidingAuc is the recompute-from-scratch baseline that keeps only the
search tree and rebuilds AUC on every query.
"""
import logging
from collections import deque
from typing import Deque, Iterator, Optional

from app.core.errors import ConfigurationError
from app.models.events import AucValue, LabeledScore, require_finite
from app.models.schemas import EstimatorConfig
from app.services.estimator import CompressedAuc, InvariantReport
from app.structures.stats_tree import StatsTree

logger = logging.getLogger(__name__)


def _check_capacity(capacity: int) -> int:
    if isinstance(capacity, bool) or not isinstance(capacity, int) or capacity < 1:
        raise ConfigurationError(f"window capacity must be a positive integer, got {capacity!r}")
    return capacity


class SlidingAucEstimator:
    """
    Approximate AUC over the last `capacity` events.

    During warm-up (fewer than capacity events) estimates cover the current
    contents; callers can gate on `is_full`.
    """

    def __init__(self, capacity: int, config: Optional[EstimatorConfig] = None):
        """
        Args:
            capacity: Window size k
            config: Estimator settings (epsilon, flipped mode)
        """
        self.capacity = _check_capacity(capacity)
        self.config = config or EstimatorConfig()
        self._buffer: Deque[LabeledScore] = deque()
        self.estimator = CompressedAuc(self.config)
        logger.info(
            f"SlidingAucEstimator initialized with capacity={self.capacity}, "
            f"epsilon={self.config.epsilon}, flipped_mode={self.config.flipped_mode}"
        )

    def __len__(self) -> int:
        return len(self._buffer)

    def __iter__(self) -> Iterator[LabeledScore]:
        return iter(self._buffer)

    @property
    def is_full(self) -> bool:
        return len(self._buffer) == self.capacity

    def push(self, event: LabeledScore) -> Optional[LabeledScore]:
        """
        Append an event, evicting the oldest one when the window is full.

        Args:
            event: Incoming event

        Returns:
            The evicted event, or None during warm-up
        """
        require_finite(event.score)
        evicted = None
        if len(self._buffer) == self.capacity:
            evicted = self._buffer.popleft()
            self.estimator.remove(evicted)
        self._buffer.append(event)
        self.estimator.add(event)
        return evicted

    def estimate(self) -> AucValue:
        return self.estimator.estimate()

    def exact(self) -> AucValue:
        return self.estimator.exact()

    def compressed_size(self) -> int:
        return self.estimator.compressed_size()

    def verify_invariants(self) -> InvariantReport:
        report = self.estimator.verify_invariants()
        if not report.ok:
            return report
        tree = self.estimator.tree
        positives = sum(1 for event in self._buffer if event.is_positive)
        if (tree.total_pos, tree.total_neg) != (positives, len(self._buffer) - positives):
            return InvariantReport(False, "tree totals differ from window contents")
        if len(self._buffer) > self.capacity:
            return InvariantReport(False, "window exceeds its capacity")
        return report


class ExactSlidingAuc:
    """Baseline: the same window, with AUC recomputed in O(k) per query."""

    def __init__(self, capacity: int):
        self.capacity = _check_capacity(capacity)
        self._buffer: Deque[LabeledScore] = deque()
        self.tree = StatsTree()

    def __len__(self) -> int:
        return len(self._buffer)

    def push(self, event: LabeledScore) -> Optional[LabeledScore]:
        require_finite(event.score)
        evicted = None
        if len(self._buffer) == self.capacity:
            evicted = self._buffer.popleft()
            if evicted.is_positive:
                self.tree.remove_tree_pos(evicted.score)
            else:
                self.tree.remove_tree_neg(evicted.score)
        self._buffer.append(event)
        if event.is_positive:
            self.tree.add_tree_pos(event.score)
        else:
            self.tree.add_tree_neg(event.score)
        return evicted

    def exact(self) -> AucValue:
        return self.tree.exact_auc()
