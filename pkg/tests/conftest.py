"""
Shared fixtures: seeded random sources and stream builders.
"""
import random
from typing import List

import pytest

from app.models.events import Label, LabeledScore
from app.models.schemas import EstimatorConfig, GenParams
from app.services.estimator import CompressedAuc
from app.services.synthetic import generate_events


def random_events(rng: random.Random, count: int, grid: int = 0, positive_rate: float = 0.4) -> List[LabeledScore]:
    """
    Random events; with grid > 0 scores are drawn from {0, ..., grid - 1}
    so that ties are frequent.
    """
    events = []
    for _ in range(count):
        score = float(rng.randrange(grid)) if grid else rng.gauss(0.0, 1.0)
        label = Label.POSITIVE if rng.random() < positive_rate else Label.NEGATIVE
        events.append(LabeledScore(score, label))
    return events


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20240611)


@pytest.fixture
def synthetic_stream():
    """Factory for seeded synthetic streams."""
    def _build(events: int = 2000, positive_rate: float = 0.3, separation: float = 1.5, seed: int = 0):
        return generate_events(GenParams(events=events, positive_rate=positive_rate,
                                         separation=separation, seed=seed))
    return _build


@pytest.fixture
def make_estimator():
    def _build(epsilon="0.1", flipped_mode: bool = False) -> CompressedAuc:
        return CompressedAuc(EstimatorConfig(epsilon=epsilon, flipped_mode=flipped_mode))
    return _build


def pos(score: float) -> LabeledScore:
    return LabeledScore(score, Label.POSITIVE)


def neg(score: float) -> LabeledScore:
    return LabeledScore(score, Label.NEGATIVE)
