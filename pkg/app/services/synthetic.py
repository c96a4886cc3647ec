"""
Synthetic labeled score streams.

Labels are Bernoulli(positive_rate); scores are unit-variance normals whose
means sit separation/2 below (positives) or above (negatives) zero, so that
positives carry lower scores as the score convention requires.
"""
import logging
from typing import List

import numpy as np

from app.models.events import Label, LabeledScore
from app.models.schemas import GenParams

logger = logging.getLogger(__name__)


def generate_arrays(params: GenParams) -> "tuple[np.ndarray, np.ndarray]":
    """
    Draw a stream as arrays.

    Returns:
        (scores, labels) with labels in {0, 1}
    """
    rng = np.random.default_rng(params.seed)
    labels = (rng.random(params.events) < params.positive_rate).astype(np.int8)
    centers = np.where(labels == 1, -params.separation / 2.0, params.separation / 2.0)
    scores = rng.normal(loc=centers, scale=1.0)
    logger.debug(f"Generated {params.events} events with {int(labels.sum())} positives (seed={params.seed})")
    return scores, labels


def generate_events(params: GenParams) -> List[LabeledScore]:
    scores, labels = generate_arrays(params)
    return [LabeledScore(float(s), Label(int(l))) for s, l in zip(scores, labels)]
