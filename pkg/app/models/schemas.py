"""
Pydantic models for configuration validation and pipeline reports.
"""
from decimal import Decimal
from fractions import Fraction
from pathlib import Path
from typing import Annotated, List, Literal, Optional

from pydantic import BaseModel, BeforeValidator, Field, field_validator


def _decimal_from_float(value):
    # shortest repr keeps 0.3 as 0.3 instead of its binary expansion
    if isinstance(value, float):
        return str(value)
    return value


Epsilon = Annotated[
    Decimal,
    BeforeValidator(_decimal_from_float),
    Field(ge=0, decimal_places=6),
]


class EstimatorConfig(BaseModel):
    """Compression parameter and estimate direction of one estimator."""
    model_config = {"frozen": True}

    epsilon: Epsilon = Field(
        Decimal("0.1"),
        description="Relative error budget; the estimate is within epsilon/2 of the exact AUC"
    )
    flipped_mode: bool = Field(
        False,
        description="Estimate 1 - AUC of the label-flipped window, bounding error by (1 - auc) * epsilon / 2"
    )

    @property
    def alpha(self) -> Fraction:
        """Compression factor 1 + epsilon as an exact rational."""
        return 1 + Fraction(self.epsilon)


class RunConfig(BaseModel):
    """Validated settings of one CLI invocation."""
    mode: Literal["run", "validate", "bench", "gen", "sweep"]
    window: int = Field(1000, gt=0, description="Sliding window capacity k")
    epsilon: Epsilon = Decimal("0.1")
    emit_every: int = Field(1, gt=0)
    flip: bool = False
    verify_every: int = Field(0, ge=0)
    input: Optional[Path] = Field(None, description="Input CSV; standard input when omitted")
    output: Optional[Path] = Field(None, description="Output CSV; standard output when omitted")
    baseline_events: int = Field(0, ge=0, description="Events timed for the recompute baseline, 0 = all")
    sweep_epsilons: List[Epsilon] = Field(default_factory=list)

    @field_validator("sweep_epsilons", mode="before")
    @classmethod
    def _split_epsilons(cls, value):
        if isinstance(value, str):
            return [part.strip() for part in value.split(",") if part.strip()]
        return value

    def estimator_config(self, epsilon: Optional[Decimal] = None) -> EstimatorConfig:
        return EstimatorConfig(
            epsilon=self.epsilon if epsilon is None else epsilon,
            flipped_mode=self.flip
        )


class GenParams(BaseModel):
    """Parameters of the synthetic stream generator."""
    events: int = Field(10000, ge=0)
    positive_rate: float = Field(0.3, ge=0.0, le=1.0)
    separation: float = Field(1.5, ge=0.0, allow_inf_nan=False,
                              description="Distance between the class score means, in standard deviations")
    seed: int = Field(0, ge=0)


class ValidationSummary(BaseModel):
    """Error statistics over all windows with a defined AUC."""
    steps: int = 0
    defined_steps: int = 0
    avg_rel_error: float = 0.0
    max_rel_error: float = 0.0
    breaches: int = 0
    first_breach_index: Optional[int] = None


class BenchReport(BaseModel):
    """Timing comparison of the estimator against exact recomputation."""
    window: int
    epsilon: Decimal
    events: int
    approx_events: int
    baseline_events: int
    approx_events_per_sec: float
    baseline_events_per_sec: float
    speedup: float
    mean_compressed_size: float
    avg_rel_error: float
    max_rel_error: float


class SweepRow(BaseModel):
    """One epsilon of an error-versus-epsilon sweep."""
    epsilon: Decimal
    avg_rel_error: float
    max_rel_error: float
    mean_compressed_size: float
    events_per_sec: float
