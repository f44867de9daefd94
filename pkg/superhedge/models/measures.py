"""
Discrete prior families and random variables over a finite atom list.
"""
from numbers import Real
from typing import Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ..config import config
from ..exceptions import ValidationError
from .geometry import Point


class DiscreteMeasure(BaseModel):
    """A probability vector indexed by atom."""

    model_config = ConfigDict(frozen=True)

    weights: Tuple[float, ...] = Field(..., min_length=1, description="Probability mass per atom")

    @model_validator(mode="after")
    def check_probability(self) -> "DiscreteMeasure":
        if any(w < 0.0 for w in self.weights):
            raise ValidationError("Prior weights must be nonnegative.", "invalid_measure")
        if abs(sum(self.weights) - 1.0) > config.WEIGHT_SUM_TOLERANCE:
            raise ValidationError(
                f"Prior weights sum to {sum(self.weights)!r}, expected 1.", "invalid_measure"
            )
        return self


class PriorFamily(BaseModel):
    """Finite family of priors sharing one atom index set."""

    model_config = ConfigDict(frozen=True)

    atom_count: int = Field(..., ge=1)
    priors: Tuple[DiscreteMeasure, ...] = Field(..., min_length=1)

    @model_validator(mode="after")
    def check_family(self) -> "PriorFamily":
        if any(len(p.weights) != self.atom_count for p in self.priors):
            raise ValidationError(
                f"Every prior must have {self.atom_count} weights.", "invalid_measure"
            )
        if not any(w > config.POLAR_THRESHOLD for p in self.priors for w in p.weights):
            raise ValidationError("Some atom must be charged by some prior.", "invalid_measure")
        return self

    @classmethod
    def from_weights(cls, weights: Sequence[Sequence[float]]) -> "PriorFamily":
        """Build a family from raw weight vectors."""
        priors = tuple(DiscreteMeasure(weights=tuple(float(w) for w in row)) for row in weights)
        atom_count = len(priors[0].weights) if priors else 0
        return cls(atom_count=atom_count, priors=priors)


class RandomVariable(BaseModel):
    """Per-atom values in R^d; scalar inputs are stored as 1-tuples."""

    model_config = ConfigDict(frozen=True)

    values: Tuple[Point, ...] = Field(..., min_length=1)

    @field_validator("values", mode="before")
    @classmethod
    def lift_scalars(cls, values):
        return tuple(
            (float(v),) if isinstance(v, Real) else tuple(float(x) for x in v)
            for v in values
        )

    @model_validator(mode="after")
    def check_dimension(self) -> "RandomVariable":
        dims = {len(v) for v in self.values}
        if len(dims) != 1 or 0 in dims:
            raise ValidationError(error_code="dimension_mismatch")
        return self

    @property
    def dim(self) -> int:
        return len(self.values[0])

    @property
    def atom_count(self) -> int:
        return len(self.values)

    def scalars(self) -> Tuple[float, ...]:
        """Values of a scalar variable."""
        if self.dim != 1:
            raise ValidationError("Expected a scalar random variable.", "dimension_mismatch")
        return tuple(v[0] for v in self.values)


class SupportSet(BaseModel):
    """Deduplicated, lexicographically sorted quasi-sure support."""

    model_config = ConfigDict(frozen=True)

    points: Tuple[Point, ...] = Field(..., min_length=1)

    @property
    def dim(self) -> int:
        return len(self.points[0])

    def __len__(self) -> int:
        return len(self.points)
