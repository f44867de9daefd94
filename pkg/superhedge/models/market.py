"""
One-period market, contingent claims and superhedging results.
"""
from enum import Enum
from typing import Callable, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ..exceptions import ValidationError
from .geometry import Point
from .measures import PriorFamily, RandomVariable


class OnePeriodMarket(BaseModel):
    """Initial prices y, terminal prices Y per atom and the prior family."""

    model_config = ConfigDict(frozen=True)

    d: int = Field(..., ge=1, description="Number of risky assets")
    y: Point = Field(..., description="Initial discounted prices")
    Y: RandomVariable = Field(..., description="Terminal discounted prices per atom")
    priors: PriorFamily

    @field_validator("y", mode="before")
    @classmethod
    def lift_scalar_price(cls, y):
        if isinstance(y, (int, float)):
            return (float(y),)
        return tuple(float(v) for v in y)

    @model_validator(mode="after")
    def check_market(self) -> "OnePeriodMarket":
        if len(self.y) != self.d or self.Y.dim != self.d:
            raise ValidationError(
                f"Prices must have {self.d} coordinates.", "invalid_market"
            )
        if self.Y.atom_count != self.priors.atom_count:
            raise ValidationError(
                f"Y has {self.Y.atom_count} atoms but the priors have {self.priors.atom_count}.",
                "invalid_market"
            )
        if any(v < 0.0 for v in self.y) or any(v < 0.0 for p in self.Y.values for v in p):
            raise ValidationError("Prices must be nonnegative.", "invalid_market")
        return self

    def increment(self, atom: int) -> Point:
        """Delta Y at one atom."""
        return tuple(z - y for z, y in zip(self.Y.values[atom], self.y))


class Claim(BaseModel):
    """Contingent claim, either g(Y) on the support or a general per-atom payoff."""

    model_config = ConfigDict(frozen=True)

    payoff_on_support: Optional[Tuple[Tuple[Point, float], ...]] = Field(
        None, description="Pairs (z, g(z)) covering the support of Y"
    )
    per_atom: Optional[Tuple[float, ...]] = Field(None, description="Z(j) for every atom")

    @model_validator(mode="after")
    def check_one_form(self) -> "Claim":
        if (self.payoff_on_support is None) == (self.per_atom is None):
            raise ValidationError(
                "A claim is either a payoff on the support or a per-atom vector.", "claim_mismatch"
            )
        return self

    @classmethod
    def from_payoff(cls, payoff: Callable[[Point], float], points: Sequence[Point]) -> "Claim":
        """Tabulate a payoff function on the given support points."""
        table = tuple((tuple(p), float(payoff(tuple(p)))) for p in points)
        return cls(payoff_on_support=table)

    @classmethod
    def from_atoms(cls, values: Sequence[float]) -> "Claim":
        return cls(per_atom=tuple(float(v) for v in values))


class PriceStatus(str, Enum):
    FINITE = "Finite"
    INSTANTANEOUS_PROFIT = "InstantaneousProfit"


class Closedness(str, Enum):
    """Closedness class of the price set, a property of the market."""

    STRICTLY_CLOSED = "StrictlyClosed"
    DEGENERATE_CLOSED = "DegenerateClosed"
    BOUNDARY_CASE = "BoundaryCase"
    NOT_CLOSED = "NotClosed"


class PriceResult(BaseModel):
    """Superhedging price with its optimal hedge and certificate."""

    model_config = ConfigDict(frozen=True)

    price: float = Field(..., description="pi(Z), -inf under instantaneous profit")
    status: PriceStatus
    theta_hat: Optional[Point] = Field(None, description="Optimal hedge")
    closedness: Closedness
    relevant_atoms: Tuple[int, ...] = Field((), description="Atoms the slacks refer to")
    certificate_slack: Tuple[float, ...] = Field(
        (), description="price + theta_hat . dY(j) - Z(j) per relevant atom"
    )
    hedge_unique: bool = Field(True, description="False when the LP has alternative optima")

    @property
    def is_finite(self) -> bool:
        return self.status is PriceStatus.FINITE


class PriceSetDescription(BaseModel):
    """Pi(Z) = [lower_bound, inf) or (lower_bound, inf)."""

    model_config = ConfigDict(frozen=True)

    lower_bound: float
    closed_at_bound: Optional[bool] = Field(None, description="None when the bound is -inf")
