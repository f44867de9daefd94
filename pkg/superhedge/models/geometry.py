"""
Convex-geometry result models.
"""
from enum import Enum
from typing import Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field

Point = Tuple[float, ...]


class LPStatus(str, Enum):
    """Outcome of the finite minimax program."""

    OPTIMAL = "Optimal"
    UNBOUNDED_BELOW = "UnboundedBelow"


class LPResult(BaseModel):
    """Result of minimizing max_j (offset_j + slope_j . theta) over theta."""

    model_config = ConfigDict(frozen=True)

    status: LPStatus = Field(..., description="Optimal or UnboundedBelow")
    value: float = Field(..., description="Optimal value, -inf when unbounded below")
    minimizer: Optional[Point] = Field(None, description="Theta achieving the minimum")
    active_rows: Tuple[int, ...] = Field((), description="Rows with zero slack at the minimizer")
    alternative_optima: bool = Field(False, description="A zero reduced cost nonbasic column exists")

    @property
    def is_optimal(self) -> bool:
        return self.status is LPStatus.OPTIMAL


class MembershipResult(BaseModel):
    """Convex-hull and relative-interior membership of a query point."""

    model_config = ConfigDict(frozen=True)

    points: Tuple[Point, ...] = Field(..., description="Deduplicated points the weights refer to")
    in_hull: bool
    in_relative_interior: bool
    barycentric_weights: Optional[Tuple[float, ...]] = Field(
        None, description="Convex weights reproducing the query point"
    )
    separator: Optional[Point] = Field(
        None, description="Direction theta with max_i(-theta.(p_i - query)) < 0 when outside"
    )
