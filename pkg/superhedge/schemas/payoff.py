"""
Payoff file schemas.
"""
from typing import List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator


class TableEntry(BaseModel):
    """One (point, value) pair of a tabulated payoff."""

    model_config = ConfigDict(extra="forbid", allow_inf_nan=False)

    point: List[float] = Field(..., min_length=1)
    value: float


class PayoffSpec(BaseModel):
    """Payoff g(z) of a claim Z = g(Y): call, put, linear or table."""

    model_config = ConfigDict(extra="forbid", allow_inf_nan=False)

    type: Literal["call", "put", "linear", "table"]
    strike: Optional[float] = Field(None, ge=0.0)
    asset: int = Field(0, ge=0, description="Asset index for calls and puts")
    coeffs: Optional[List[float]] = Field(None, min_length=1)
    table: Optional[List[TableEntry]] = Field(None, min_length=1)

    @model_validator(mode="after")
    def check_fields(self) -> "PayoffSpec":
        required = {"call": "strike", "put": "strike", "linear": "coeffs", "table": "table"}[self.type]
        if getattr(self, required) is None:
            raise ValueError(f"A {self.type} payoff needs '{required}'")
        return self
