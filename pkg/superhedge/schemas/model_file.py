"""
Model file schemas, versioned by the top-level "schema" field.
"""
from typing import Annotated, Dict, List, Literal, Optional, Union

from pydantic import BaseModel, BeforeValidator, ConfigDict, Field, TypeAdapter

from .payoff import PayoffSpec


def _lift(value):
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return [value]
    return value


# a bare number is a one-asset price vector
Prices = Annotated[List[float], BeforeValidator(_lift)]
WeightRow = Annotated[List[float], Field(min_length=1)]


class AtomSpec(BaseModel):
    """Terminal prices at one atom, with an optional per-atom claim value."""

    model_config = ConfigDict(extra="forbid", allow_inf_nan=False, populate_by_name=True)

    values: Prices = Field(..., alias="Y", min_length=1)
    label: Optional[str] = None
    claim: Optional[float] = None


class OnePeriodModelFile(BaseModel):
    """One-period market file."""

    model_config = ConfigDict(extra="forbid", allow_inf_nan=False, populate_by_name=True)

    schema_version: Literal[1] = Field(..., alias="schema")
    kind: Literal["one_period"]
    d: int = Field(..., ge=1)
    y: Prices = Field(..., min_length=1)
    atoms: List[AtomSpec] = Field(..., min_length=1)
    priors: List[WeightRow] = Field(..., min_length=1)
    payoff: Optional[PayoffSpec] = None


class NodeSpec(BaseModel):
    model_config = ConfigDict(extra="forbid", allow_inf_nan=False)

    id: int
    depth: int = Field(..., ge=0)
    price: Prices = Field(..., min_length=1)
    children: List[int] = []
    child_priors: Optional[List[WeightRow]] = Field(None, min_length=1)


class TreeModelFile(BaseModel):
    """Scenario tree file."""

    model_config = ConfigDict(extra="forbid", allow_inf_nan=False, populate_by_name=True)

    schema_version: Literal[1] = Field(..., alias="schema")
    kind: Literal["tree"]
    horizon: int = Field(..., ge=0)
    nodes: List[NodeSpec] = Field(..., min_length=1)
    terminal_payoff: Optional[Dict[int, float]] = Field(None, description="Payoff per leaf id")
    payoff: Optional[PayoffSpec] = None


ModelFile = Annotated[Union[OnePeriodModelFile, TreeModelFile], Field(discriminator="kind")]

model_file_adapter = TypeAdapter(ModelFile)
