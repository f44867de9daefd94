"""
Scenario tree domain models.
"""
from typing import Dict, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator

from .arbitrage import MarketClass
from .geometry import Point
from .measures import PriorFamily


class TreeNode(BaseModel):
    """Node of a scenario tree with the prior family over its children."""

    model_config = ConfigDict(frozen=True)

    id: int
    depth: int = Field(..., ge=0, description="Time index t")
    price: Point = Field(..., min_length=1, description="Discounted prices S_t")
    children: Tuple[int, ...] = Field((), description="Ordered child node ids")
    child_priors: Optional[PriorFamily] = Field(None, description="Priors over the children")

    @field_validator("price", mode="before")
    @classmethod
    def lift_scalar_price(cls, price):
        if isinstance(price, (int, float)):
            return (float(price),)
        return tuple(float(v) for v in price)

    @property
    def is_leaf(self) -> bool:
        return not self.children


class ScenarioTree(BaseModel):
    """Rooted tree of nodes with horizon T."""

    model_config = ConfigDict(frozen=True)

    nodes: Dict[int, TreeNode]
    horizon: int = Field(..., ge=0)

    @property
    def dim(self) -> int:
        return len(next(iter(self.nodes.values())).price)


class NodeVerdict(BaseModel):
    model_config = ConfigDict(frozen=True)

    node_id: int
    verdict: MarketClass


class GlobalReport(BaseModel):
    """Global AIP / NA verdicts with every failing reachable node."""

    model_config = ConfigDict(frozen=True)

    global_aip: bool
    global_na: bool
    failing_nodes: Tuple[NodeVerdict, ...] = ()

    @property
    def ip_nodes(self) -> Tuple[int, ...]:
        return tuple(v.node_id for v in self.failing_nodes if v.verdict is MarketClass.IP)


class NodeHedge(BaseModel):
    """Backward superhedging value at one node.

    Unreachable nodes are unconstrained: value and theta stay empty.
    """

    model_config = ConfigDict(frozen=True)

    node_id: int
    depth: int
    reachable: bool
    value: Optional[float] = None
    theta: Optional[Point] = None
