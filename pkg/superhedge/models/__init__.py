"""
Models package - Domain models.
"""
from .geometry import Point, LPStatus, LPResult, MembershipResult
from .measures import DiscreteMeasure, PriorFamily, RandomVariable, SupportSet
from .market import (
    OnePeriodMarket,
    Claim,
    PriceStatus,
    Closedness,
    PriceResult,
    PriceSetDescription,
)
from .arbitrage import MarketClass, IpCertificate, AipCheck, NaCheck, ArbitrageReport
from .tree import TreeNode, ScenarioTree, NodeVerdict, GlobalReport, NodeHedge

__all__ = [
    "Point",
    "LPStatus",
    "LPResult",
    "MembershipResult",
    "DiscreteMeasure",
    "PriorFamily",
    "RandomVariable",
    "SupportSet",
    "OnePeriodMarket",
    "Claim",
    "PriceStatus",
    "Closedness",
    "PriceResult",
    "PriceSetDescription",
    "MarketClass",
    "IpCertificate",
    "AipCheck",
    "NaCheck",
    "ArbitrageReport",
    "TreeNode",
    "ScenarioTree",
    "NodeVerdict",
    "GlobalReport",
    "NodeHedge",
]
