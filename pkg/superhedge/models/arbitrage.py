"""
Arbitrage verdicts and their certificates.
"""
from enum import Enum
from typing import Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field

from .geometry import Point


class MarketClass(str, Enum):
    NA = "NA"
    AIP_ONLY = "AIP_only"
    IP = "IP"


class IpCertificate(BaseModel):
    """Strategy theta with theta . dY >= epsilon on every relevant atom."""

    model_config = ConfigDict(frozen=True)

    theta: Point
    epsilon: float = Field(..., gt=0.0)


class AipCheck(BaseModel):
    model_config = ConfigDict(frozen=True)

    holds: bool
    points: Tuple[Point, ...] = Field(..., description="Support of dY the weights refer to")
    weights: Optional[Tuple[float, ...]] = None
    ip_certificate: Optional[IpCertificate] = None


class NaCheck(BaseModel):
    model_config = ConfigDict(frozen=True)

    holds: bool
    points: Tuple[Point, ...]
    weights: Optional[Tuple[float, ...]] = Field(None, description="Strictly positive weights")
    violation: Optional[Point] = Field(
        None, description="h with h . dY >= 0 q.s. and > 0 on some non-polar atom"
    )


class ArbitrageReport(BaseModel):
    """One-period classification with certificates for each verdict."""

    model_config = ConfigDict(frozen=True)

    aip: bool
    na: bool
    support: Tuple[Point, ...] = Field(..., description="Quasi-sure support of dY")
    aip_certificate: Optional[Tuple[float, ...]] = None
    ip_certificate: Optional[IpCertificate] = None
    na_certificate: Optional[Tuple[float, ...]] = None
    na_violation: Optional[Point] = None

    @property
    def market_class(self) -> MarketClass:
        if self.na:
            return MarketClass.NA
        return MarketClass.AIP_ONLY if self.aip else MarketClass.IP
