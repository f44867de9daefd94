"""
Arbitrage service - Instantaneous profit, AIP and quasi-sure NA in one period.
"""
import logging
from typing import Sequence

import numpy as np

from ..config import config
from ..exceptions import SolverError, ValidationError
from ..models import AipCheck, ArbitrageReport, IpCertificate, MarketClass, NaCheck, OnePeriodMarket
from .geometry_service import GeometryService
from .pricing_service import PricingService

logger = logging.getLogger(__name__)


class ArbitrageService:
    """Classifies one-period markets and certifies every verdict."""

    def __init__(self, pricing: PricingService = None, certificate_tolerance: float = None):
        self.pricing = pricing or PricingService()
        self.geometry: GeometryService = self.pricing.geometry
        self.measures = self.pricing.measures
        self.certificate_tolerance = (
            config.CERTIFICATE_TOLERANCE if certificate_tolerance is None else certificate_tolerance
        )

    def check_aip(self, market: OnePeriodMarket) -> AipCheck:
        """
        AIP holds iff 0 lies in the convex hull of the support of dY.

        Args:
            market: One-period market

        Returns:
            AipCheck with barycentric weights, or an IP certificate (theta, epsilon)

        Raises:
            SolverError: If the separator fails its own verification
        """
        increments = self.pricing.increment_support(market)
        membership = self.geometry.hull_membership(increments, np.zeros(market.d))
        if membership.in_hull:
            return AipCheck(holds=True, points=membership.points, weights=membership.barycentric_weights)

        theta, epsilon = self.geometry.strict_separator(increments, np.zeros(market.d))
        gains = increments @ np.array(theta)
        if epsilon <= 0.0 or gains.min() < epsilon - self.geometry.tolerance:
            raise SolverError(
                "Instantaneous profit certificate failed verification.",
                theta=theta, epsilon=epsilon
            )
        logger.info(f"Instantaneous profit: theta={theta}, epsilon={epsilon!r}")
        return AipCheck(
            holds=False,
            points=membership.points,
            ip_certificate=IpCertificate(theta=theta, epsilon=epsilon),
        )

    def check_na(self, market: OnePeriodMarket) -> NaCheck:
        """
        Quasi-sure NA holds iff 0 lies in the relative interior of the hull of supp dY.

        Returns:
            NaCheck with strictly positive weights, or a violating direction h
        """
        increments = self.pricing.increment_support(market)
        membership = self.geometry.hull_membership(increments, np.zeros(market.d))
        if membership.in_relative_interior:
            return NaCheck(holds=True, points=membership.points, weights=membership.barycentric_weights)

        violation = self.geometry.weak_separator(increments, np.zeros(market.d))
        if violation is None:
            weights = membership.barycentric_weights
            if weights is None or min(weights) <= 0.0:
                raise SolverError("No NA violation found outside the relative interior.")
            # 0 within tolerance of the relative boundary, still charged by every point
            logger.debug(f"NA holds with smallest weight {min(weights)!r}")
            return NaCheck(holds=True, points=membership.points, weights=weights)
        gains = increments @ np.array(violation)
        tol = self.geometry.scaled_tolerance(increments)
        if gains.min() < -2.0 * tol or gains.max() <= tol:
            raise SolverError("NA violation failed verification.", violation=violation)
        logger.info(f"NA fails with direction h={violation}")
        return NaCheck(holds=False, points=membership.points, violation=violation)

    def classify(self, market: OnePeriodMarket) -> MarketClass:
        """NA, AIP_only or IP."""
        return self.report(market).market_class

    def report(self, market: OnePeriodMarket) -> ArbitrageReport:
        """Both checks with their certificates."""
        aip = self.check_aip(market)
        na = self.check_na(market) if aip.holds else NaCheck(holds=False, points=aip.points)
        report = ArbitrageReport(
            aip=aip.holds,
            na=na.holds,
            support=aip.points,
            aip_certificate=aip.weights,
            ip_certificate=aip.ip_certificate,
            na_certificate=na.weights,
            na_violation=na.violation if aip.holds else None,
        )
        self._verify(report)
        return report

    def _verify(self, report: ArbitrageReport) -> None:
        if report.na and not report.aip:
            raise SolverError("NA verdict without AIP.")
        points = np.array(report.support)
        if report.aip_certificate is not None:
            weights = np.array(report.aip_certificate)
            scale = max(1.0, float(np.abs(points).max()))
            if np.abs(weights @ points).max() > self.certificate_tolerance * scale:
                raise SolverError("AIP weights do not combine to zero.")
        if report.na_certificate is not None and min(report.na_certificate) <= 0.0:
            raise SolverError("NA weights must be strictly positive.")

    @staticmethod
    def interval_rule_1d(y: float, support: Sequence[float], d: int = 1, tolerance: float = None) -> bool:
        """
        y in [min support, max support], up to the LP tolerance scaled to max |s - y|
        as in the hull membership test.

        Raises:
            ValidationError: If d is not 1
        """
        if d != 1:
            raise ValidationError(f"The interval rule needs d = 1, got d = {d}.", "dimension_error")
        values = [float(np.atleast_1d(s)[0]) for s in support]
        if not values:
            raise ValidationError("The interval rule needs a non-empty support.", "dimension_mismatch")
        tolerance = config.LP_TOLERANCE if tolerance is None else tolerance
        y = float(y)
        slack = tolerance * max(1.0, max(abs(v - y) for v in values))
        return min(values) - slack <= y <= max(values) + slack

    def interval_rule_for_market(self, market: OnePeriodMarket) -> bool:
        """essinf Y <= y <= essup Y for a single risky asset."""
        if market.d != 1:
            raise ValidationError(f"The interval rule needs d = 1, got d = {market.d}.", "dimension_error")
        low = self.measures.essential_infimum(market.priors, [market.Y])
        high = self.measures.essential_supremum(market.priors, [market.Y])
        return self.interval_rule_1d(market.y[0], [low, high], tolerance=self.geometry.tolerance)
