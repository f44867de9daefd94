"""
Pricing service - One-period superhedging prices, conjugates and closedness.
"""
import logging
from typing import Sequence, Tuple, Union

import numpy as np

from ..exceptions import SolverError, ValidationError
from ..models import (
    Claim,
    Closedness,
    MembershipResult,
    OnePeriodMarket,
    PriceResult,
    PriceSetDescription,
    PriceStatus,
    SupportSet,
)
from .geometry_service import GeometryService, as_point, unique_points
from .measure_service import MeasureService, PointFunction, evaluate_at

logger = logging.getLogger(__name__)

PayoffLike = Union[Claim, PointFunction]


class PricingService:
    """Handles superhedging of contingent claims in a one-period market."""

    def __init__(self, geometry: GeometryService = None, measures: MeasureService = None):
        self.geometry = geometry or GeometryService()
        self.measures = measures or MeasureService(dedup_tolerance=self.geometry.dedup_tolerance)

    # ------------------------------------------------------------------
    # market helpers
    # ------------------------------------------------------------------

    def support(self, market: OnePeriodMarket) -> SupportSet:
        """Quasi-sure support of Y."""
        return self.measures.quasi_support(market.priors, market.Y)

    def increment_support(self, market: OnePeriodMarket) -> np.ndarray:
        """Quasi-sure support of dY as a sorted matrix."""
        atoms = self.measures.relevant_atoms(market.priors)
        return unique_points([market.increment(j) for j in atoms], self.geometry.dedup_tolerance)

    def claim_values(self, market: OnePeriodMarket, claim: Claim) -> Tuple[Tuple[int, ...], np.ndarray]:
        """
        Claim values Z(j) on the relevant atoms.

        Returns:
            (relevant atoms, Z on those atoms)

        Raises:
            ValidationError: If the claim does not cover the market
        """
        atoms = self.measures.relevant_atoms(market.priors)
        if claim.per_atom is not None:
            if len(claim.per_atom) != market.priors.atom_count:
                raise ValidationError(
                    f"Claim has {len(claim.per_atom)} values for {market.priors.atom_count} atoms.",
                    "claim_mismatch"
                )
            return atoms, np.array([claim.per_atom[j] for j in atoms])
        table = dict(claim.payoff_on_support)
        try:
            values = [evaluate_at(table, market.Y.values[j], self.geometry.dedup_tolerance) for j in atoms]
        except ValidationError as exc:
            raise ValidationError(f"Claim does not cover the support: {exc.message}", "claim_mismatch")
        return atoms, np.array(values)

    def _payoff_on_support(self, market: OnePeriodMarket, g: PayoffLike) -> Tuple[np.ndarray, np.ndarray]:
        support = self.support(market)
        if isinstance(g, Claim):
            if g.payoff_on_support is None:
                raise ValidationError("The conjugate route needs a claim of the form g(Y).", "claim_mismatch")
            g = dict(g.payoff_on_support)
        points = np.array(support.points)
        values = np.array([evaluate_at(g, p, self.geometry.dedup_tolerance) for p in support.points])
        return points, values

    # ------------------------------------------------------------------
    # operations
    # ------------------------------------------------------------------

    def superhedge_price(self, market: OnePeriodMarket, claim: Claim) -> PriceResult:
        """
        Infimum superhedging cost pi(Z) = inf_theta essup(Z - theta dY).

        The price is -inf exactly when 0 is outside the hull of supp dY, by the same
        membership test as the AIP check. Otherwise one minimax row per relevant
        atom j: offset Z(j), slope y - Y(j), with the increments shifted by the
        residual of the hull weights so that 0 lies on the hull exactly.

        Args:
            market: One-period market
            claim: Contingent claim

        Returns:
            PriceResult with the optimal hedge and its certificate

        Raises:
            ValidationError: If the claim does not match the market
            SolverError: If the minimax program is unbounded with 0 on the hull
        """
        atoms, z = self.claim_values(market, claim)
        increments = np.array([market.increment(j) for j in atoms])
        membership = self.geometry.hull_membership(increments, np.zeros(market.d))
        closedness = self._closedness(increments, membership, market.d)

        if not membership.in_hull:
            logger.info("Instantaneous profit: superhedging price is -inf")
            return PriceResult(
                price=float("-inf"),
                status=PriceStatus.INSTANTANEOUS_PROFIT,
                closedness=closedness,
                relevant_atoms=atoms,
            )

        # residual of the hull weights: zero up to roundoff unless y sits just outside
        offset = np.array(membership.barycentric_weights) @ np.array(membership.points)
        increments = increments - offset
        lp = self.geometry.solve_minimax([(float(z_j), -dy) for z_j, dy in zip(z, increments)], market.d)
        if not lp.is_optimal:
            raise SolverError("Minimax program unbounded although 0 lies in the hull.", offset=offset.tolist())

        theta = np.array(lp.minimizer)
        slack = lp.value + increments @ theta - z
        logger.info(f"Superhedging price {lp.value!r} with hedge {lp.minimizer}")
        return PriceResult(
            price=lp.value,
            status=PriceStatus.FINITE,
            theta_hat=lp.minimizer,
            closedness=closedness,
            relevant_atoms=atoms,
            certificate_slack=tuple(float(s) for s in slack),
            hedge_unique=not lp.alternative_optima,
        )

    def hedge_cost(self, market: OnePeriodMarket, claim: Claim, theta: Sequence[float]) -> float:
        """Least capital superhedging Z with the fixed strategy theta: essup(Z - theta dY)."""
        atoms, z = self.claim_values(market, claim)
        theta = as_point(theta, market.d)
        increments = np.array([market.increment(j) for j in atoms])
        return float((z - increments @ theta).max())

    def is_price(self, market: OnePeriodMarket, claim: Claim, x: float) -> bool:
        """Membership of x in Pi(Z); the infimum is attained at finite support."""
        return x >= self.superhedge_price(market, claim).price

    def fenchel_conjugate(self, market: OnePeriodMarket, g: PayoffLike, x: Sequence[float]) -> float:
        """f*(x) = max over support points z of (x . z + g(z)), with f = -g + indicator."""
        points, values = self._payoff_on_support(market, g)
        return float((points @ as_point(x, market.d) + values).max())

    def price_via_biconjugate(self, market: OnePeriodMarket, g: PayoffLike) -> float:
        """pi(g) = -f**(y): the relative concave envelope of g evaluated at y."""
        points, values = self._payoff_on_support(market, g)
        return self.geometry.concave_envelope_eval(list(zip(points, values)), market.y)

    def closedness_diagnostic(self, market: OnePeriodMarket) -> Closedness:
        """
        Closedness class of the price set, from the support of dY.

        StrictlyClosed when 0 is interior to the hull, DegenerateClosed when dY = 0 q.s.,
        NotClosed when 0 is outside the hull, BoundaryCase otherwise.
        """
        increments = self.increment_support(market)
        membership = self.geometry.hull_membership(increments, np.zeros(market.d))
        return self._closedness(increments, membership, market.d)

    def _closedness(self, increments: np.ndarray, membership: MembershipResult, d: int) -> Closedness:
        scale = max(1.0, float(np.abs(increments).max()))
        if np.abs(increments).max() <= self.geometry.tolerance:
            return Closedness.DEGENERATE_CLOSED
        if not membership.in_hull:
            return Closedness.NOT_CLOSED
        rank = np.linalg.matrix_rank(increments, tol=self.geometry.tolerance * scale)
        if membership.in_relative_interior and rank == d:
            return Closedness.STRICTLY_CLOSED
        return Closedness.BOUNDARY_CASE

    def price_set_description(self, market: OnePeriodMarket, claim: Claim) -> PriceSetDescription:
        """Pi(Z) as its lower bound and whether the bound belongs to it."""
        result = self.superhedge_price(market, claim)
        if not result.is_finite:
            return PriceSetDescription(lower_bound=result.price, closed_at_bound=None)
        return PriceSetDescription(lower_bound=result.price, closed_at_bound=True)
