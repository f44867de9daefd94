"""
Grid oracle - Brute-force minimisation of hedge costs over a zooming theta grid.
"""
import itertools
import logging
from typing import Callable, Tuple

import numpy as np

from ..config import config
from ..models import Claim, OnePeriodMarket, Point
from .pricing_service import PricingService

logger = logging.getLogger(__name__)


class GridOracle:
    """Independent check of LP prices by exhaustive search over strategies."""

    def __init__(
        self,
        pricing: PricingService = None,
        radius: float = None,
        step: float = None,
        max_points: int = None,
        zoom_rounds: int = None,
    ):
        self.pricing = pricing or PricingService()
        self.radius = config.ORACLE_GRID_RADIUS if radius is None else radius
        self.step = config.ORACLE_GRID_STEP if step is None else step
        self.max_points = config.ORACLE_MAX_POINTS if max_points is None else max_points
        self.zoom_rounds = config.ORACLE_ZOOM_ROUNDS if zoom_rounds is None else zoom_rounds

    def minimize(self, cost: Callable[[np.ndarray], np.ndarray], dim: int) -> Tuple[float, Point]:
        """
        Minimize a vectorised cost over theta in [-radius, radius]^dim.

        The first round uses the configured step where the point budget allows; each
        later round recentres a finer grid on the best point found so far.

        Args:
            cost: Maps a (n, dim) array of strategies to n costs
            dim: Dimension of theta

        Returns:
            (best cost, best theta)
        """
        budget = max(3, int(self.max_points ** (1.0 / dim)))
        per_axis = min(budget, int(round(2.0 * self.radius / self.step)) + 1)
        center = np.zeros(dim)
        half_width = self.radius
        best_value, best_theta = float("inf"), center
        for round_index in range(max(1, self.zoom_rounds)):
            axes = [np.linspace(c - half_width, c + half_width, per_axis) for c in center]
            grid = np.array(list(itertools.product(*axes)))
            values = cost(grid)
            k = int(np.argmin(values))
            if values[k] < best_value:
                best_value, best_theta = float(values[k]), grid[k]
            spacing = 2.0 * half_width / (per_axis - 1)
            logger.debug(f"Oracle round {round_index}: spacing {spacing:.3e}, best {best_value!r}")
            if spacing <= 1e-12 * max(1.0, float(np.abs(best_theta).max())):
                break
            center, half_width, per_axis = best_theta, 2.0 * spacing, budget
        return best_value, tuple(float(t) for t in best_theta)

    def superhedge_minimum(self, market: OnePeriodMarket, claim: Claim) -> Tuple[float, Point]:
        """Grid minimum of theta -> essup(Z - theta dY)."""
        atoms, z = self.pricing.claim_values(market, claim)
        increments = np.array([market.increment(j) for j in atoms])
        return self.minimize(lambda grid: (z[None, :] - grid @ increments.T).max(axis=1), market.d)
