"""
Measure service - Polar atoms, quasi-sure supports and essential suprema.
"""
import logging
from typing import Callable, Mapping, Sequence, Tuple, Union

import numpy as np

from ..config import config
from ..exceptions import ValidationError
from ..models import Point, PriorFamily, RandomVariable, SupportSet
from .geometry_service import to_points, unique_points

logger = logging.getLogger(__name__)

PointFunction = Union[Callable[[Point], float], Mapping[Point, float]]


def evaluate_at(h: PointFunction, point: Point, tolerance: float = None) -> float:
    """
    Evaluate a function given as a callable or as a point table.

    Table lookups fall back to an L-infinity match within the dedup tolerance.

    Raises:
        ValidationError: If h is undefined at the point
    """
    tolerance = config.DEDUP_TOLERANCE if tolerance is None else tolerance
    point = tuple(float(v) for v in point)
    if callable(h):
        try:
            return float(h(point))
        except KeyError:
            raise ValidationError(f"No value for support point {point}.", "missing_value", point=point)
    if point in h:
        return float(h[point])
    for key, value in h.items():
        key = tuple(np.atleast_1d(np.asarray(key, dtype=float)))
        if len(key) == len(point) and max(abs(a - b) for a, b in zip(key, point)) <= tolerance:
            return float(value)
    raise ValidationError(f"No value for support point {point}.", "missing_value", point=point)


class MeasureService:
    """Handles prior families, quasi-sure supports and essential suprema."""

    def __init__(self, polar_threshold: float = None, dedup_tolerance: float = None):
        self.polar_threshold = config.POLAR_THRESHOLD if polar_threshold is None else polar_threshold
        self.dedup_tolerance = config.DEDUP_TOLERANCE if dedup_tolerance is None else dedup_tolerance

    def relevant_atoms(self, family: PriorFamily) -> Tuple[int, ...]:
        """Atoms charged by at least one prior; the complement is polar."""
        weights = np.array([p.weights for p in family.priors])
        return tuple(int(j) for j in np.flatnonzero(weights.max(axis=0) > self.polar_threshold))

    def polar_atoms(self, family: PriorFamily) -> Tuple[int, ...]:
        relevant = set(self.relevant_atoms(family))
        return tuple(j for j in range(family.atom_count) if j not in relevant)

    def quasi_support(self, family: PriorFamily, X: RandomVariable) -> SupportSet:
        """
        Quasi-sure support of X: the deduplicated values at non-polar atoms.

        Args:
            family: Prior family
            X: Random variable over the same atoms

        Returns:
            SupportSet sorted lexicographically

        Raises:
            ValidationError: If X does not match the family's atom count
        """
        self._check_atoms(family, X)
        charged = [X.values[j] for j in self.relevant_atoms(family)]
        points = to_points(unique_points(charged, self.dedup_tolerance))
        logger.debug(f"Quasi-sure support: {len(points)} points from {len(charged)} charged atoms")
        return SupportSet(points=points)

    def essential_supremum(self, family: PriorFamily, variables: Sequence[RandomVariable]) -> float:
        """
        Least deterministic bound holding quasi-surely for every variable.

        Raises:
            ValidationError: If the list of variables is empty
        """
        return max(self._charged_values(family, variables))

    def essential_infimum(self, family: PriorFamily, variables: Sequence[RandomVariable]) -> float:
        """Greatest deterministic lower bound holding quasi-surely."""
        return min(self._charged_values(family, variables))

    def essup_of_function(self, family: PriorFamily, X: RandomVariable, h: PointFunction) -> float:
        """Supremum of h on the quasi-sure support of X."""
        support = self.quasi_support(family, X)
        return max(evaluate_at(h, point, self.dedup_tolerance) for point in support.points)

    def _charged_values(self, family: PriorFamily, variables: Sequence[RandomVariable]) -> list:
        if not variables:
            raise ValidationError(error_code="empty_family")
        atoms = self.relevant_atoms(family)
        values = []
        for variable in variables:
            self._check_atoms(family, variable)
            scalars = variable.scalars()
            values.extend(scalars[j] for j in atoms)
        return values

    def _check_atoms(self, family: PriorFamily, X: RandomVariable) -> None:
        if X.atom_count != family.atom_count:
            raise ValidationError(
                f"Variable has {X.atom_count} atoms, family has {family.atom_count}.",
                "dimension_mismatch"
            )
