"""
Geometry service - Convex-geometry and linear-programming kernels.
"""
import logging
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from ..config import config
from ..exceptions import ValidationError, SolverError
from ..models import LPResult, LPStatus, MembershipResult, Point, SupportSet
from .simplex import SimplexSolver, SimplexStatus

logger = logging.getLogger(__name__)

PointsLike = Union[SupportSet, Sequence[Sequence[float]], np.ndarray]


def as_matrix(points: PointsLike) -> np.ndarray:
    """Points as a (k, d) float matrix; scalars become 1-d points."""
    if isinstance(points, SupportSet):
        points = points.points
    try:
        matrix = np.array(points, dtype=float)
    except ValueError as exc:
        raise ValidationError(f"Points do not share a common dimension: {exc}", "dimension_mismatch")
    if matrix.ndim == 1:
        matrix = matrix.reshape(-1, 1)
    if matrix.ndim != 2 or matrix.shape[0] == 0 or matrix.shape[1] == 0:
        raise ValidationError("Expected a non-empty list of points.", "dimension_mismatch")
    return matrix


def as_point(point, dim: int) -> np.ndarray:
    vector = np.atleast_1d(np.asarray(point, dtype=float))
    if vector.shape != (dim,):
        raise ValidationError(
            f"Expected a point of dimension {dim}, got shape {vector.shape}.", "dimension_mismatch"
        )
    return vector


def to_points(matrix: np.ndarray) -> Tuple[Point, ...]:
    return tuple(tuple(float(v) for v in row) for row in matrix)


def unique_points(points: PointsLike, tolerance: float = None) -> np.ndarray:
    """
    Deduplicate points within an L-infinity tolerance, keeping the first
    representative, and sort them lexicographically.
    """
    tolerance = config.DEDUP_TOLERANCE if tolerance is None else tolerance
    matrix = as_matrix(points)
    kept = []
    for row in matrix:
        if not any(np.max(np.abs(row - other)) <= tolerance for other in kept):
            kept.append(row)
    unique = np.array(kept)
    return unique[np.lexsort(unique.T[::-1])]


class GeometryService:
    """Minimax LP, hull membership, support functions and concave envelopes."""

    def __init__(self, solver: SimplexSolver = None, dedup_tolerance: float = None):
        self.solver = solver or SimplexSolver()
        self.tolerance = self.solver.tolerance
        self.dedup_tolerance = config.DEDUP_TOLERANCE if dedup_tolerance is None else dedup_tolerance

    # ------------------------------------------------------------------
    # minimax program
    # ------------------------------------------------------------------

    def solve_minimax(self, rows: Sequence[Tuple[float, Sequence[float]]], dim: int) -> LPResult:
        """
        Minimize max_j (offset_j + slope_j . theta) over theta in R^dim.

        Epigraph form: minimize u subject to u >= offset_j + slope_j . theta,
        with theta and u split into nonnegative parts.

        Args:
            rows: Pairs (offset, slope)
            dim: Dimension of theta

        Returns:
            LPResult, UnboundedBelow with value -inf when the program has no minimum

        Raises:
            ValidationError: If rows are empty or slopes disagree on dim
        """
        if not rows:
            raise ValidationError(error_code="empty_rows")
        offsets = np.array([float(offset) for offset, _ in rows])
        slope_list = [np.atleast_1d(np.asarray(slope, dtype=float)) for _, slope in rows]
        if any(s.shape != (dim,) for s in slope_list):
            raise ValidationError(f"Every slope must have dimension {dim}.", "dimension_mismatch")
        slopes = np.vstack(slope_list)

        # identical rows only add degeneracy
        system = unique_points(np.column_stack([offsets, slopes]), self.dedup_tolerance)
        lp_offsets, lp_slopes = system[:, 0], system[:, 1:]
        m = len(lp_offsets)

        # columns: theta+ (dim), theta- (dim), u+, u-, slacks (m)
        a = np.zeros((m, 2 * dim + 2 + m))
        a[:, :dim] = lp_slopes
        a[:, dim:2 * dim] = -lp_slopes
        a[:, 2 * dim] = -1.0
        a[:, 2 * dim + 1] = 1.0
        a[:, 2 * dim + 2:] = np.eye(m)
        c = np.zeros(a.shape[1])
        c[2 * dim] = 1.0
        c[2 * dim + 1] = -1.0

        outcome = self.solver.solve(c, a, -lp_offsets)
        if outcome.status is SimplexStatus.UNBOUNDED:
            logger.debug(f"Minimax program with {m} rows is unbounded below")
            return LPResult(status=LPStatus.UNBOUNDED_BELOW, value=float("-inf"))
        if outcome.status is SimplexStatus.INFEASIBLE:
            raise SolverError("The epigraph program is always feasible.")

        theta = outcome.x[:dim] - outcome.x[dim:2 * dim]
        row_values = offsets + slopes @ theta
        value = float(row_values.max())
        scale = max(1.0, abs(value))
        active = tuple(int(j) for j in np.flatnonzero(value - row_values <= self.tolerance * scale))
        return LPResult(
            status=LPStatus.OPTIMAL,
            value=value,
            minimizer=tuple(float(t) for t in theta),
            active_rows=active,
            alternative_optima=self._has_alternative_optima(outcome, dim),
        )

    def _has_alternative_optima(self, outcome, dim: int) -> bool:
        twins = {}
        for k in range(dim):
            twins[k], twins[dim + k] = dim + k, k
        twins[2 * dim], twins[2 * dim + 1] = 2 * dim + 1, 2 * dim
        basic = set(outcome.basis)
        for j, cost in enumerate(outcome.reduced_costs):
            if j in basic or twins.get(j) in basic:
                continue
            if abs(cost) <= self.tolerance:
                return True
        return False

    # ------------------------------------------------------------------
    # hull membership and separation
    # ------------------------------------------------------------------

    def scaled_tolerance(self, diffs: np.ndarray) -> float:
        """LP tolerance scaled to the magnitude of the point differences."""
        return self.tolerance * max(1.0, float(np.abs(diffs).max(initial=0.0)))

    def hull_membership(self, points: PointsLike, query) -> MembershipResult:
        """
        Decide query in conv(points) and query in ri conv(points).

        The query is in the hull iff its L1 distance to the hull, the value of the
        strict separation program, is at most the scaled tolerance. A query within
        that distance is first projected onto the hull; the relative interior test
        then solves max t subject to lambda_i = t + mu_i, sum lambda = 1 and
        sum lambda_i p_i = query, and holds iff t* > tolerance.

        Args:
            points: Non-empty point set
            query: Point of the same dimension

        Returns:
            MembershipResult with weights inside the hull and a separator outside

        Raises:
            SolverError: If the weight program fails for a query inside the hull
        """
        unique = unique_points(points, self.dedup_tolerance)
        k, d = unique.shape
        q = as_point(query, d)

        separator, distance = self.strict_separator(unique, q)
        if distance > self.scaled_tolerance(unique - q):
            return MembershipResult(
                points=to_points(unique),
                in_hull=False,
                in_relative_interior=False,
                separator=separator,
            )
        if distance > 0.0:
            q = self._project(unique, q)
        diffs = unique - q

        # columns: t, mu_1..mu_k
        a = np.zeros((d + 1, k + 1))
        a[:d, 0] = diffs.sum(axis=0)
        a[:d, 1:] = diffs.T
        a[d, 0] = float(k)
        a[d, 1:] = 1.0
        b = np.zeros(d + 1)
        b[d] = 1.0
        c = np.zeros(k + 1)
        c[0] = -1.0

        outcome = self.solver.solve(c, a, b)
        if outcome.status is not SimplexStatus.OPTIMAL:
            raise SolverError("Weight program failed for a query on the hull.", distance=distance)

        t_star = outcome.x[0]
        weights = np.clip(t_star + outcome.x[1:], 0.0, None)
        weights = weights / weights.sum()
        return MembershipResult(
            points=to_points(unique),
            in_hull=True,
            in_relative_interior=bool(t_star > self.tolerance),
            barycentric_weights=tuple(float(w) for w in weights),
        )

    def _project(self, unique: np.ndarray, q: np.ndarray) -> np.ndarray:
        """Nearest hull point in L1: min |r|_1 subject to sum lambda_i p_i - r = q."""
        k, d = unique.shape
        # columns: lambda (k), r+ (d), r- (d)
        a = np.zeros((d + 1, k + 2 * d))
        a[:d, :k] = (unique - q).T
        a[:d, k:k + d] = -np.eye(d)
        a[:d, k + d:] = np.eye(d)
        a[d, :k] = 1.0
        b = np.zeros(d + 1)
        b[d] = 1.0
        c = np.zeros(k + 2 * d)
        c[k:] = 1.0
        outcome = self.solver.solve(c, a, b)
        if outcome.status is not SimplexStatus.OPTIMAL:
            raise SolverError("The projection program is always feasible and bounded.")
        weights = outcome.x[:k] / outcome.x[:k].sum()
        return weights @ unique

    def strict_separator(self, points: PointsLike, query) -> Tuple[Point, float]:
        """
        Box-normalised direction maximising min_i theta . (p_i - query).

        Returns:
            (theta, epsilon) with |theta_k| <= 1; epsilon > 0 iff the query is outside the hull
        """
        diffs = self._differences(points, query)
        k, d = diffs.shape
        # columns: theta+ (d), theta- (d), eps+, eps-, slacks (k), box slacks (2d)
        n = 2 * d + 2 + k + 2 * d
        a = np.zeros((k + 2 * d, n))
        a[:k, :d] = diffs
        a[:k, d:2 * d] = -diffs
        a[:k, 2 * d] = -1.0
        a[:k, 2 * d + 1] = 1.0
        a[:k, 2 * d + 2:2 * d + 2 + k] = -np.eye(k)
        a[k:, :2 * d] = np.eye(2 * d)
        a[k:, 2 * d + 2 + k:] = np.eye(2 * d)
        b = np.zeros(k + 2 * d)
        b[k:] = 1.0
        c = np.zeros(n)
        c[2 * d] = -1.0
        c[2 * d + 1] = 1.0

        theta = self._box_direction(c, a, b, d)
        return tuple(float(t) for t in theta), float((diffs @ theta).min())

    def weak_separator(self, points: PointsLike, query) -> Optional[Point]:
        """
        Direction theta with theta . (p_i - query) >= -tolerance for all i and
        > 2 tolerance for some i, the tolerance being scaled to the points.

        Maximises sum_i theta . (p_i - query) over the unit box; returns None when
        every feasible direction stays inside the tolerance band, i.e. when the
        query lies in the relative interior of the hull.
        """
        diffs = self._differences(points, query)
        k, d = diffs.shape
        tolerance = self.scaled_tolerance(diffs)
        # columns: theta+ (d), theta- (d), slacks (k), box slacks (2d)
        n = 2 * d + k + 2 * d
        a = np.zeros((k + 2 * d, n))
        a[:k, :d] = diffs
        a[:k, d:2 * d] = -diffs
        a[:k, 2 * d:2 * d + k] = -np.eye(k)
        a[k:, :2 * d] = np.eye(2 * d)
        a[k:, 2 * d + k:] = np.eye(2 * d)
        b = np.zeros(k + 2 * d)
        b[:k] = -tolerance
        b[k:] = 1.0
        total = diffs.sum(axis=0)
        c = np.zeros(n)
        c[:d] = -total
        c[d:2 * d] = total

        theta = self._box_direction(c, a, b, d)
        gains = diffs @ theta
        if gains.max() <= 2.0 * tolerance:
            return None
        return tuple(float(t) for t in theta)

    def _differences(self, points: PointsLike, query) -> np.ndarray:
        unique = unique_points(points, self.dedup_tolerance)
        return unique - as_point(query, unique.shape[1])

    def _box_direction(self, c, a, b, d: int) -> np.ndarray:
        outcome = self.solver.solve(c, a, b)
        if outcome.status is not SimplexStatus.OPTIMAL:
            raise SolverError("Box-normalised separation programs always have an optimum.")
        return outcome.x[:d] - outcome.x[d:2 * d]

    # ------------------------------------------------------------------
    # support function and concave envelope
    # ------------------------------------------------------------------

    def support_function(self, points: PointsLike, z) -> float:
        """sigma_D(z) = max over x in D of (-x . z)."""
        matrix = as_matrix(points)
        return float((-(matrix @ as_point(z, matrix.shape[1]))).max())

    def concave_envelope_eval(self, samples: Sequence[Tuple[Sequence[float], float]], query) -> float:
        """
        Smallest concave majorant of the samples, evaluated at query.

        Solves max sum lambda_i g_i subject to lambda >= 0, sum lambda = 1,
        sum lambda_i z_i = query.

        A query within the membership tolerance of the hull is evaluated at its
        projection onto the hull.

        Returns:
            The envelope value, -inf when query lies outside conv{z_i}
        """
        if not samples:
            raise ValidationError("The envelope needs at least one sample.", "empty_rows")
        matrix = as_matrix([z for z, _ in samples])
        values = np.array([float(g) for _, g in samples])
        k, d = matrix.shape
        q = as_point(query, d)

        # duplicated abscissae keep their largest value
        unique = unique_points(matrix, self.dedup_tolerance)
        best = np.full(len(unique), -np.inf)
        for z, g in zip(matrix, values):
            i = int(np.argmin(np.abs(unique - z).max(axis=1)))
            best[i] = max(best[i], g)

        outcome = self._envelope_program(unique, best, q)
        if outcome.status is SimplexStatus.INFEASIBLE:
            membership = self.hull_membership(unique, q)
            if not membership.in_hull:
                return float("-inf")
            outcome = self._envelope_program(unique, best, np.array(membership.barycentric_weights) @ unique)
            if outcome.status is SimplexStatus.INFEASIBLE:
                raise SolverError("The envelope program failed at a point of the hull.")
        if outcome.status is SimplexStatus.UNBOUNDED:
            raise SolverError("The envelope program lives on the simplex and cannot be unbounded.")
        return float(best @ outcome.x)

    def _envelope_program(self, unique: np.ndarray, best: np.ndarray, q: np.ndarray):
        a = np.vstack([(unique - q).T, np.ones(len(unique))])
        b = np.zeros(unique.shape[1] + 1)
        b[-1] = 1.0
        return self.solver.solve(-best, a, b)
