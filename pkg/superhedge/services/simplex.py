"""
Dense two-phase primal simplex with Bland's anti-cycling rule.

Solves  min c.x  subject to  A x = b,  x >= 0  on small dense problems.
"""
import logging
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Tuple

import numpy as np

from ..config import config
from ..exceptions import SolverError

logger = logging.getLogger(__name__)


class SimplexStatus(str, Enum):
    OPTIMAL = "optimal"
    UNBOUNDED = "unbounded"
    INFEASIBLE = "infeasible"


@dataclass(frozen=True)
class SimplexOutcome:
    """Raw solver output; x, reduced_costs and basis are set only when optimal."""

    status: SimplexStatus
    x: Optional[np.ndarray] = None
    objective: float = float("nan")
    reduced_costs: Optional[np.ndarray] = None
    basis: Tuple[int, ...] = ()


class SimplexSolver:
    """Tableau simplex for standard-form linear programs."""

    def __init__(self, tolerance: float = None, max_iterations: int = None):
        self.tolerance = config.LP_TOLERANCE if tolerance is None else tolerance
        self.max_iterations = config.LP_MAX_ITERATIONS if max_iterations is None else max_iterations

    def solve(self, c, a_eq, b_eq) -> SimplexOutcome:
        """
        Minimize c.x subject to a_eq x = b_eq and x >= 0.

        Args:
            c: Cost vector of length n
            a_eq: Constraint matrix of shape (m, n)
            b_eq: Right-hand side of length m

        Returns:
            SimplexOutcome with status optimal, unbounded or infeasible

        Raises:
            SolverError: If the pivot limit is exceeded
        """
        c = np.asarray(c, dtype=float)
        a = np.array(a_eq, dtype=float, ndmin=2)
        b = np.array(b_eq, dtype=float)
        m, n = a.shape

        # Flip rows so that the artificial basis starts feasible
        negative = b < 0
        a[negative] *= -1.0
        b[negative] *= -1.0

        # Phase I: minimize the sum of artificials
        tableau = np.zeros((m + 1, n + m + 1))
        tableau[:m, :n] = a
        tableau[:m, n:n + m] = np.eye(m)
        tableau[:m, -1] = b
        tableau[m, :n] = -a.sum(axis=0)
        tableau[m, -1] = -b.sum()
        basis = list(range(n, n + m))

        self._iterate(tableau, basis, bounded=True)

        scale = max(1.0, float(np.abs(b).max(initial=0.0)))
        if -tableau[m, -1] > self.tolerance * scale:
            logger.debug(f"Infeasible LP: phase I residual {-tableau[m, -1]:.3e}")
            return SimplexOutcome(status=SimplexStatus.INFEASIBLE)

        rows = self._drive_out_artificials(tableau, basis, n)

        # Phase II on the original columns
        k = len(rows)
        phase2 = np.zeros((k + 1, n + 1))
        phase2[:k, :n] = tableau[rows, :n]
        phase2[:k, -1] = tableau[rows, -1]
        basis2 = [basis[i] for i in rows]
        phase2[k, :n] = c
        for i, j in enumerate(basis2):
            phase2[k] -= c[j] * phase2[i]

        status = self._iterate(phase2, basis2)
        if status is SimplexStatus.UNBOUNDED:
            return SimplexOutcome(status=SimplexStatus.UNBOUNDED, objective=float("-inf"))

        x = np.zeros(n)
        for i, j in enumerate(basis2):
            x[j] = max(phase2[i, -1], 0.0)
        return SimplexOutcome(
            status=SimplexStatus.OPTIMAL,
            x=x,
            objective=float(c @ x),
            reduced_costs=phase2[k, :n].copy(),
            basis=tuple(basis2),
        )

    def _drive_out_artificials(self, tableau: np.ndarray, basis: List[int], n: int) -> List[int]:
        """Pivot zero-level artificials out of the basis; redundant rows are dropped."""
        rows = []
        for i in range(tableau.shape[0] - 1):
            if basis[i] >= n:
                row = np.abs(tableau[i, :n])
                candidates = np.flatnonzero(row > self.tolerance * max(1.0, float(row.max(initial=0.0))))
                if candidates.size == 0:
                    continue
                tableau[i, -1] = 0.0
                self._pivot(tableau, i, int(candidates[0]))
                basis[i] = int(candidates[0])
            rows.append(i)
        return rows

    def _iterate(self, tableau: np.ndarray, basis: List[int], bounded: bool = False) -> SimplexStatus:
        """
        Pivot with Bland's rule until no improving column is left.

        Tolerances scale with the magnitude of the cost row and of each column.
        On a bounded program (phase I) an improving column without an admissible
        pivot is numerical noise: it is skipped, never reported as a ray.
        """
        tol = self.tolerance
        for _ in range(self.max_iterations):
            costs = tableau[-1, :-1]
            cost_tol = tol * max(1.0, float(np.abs(costs).max(initial=0.0)))
            pivot = None
            for col in np.flatnonzero(costs < -cost_tol):
                column = tableau[:-1, col]
                positive = np.flatnonzero(column > tol * max(1.0, float(np.abs(column).max())))
                if positive.size:
                    pivot = int(col), positive
                    break
                if not bounded:
                    return SimplexStatus.UNBOUNDED
                logger.debug(f"Skipping column {col}: reduced cost {costs[col]:.3e} without a pivot")
            if pivot is None:
                return SimplexStatus.OPTIMAL
            col, positive = pivot
            column = tableau[positive, col]
            ratios = tableau[positive, -1] / column
            best = ratios.min()
            ties = positive[ratios <= best + tol * max(1.0, abs(best))]
            row = min(ties, key=lambda r: basis[r])
            self._pivot(tableau, int(row), col)
            basis[int(row)] = col
        raise SolverError(error_code="iteration_limit", iterations=self.max_iterations)

    def _pivot(self, tableau: np.ndarray, row: int, col: int) -> None:
        tableau[row] /= tableau[row, col]
        factors = tableau[:, col].copy()
        factors[row] = 0.0
        tableau -= np.outer(factors, tableau[row])
        tableau[:, col] = 0.0
        tableau[row, col] = 1.0
        rhs = tableau[:-1, -1]
        rhs[(rhs < 0.0) & (rhs > -self.tolerance)] = 0.0
