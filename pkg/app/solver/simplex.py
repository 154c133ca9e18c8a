"""
Revised Simplex LP Core
Bounded-variable primal simplex with an LU-factorised basis, product-form updates,
periodic refactorisation and Bland's rule as anti-cycling fallback
"""
import logging
import math
import time
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import splu

from app.core.exceptions import NumericalError, SolverError, TimeLimitReached
from app.milp.model import MilpModel, ModelArrays
from app.milp.solution import Solution, SolveStatus
from app.solver.config import SolveConfig

logger = logging.getLogger(__name__)

_ZERO = 1e-12


class BasisFactor:
    """LU factors of the basis matrix plus a product-form eta file"""

    def __init__(self, matrix: sp.csc_matrix, basis: np.ndarray):
        self.size = len(basis)
        try:
            self._lu = splu(matrix[:, basis].tocsc())
        except RuntimeError as e:
            raise NumericalError(f"Basis factorisation failed: {e}") from e
        self._etas: List[Tuple[int, np.ndarray]] = []

    @property
    def updates(self) -> int:
        return len(self._etas)

    def ftran(self, column: np.ndarray) -> np.ndarray:
        """Solve B v = column"""
        v = self._lu.solve(np.asarray(column, dtype=float))
        for row, eta in self._etas:
            pivot = v[row] / eta[row]
            v -= pivot * eta
            v[row] = pivot
        return v

    def btran(self, costs: np.ndarray) -> np.ndarray:
        """Solve B' y = costs"""
        u = np.array(costs, dtype=float)
        for row, eta in reversed(self._etas):
            rest = eta @ u - eta[row] * u[row]
            u[row] = (u[row] - rest) / eta[row]
        return self._lu.solve(u, trans="T")

    def update(self, row: int, column: np.ndarray):
        self._etas.append((row, column.copy()))


@dataclass
class _Outcome:
    status: str            # "optimal", "unbounded"
    iterations: int
    ray: Optional[np.ndarray] = None


class _BoundedSimplex:
    """Primal simplex over  M z = 0,  lb <= z <= ub  with a fixed column matrix M"""

    def __init__(self, matrix: sp.csc_matrix, lower: np.ndarray, upper: np.ndarray,
                 values: np.ndarray, basis: np.ndarray, config: SolveConfig,
                 deadline: Optional[float] = None):
        self.M = matrix
        self.MT = matrix.T.tocsr()
        self.lb = lower
        self.ub = upper
        self.z = values
        self.basis = basis
        self.config = config
        self.deadline = deadline
        self.is_basic = np.zeros(matrix.shape[1], dtype=bool)
        self.is_basic[basis] = True
        self.factor = BasisFactor(self.M, self.basis)
        self.iterations = 0

    def refactor(self):
        self.factor = BasisFactor(self.M, self.basis)
        nonbasic = self.z.copy()
        nonbasic[self.basis] = 0.0
        self.z[self.basis] = self.factor.ftran(-(self.M @ nonbasic))

    def duals(self, costs: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        y = self.factor.btran(costs[self.basis])
        reduced = costs - self.MT @ y
        reduced[self.basis] = 0.0
        return y, reduced

    def run(self, costs: np.ndarray) -> _Outcome:
        config = self.config
        opt_tol = config.optimality_tolerance
        piv_tol = config.pivot_tolerance
        degenerate_run = 0
        bland = False
        start = self.iterations

        while True:
            if self.iterations - start >= config.iteration_limit:
                raise SolverError(f"Simplex iteration limit ({config.iteration_limit}) reached")
            if self.deadline is not None and time.monotonic() > self.deadline:
                raise TimeLimitReached("Simplex stopped at the time limit")
            if self.factor.updates >= config.refactor_frequency:
                self.refactor()

            _, reduced = self.duals(costs)
            movable = (~self.is_basic) & (self.ub > self.lb)
            can_increase = movable & (self.z < self.ub - _ZERO)
            can_decrease = movable & (self.z > self.lb + _ZERO)
            score = np.where(can_increase & (reduced < -opt_tol), -reduced, 0.0)
            score = np.maximum(score, np.where(can_decrease & (reduced > opt_tol), reduced, 0.0))
            candidates = np.flatnonzero(score > 0.0)
            if candidates.size == 0:
                return _Outcome("optimal", self.iterations - start)
            entering = int(candidates[0]) if bland else int(candidates[np.argmax(score[candidates])])
            direction = 1.0 if reduced[entering] < 0.0 else -1.0

            column = self.M[:, entering].toarray().ravel()
            alpha = self.factor.ftran(column)
            delta = direction * alpha

            basic_lb = self.lb[self.basis]
            basic_ub = self.ub[self.basis]
            basic_z = self.z[self.basis]
            limits = np.full(len(self.basis), math.inf)
            falling = delta > piv_tol
            rising = delta < -piv_tol
            with np.errstate(invalid="ignore", divide="ignore"):
                limits[falling] = (basic_z[falling] - basic_lb[falling]) / delta[falling]
                limits[rising] = (basic_ub[rising] - basic_z[rising]) / (-delta[rising])
            limits = np.where(np.isnan(limits), math.inf, np.maximum(limits, 0.0))

            step = math.inf
            leaving_row = -1
            if len(limits):
                step = float(np.min(limits))
                if math.isfinite(step):
                    ties = np.flatnonzero(limits <= step + 1e-12)
                    if bland:
                        leaving_row = int(ties[np.argmin(self.basis[ties])])
                    else:
                        leaving_row = int(ties[np.argmax(np.abs(delta[ties]))])
                    step = float(limits[leaving_row])
            flip = self.ub[entering] - self.lb[entering]

            if math.isfinite(flip) and flip <= step:
                # Bound flip, basis unchanged
                self.z[entering] = self.ub[entering] if direction > 0 else self.lb[entering]
                self.z[self.basis] = basic_z - flip * delta
                self.iterations += 1
                degenerate_run = 0
                bland = False
                continue

            if not math.isfinite(step):
                ray = np.zeros(self.M.shape[1])
                ray[entering] = direction
                ray[self.basis] = -delta
                return _Outcome("unbounded", self.iterations - start, ray)

            leaving = int(self.basis[leaving_row])
            self.z[entering] += direction * step
            self.z[self.basis] = basic_z - step * delta
            self.z[leaving] = self.lb[leaving] if delta[leaving_row] > 0 else self.ub[leaving]
            self.basis[leaving_row] = entering
            self.is_basic[leaving] = False
            self.is_basic[entering] = True
            self.factor.update(leaving_row, alpha)
            self.iterations += 1

            if step <= _ZERO:
                degenerate_run += 1
                if not bland and degenerate_run >= config.degeneracy_threshold:
                    logger.debug(f"Degenerate run of {degenerate_run} pivots, switching to Bland's rule")
                    bland = True
            else:
                degenerate_run = 0
                bland = False


def _trivial_solution(arrays: ModelArrays, col_lo: np.ndarray, col_hi: np.ndarray) -> Solution:
    """LP without rows: every column moves to its cheapest bound"""
    c = arrays.c
    x = np.where(np.isfinite(col_lo), col_lo, np.where(np.isfinite(col_hi), col_hi, 0.0))
    unbounded = ((c < 0) & ~np.isfinite(col_hi)) | ((c > 0) & ~np.isfinite(col_lo))
    if unbounded.any():
        ray = np.zeros_like(c)
        ray[unbounded] = -np.sign(c[unbounded])
        return Solution(status=SolveStatus.UNBOUNDED, ray=ray)
    x = np.where(c < 0, col_hi, np.where(c > 0, col_lo, x))
    objective = arrays.objective(x)
    return Solution(status=SolveStatus.OPTIMAL, objective=objective, values=x,
                    duals=np.zeros(arrays.shape[0]), reduced_costs=c.copy(),
                    bound=objective, gap=0.0, dual_objective=objective)


def solve_lp_arrays(arrays: ModelArrays, config: SolveConfig,
                    col_lo: Optional[np.ndarray] = None, col_hi: Optional[np.ndarray] = None,
                    deadline: Optional[float] = None) -> Solution:
    """Solve the LP relaxation of ``arrays`` (integrality ignored) under optional bound overrides"""
    feas_tol = config.feasibility_tolerance
    m_all, n = arrays.shape
    col_lo = arrays.col_lo.copy() if col_lo is None else np.asarray(col_lo, dtype=float).copy()
    col_hi = arrays.col_hi.copy() if col_hi is None else np.asarray(col_hi, dtype=float).copy()

    if np.any(col_lo > col_hi + feas_tol * (1.0 + np.abs(col_hi))):
        return Solution(status=SolveStatus.INFEASIBLE)

    # Presolve: drop empty rows, keeping indices for the dual map
    row_nnz = np.diff(arrays.A.indptr)
    empty = row_nnz == 0
    if empty.any():
        lo_empty, hi_empty = arrays.row_lo[empty], arrays.row_hi[empty]
        if np.any(lo_empty > feas_tol * (1.0 + np.abs(lo_empty))) or \
                np.any(hi_empty < -feas_tol * (1.0 + np.abs(hi_empty))):
            return Solution(status=SolveStatus.INFEASIBLE)
    kept = np.flatnonzero(~empty)
    A = arrays.A[kept].tocsc()
    row_lo = arrays.row_lo[kept]
    row_hi = arrays.row_hi[kept]
    m = len(kept)
    if m == 0:
        return _trivial_solution(arrays, col_lo, col_hi)

    # Nonbasic starting point for structural columns
    x0 = np.where(np.isfinite(col_lo), col_lo, np.where(np.isfinite(col_hi), col_hi, 0.0))
    activity = A @ x0
    inside = (activity >= row_lo - feas_tol * (1.0 + np.abs(activity))) & \
             (activity <= row_hi + feas_tol * (1.0 + np.abs(activity)))
    target = np.where(activity < row_lo, row_lo, row_hi)
    needs_artificial = np.flatnonzero(~inside)
    signs = np.sign(target[needs_artificial] - activity[needs_artificial])
    k = len(needs_artificial)

    # Columns: [A | -I | artificials]
    logical = -sp.identity(m, format="csc")
    artificial = sp.csc_matrix((signs, (needs_artificial, np.arange(k))), shape=(m, k))
    matrix = sp.hstack([A, logical, artificial], format="csc")
    total = n + m + k
    lower = np.concatenate([col_lo, row_lo, np.zeros(k)])
    upper = np.concatenate([col_hi, row_hi, np.full(k, math.inf)])

    z = np.zeros(total)
    z[:n] = x0
    z[n:n + m] = np.where(inside, activity, target)
    z[n + m:] = np.abs(target[needs_artificial] - activity[needs_artificial])
    basis = np.arange(n, n + m)
    basis[needs_artificial] = n + m + np.arange(k)

    engine = _BoundedSimplex(matrix, lower, upper, z, basis, config, deadline)
    iterations = 0

    if k:
        phase_one = np.zeros(total)
        phase_one[n + m:] = 1.0
        engine.run(phase_one)
        engine.refactor()
        infeasibility = float(np.sum(engine.z[n + m:]))
        scale = max(1.0, float(np.max(np.abs(np.concatenate([row_lo[np.isfinite(row_lo)],
                                                               row_hi[np.isfinite(row_hi)], [0.0]])))))
        if infeasibility > feas_tol * scale:
            farkas, _ = engine.duals(phase_one)
            duals = np.zeros(m_all)
            duals[kept] = farkas
            logger.debug(f"Phase 1 ended with infeasibility {infeasibility:.3e}")
            return Solution(status=SolveStatus.INFEASIBLE, iterations=engine.iterations, duals=duals)
        engine.ub[n + m:] = 0.0
        engine.z[n + m:] = np.minimum(engine.z[n + m:], 0.0)
        engine.refactor()

    costs = np.zeros(total)
    costs[:n] = arrays.c
    outcome = engine.run(costs)
    iterations = engine.iterations

    if outcome.status == "unbounded":
        return Solution(status=SolveStatus.UNBOUNDED, iterations=iterations, ray=outcome.ray[:n])

    engine.refactor()
    y, reduced = engine.duals(costs)
    x = engine.z[:n].copy()
    # Snap values onto bounds they sit on within tolerance
    x = np.where(config.close(x, col_lo), col_lo, x)
    x = np.where(config.close(x, col_hi), col_hi, x)

    objective = arrays.objective(x)
    opt_tol = config.optimality_tolerance
    clean = np.where(np.abs(reduced) <= opt_tol, 0.0, reduced)
    with np.errstate(invalid="ignore"):
        dual_terms = np.where(clean > 0, clean * lower, np.where(clean < 0, clean * upper, 0.0))
    dual_objective = float(np.sum(dual_terms)) + arrays.constant

    duals = np.zeros(m_all)
    duals[kept] = y
    return Solution(
        status=SolveStatus.OPTIMAL,
        objective=objective,
        values=x,
        duals=duals,
        reduced_costs=reduced[:n].copy(),
        bound=objective,
        gap=0.0,
        dual_objective=dual_objective,
        iterations=iterations,
    )


def solve_lp(model: MilpModel, config: Optional[SolveConfig] = None) -> Solution:
    """Solve the LP relaxation of a model and re-check the answer row by row"""
    config = config or SolveConfig()
    arrays = model.to_arrays()
    started = time.monotonic()
    solution = solve_lp_arrays(arrays, config)
    if solution.status == SolveStatus.OPTIMAL:
        solution.max_violation = arrays.max_violation(solution.values)
        if solution.max_violation > config.feasibility_tolerance * 10:
            raise NumericalError(
                f"LP solution of '{model.name}' violates the model by {solution.max_violation:.3e}")
    logger.debug(f"LP '{model.name}': {solution.status.value} in {solution.iterations} iterations "
                 f"({time.monotonic() - started:.2f}s)")
    return solution
