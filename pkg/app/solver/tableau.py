"""
Dense Tableau Simplex
Textbook two-phase simplex with Bland's rule. Slow but simple; used to cross-check the revised simplex.
"""
import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from app.milp.model import ModelArrays
from app.milp.solution import SolveStatus


@dataclass
class TableauResult:
    status: SolveStatus
    objective: float = math.nan
    values: Optional[np.ndarray] = None


def _pivot(tableau: np.ndarray, row: int, column: int):
    tableau[row] /= tableau[row, column]
    for other in range(tableau.shape[0]):
        if other != row and tableau[other, column] != 0.0:
            tableau[other] -= tableau[other, column] * tableau[row]


def _run(tableau: np.ndarray, basis: List[int], allowed: int, tol: float) -> bool:
    """Bland's-rule iterations on a tableau whose last row holds reduced costs; False when unbounded"""
    m = len(basis)
    while True:
        entering = next((j for j in range(allowed) if tableau[m, j] < -tol), None)
        if entering is None:
            return True
        best_ratio, leaving = math.inf, None
        for i in range(m):
            if tableau[i, entering] > tol:
                ratio = tableau[i, -1] / tableau[i, entering]
                if ratio < best_ratio - tol or (abs(ratio - best_ratio) <= tol and basis[i] < basis[leaving]):
                    best_ratio, leaving = ratio, i
        if leaving is None:
            return False
        _pivot(tableau, leaving, entering)
        basis[leaving] = entering


def solve_tableau(arrays: ModelArrays, tol: float = 1e-9) -> TableauResult:
    """Solve the LP relaxation of ``arrays`` with a dense two-phase tableau"""
    n = arrays.shape[1]
    A = arrays.A.toarray()

    # Substitute x = shift + sign * y (free columns split in two) so that y >= 0
    columns: List[Tuple[int, float, float]] = []
    extra_rows: List[Tuple[np.ndarray, str, float]] = []
    for j in range(n):
        lo, hi = arrays.col_lo[j], arrays.col_hi[j]
        if math.isfinite(lo):
            columns.append((j, 1.0, lo))
            if math.isfinite(hi):
                extra_rows.append((np.array([len(columns) - 1]), "<=", hi - lo))
        elif math.isfinite(hi):
            columns.append((j, -1.0, hi))
        else:
            columns.append((j, 1.0, 0.0))
            columns.append((j, -1.0, 0.0))
    k = len(columns)
    mapping = np.zeros((n, k))
    shift = np.zeros(n)
    for position, (j, sign, offset) in enumerate(columns):
        mapping[j, position] = sign
        shift[j] = offset

    rows: List[Tuple[np.ndarray, str, float]] = []
    reduced_A = A @ mapping
    base = A @ shift
    for i in range(A.shape[0]):
        lo, hi = arrays.row_lo[i] - base[i], arrays.row_hi[i] - base[i]
        if lo == hi:
            rows.append((reduced_A[i], "=", lo))
            continue
        if math.isfinite(lo):
            rows.append((reduced_A[i], ">=", lo))
        if math.isfinite(hi):
            rows.append((reduced_A[i], "<=", hi))
    for positions, sense, rhs in extra_rows:
        row = np.zeros(k)
        row[positions] = 1.0
        rows.append((row, sense, rhs))

    m = len(rows)
    slack_count = sum(1 for _, sense, _ in rows if sense != "=")
    width = k + slack_count + m
    tableau = np.zeros((m + 1, width + 1))
    slack = k
    for i, (row, sense, rhs) in enumerate(rows):
        tableau[i, :k] = row
        if sense == "<=":
            tableau[i, slack] = 1.0
            slack += 1
        elif sense == ">=":
            tableau[i, slack] = -1.0
            slack += 1
        tableau[i, -1] = rhs
        if rhs < 0:
            tableau[i] *= -1.0
        tableau[i, k + slack_count + i] = 1.0
    basis = [k + slack_count + i for i in range(m)]

    # Phase 1: minimise the artificial sum
    tableau[m, :k + slack_count] = -tableau[:m, :k + slack_count].sum(axis=0)
    tableau[m, -1] = -tableau[:m, -1].sum()
    _run(tableau, basis, k + slack_count, tol)
    if -tableau[m, -1] > tol * max(1.0, float(np.max(np.abs(tableau[:m, -1]), initial=0.0))):
        return TableauResult(SolveStatus.INFEASIBLE)

    # Drive remaining artificials out of the basis, dropping redundant rows
    structural = k + slack_count
    keep = []
    for i in range(m):
        if basis[i] >= structural:
            pivot_column = next((j for j in range(structural) if abs(tableau[i, j]) > tol), None)
            if pivot_column is None:
                continue
            _pivot(tableau, i, pivot_column)
            basis[i] = pivot_column
        keep.append(i)
    body = np.hstack([tableau[keep, :structural], tableau[keep, -1:]])
    basis = [basis[i] for i in keep]

    # Phase 2: original costs expressed over the substituted columns
    costs = np.zeros(structural)
    costs[:k] = arrays.c @ mapping
    cost_row = np.concatenate([costs, [0.0]])
    for i, column in enumerate(basis):
        cost_row -= costs[column] * body[i]
    tableau = np.vstack([body, cost_row])
    if not _run(tableau, basis, structural, tol):
        return TableauResult(SolveStatus.UNBOUNDED)

    y = np.zeros(structural)
    for i, column in enumerate(basis):
        y[column] = tableau[i, -1]
    values = shift + mapping @ y[:k]
    return TableauResult(SolveStatus.OPTIMAL, arrays.objective(values), values)
