"""
Solution Container
Status, primal/dual values and bound information returned by every backend
"""
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Union

import numpy as np

from app.milp.model import Constraint, Variable


class SolveStatus(str, Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"
    GAP_LIMIT = "gap_limit"        # stopped by a node/time limit with an incumbent
    NO_INCUMBENT = "no_incumbent"  # stopped by a limit before any integer solution


@dataclass
class Solution:
    """Result of an LP or MIP solve.

    ``duals`` are row marginals d(objective)/d(rhs); for a MIP they belong to
    the LP obtained by fixing the binaries at their solution values.
    """
    status: SolveStatus
    objective: float = math.nan
    values: np.ndarray = field(default_factory=lambda: np.zeros(0))
    duals: np.ndarray = field(default_factory=lambda: np.zeros(0))
    reduced_costs: np.ndarray = field(default_factory=lambda: np.zeros(0))
    bound: float = math.nan
    gap: float = math.nan
    dual_objective: Optional[float] = None
    iterations: int = 0
    nodes: int = 0
    max_violation: float = 0.0
    ray: Optional[np.ndarray] = None
    backend: str = "embedded"
    log: str = ""

    @property
    def has_solution(self) -> bool:
        return self.status in (SolveStatus.OPTIMAL, SolveStatus.GAP_LIMIT) and self.values.size > 0

    @property
    def is_optimal(self) -> bool:
        return self.status == SolveStatus.OPTIMAL

    def value(self, variable: Union[Variable, int]) -> float:
        index = variable.index if isinstance(variable, Variable) else int(variable)
        return float(self.values[index])

    def dual(self, constraint: Union[Constraint, int]) -> float:
        index = constraint.index if isinstance(constraint, Constraint) else int(constraint)
        if self.duals.size == 0:
            return math.nan
        return float(self.duals[index])
