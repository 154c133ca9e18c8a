"""
Solver Configuration
Validated tolerances and limits shared by the LP core, branch-and-bound and external backends
"""
from enum import Enum
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from app.core.config import settings


class BranchingRule(str, Enum):
    MOST_FRACTIONAL = "most_fractional"


class NodeSelection(str, Enum):
    BEST_BOUND = "best_bound"


class SolveConfig(BaseModel):
    """Solver settings; defaults come from the application settings"""

    model_config = ConfigDict(frozen=True)

    feasibility_tolerance: float = Field(default_factory=lambda: settings.FEASIBILITY_TOLERANCE, gt=0)
    optimality_tolerance: float = Field(default_factory=lambda: settings.OPTIMALITY_TOLERANCE, gt=0)
    integrality_tolerance: float = Field(default_factory=lambda: settings.INTEGRALITY_TOLERANCE, gt=0)
    mip_gap: float = Field(default_factory=lambda: settings.MIP_GAP, ge=0)
    node_limit: Optional[int] = Field(default_factory=lambda: settings.NODE_LIMIT, ge=1)
    time_limit: Optional[float] = Field(default_factory=lambda: settings.TIME_LIMIT_SECONDS, gt=0)
    iteration_limit: int = Field(default_factory=lambda: settings.ITERATION_LIMIT, ge=1)
    refactor_frequency: int = Field(default_factory=lambda: settings.REFACTOR_FREQUENCY, ge=1)
    degeneracy_threshold: int = Field(default_factory=lambda: settings.DEGENERACY_THRESHOLD, ge=1)
    pivot_tolerance: float = Field(default=1e-9, gt=0)
    branching: BranchingRule = BranchingRule.MOST_FRACTIONAL
    node_selection: NodeSelection = NodeSelection.BEST_BOUND
    log_every_nodes: int = Field(default=100, ge=1)

    def close(self, a, b, tolerance: Optional[float] = None):
        """Absolute-plus-relative comparison |a-b| <= tol*(1+|b|), elementwise on arrays.

        An infinite ``b`` never compares close.
        """
        tol = self.feasibility_tolerance if tolerance is None else tolerance
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        finite = np.isfinite(b)
        with np.errstate(invalid="ignore"):
            result = finite & (np.abs(a - np.where(finite, b, 0.0)) <= tol * (1.0 + np.abs(np.where(finite, b, 0.0))))
        return bool(result) if result.ndim == 0 else result
