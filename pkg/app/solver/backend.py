"""
Solver Backend Selection
Single entry point that dispatches to the embedded or external solver and re-checks the answer
"""
import logging
from typing import Optional

from app.core.config import settings
from app.core.exceptions import ConfigurationError, SolverError
from app.milp.model import MilpModel
from app.milp.solution import Solution, SolveStatus
from app.solver.branch_and_bound import solve_mip, solve_with_fixed_integers
from app.solver.config import SolveConfig
from app.solver.external import solve_external

logger = logging.getLogger(__name__)

BACKENDS = ("embedded", "external")


def solve(model: MilpModel, config: Optional[SolveConfig] = None, backend: Optional[str] = None) -> Solution:
    """Solve ``model`` with the selected backend.

    Every returned incumbent has been checked against all rows, bounds and
    integrality; duals always come from the embedded LP with binaries fixed.
    """
    config = config or SolveConfig()
    backend = (backend or settings.SOLVER_BACKEND).lower()
    if backend not in BACKENDS:
        raise ConfigurationError(f"Unknown solver backend '{backend}' (expected one of {', '.join(BACKENDS)})")

    model.seal()
    logger.info(f"Solving '{model.name}' with {backend} backend: {model.num_variables} variables "
                f"({model.num_binaries} binary), {model.num_constraints} constraints")

    if backend == "embedded":
        solution = solve_mip(model, config)
    else:
        solution = solve_external(model)
        if solution.has_solution:
            fixed = solve_with_fixed_integers(model.to_arrays(), solution.values, config)
            if fixed.status == SolveStatus.OPTIMAL:
                solution.duals = fixed.duals
                solution.reduced_costs = fixed.reduced_costs
                solution.dual_objective = fixed.dual_objective

    if solution.has_solution:
        arrays = model.to_arrays()
        solution.max_violation = arrays.max_violation(solution.values, config.integrality_tolerance)
        if solution.max_violation > 10 * config.feasibility_tolerance:
            raise SolverError(f"Solution of '{model.name}' violates the model by {solution.max_violation:.3e}")
    return solution
