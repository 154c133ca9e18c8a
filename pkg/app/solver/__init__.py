from .config import BranchingRule, NodeSelection, SolveConfig
from .simplex import solve_lp, solve_lp_arrays
from .branch_and_bound import solve_mip, solve_with_fixed_integers
from .tableau import solve_tableau
from .external import parse_cbc_solution, solve_external
from .backend import solve

__all__ = [
    'BranchingRule',
    'NodeSelection',
    'SolveConfig',
    'solve_lp',
    'solve_lp_arrays',
    'solve_mip',
    'solve_with_fixed_integers',
    'solve_tableau',
    'parse_cbc_solution',
    'solve_external',
    'solve',
]
