from .model import INF, Constraint, MilpModel, ModelArrays, RowSense, RowSpec, Variable, VarType
from .solution import Solution, SolveStatus
from .mps import export_mps, mps_names, parse_mps
from .lp_format import export_lp

__all__ = [
    'INF',
    'Constraint',
    'MilpModel',
    'ModelArrays',
    'RowSense',
    'RowSpec',
    'Variable',
    'VarType',
    'Solution',
    'SolveStatus',
    'export_mps',
    'mps_names',
    'parse_mps',
    'export_lp',
]
