"""
MILP Model Container
Sparse variable/constraint/objective store used as formulation target and solver input
"""
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterable, List, Mapping, Optional, Tuple, Union

import numpy as np
import scipy.sparse as sp

from app.core.exceptions import ModelBuildError

logger = logging.getLogger(__name__)

INF = math.inf


class VarType(str, Enum):
    CONTINUOUS = "continuous"
    BINARY = "binary"


class RowSense(str, Enum):
    LE = "<="
    GE = ">="
    EQ = "="


@dataclass(frozen=True)
class Variable:
    """Model column; the index is the handle used in coefficient rows"""
    index: int
    name: str
    lower: float
    upper: float
    vtype: VarType = VarType.CONTINUOUS

    @property
    def is_binary(self) -> bool:
        return self.vtype == VarType.BINARY


@dataclass(frozen=True)
class Constraint:
    """Model row.

    ``range`` follows MPS semantics: a GE row accepts ``[rhs, rhs + range]``,
    a LE row accepts ``[rhs - range, rhs]``.
    """
    index: int
    name: str
    coefficients: Dict[int, float]
    sense: RowSense
    rhs: float
    range: Optional[float] = None

    def bounds(self) -> Tuple[float, float]:
        if self.sense == RowSense.EQ:
            return self.rhs, self.rhs
        if self.sense == RowSense.LE:
            return (-INF if self.range is None else self.rhs - self.range), self.rhs
        return self.rhs, (INF if self.range is None else self.rhs + self.range)


@dataclass
class RowSpec:
    """Row waiting to be appended; produced by formulation emitters"""
    name: str
    coefficients: Dict[int, float]
    sense: RowSense
    rhs: float = 0.0
    range: Optional[float] = None

    @classmethod
    def between(cls, name: str, coefficients: Dict[int, float],
                lower: Optional[float], upper: Optional[float]) -> Optional["RowSpec"]:
        """``lower <= a'x <= upper`` in its tightest row form; None when both sides are open"""
        if lower is None and upper is None:
            return None
        if lower is None:
            return cls(name, coefficients, RowSense.LE, upper)
        if upper is None:
            return cls(name, coefficients, RowSense.GE, lower)
        if upper < lower:
            raise ModelBuildError(f"Constraint '{name}' has lower bound above upper bound")
        if upper == lower:
            return cls(name, coefficients, RowSense.EQ, lower)
        return cls(name, coefficients, RowSense.GE, lower, upper - lower)


Coefficients = Union[Mapping[Union[Variable, int], float], Iterable[Tuple[Union[Variable, int], float]]]


def merge_terms(terms: Coefficients) -> Dict[int, float]:
    """Collapse (handle, coefficient) pairs into an index -> coefficient map, dropping zeros"""
    items = terms.items() if isinstance(terms, Mapping) else terms
    merged: Dict[int, float] = {}
    for handle, coefficient in items:
        index = handle.index if isinstance(handle, Variable) else int(handle)
        merged[index] = merged.get(index, 0.0) + float(coefficient)
    return {index: value for index, value in merged.items() if value != 0.0}


@dataclass
class ModelArrays:
    """Dense/sparse view of a sealed model: min c'x + constant, row_lo <= Ax <= row_hi, col_lo <= x <= col_hi"""
    c: np.ndarray
    constant: float
    A: sp.csr_matrix
    row_lo: np.ndarray
    row_hi: np.ndarray
    col_lo: np.ndarray
    col_hi: np.ndarray
    integer: np.ndarray

    @property
    def shape(self) -> Tuple[int, int]:
        return self.A.shape

    def objective(self, x: np.ndarray) -> float:
        return float(self.c @ x) + self.constant

    def max_violation(self, x: np.ndarray, integrality_tolerance: float = 0.0) -> float:
        """Largest scaled violation |a-b| / (1+|b|) over rows, bounds and integrality"""
        worst = 0.0
        if self.A.shape[0]:
            activity = self.A @ x
            below = (self.row_lo - activity) / (1.0 + np.abs(np.where(np.isfinite(self.row_lo), self.row_lo, 0.0)))
            above = (activity - self.row_hi) / (1.0 + np.abs(np.where(np.isfinite(self.row_hi), self.row_hi, 0.0)))
            worst = max(worst, float(np.max(below, initial=0.0)), float(np.max(above, initial=0.0)))
        if x.size:
            below = (self.col_lo - x) / (1.0 + np.abs(np.where(np.isfinite(self.col_lo), self.col_lo, 0.0)))
            above = (x - self.col_hi) / (1.0 + np.abs(np.where(np.isfinite(self.col_hi), self.col_hi, 0.0)))
            worst = max(worst, float(np.max(below, initial=0.0)), float(np.max(above, initial=0.0)))
            if integrality_tolerance > 0.0 and self.integer.any():
                fractional = float(np.max(np.abs(x[self.integer] - np.round(x[self.integer]))))
                if fractional > integrality_tolerance:
                    worst = max(worst, fractional)
        return worst


class MilpModel:
    """Sparse MILP container with deterministic insertion-ordered rows and columns"""

    def __init__(self, name: str = "model"):
        self.name = name
        self.variables: List[Variable] = []
        self.constraints: List[Constraint] = []
        self.objective: Dict[int, float] = {}
        self.objective_constant: float = 0.0
        self._variable_names: Dict[str, int] = {}
        self._constraint_names: Dict[str, int] = {}
        self._sealed = False
        self._arrays: Optional[ModelArrays] = None

    # ------------------------------------------------------------------ builders

    def add_variable(self, name: str, lower: float = 0.0, upper: float = INF,
                     vtype: VarType = VarType.CONTINUOUS) -> Variable:
        """Add a column and return its handle"""
        self._check_open()
        if name in self._variable_names:
            raise ModelBuildError(f"Duplicate variable name '{name}'")
        lower, upper = float(lower), float(upper)
        if math.isnan(lower) or math.isnan(upper) or lower > upper:
            raise ModelBuildError(f"Variable '{name}' has invalid bounds [{lower}, {upper}]")
        if vtype == VarType.BINARY and (lower < 0.0 or upper > 1.0):
            raise ModelBuildError(f"Binary variable '{name}' must have bounds within [0, 1]")
        variable = Variable(len(self.variables), name, lower, upper, vtype)
        self.variables.append(variable)
        self._variable_names[name] = variable.index
        return variable

    def add_binary(self, name: str, lower: float = 0.0, upper: float = 1.0) -> Variable:
        return self.add_variable(name, lower, upper, VarType.BINARY)

    def add_constraint(self, name: str, coefficients: Coefficients, sense: Union[RowSense, str],
                       rhs: float = 0.0, range_: Optional[float] = None) -> Constraint:
        """Add a row; coefficient keys may be Variable handles or column indices"""
        self._check_open()
        if name in self._constraint_names:
            raise ModelBuildError(f"Duplicate constraint name '{name}'")
        sense = RowSense(sense)
        row = merge_terms(coefficients)
        for index in row:
            if index < 0 or index >= len(self.variables):
                raise ModelBuildError(f"Constraint '{name}' references unknown variable handle {index}")
        rhs = float(rhs)
        if not math.isfinite(rhs):
            raise ModelBuildError(f"Constraint '{name}' has non-finite right-hand side")
        if range_ is not None:
            if sense == RowSense.EQ:
                raise ModelBuildError(f"Equality constraint '{name}' cannot carry a range")
            range_ = float(range_)
            if range_ < 0.0 or not math.isfinite(range_):
                raise ModelBuildError(f"Constraint '{name}' has invalid range {range_}")
        constraint = Constraint(len(self.constraints), name, row, sense, rhs, range_)
        self.constraints.append(constraint)
        self._constraint_names[name] = constraint.index
        return constraint

    def add_range_constraint(self, name: str, coefficients: Coefficients,
                             lower: Optional[float], upper: Optional[float]) -> Optional[Constraint]:
        """Add ``lower <= a'x <= upper`` choosing the tightest row form; None when both sides are open"""
        if lower is None and upper is None:
            return None
        if lower is None:
            return self.add_constraint(name, coefficients, RowSense.LE, upper)
        if upper is None:
            return self.add_constraint(name, coefficients, RowSense.GE, lower)
        if upper < lower:
            raise ModelBuildError(f"Constraint '{name}' has lower bound above upper bound")
        if upper == lower:
            return self.add_constraint(name, coefficients, RowSense.EQ, lower)
        return self.add_constraint(name, coefficients, RowSense.GE, lower, upper - lower)

    def add_rows(self, rows: Iterable[RowSpec]) -> int:
        count = 0
        for row in rows:
            self.add_constraint(row.name, row.coefficients, row.sense, row.rhs, row.range)
            count += 1
        return count

    def set_objective(self, coefficients: Coefficients, constant: float = 0.0):
        self._check_open()
        objective = merge_terms(coefficients)
        for index in objective:
            if index < 0 or index >= len(self.variables):
                raise ModelBuildError(f"Objective references unknown variable handle {index}")
        self.objective = objective
        self.objective_constant = float(constant)

    def add_objective(self, coefficients: Coefficients, constant: float = 0.0):
        """Accumulate terms into the objective"""
        self._check_open()
        for index, value in merge_terms(coefficients).items():
            if index < 0 or index >= len(self.variables):
                raise ModelBuildError(f"Objective references unknown variable handle {index}")
            total = self.objective.get(index, 0.0) + value
            if total == 0.0:
                self.objective.pop(index, None)
            else:
                self.objective[index] = total
        self.objective_constant += float(constant)

    def set_bounds(self, variable: Union[Variable, int], lower: float, upper: float) -> Variable:
        """Tighten or replace the bounds of an existing column (before sealing)"""
        self._check_open()
        index = variable.index if isinstance(variable, Variable) else int(variable)
        current = self.variables[index]
        if lower > upper:
            raise ModelBuildError(f"Variable '{current.name}' has invalid bounds [{lower}, {upper}]")
        if current.is_binary and (lower < 0.0 or upper > 1.0):
            raise ModelBuildError(f"Binary variable '{current.name}' must have bounds within [0, 1]")
        updated = Variable(index, current.name, float(lower), float(upper), current.vtype)
        self.variables[index] = updated
        return updated

    def seal(self) -> "MilpModel":
        """Freeze the model; afterwards it is read-only and shareable"""
        if not self._sealed:
            self._sealed = True
            logger.debug(f"Sealed model '{self.name}': {self.num_variables} variables, "
                         f"{self.num_constraints} constraints, {self.num_nonzeros} nonzeros")
        return self

    # ------------------------------------------------------------------ queries

    @property
    def sealed(self) -> bool:
        return self._sealed

    @property
    def num_variables(self) -> int:
        return len(self.variables)

    @property
    def num_constraints(self) -> int:
        return len(self.constraints)

    @property
    def num_nonzeros(self) -> int:
        return sum(len(c.coefficients) for c in self.constraints)

    @property
    def num_binaries(self) -> int:
        return sum(1 for v in self.variables if v.is_binary)

    def variable(self, name: str) -> Variable:
        try:
            return self.variables[self._variable_names[name]]
        except KeyError:
            raise ModelBuildError(f"Unknown variable '{name}'") from None

    def constraint(self, name: str) -> Constraint:
        try:
            return self.constraints[self._constraint_names[name]]
        except KeyError:
            raise ModelBuildError(f"Unknown constraint '{name}'") from None

    def has_constraint(self, name: str) -> bool:
        return name in self._constraint_names

    def has_variable(self, name: str) -> bool:
        return name in self._variable_names

    def to_arrays(self) -> ModelArrays:
        """Assemble solver arrays; cached once the model is sealed"""
        if self._arrays is not None:
            return self._arrays
        n, m = self.num_variables, self.num_constraints
        rows, cols, data = [], [], []
        row_lo = np.empty(m)
        row_hi = np.empty(m)
        for constraint in self.constraints:
            for index, value in constraint.coefficients.items():
                rows.append(constraint.index)
                cols.append(index)
                data.append(value)
            row_lo[constraint.index], row_hi[constraint.index] = constraint.bounds()
        A = sp.csr_matrix((np.asarray(data, dtype=float), (rows, cols)), shape=(m, n))
        c = np.zeros(n)
        for index, value in self.objective.items():
            c[index] = value
        arrays = ModelArrays(
            c=c,
            constant=self.objective_constant,
            A=A,
            row_lo=row_lo,
            row_hi=row_hi,
            col_lo=np.array([v.lower for v in self.variables], dtype=float),
            col_hi=np.array([v.upper for v in self.variables], dtype=float),
            integer=np.array([v.is_binary for v in self.variables], dtype=bool),
        )
        if self._sealed:
            self._arrays = arrays
        return arrays

    def same_structure(self, other: "MilpModel", compare_names: bool = False) -> bool:
        """Structural equality on coefficients, bounds, senses, ranges and integrality"""
        if self.num_variables != other.num_variables or self.num_constraints != other.num_constraints:
            return False
        for mine, theirs in zip(self.variables, other.variables):
            if (mine.lower, mine.upper, mine.vtype) != (theirs.lower, theirs.upper, theirs.vtype):
                return False
            if compare_names and mine.name != theirs.name:
                return False
        for mine, theirs in zip(self.constraints, other.constraints):
            if mine.sense != theirs.sense or mine.rhs != theirs.rhs or mine.range != theirs.range:
                return False
            if mine.coefficients != theirs.coefficients:
                return False
            if compare_names and mine.name != theirs.name:
                return False
        return self.objective == other.objective and self.objective_constant == other.objective_constant

    def _check_open(self):
        if self._sealed:
            raise ModelBuildError(f"Model '{self.name}' is sealed")

    def __repr__(self):
        return (f"<MilpModel(name='{self.name}', variables={self.num_variables}, "
                f"constraints={self.num_constraints}, binaries={self.num_binaries})>")
