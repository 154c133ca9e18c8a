"""
MPS Export and Import
Free-format MPS writer and a whitespace-tokenised reader for MilpModel.
Fields follow the fixed-format column layout while names fit in 8 characters;
longer names (up to MPS_NAME_LIMIT) and full-precision numbers only parse as free MPS.
"""
import hashlib
import logging
import math
import re
from typing import Dict, List, Optional, Set, Tuple

from app.core.config import settings
from app.core.exceptions import ModelBuildError
from app.milp.model import INF, MilpModel, RowSense, VarType

logger = logging.getLogger(__name__)

OBJECTIVE_ROW = "OBJ"
RHS_SET = "RHS"
RANGE_SET = "RNG"
BOUND_SET = "BND"

_SENSE_CODES = {RowSense.LE: "L", RowSense.GE: "G", RowSense.EQ: "E"}
_CODE_SENSES = {code: sense for sense, code in _SENSE_CODES.items()}
_WHITESPACE = re.compile(r"\s+")


def fit_name(name: str, limit: int, used: Set[str]) -> str:
    """Return a whitespace-free name within ``limit`` characters, unique within ``used``.

    Long names keep a readable prefix and get a deterministic sha1 suffix.
    """
    clean = _WHITESPACE.sub("_", name) or "_"
    candidate = clean
    salt = 0
    while len(candidate) > limit or candidate in used:
        digest = hashlib.sha1(f"{clean}#{salt}".encode("utf-8")).hexdigest()
        if limit >= 10:
            candidate = f"{clean[:limit - 9]}~{digest[:8]}"
        else:
            candidate = digest[:limit]
        salt += 1
    used.add(candidate)
    return candidate


def format_number(value: float) -> str:
    """Shortest repr that round-trips exactly"""
    text = repr(float(value))
    return "0" if text in ("0.0", "-0.0") else text


def _field_line(code: str, name: str, entries: List[Tuple[str, str]]) -> str:
    # Fixed-format columns: 2-3 code, 5-12 name, 15-22 / 25-36 first pair, 40-47 / 50-61 second pair
    line = f" {code:<2} {name:<8}"
    for index, (key, value) in enumerate(entries):
        if index == 0:
            line = f"{line}  {key:<8}  {value:>12}"
        else:
            line = f"{line}   {key:<8}  {value:>12}"
    return line.rstrip()


def mps_names(model: MilpModel, name_limit: Optional[int] = None) -> Tuple[str, List[str], List[str]]:
    """Objective, row and column names exactly as ``export_mps`` writes them"""
    limit = name_limit or settings.MPS_NAME_LIMIT
    row_names: Set[str] = set()
    objective_name = fit_name(OBJECTIVE_ROW, limit, row_names)
    rows = [fit_name(c.name, limit, row_names) for c in model.constraints]
    column_names: Set[str] = set()
    columns = [fit_name(v.name, limit, column_names) for v in model.variables]
    return objective_name, rows, columns


def export_mps(model: MilpModel, name_limit: Optional[int] = None) -> str:
    """Render the model as free-format MPS text (space separated, no blanks inside names)"""
    limit = name_limit or settings.MPS_NAME_LIMIT
    objective_name, rows, columns = mps_names(model, limit)

    # Column-major assembly of the row entries
    by_column: List[List[Tuple[str, float]]] = [[] for _ in model.variables]
    for index, value in sorted(model.objective.items()):
        by_column[index].append((objective_name, value))
    for constraint in model.constraints:
        for index, value in sorted(constraint.coefficients.items()):
            by_column[index].append((rows[constraint.index], value))

    lines = [f"NAME          {fit_name(model.name, limit, set())}", "ROWS", f" N  {objective_name}"]
    for constraint in model.constraints:
        lines.append(f" {_SENSE_CODES[constraint.sense]}  {rows[constraint.index]}")

    lines.append("COLUMNS")
    in_integer_block = False
    marker = 0
    for variable in model.variables:
        if variable.is_binary and not in_integer_block:
            lines.append(f"    MARKER{marker:<6}  'MARKER'                 'INTORG'")
            in_integer_block = True
            marker += 1
        elif not variable.is_binary and in_integer_block:
            lines.append(f"    MARKER{marker:<6}  'MARKER'                 'INTEND'")
            in_integer_block = False
            marker += 1
        entries = by_column[variable.index] or [(objective_name, 0.0)]
        for row_name, value in entries:
            lines.append(_field_line("", columns[variable.index], [(row_name, format_number(value))]))
    if in_integer_block:
        lines.append(f"    MARKER{marker:<6}  'MARKER'                 'INTEND'")

    lines.append("RHS")
    if model.objective_constant != 0.0:
        # Objective RHS carries the negated constant
        lines.append(_field_line("", RHS_SET, [(objective_name, format_number(-model.objective_constant))]))
    for constraint in model.constraints:
        if constraint.rhs != 0.0:
            lines.append(_field_line("", RHS_SET, [(rows[constraint.index], format_number(constraint.rhs))]))

    lines.append("RANGES")
    for constraint in model.constraints:
        if constraint.range is not None:
            lines.append(_field_line("", RANGE_SET, [(rows[constraint.index], format_number(constraint.range))]))

    lines.append("BOUNDS")
    for variable in model.variables:
        name = columns[variable.index]
        lower, upper = variable.lower, variable.upper
        if variable.is_binary and lower == 0.0 and upper == 1.0:
            lines.append(_field_line("BV", BOUND_SET, [(name, "")]))
            continue
        if lower == upper:
            lines.append(_field_line("FX", BOUND_SET, [(name, format_number(lower))]))
            continue
        if lower == -INF and upper == INF:
            lines.append(_field_line("FR", BOUND_SET, [(name, "")]))
            continue
        if lower == -INF:
            lines.append(_field_line("MI", BOUND_SET, [(name, "")]))
        elif lower != 0.0 or variable.is_binary:
            lines.append(_field_line("LO", BOUND_SET, [(name, format_number(lower))]))
        if upper != INF:
            lines.append(_field_line("UP", BOUND_SET, [(name, format_number(upper))]))
    lines.append("ENDATA")
    return "\n".join(lines) + "\n"


def parse_mps(text: str) -> MilpModel:
    """Read MPS text (fixed or free spacing) into a sealed-ready MilpModel"""
    model_name = "model"
    section = None
    objective_name: Optional[str] = None
    row_order: List[str] = []
    row_sense: Dict[str, RowSense] = {}
    row_entries: Dict[str, Dict[int, float]] = {}
    row_rhs: Dict[str, float] = {}
    row_range: Dict[str, float] = {}
    column_index: Dict[str, int] = {}
    column_names: List[str] = []
    column_integer: List[bool] = []
    objective: Dict[int, float] = {}
    objective_constant = 0.0
    lower: Dict[int, float] = {}
    upper: Dict[int, float] = {}
    integer_block = False

    for number, raw in enumerate(text.splitlines(), start=1):
        if not raw.strip() or raw.startswith("*"):
            continue
        tokens = raw.split()
        if not raw[0].isspace():
            keyword = tokens[0].upper()
            if keyword == "NAME":
                model_name = tokens[1] if len(tokens) > 1 else model_name
                continue
            if keyword == "ENDATA":
                break
            if keyword in ("ROWS", "COLUMNS", "RHS", "RANGES", "BOUNDS", "OBJSENSE"):
                section = keyword
                continue
            raise ModelBuildError(f"MPS line {number}: unknown section '{tokens[0]}'")

        if section == "OBJSENSE":
            if tokens[0].upper() not in ("MIN", "MINIMIZE"):
                raise ModelBuildError(f"MPS line {number}: only minimisation is supported")
        elif section == "ROWS":
            code, name = tokens[0].upper(), tokens[1]
            if code == "N":
                if objective_name is None:
                    objective_name = name
                continue
            if code not in _CODE_SENSES:
                raise ModelBuildError(f"MPS line {number}: unknown row type '{code}'")
            if name in row_sense:
                raise ModelBuildError(f"MPS line {number}: duplicate row '{name}'")
            row_order.append(name)
            row_sense[name] = _CODE_SENSES[code]
            row_entries[name] = {}
        elif section == "COLUMNS":
            if len(tokens) >= 3 and tokens[1] == "'MARKER'":
                integer_block = tokens[2] == "'INTORG'"
                continue
            name = tokens[0]
            if name not in column_index:
                column_index[name] = len(column_names)
                column_names.append(name)
                column_integer.append(integer_block)
            index = column_index[name]
            for row_name, value in zip(tokens[1::2], tokens[2::2]):
                coefficient = float(value)
                if row_name == objective_name:
                    if coefficient != 0.0:
                        objective[index] = objective.get(index, 0.0) + coefficient
                elif row_name in row_entries:
                    if coefficient != 0.0:
                        row_entries[row_name][index] = coefficient
                else:
                    raise ModelBuildError(f"MPS line {number}: unknown row '{row_name}'")
        elif section in ("RHS", "RANGES"):
            pairs = tokens[1:] if len(tokens) % 2 == 1 else tokens
            for row_name, value in zip(pairs[0::2], pairs[1::2]):
                number_value = float(value)
                if section == "RHS" and row_name == objective_name:
                    objective_constant = -number_value
                elif row_name not in row_sense:
                    raise ModelBuildError(f"MPS line {number}: unknown row '{row_name}'")
                elif section == "RHS":
                    row_rhs[row_name] = number_value
                else:
                    row_range[row_name] = number_value
        elif section == "BOUNDS":
            code = tokens[0].upper()
            if code in ("FR", "MI", "PL", "BV"):
                column = tokens[-1]
                value = None
            else:
                column, value = tokens[-2], float(tokens[-1])
            if column not in column_index:
                raise ModelBuildError(f"MPS line {number}: unknown column '{column}'")
            index = column_index[column]
            if code == "UP":
                upper[index] = value
            elif code == "LO":
                lower[index] = value
            elif code == "FX":
                lower[index] = upper[index] = value
            elif code == "FR":
                lower[index], upper[index] = -INF, INF
            elif code == "MI":
                lower[index] = -INF
            elif code == "PL":
                upper[index] = INF
            elif code == "BV":
                lower[index], upper[index] = 0.0, 1.0
                column_integer[index] = True
            else:
                raise ModelBuildError(f"MPS line {number}: unsupported bound type '{code}'")

    model = MilpModel(model_name)
    for index, name in enumerate(column_names):
        lo = lower.get(index, 0.0)
        if column_integer[index]:
            hi = upper.get(index, 1.0)
            if hi == INF:
                hi = 1.0
            if lo < 0.0 or hi > 1.0:
                raise ModelBuildError(f"Column '{name}' is a general integer; only binaries are supported")
            model.add_variable(name, lo, hi, VarType.BINARY)
        else:
            model.add_variable(name, lo, upper.get(index, INF))

    for name in row_order:
        sense = row_sense[name]
        rhs = row_rhs.get(name, 0.0)
        range_value = row_range.get(name)
        width = None
        if range_value is not None:
            width = abs(range_value)
            if sense == RowSense.EQ:
                # MPS: E row with R > 0 spans [rhs, rhs+|R|], with R < 0 spans [rhs-|R|, rhs]
                sense = RowSense.GE if range_value > 0 else RowSense.LE
        model.add_constraint(name, row_entries[name], sense, rhs, width)

    model.set_objective(objective, objective_constant)
    logger.debug(f"Parsed MPS model '{model_name}' with {model.num_variables} columns and {model.num_constraints} rows")
    return model
