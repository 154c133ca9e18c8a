"""
CPLEX-LP Export
Human-readable LP rendering of a MilpModel
"""
import re
from typing import Dict, List, Set, Tuple

from app.milp.mps import format_number
from app.milp.model import INF, MilpModel, RowSense

MAX_LINE = 255

_FORBIDDEN = re.compile(r"[^A-Za-z0-9!\"#$%&()/,.;?@_`'{}|~]")
_SENSE_TEXT = {RowSense.LE: "<=", RowSense.GE: ">=", RowSense.EQ: "="}


def lp_name(name: str, used: Set[str]) -> str:
    """Map a model name onto the LP-format character set, keeping it unique"""
    clean = name.replace("[", "(").replace("]", ")")
    clean = _FORBIDDEN.sub("_", clean) or "_"
    if clean[0].isdigit() or clean[0] == "." or (clean[0] in "eE" and len(clean) > 1 and clean[1].isdigit()):
        clean = f"_{clean}"
    candidate, suffix = clean, 1
    while candidate in used:
        candidate = f"{clean}_{suffix}"
        suffix += 1
    used.add(candidate)
    return candidate


def _terms(coefficients: Dict[int, float], names: List[str]) -> List[str]:
    parts = []
    for position, (index, value) in enumerate(sorted(coefficients.items())):
        sign = "-" if value < 0 else "+"
        magnitude = format_number(abs(value))
        if position == 0:
            parts.append(f"{'-' if value < 0 else ''}{magnitude} {names[index]}")
        else:
            parts.append(f"{sign} {magnitude} {names[index]}")
    return parts


def _wrap(head: str, parts: List[str], tail: str) -> List[str]:
    lines, current = [], head
    for part in parts + ([tail] if tail else []):
        if len(current) + len(part) + 1 > MAX_LINE and current.strip():
            lines.append(current)
            current = "   "
        current = f"{current} {part}"
    lines.append(current)
    return lines


def export_lp(model: MilpModel) -> str:
    """Render the model in CPLEX-LP format; ranged rows become a `_lo`/`_hi` pair"""
    used: Set[str] = set()
    names = [lp_name(v.name, used) for v in model.variables]
    row_used: Set[str] = set()

    lines = [f"\\ Problem name: {model.name}", "Minimize"]
    objective_parts = _terms(model.objective, names)
    if model.objective_constant != 0.0:
        constant = model.objective_constant
        objective_parts.append(f"{'-' if constant < 0 else '+'} {format_number(abs(constant))}")
    if not objective_parts:
        objective_parts = ["0"]
    lines.extend(_wrap(" obj:", objective_parts, ""))

    lines.append("Subject To")
    for constraint in model.constraints:
        parts = _terms(constraint.coefficients, names)
        if not parts:
            lower, upper = constraint.bounds()
            lines.append(f"\\ empty row {constraint.name}: {format_number(lower)} <= 0 <= {format_number(upper)}")
            continue
        if constraint.range is None:
            label = lp_name(constraint.name, row_used)
            tail = f"{_SENSE_TEXT[constraint.sense]} {format_number(constraint.rhs)}"
            lines.extend(_wrap(f" {label}:", parts, tail))
            continue
        lower, upper = constraint.bounds()
        low_label = lp_name(f"{constraint.name}_lo", row_used)
        high_label = lp_name(f"{constraint.name}_hi", row_used)
        lines.extend(_wrap(f" {low_label}:", parts, f">= {format_number(lower)}"))
        lines.extend(_wrap(f" {high_label}:", parts, f"<= {format_number(upper)}"))

    lines.append("Bounds")
    for variable in model.variables:
        name = names[variable.index]
        lower, upper = variable.lower, variable.upper
        if variable.is_binary and (lower, upper) == (0.0, 1.0):
            continue
        if lower == upper:
            lines.append(f" {name} = {format_number(lower)}")
        elif lower == -INF and upper == INF:
            lines.append(f" {name} free")
        elif lower == 0.0 and upper == INF:
            continue
        else:
            low_text = "-inf" if lower == -INF else format_number(lower)
            high_text = "+inf" if upper == INF else format_number(upper)
            lines.append(f" {low_text} <= {name} <= {high_text}")

    binaries = [names[v.index] for v in model.variables if v.is_binary]
    if binaries:
        lines.append("Binaries")
        lines.extend(_wrap("", binaries, ""))
    lines.append("End")
    return "\n".join(lines) + "\n"
