"""
External Solver Backend
Hands an MPS export to an external MILP process and reads its solution file back
"""
import logging
import re
import shlex
import subprocess
import tempfile
import time
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import numpy as np

from app.core.config import settings
from app.core.exceptions import ConfigurationError, ExternalSolverError
from app.milp.model import MilpModel
from app.milp.mps import export_mps, mps_names
from app.milp.solution import Solution, SolveStatus

logger = logging.getLogger(__name__)

SUPPORTED_FORMATS = ("cbc",)
_OBJECTIVE_VALUE = re.compile(r"objective value\s+(-?[0-9.eE+\-]+|inf|-inf|nan)", re.IGNORECASE)


def build_command(template: str, model_path: Path, solution_path: Path) -> List[str]:
    """Expand the ``{model}`` and ``{solution}`` placeholders of the configured command"""
    if "{model}" not in template or "{solution}" not in template:
        raise ConfigurationError("EXTERNAL_SOLVER_COMMAND must contain both {model} and {solution} placeholders")
    return [
        part.replace("{model}", str(model_path)).replace("{solution}", str(solution_path))
        for part in shlex.split(template)
    ]


def _status_from_header(header: str, has_values: bool) -> SolveStatus:
    text = header.strip().lower()
    if text.startswith("optimal"):
        return SolveStatus.OPTIMAL
    if "infeasible" in text:
        return SolveStatus.INFEASIBLE
    if "unbounded" in text:
        return SolveStatus.UNBOUNDED
    if text.startswith("stopped"):
        return SolveStatus.GAP_LIMIT if has_values else SolveStatus.NO_INCUMBENT
    raise ExternalSolverError(f"Unrecognised solution status line: '{header.strip()}'")


def parse_cbc_solution(text: str, model: MilpModel, name_limit: Optional[int] = None) -> Solution:
    """Parse a CBC-style solution file.

    The first line carries the status; entry lines are ``index name value reduced``.
    When rows are printed too they come first and the index restarts at 0 for columns.
    """
    lines = [line for line in text.splitlines() if line.strip()]
    if not lines:
        raise ExternalSolverError("Solution file is empty")
    header = lines[0]

    blocks: List[List[Tuple[str, float, float]]] = [[]]
    previous = -1
    for number, line in enumerate(lines[1:], start=2):
        tokens = line.replace("**", " ").split()
        if len(tokens) < 3:
            raise ExternalSolverError(f"Solution line {number} is malformed: '{line.strip()}'")
        try:
            index = int(tokens[0])
            value = float(tokens[2])
            marginal = float(tokens[3]) if len(tokens) > 3 else 0.0
        except ValueError:
            raise ExternalSolverError(f"Solution line {number} is malformed: '{line.strip()}'") from None
        if index <= previous:
            blocks.append([])
        previous = index
        blocks[-1].append((tokens[1], value, marginal))

    _, row_names, column_names = mps_names(model, name_limit)
    column_lookup: Dict[str, int] = {name: i for i, name in enumerate(column_names)}
    row_lookup: Dict[str, int] = {name: i for i, name in enumerate(row_names)}
    row_block, column_block = (blocks[0], blocks[1]) if len(blocks) > 1 else ([], blocks[0])

    values = np.zeros(model.num_variables)
    reduced = np.zeros(model.num_variables)
    for name, value, marginal in column_block:
        if name not in column_lookup:
            raise ExternalSolverError(f"Solution refers to unknown column '{name}'")
        values[column_lookup[name]] = value
        reduced[column_lookup[name]] = marginal
    duals = np.zeros(0)
    if row_block:
        duals = np.zeros(model.num_constraints)
        for name, _, marginal in row_block:
            if name in row_lookup:
                duals[row_lookup[name]] = marginal

    status = _status_from_header(header, bool(column_block))
    solution = Solution(status=status, backend="external")
    if status in (SolveStatus.OPTIMAL, SolveStatus.GAP_LIMIT):
        arrays = model.to_arrays()
        solution.values = values
        solution.reduced_costs = reduced
        solution.duals = duals
        solution.objective = arrays.objective(values)
        match = _OBJECTIVE_VALUE.search(header)
        solution.bound = solution.objective if status == SolveStatus.OPTIMAL else np.nan
        if match:
            logger.debug(f"External solver reported objective {match.group(1)}")
    return solution


def solve_external(model: MilpModel,
                   command: Optional[str] = None, solution_format: Optional[str] = None,
                   timeout: Optional[float] = None) -> Solution:
    """Run the configured external solver on ``model``"""
    template = command or settings.EXTERNAL_SOLVER_COMMAND
    if not template:
        raise ConfigurationError("SOLVER_BACKEND is 'external' but EXTERNAL_SOLVER_COMMAND is not set")
    solution_format = (solution_format or settings.EXTERNAL_SOLVER_FORMAT).lower()
    if solution_format not in SUPPORTED_FORMATS:
        raise ConfigurationError(f"Unsupported external solution format '{solution_format}'")
    timeout = timeout or settings.EXTERNAL_SOLVER_TIMEOUT

    with tempfile.TemporaryDirectory(prefix="expansion_") as workdir:
        model_path = Path(workdir) / "model.mps"
        solution_path = Path(workdir) / "solution.txt"
        model_path.write_text(export_mps(model), encoding="utf-8")
        args = build_command(template, model_path, solution_path)
        logger.info(f"Running external solver: {' '.join(args)}")
        started = time.monotonic()
        try:
            result = subprocess.run(args, capture_output=True, text=True, timeout=timeout, cwd=workdir)
        except (FileNotFoundError, PermissionError) as e:
            raise ConfigurationError(f"EXTERNAL_SOLVER_COMMAND is not runnable: {args[0]}", str(e)) from e
        except subprocess.TimeoutExpired as e:
            partial = (e.stdout or "") if isinstance(e.stdout, str) else ""
            raise ExternalSolverError(f"External solver timed out after {timeout}s", partial) from e

        log = (result.stdout or "") + (result.stderr or "")
        if result.returncode != 0:
            raise ExternalSolverError(f"External solver exited with code {result.returncode}", log)
        if not solution_path.exists():
            raise ExternalSolverError("External solver did not write a solution file", log)

        try:
            solution = parse_cbc_solution(solution_path.read_text(encoding="utf-8"), model)
        except ExternalSolverError as e:
            raise ExternalSolverError(str(e), log) from e

    solution.log = log
    logger.info(f"External solver finished with status {solution.status.value} "
                f"in {time.monotonic() - started:.2f}s")
    return solution
