"""
Rolling Horizon Planner
Solves one co-optimisation problem per year, fixing each year's investments before moving on
"""
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Dict, List, Mapping, Optional, Tuple

from app.core.exceptions import PlanningError, SolverError
from app.formulation.builder import YearlyModel, build_yearly_model
from app.formulation.context import FormulationOptions
from app.milp.mps import export_mps
from app.milp.solution import Solution, SolveStatus
from app.models.catalog import DecisionKind
from app.models.instance import Instance
from app.models.plan import ExpansionPlan, ProjectDecision, YearSummary
from app.services.annuity import annualize_cost
from app.services.reporting import summarize_year
from app.solver.backend import solve
from app.solver.config import SolveConfig

logger = logging.getLogger(__name__)

__all__ = ["RollingHorizonPlanner", "YearResult", "run_rolling_horizon", "solve_operation", "annualize_cost"]


@dataclass
class YearResult:
    year: int
    yearly: YearlyModel
    solution: Solution
    summary: YearSummary


YearCallback = Callable[[YearResult], None]


class RollingHorizonPlanner:
    """Fix-and-advance planner: year y sees every project decided before y as fixed"""

    def __init__(self, instance: Instance, config: Optional[SolveConfig] = None, backend: Optional[str] = None,
                 options: Optional[FormulationOptions] = None, export_dir: Optional[Path] = None,
                 on_year: Optional[YearCallback] = None):
        self.instance = instance.with_existing_assets()
        self.config = config or SolveConfig()
        self.backend = backend
        self.options = options
        self.export_dir = Path(export_dir) if export_dir is not None else None
        self.on_year = on_year
        self.results: List[YearResult] = []
        self._decided: Dict[str, Tuple[int, float]] = {}

    def run(self) -> ExpansionPlan:
        horizon = self.instance.horizon
        logger.info(f"Starting rolling horizon for '{self.instance.name}' over {horizon.years} year(s)")
        for year in range(1, horizon.years + 1):
            result = self.solve_year(year)
            self.results.append(result)
            if self.on_year is not None:
                self.on_year(result)
        plan = self._plan()
        logger.info(f"Rolling horizon completed: {len(self._decided)} project(s) built, "
                    f"present value {plan.total_present_value:.6g}")
        return plan

    def solve_year(self, year: int) -> YearResult:
        """Build, solve and record year ``year`` given the decisions taken so far"""
        fixed = {project_id: value for project_id, (_, value) in self._decided.items()}
        logger.info(f"Year {year}: {len(fixed)} decision(s) fixed")

        yearly = build_yearly_model(self.instance.for_year(year), fixed, self.options, year=year)
        if self.export_dir is not None:
            self.export_dir.mkdir(parents=True, exist_ok=True)
            (self.export_dir / f"{yearly.model.name}.mps").write_text(export_mps(yearly.model), encoding="utf-8")

        try:
            solution = solve(yearly.model, self.config, self.backend)
        except SolverError as e:
            logger.error(f"Year {year}: solver failed: {e}")
            raise PlanningError(year, "error", str(e)) from e
        if not solution.has_solution:
            logger.error(f"Year {year}: no usable solution (status {solution.status.value})")
            raise PlanningError(year, solution.status.value, self._infeasibility_hint(solution))

        new_projects = self._record_decisions(year, yearly, solution)
        summary = summarize_year(year, yearly, solution, self.instance.horizon.discount_factor(year), new_projects)
        logger.info(f"Year {year}: objective {solution.objective:.6g}, status {solution.status.value}, "
                    f"new projects {new_projects or 'none'}")
        return YearResult(year=year, yearly=yearly, solution=solution, summary=summary)

    def _record_decisions(self, year: int, yearly: YearlyModel, solution: Solution) -> List[str]:
        tolerance = self.config.integrality_tolerance
        new_projects = []
        for project in self.instance.catalog.candidates:
            if project.id in self._decided:
                continue
            value = solution.value(yearly.index.x[project.id])
            if value <= tolerance:
                continue
            if project.decision_kind != DecisionKind.CONTINUOUS:
                value = 1.0
            self._decided[project.id] = (year, value)
            new_projects.append(project.id)
        return new_projects

    def _plan(self) -> ExpansionPlan:
        decisions = []
        for project in self.instance.catalog.projects:
            if project.existing:
                decisions.append(ProjectDecision(project_id=project.id, target_id=project.target_id,
                                                 value=1.0, existing=True))
                continue
            year, value = self._decided.get(project.id, (None, 0.0))
            decisions.append(ProjectDecision(project_id=project.id, target_id=project.target_id,
                                             decision_year=year, value=value))
        return ExpansionPlan(instance=self.instance.name, decisions=decisions,
                             years=[result.summary for result in self.results])

    @staticmethod
    def _infeasibility_hint(solution: Solution) -> str:
        if solution.status == SolveStatus.INFEASIBLE:
            return "the yearly problem is infeasible; check investment logic and fixed decisions"
        return f"stopped without an incumbent after {solution.nodes} node(s)"


def run_rolling_horizon(instance: Instance, config: Optional[SolveConfig] = None, backend: Optional[str] = None,
                        options: Optional[FormulationOptions] = None,
                        on_year: Optional[YearCallback] = None) -> ExpansionPlan:
    return RollingHorizonPlanner(instance, config, backend, options, on_year=on_year).run()


def solve_operation(instance: Instance, decisions: Mapping[str, float], year: int = 1,
                    config: Optional[SolveConfig] = None, backend: Optional[str] = None,
                    options: Optional[FormulationOptions] = None) -> YearResult:
    """Operation-only run: every project pinned (given values, existing at 1, others at 0)"""
    instance = instance.with_existing_assets()
    fixed = {project.id: float(decisions.get(project.id, 0.0))
             for project in instance.catalog.candidates}
    yearly = build_yearly_model(instance.for_year(year), fixed, options, year=year)
    solution = solve(yearly.model, config or SolveConfig(), backend)
    if not solution.has_solution:
        raise PlanningError(year, solution.status.value, "operation-only model has no solution")
    summary = summarize_year(year, yearly, solution, instance.horizon.discount_factor(year))
    return YearResult(year=year, yearly=yearly, solution=solution, summary=summary)
