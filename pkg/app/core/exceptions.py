"""
Planner Exceptions
Error hierarchy shared by the model, solver and command layers
"""
from typing import Any, Optional


class PlannerError(Exception):
    """Base class for every error raised by the engine"""


class InstanceError(PlannerError):
    """Instance file could not be read or parsed"""

    def __init__(self, message: str, source: Optional[str] = None, field: Optional[str] = None):
        self.source = source
        self.field = field
        context = []
        if source:
            context.append(f"file={source}")
        if field:
            context.append(f"field={field}")
        super().__init__(f"{message} ({', '.join(context)})" if context else message)


class ValidationFailed(PlannerError):
    """Instance violates one or more invariants"""

    def __init__(self, report: Any):
        self.report = report
        super().__init__(f"Instance validation failed with {len(report.findings)} finding(s)")


class TimeAggregationError(PlannerError):
    """Season/typical-day mapping is incomplete or inconsistent"""


class ModelBuildError(PlannerError):
    """Invalid operation while building a MILP model"""


class ConfigurationError(PlannerError):
    """Invalid or incomplete configuration"""

    def __init__(self, message: str, log: str = ""):
        self.log = log
        super().__init__(message)


class SolverError(PlannerError):
    """Solver could not produce a trustworthy answer"""


class NumericalError(SolverError):
    """Numerical breakdown inside the LP core"""


class TimeLimitReached(SolverError):
    """Wall-clock limit hit inside an LP solve"""


class ExternalSolverError(SolverError):
    """External solver process failed or produced unreadable output"""

    def __init__(self, message: str, log: str = ""):
        self.log = log
        super().__init__(message if not log else f"{message}\n--- solver log ---\n{log}")


class PlanningError(PlannerError):
    """A yearly problem of the rolling horizon could not be solved"""

    def __init__(self, year: int, status: str, detail: str = ""):
        self.year = year
        self.status = status
        message = f"Year {year}: solver returned status '{status}'"
        if detail:
            message = f"{message}: {detail}"
        super().__init__(message)
