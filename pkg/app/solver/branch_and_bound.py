"""
Branch and Bound
Best-bound search over binary columns on top of the revised simplex LP core
"""
import heapq
import logging
import math
import time
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from app.core.exceptions import TimeLimitReached
from app.milp.model import MilpModel, ModelArrays
from app.milp.solution import Solution, SolveStatus
from app.solver.config import SolveConfig
from app.solver.simplex import solve_lp_arrays

logger = logging.getLogger(__name__)


@dataclass
class _Node:
    node_id: int
    depth: int
    col_lo: np.ndarray
    col_hi: np.ndarray
    relaxation: Solution


def fractional_columns(arrays: ModelArrays, values: np.ndarray, tolerance: float) -> np.ndarray:
    """Integer columns whose value is farther than ``tolerance`` from an integer"""
    distance = np.zeros(arrays.shape[1])
    integer = arrays.integer
    distance[integer] = np.abs(values[integer] - np.round(values[integer]))
    return np.flatnonzero(distance > tolerance)


def select_branching_column(values: np.ndarray, candidates: np.ndarray) -> int:
    """Most fractional column; ties go to the lowest index"""
    fraction = values[candidates] - np.floor(values[candidates])
    distance = np.minimum(fraction, 1.0 - fraction)
    return int(candidates[int(np.argmax(distance))])


def solve_with_fixed_integers(arrays: ModelArrays, values: np.ndarray, config: SolveConfig) -> Solution:
    """LP with every integer column fixed at its rounded value; source of MIP duals"""
    col_lo = arrays.col_lo.copy()
    col_hi = arrays.col_hi.copy()
    fixed = np.round(values[arrays.integer])
    col_lo[arrays.integer] = fixed
    col_hi[arrays.integer] = fixed
    return solve_lp_arrays(arrays, config, col_lo, col_hi)


def _gap(incumbent: float, bound: float) -> float:
    if not math.isfinite(incumbent) or not math.isfinite(bound):
        return math.inf
    return max(0.0, incumbent - bound) / (1.0 + abs(incumbent))


def solve_mip(model: MilpModel, config: Optional[SolveConfig] = None) -> Solution:
    """Solve a MILP with binary columns to optimality or to a node/time limit"""
    config = config or SolveConfig()
    arrays = model.to_arrays()
    started = time.monotonic()
    deadline = started + config.time_limit if config.time_limit else None

    try:
        root = solve_lp_arrays(arrays, config, deadline=deadline)
    except TimeLimitReached:
        logger.warning(f"Time limit reached while solving the root relaxation of '{model.name}'")
        return Solution(status=SolveStatus.NO_INCUMBENT, nodes=0)

    if root.status in (SolveStatus.INFEASIBLE, SolveStatus.UNBOUNDED):
        root.nodes = 1
        return root
    if not arrays.integer.any():
        root.nodes = 1
        root.max_violation = arrays.max_violation(root.values)
        return root

    counter = 0
    heap: List[Tuple[float, int, _Node]] = []
    heapq.heappush(heap, (root.objective, counter, _Node(counter, 0, arrays.col_lo.copy(), arrays.col_hi.copy(), root)))
    incumbent: Optional[np.ndarray] = None
    incumbent_objective = math.inf
    iterations = root.iterations
    nodes = 0
    limit_hit = False
    best_bound = root.objective

    while heap:
        if config.node_limit is not None and nodes >= config.node_limit:
            logger.info(f"Node limit ({config.node_limit}) reached")
            limit_hit = True
            break
        if deadline is not None and time.monotonic() > deadline:
            logger.info(f"Time limit ({config.time_limit}s) reached")
            limit_hit = True
            break

        bound, _, node = heapq.heappop(heap)
        best_bound = bound
        if incumbent is not None and _gap(incumbent_objective, bound) <= config.mip_gap:
            heap.clear()
            break
        nodes += 1

        values = node.relaxation.values
        candidates = fractional_columns(arrays, values, config.integrality_tolerance)
        if candidates.size == 0:
            if node.relaxation.objective < incumbent_objective:
                incumbent = values.copy()
                incumbent[arrays.integer] = np.round(incumbent[arrays.integer])
                incumbent_objective = node.relaxation.objective
                logger.debug(f"New incumbent {incumbent_objective:.10g} at node {node.node_id} (depth {node.depth})")
            continue

        column = select_branching_column(values, candidates)
        split = values[column]
        children = []
        down_hi = node.col_hi.copy()
        down_hi[column] = math.floor(split)
        children.append((node.col_lo, down_hi))
        up_lo = node.col_lo.copy()
        up_lo[column] = math.ceil(split)
        children.append((up_lo, node.col_hi))

        try:
            for col_lo, col_hi in children:
                relaxation = solve_lp_arrays(arrays, config, col_lo, col_hi, deadline=deadline)
                iterations += relaxation.iterations
                if relaxation.status != SolveStatus.OPTIMAL:
                    continue
                if incumbent is not None and _gap(incumbent_objective, relaxation.objective) <= config.mip_gap:
                    continue
                counter += 1
                heapq.heappush(heap, (relaxation.objective, counter,
                                      _Node(counter, node.depth + 1, col_lo, col_hi, relaxation)))
        except TimeLimitReached:
            # The popped node is not fully explored, keep its bound
            heapq.heappush(heap, (bound, node.node_id, node))
            limit_hit = True
            break

        if nodes % config.log_every_nodes == 0:
            open_bound = heap[0][0] if heap else incumbent_objective
            logger.info(f"Nodes {nodes}, open {len(heap)}, incumbent {incumbent_objective:.10g}, "
                        f"bound {open_bound:.10g}, gap {_gap(incumbent_objective, open_bound):.3e}")

    if limit_hit and heap:
        best_bound = min(heap[0][0], incumbent_objective)
    elif incumbent is not None:
        best_bound = min(best_bound, incumbent_objective)

    elapsed = time.monotonic() - started
    if incumbent is None:
        status = SolveStatus.NO_INCUMBENT if limit_hit else SolveStatus.INFEASIBLE
        logger.info(f"MIP '{model.name}': {status.value} after {nodes} nodes ({elapsed:.2f}s)")
        return Solution(status=status, bound=best_bound, iterations=iterations, nodes=nodes)

    gap = _gap(incumbent_objective, best_bound)
    status = SolveStatus.GAP_LIMIT if limit_hit and gap > config.mip_gap else SolveStatus.OPTIMAL

    final = solve_with_fixed_integers(arrays, incumbent, config)
    if final.status == SolveStatus.OPTIMAL:
        values = final.values
        duals, reduced, dual_objective = final.duals, final.reduced_costs, final.dual_objective
    else:
        logger.warning(f"Fixed-integer LP of '{model.name}' returned {final.status.value}; duals unavailable")
        values = incumbent
        duals, reduced, dual_objective = np.zeros(0), np.zeros(0), None

    objective = arrays.objective(values)
    logger.info(f"MIP '{model.name}': {status.value} objective {objective:.10g}, bound {best_bound:.10g}, "
                f"{nodes} nodes, {iterations} iterations ({elapsed:.2f}s)")
    return Solution(
        status=status,
        objective=objective,
        values=values,
        duals=duals,
        reduced_costs=reduced,
        bound=best_bound,
        gap=gap,
        dual_objective=dual_objective,
        iterations=iterations,
        nodes=nodes,
        max_violation=arrays.max_violation(values, config.integrality_tolerance),
    )
