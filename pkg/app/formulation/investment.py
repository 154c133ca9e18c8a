"""
Investment logic rows: precedence, association, exclusivity and capacity targets
"""
from typing import List

from app.formulation.context import FormulationContext
from app.formulation.index import VariableIndex
from app.milp.model import RowSense, RowSpec, merge_terms
from app.models.catalog import capacity_weight


def emit_investment_logic(ctx: FormulationContext, index: VariableIndex) -> List[RowSpec]:
    catalog = ctx.catalog
    x = index.x
    rows: List[RowSpec] = []

    for rule in catalog.precedences:
        rows.append(RowSpec(f"precedence[{rule.before},{rule.after}]",
                            merge_terms([(x[rule.before], 1.0), (x[rule.after], -1.0)]), RowSense.GE, 0.0))

    for rule in catalog.associations:
        rows.append(RowSpec(f"association[{rule.primary},{rule.dependent}]",
                            merge_terms([(x[rule.primary], 1.0), (x[rule.dependent], -1.0)]), RowSense.GE, 0.0))

    for position, group in enumerate(catalog.exclusivities, start=1):
        name = group.id or str(position)
        rows.append(RowSpec(f"exclusivity[{name}]",
                            merge_terms([(x[project_id], 1.0) for project_id in group.project_ids]),
                            RowSense.LE, 1.0))

    for constraint in catalog.capacity_constraints:
        if not constraint.applies_to(ctx.year):
            continue
        terms = merge_terms([
            (x[project_id], capacity_weight(catalog.project(project_id), ctx.system, constraint))
            for project_id in constraint.members()
        ])
        row = RowSpec.between(f"capacity[{constraint.id}]", terms, constraint.lower, constraint.upper)
        if row is not None:
            rows.append(row)

    return rows
