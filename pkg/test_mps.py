"""
MPS and LP format tests
"""
import numpy as np
import pytest

from app.core.exceptions import ModelBuildError
from app.milp import INF, MilpModel, RowSense, export_lp, export_mps, mps_names, parse_mps
from app.milp.mps import fit_name, format_number


def random_model(rng: np.random.Generator, index: int) -> MilpModel:
    model = MilpModel(f"random{index}")
    n = int(rng.integers(1, 8))
    m = int(rng.integers(0, 6))
    variables = []
    for j in range(n):
        kind = rng.integers(0, 5)
        if kind == 0:
            variables.append(model.add_binary(f"b[{j}]"))
        elif kind == 1:
            variables.append(model.add_variable(f"x[{j}]", -INF, INF))
        elif kind == 2:
            variables.append(model.add_variable(f"x[{j}]", float(rng.integers(-5, 0)), float(rng.integers(1, 9))))
        elif kind == 3:
            variables.append(model.add_variable(f"x[{j}]", -INF, float(rng.integers(0, 9))))
        else:
            variables.append(model.add_variable(f"x[{j}]"))
    for i in range(m):
        chosen = rng.choice(n, size=int(rng.integers(1, n + 1)), replace=False)
        coefficients = {variables[j]: float(rng.normal()) for j in chosen}
        sense = [RowSense.LE, RowSense.GE, RowSense.EQ][int(rng.integers(0, 3))]
        range_ = float(rng.uniform(0.5, 3.0)) if sense != RowSense.EQ and rng.random() < 0.3 else None
        model.add_constraint(f"row[{i}]", coefficients, sense, float(rng.normal() * 3), range_)
    model.set_objective({v: float(rng.normal()) for v in variables if rng.random() < 0.7},
                        constant=float(rng.normal()) if rng.random() < 0.5 else 0.0)
    return model


def test_round_trip_preserves_structure():
    rng = np.random.default_rng(7)
    for index in range(60):
        model = random_model(rng, index)
        parsed = parse_mps(export_mps(model))
        assert parsed.same_structure(model, compare_names=True), f"model {index} changed in the round trip"


def test_empty_model_round_trip():
    model = MilpModel("empty")
    parsed = parse_mps(export_mps(model))
    assert parsed.num_variables == 0 and parsed.num_constraints == 0


def test_objective_constant_written_as_negated_rhs():
    model = MilpModel("constant")
    x = model.add_variable("x")
    model.set_objective({x: 1.0}, constant=2.5)
    text = export_mps(model)
    assert "OBJ" in text and "-2.5" in text
    assert parse_mps(text).objective_constant == 2.5


def test_long_names_are_shortened_deterministically():
    used = set()
    first = fit_name("a" * 40, 12, used)
    second = fit_name("a" * 40, 12, used)
    assert len(first) <= 12 and len(second) <= 12
    assert first != second
    assert fit_name("a" * 40, 12, set()) == first

    model = MilpModel("long")
    x = model.add_variable("g_thermal[1,1,1,base,plant_with_a_long_name]")
    model.add_constraint("load_balance[1,1,1,base,bus_with_a_long_name]", {x: 1.0}, RowSense.EQ, 1.0)
    _, rows, columns = mps_names(model, name_limit=16)
    assert all(len(name) <= 16 for name in rows + columns)
    assert parse_mps(export_mps(model, name_limit=16)).same_structure(model)


def test_numbers_round_trip_exactly():
    for value in (0.1, 1e-17, 123456789.123, -2.0 / 3.0):
        assert float(format_number(value)) == value
    assert format_number(-0.0) == "0"


def test_parse_rejects_general_integers_and_unknown_rows():
    general = "\n".join([
        "NAME test", "ROWS", " N OBJ", "COLUMNS",
        "    M1 'MARKER' 'INTORG'", "    z OBJ 1", "    M2 'MARKER' 'INTEND'",
        "BOUNDS", " UP BND z 5", "ENDATA",
    ])
    with pytest.raises(ModelBuildError):
        parse_mps(general)
    unknown = "\n".join(["NAME test", "ROWS", " N OBJ", "COLUMNS", "    x nope 1", "ENDATA"])
    with pytest.raises(ModelBuildError):
        parse_mps(unknown)


def test_lp_export_splits_ranged_rows_and_lists_binaries():
    model = MilpModel("lp")
    x = model.add_variable("x[1]", -INF, 4.0)
    b = model.add_binary("b")
    model.add_constraint("band", {x: 1.0, b: -2.0}, RowSense.GE, 1.0, range_=2.0)
    model.set_objective({x: 1.0})
    text = export_lp(model)
    assert "band_lo:" in text and "band_hi:" in text
    assert "x(1)" in text
    assert "Binaries" in text and text.rstrip().endswith("End")


def test_long_names_give_whitespace_separated_entries():
    model = MilpModel("free")
    flow = model.add_variable("f_fwd[1,1,1,base,line_between_north_and_south]")
    model.add_constraint("flow_limit_fwd[1,1,1,base,line_between_north_and_south]", {flow: 1.0}, RowSense.LE, 7.5)
    model.set_objective({flow: -1.0})
    text = export_mps(model.seal())

    section = text.split("COLUMNS\n")[1].split("RHS\n")[0]
    for line in section.splitlines():
        assert len(line.split()) == 3, line
    assert parse_mps(text).same_structure(model, compare_names=True)
