"""Smoke test for the mass_layout extension module.

Build and run from the repository root:

    cargo build -p mass-py --features extension-module --release
    cp target/release/libmass_layout.so python/mass_layout.so
    python3 python/smoke_test.py
"""

import pathlib
import sys

HERE = pathlib.Path(__file__).resolve().parent
sys.path.insert(0, str(HERE))

import mass_layout as ml  # noqa: E402

FIXTURE = HERE.parent / "crates" / "core" / "tests" / "fixtures" / "example.csv"


def main() -> None:
    loads = ml.LoadMatrix.from_csv(FIXTURE.read_text())
    assert loads.names == ["FI", "FII", "FIII", "FIV", "FV", "FVI"]
    assert len(loads) == 6
    assert loads.load("FIV", "FIII") == 50.0
    assert loads.load("FI", "FIII") is None
    assert loads.total_load() == 215.0

    plan = ml.FloorPlan()
    assert plan.grid() == (2, 3)

    pairing = ml.assign(loads)
    assert pairing["cost"] == 135.0
    assert not pairing["uses_vacant_cell"]
    assert ("FI", "FII") in pairing["pairs"]

    seed = ml.initial_layout(loads, plan)
    assert seed["cost"] == 2580.0

    result = ml.optimize(loads, plan)
    assert result["initial_cost"] == 2580.0
    assert result["final_cost"] == 2360.0
    assert result["improvement"] == 220.0
    assert result["moves"] == [("column2", ["col1", "col2"], -220.0, 2360.0)]
    assert ml.layout_cost(loads, plan, result["final_placement"]) == 2360.0

    best = ml.brute_force(loads, plan)
    assert best["best_cost"] == 2360.0
    assert best["optima_count"] == 16

    small = ml.LoadMatrix(["A", "B"], [[None, 3.5], [1.0, None]])
    assert ml.assign(small)["pairs"] == [("A", "B"), ("B", "A")]

    try:
        ml.optimize(loads, ml.FloorPlan(floor_width=42))
    except ml.InfeasibleError:
        pass
    else:
        raise AssertionError("expected InfeasibleError")

    try:
        ml.LoadMatrix.from_csv("facility,A\nA,-,1\n")
    except ml.MassError:
        pass
    else:
        raise AssertionError("expected MassError")

    print("smoke test passed:", result["initial_cost"], "->", result["final_cost"])


if __name__ == "__main__":
    main()
