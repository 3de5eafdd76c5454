import pathlib
import json

import pytest

import gowers_lab

SCENARIOS = pathlib.Path(__file__).resolve().parents[2] / "scenarios"

MS6 = {"kind": "MathiasSilver", "universe": 6, "min_size": 1, "slack": 1}


def test_instance_summary_counts_palette():
    summary = gowers_lab.instance_summary(MS6)
    assert summary["palette_size"] == 63
    assert summary["points"] == 6


def test_axioms_hold_on_small_instance():
    report = gowers_lab.check_axioms(MS6, 2)
    assert report["all_pass"]
    assert [a["axiom"] for a in report["axioms"]] == [1, 2, 3, 4, 5]


def test_even_first_point_cannot_be_forced():
    result = gowers_lab.solve({"kind": "MathiasSilver", "universe": 4, "slack": 1}, "F", "x0_even", 1, "I")
    assert result["winner"] == "II"


def test_typed_error_surfaces_code():
    with pytest.raises(gowers_lab.GowersError) as info:
        gowers_lab.instance_summary({"kind": "NoSuchSpace"})
    assert info.value.code == "SpecInvalid"


def test_bundled_scenario_matches_cli_contract():
    scenario = json.loads((SCENARIOS / "ms-kastanas-h1.json").read_text())
    report, code = gowers_lab.run_scenario(scenario)
    assert code == 0
    assert report["status"] == "ok"
    first = gowers_lab.render_report(report, "json")
    again, _ = gowers_lab.run_scenario(scenario)
    assert gowers_lab.render_report(again, "json") == first


def test_budget_override_exhausts():
    scenario = json.loads((SCENARIOS / "ms-kastanas-h1.json").read_text())
    _, code = gowers_lab.run_scenario(scenario, budget_nodes=10)
    assert code == 3
