import os
from fractions import Fraction

import pytest

import fleetopt

HERE = os.path.dirname(__file__)


def trivial():
    with open(os.path.join(HERE, "..", "golden", "trivial.txt")) as f:
        return f.read()


def test_trivial_solve():
    fleet = fleetopt.solve(trivial())
    assert fleet["complete"]
    assert len(fleet["vehicles"]) == 1


def test_bisection_matches_oracle():
    for seed in (2, 5, 79):
        text = fleetopt.generate(5, 2, 4, seed=seed)
        fleet = fleetopt.solve(text, mode="bisect")
        assert fleet["proven_optimal"]
        assert fleet["n_min"] == fleetopt.min_fleet(text)


def test_greedy_reports_rows():
    text = fleetopt.generate(8, 2, 6, rules=10, seed=4)
    fleet = fleetopt.solve(text)
    rows = fleet["report"]["rows"]
    assert rows[-1]["tests_remaining"] == 0
    assert fleet["report"]["totals"]["vehicles"] == sum(r["vehicles"] for r in rows)


def test_anneal_is_repeatable():
    text = fleetopt.generate(10, 2, 8, rules=15, seed=21)
    a = fleetopt.solve(text, backend="anneal", seed=7)
    b = fleetopt.solve(text, backend="anneal", seed=7)
    a.pop("report")
    b.pop("report")
    assert a == b


def test_export_matches_golden():
    with open(os.path.join(HERE, "..", "golden", "trivial_sat.lp")) as f:
        assert fleetopt.export_model(trivial(), 1, "sat", "lp") == f.read()


def test_coverage_is_exact():
    assert fleetopt.max_coverage(trivial(), 1) == Fraction(1)
    assert fleetopt.max_coverage(trivial(), 0) == 0


def test_parse_error():
    with pytest.raises(ValueError):
        fleetopt.solve("[features]\nF0\n[types]\nT0\n[tests]\npresent=F9 absent= anyof= k=1 w=1\n")


def test_cli_entry():
    code, out, err = fleetopt.run_cli(["generate", "--f", "4", "--o", "1", "--q", "2", "--seed", "3"])
    assert code == 0
    assert out == fleetopt.generate(4, 1, 2, seed=3)
