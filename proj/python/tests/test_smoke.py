from pathlib import Path

import pytest

import ruledfib

DATA = Path(__file__).resolve().parents[2] / "data"


def test_symbolic_rows():
    assert ruledfib.classify_symbolic("E20", 0)["row"] == "i-4"
    r = ruledfib.classify_symbolic("O+L", 0, order="inf")
    assert r["row"] == "i-3" and not r["has_fibration"]
    r = ruledfib.classify_symbolic("EQ", 2, "supersingular")
    assert r["row"] == "ii-2" and r["strange_type"]


def test_concrete_curve():
    s = ruledfib.curve_summary(str(DATA / "f5_full_two_torsion.json"))
    assert s["count"] == 8 and not s["supersingular"]
    r = ruledfib.classify_curve(str(DATA / "f5_full_two_torsion.json"), "O+L", point="P")
    assert r["row"] == "i-2"
    assert [(f["m"], f["a"]) for f in r["fibers"]] == [(2, 1), (2, 1)]


def test_unreachable_order_is_reported():
    r = ruledfib.classify_curve(str(DATA / "f5_full_two_torsion.json"), "O+L", order=3)
    assert r["status"] == "UnreachableOverField" and r["mode"] == "symbolic"


def test_fiber_arithmetic():
    assert ruledfib.ku_check([(2, 2), (2, 2), (2, 2)])["feasible"]
    assert not ruledfib.ku_check([(2, 2), (3, 3), (7, 7)])["feasible"]
    fams = ruledfib.enumerate_fibers(0, 0, 6)
    assert set(fams) == {"I", "II", "III"}
    assert ruledfib.enumerate_fibers(-1, 0, 6) == {}


def test_sym_split():
    assert ruledfib.sym_split(5, "ordinary")
    assert ruledfib.sym_split(2, "supersingular")


def test_errors():
    with pytest.raises(ruledfib.Error):
        ruledfib.classify_symbolic("E20", 4)
    with pytest.raises(ValueError):
        ruledfib.classify_symbolic("XY", 5)
