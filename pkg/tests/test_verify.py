import pytest

from qkan import fixtures
from qkan.errors import BudgetExceeded
from qkan.verify import (
    CHECKS,
    Bounds,
    all_categories,
    check_names,
    discrete_distributors,
    mine,
    verify,
)
from qkan.workspace import parse_workspace


def workspace(base):
    key = "quantale" if fixtures.quantale(base).m == 1 else "quantaloid"
    return parse_workspace({key: fixtures.SPECS[base]})


NAMES = [c.name for c in CHECKS]


def test_every_check_has_a_name_and_alias():
    names = check_names()
    for c in CHECKS:
        assert c.name in names and all(a in names for a in c.aliases)
    assert {"thm4.6", "thm6.2", "thm7.7", "thm8.2", "lemma3.2", "lemma-kphi-discrete"} <= set(names)


def test_unknown_check():
    with pytest.raises(KeyError):
        verify(workspace("2"), "thm9.9")


@pytest.mark.parametrize("base", ["2", "godel-3", "lukasiewicz-3"])
@pytest.mark.parametrize("name", NAMES)
def test_checks_hold_on_chains(base, name):
    v = verify(workspace(base), name)
    assert v.result == "holds", (v.witness, v.details)
    assert v.exit_code == 0


@pytest.mark.parametrize("name", NAMES)
def test_alias_gives_same_verdict(name):
    chk = [c for c in CHECKS if c.name == name][0]
    ws = workspace("2")
    for alias in chk.aliases:
        a, b = verify(ws, alias), verify(ws, name)
        assert (a.check, a.result, a.counts) == (b.check, b.result, b.counts)
        assert a.details["aliases"] == list(chk.aliases)


def test_sweep_sizes():
    Q = fixtures.two()
    shapes = {}
    for shape, _ in discrete_distributors(Q, 3):
        shapes[shape] = shapes.get(shape, 0) + 1
    assert shapes["3x3"] == 512 and shapes["2x3"] == 64 and shapes["0x0"] == 1
    assert sum(shapes.values()) == 689
    # categories over 2 on at most 2 objects: 1 + 1 + 3 preorders on two points... plus the empty one
    assert sum(1 for _ in all_categories(Q, 2, 10**5)) == 1 + 1 + 4
    with pytest.raises(BudgetExceeded):
        list(all_categories(fixtures.quantale("lukasiewicz-3"), 3, 100))


def test_thm46_count_over_two_with_three_objects():
    v = verify(workspace("2"), "thm4.6", Bounds(max_objects=3))
    assert v.result == "holds"
    assert v.counts["by_shape"]["3x3"] == 512


def test_girard_checks_are_vacuous_on_godel3():
    ws = workspace("godel-3")
    for name in ("negation-isomorphism", "girard-ccd-iff-opccd", "girard-three-way"):
        v = verify(ws, name)
        assert v.result == "holds" and v.details["premise"] is False


def test_criterion_pattern_on_godel3():
    v = verify(workspace("godel-3"), "thm8.2")
    assert v.result == "holds"
    assert v.details["pattern"] == "all fail"
    assert not v.details["conditions"]["i"] and not v.details["conditions"]["v"]
    assert {"iii", "iv"} <= set(v.witness)
    # the identity on a singleton already refutes (iv)
    assert v.witness["iv"]["phi"] == [[2]]


def test_criterion_pattern_on_lukasiewicz3():
    v = verify(workspace("lukasiewicz-3"), "thm8.2")
    assert v.result == "holds" and v.details["pattern"] == "all hold" and v.witness is None


def test_criterion_premise_fails_on_quantaloids():
    v = verify(workspace("girard-2"), "thm8.2")
    assert v.result == "holds" and v.details["premise"] is False


def test_budget_exceeded_is_partial():
    v = verify(workspace("2"), "thm4.6", Bounds(budget=3))
    assert v.result == "budget-exceeded" and v.exit_code == 3
    assert v.details["partial"] and v.counts["instances"] == 3


def test_boolean4_sweeps_report_budget():
    v = verify(workspace("boolean-4"), "thm4.6", Bounds(presheaf_budget=10**4))
    assert v.result in ("holds", "budget-exceeded")
    if v.result == "budget-exceeded":
        assert v.details["partial"]


def test_mine_over_godel3():
    ws = workspace("godel-3")
    four = mine(ws, 4)
    assert four.result == "fails" and four.witness["phi"] == [[2]]
    assert four.counts["by_shape"]["1x1"] == 3  # found after the 0-sized shapes and two entries
    three = mine(ws, 3)
    assert three.result == "fails"
    for k in (1, 2):
        assert mine(ws, k).result == "holds"
    five = mine(ws, 5)
    assert "bounded search" in five.details["scope"]
    # bounded evidence: regular fails, Kφ is (ccd) and not (op-ccd)
    assert five.result == "fails" and five.witness["phi"] == [[0, 1], [1, 2]]
    assert five.details["cross_check"] == "Rφ agrees with Kφ"


def test_mine_over_lukasiewicz3_finds_nothing():
    ws = workspace("lukasiewicz-3")
    for k in range(1, 6):
        v = mine(ws, k)
        assert v.result == "holds" and "no universal claim" in v.details["scope"]


def test_mine_rejects_unknown_implication():
    with pytest.raises(KeyError):
        mine(workspace("2"), 6)
