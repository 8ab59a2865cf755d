import numpy as np
import pytest
from hypothesis import given, strategies as st

from oracles import monotone_tables, preserves_all_joins, preserves_all_meets, small_lattices
from qkan.errors import StructureError
from qkan.lattice import FiniteLattice, MonotoneMap, bound, find_adjoint, galois

LATTICES = small_lattices()


def test_small_lattice_catalogue_is_distinct():
    assert len(LATTICES) == 10
    assert all(L.n <= 5 for L in LATTICES)
    assert sum(L.is_distributive() for L in LATTICES if L.n == 5) == 3  # M3 and N5 are not


def test_bound_examples():
    two = FiniteLattice.chain(2)
    assert bound(two, "join", []) == two.bottom
    assert bound(two, "meet", []) == two.top
    g3 = FiniteLattice.chain(3, ["0", "1/2", "1"])
    assert bound(g3, "join", [g3.index("1/2"), g3.index("1")]) == g3.index("1")
    with pytest.raises(ValueError):
        bound(two, "sum", [])


def test_rejects_non_lattice_orders():
    with pytest.raises(StructureError):
        FiniteLattice([[True, True], [True, True]])  # not antisymmetric
    with pytest.raises(StructureError):
        FiniteLattice(np.eye(2, dtype=bool))  # two incomparable elements, no join


def test_monotone_map_rejects_order_reversal():
    two = FiniteLattice.chain(2)
    with pytest.raises(StructureError):
        MonotoneMap(two, two, (1, 0))


def test_find_adjoint_identity_on_godel3():
    g3 = FiniteLattice.chain(3)
    ident = MonotoneMap(g3, g3, (0, 1, 2))
    assert find_adjoint(ident, "left") == ident
    assert find_adjoint(ident, "right") == ident


def test_find_adjoint_constant_top():
    # the constant-top map preserves all meets but not the empty join
    two = FiniteLattice.chain(2)
    f = MonotoneMap(two, two, (1, 1))
    left = find_adjoint(f, "left")
    assert left is not None and left.table == (0, 0)
    assert galois(left, f)
    assert find_adjoint(f, "right") is None


def test_find_adjoint_min_half():
    g3 = FiniteLattice.chain(3)
    f = MonotoneMap(g3, g3, (0, 1, 1))  # x -> min(x, 1/2)
    g = find_adjoint(f, "right")
    assert g is not None and g.table == (0, 2, 2)  # y >= 1/2 -> 1, else y


def test_find_adjoint_matches_preservation_oracle():
    checked = 0
    for D in LATTICES:
        for C in LATTICES:
            for t in monotone_tables(D, C):
                f = MonotoneMap(D, C, t)
                assert (find_adjoint(f, "right") is not None) == preserves_all_joins(D, C, t)
                assert (find_adjoint(f, "left") is not None) == preserves_all_meets(D, C, t)
                checked += 1
    assert checked > 1000


@given(st.sampled_from(LATTICES), st.data())
def test_join_meet_tables_are_bounds(L, data):
    x = data.draw(st.integers(0, L.n - 1))
    y = data.draw(st.integers(0, L.n - 1))
    j, m = L.join[x, y], L.meet[x, y]
    uppers = [z for z in range(L.n) if L.le(x, z) and L.le(y, z)]
    lowers = [z for z in range(L.n) if L.le(z, x) and L.le(z, y)]
    assert j in uppers and all(L.le(j, z) for z in uppers)
    assert m in lowers and all(L.le(z, m) for z in lowers)


@given(st.sampled_from(LATTICES))
def test_dual_swaps_bounds(L):
    D = L.dual()
    assert D.top == L.bottom and D.bottom == L.top
    assert np.array_equal(D.join, L.meet)


def test_powerset_is_boolean_and_chain_is_not():
    assert FiniteLattice.powerset(2).is_boolean()
    assert not FiniteLattice.chain(3).is_boolean()
