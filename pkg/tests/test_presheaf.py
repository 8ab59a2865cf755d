from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import is_ccd_by_definition, presheaf_hom, presheaves_by_definition
from qkan import fixtures
from qkan.errors import BudgetExceeded, PreconditionError
from qkan.qcat import QCategory, QFunctor, dualize, identity_functor, skeletal_quotient, underlying_order
from qkan.qdist import functor_graph, identity
from qkan.quantaloid import GirardFamily, girard_search
from qkan.presheaf import (
    Copresheaf,
    Presheaf,
    co_yoneda,
    enumerate_copresheaves,
    enumerate_presheaves,
    infimum,
    is_ccd,
    is_complete,
    is_opccd,
    negation_iso,
    sup_inf,
    supremum,
    tensor_cotensor,
    transpose,
    yoneda,
)
from qkan.verify import all_categories


def small_fixture_categories(limit=40):
    for b in fixtures.CORE:
        Q = fixtures.quantale(b)
        for name, A in fixtures.categories(Q).items():
            P = enumerate_presheaves(A)
            if P.n <= limit:
                yield pytest.param(A, id=f"{b}:{name}")


SMALL = list(small_fixture_categories())


@pytest.mark.parametrize("A", SMALL)
def test_enumeration_matches_definition(A):
    P = enumerate_presheaves(A)
    expected = presheaves_by_definition(A)
    got = sorted((P.types[i], tuple(int(v) for v in P.values[i])) for i in range(P.n))
    assert got == sorted(expected)
    for i, j in product(range(P.n), repeat=2):
        if P.n > 20 and (i + j) % 7:
            continue
        mu = (P.types[i], tuple(P.values[i]))
        nu = (P.types[j], tuple(P.values[j]))
        assert P.hom[i, j] == presheaf_hom(A, mu, nu)


def test_presheaf_examples(two, luk3, godel3):
    P = enumerate_presheaves(QCategory.star(two))
    assert P.n == 2
    P = enumerate_presheaves(QCategory.star(luk3))
    assert P.n == 3
    # hom is the implication mu' ↙ mu
    for i, j in product(range(3), repeat=2):
        expected = luk3.residual(luk3.arrow(0, 0, int(P.values[j][0])), luk3.arrow(0, 0, int(P.values[i][0])), "lda")
        assert P.hom[i, j] == expected.idx
    assert enumerate_copresheaves(QCategory.star(two)).n == 2
    assert enumerate_copresheaves(QCategory.star(godel3)).n == 3


@pytest.mark.parametrize("base", fixtures.CORE)
def test_presheaves_on_empty_category_are_terminal(base):
    Q = fixtures.quantale(base)
    E = QCategory.discrete(Q, [])
    for P in (enumerate_presheaves(E), enumerate_copresheaves(E)):
        assert P.n == Q.m
        assert all(P.hom[i, j] == Q.hom(P.types[i], P.types[j]).top for i in range(P.n) for j in range(P.n))


def test_budget_is_enforced(luk3):
    with pytest.raises(BudgetExceeded):
        enumerate_presheaves(QCategory.discrete(luk3, [0, 0, 0]), budget=5)


@pytest.mark.parametrize("A", SMALL)
def test_yoneda_and_sups_of_representables(A):
    P, Pd = enumerate_presheaves(A), enumerate_copresheaves(A)
    Y, Yd = yoneda(A, P), co_yoneda(A, Pd)
    o = underlying_order(A)
    for x in range(A.n):
        assert list(P.values[Y(x)]) == list(A.hom[:, x])
        s = supremum(A, P.element(Y(x)))
        assert s is not None and o[s, x] and o[x, s]
        i = infimum(A, Pd.element(Yd(x)))
        assert i is not None and o[i, x] and o[x, i]
        one = A.base.identity(A.types[x])
        for kind in ("tensor", "cotensor"):
            z = tensor_cotensor(A, one, x, kind)
            assert z is not None and o[z, x] and o[x, z]


def test_transposes(godel3):
    A = fixtures.chain_category(godel3)
    P, Pd = enumerate_presheaves(A), enumerate_copresheaves(A)
    tilde, hat = transpose(identity(A), P, Pd)
    assert tilde == yoneda(A, P) and hat == co_yoneda(A, Pd)
    T = QCategory.terminal(godel3)
    F = QFunctor(A, T, [0, 0])
    _, cograph = functor_graph(F)
    PT, PdA = enumerate_presheaves(T), enumerate_copresheaves(A)
    tilde, _ = transpose(cograph, PT, PdA)
    assert tilde == F.then(yoneda(T, PT))


def test_completeness_examples(two, luk3):
    assert not is_complete(QCategory.discrete(two, [0, 0]))
    # over an integral quantale the identity is the top element, so ★ is (ob Q, ⊤)
    assert is_complete(QCategory.star(luk3))
    assert is_complete(QCategory.terminal(luk3))
    assert not is_complete(QCategory.star(fixtures.quantale("girard-2")))
    assert not is_complete(QCategory.discrete(luk3, []))


@pytest.mark.parametrize("A", [p for p in SMALL if enumerate_presheaves(p.values[0]).n <= 12])
def test_presheaf_categories_are_ccd_and_copresheaves_opccd(A):
    P, Pd = enumerate_presheaves(A), enumerate_copresheaves(A)
    assert is_complete(P) and is_ccd(P)
    assert is_complete(Pd) and is_opccd(Pd)


def test_self_category_examples(godel3, luk3):
    G = fixtures.self_category(godel3)
    assert is_ccd(G) and not is_opccd(G)
    L = fixtures.self_category(luk3)
    assert is_ccd(L) and is_opccd(L)


def test_sup_inf_dispatch(two):
    A = fixtures.chain_category(two)
    assert sup_inf(A, Presheaf(A, 0, (1, 1))) == 1
    assert sup_inf(A, Copresheaf(A, 0, (1, 1))) == 0
    with pytest.raises(ValueError):
        tensor_cotensor(A, two.identity(0), 0, "weird")


@pytest.mark.parametrize("base", ["2", "godel-3"])
def test_ccd_matches_definitional_search(base):
    Q = fixtures.quantale(base)
    seen = 0
    for A in all_categories(Q, 2, 10**5):
        expected = is_ccd_by_definition(A)
        r = is_ccd(A)
        assert bool(r) == bool(expected)
        if expected is None:
            assert r.reason == "not complete"
        assert bool(is_ccd(skeletal_quotient(A)[0])) == bool(r)
        assert bool(is_opccd(A)) == bool(is_ccd(dualize(A)))
        seen += 1
    assert seen > 5


def test_negation_examples(two, luk3):
    for Q in (two, luk3):
        A = QCategory.star(Q)
        fam = girard_search(Q)
        N = negation_iso(A, fam)
        P, Pd = N.dom, N.cod
        values = {int(P.values[k][0]): int(Pd.values[N(k)][0]) for k in range(P.n)}
        top = Q.hom(0, 0).top
        assert values[0] == top and values[top] == 0
        if Q is luk3:
            assert values[1] == 1
    with pytest.raises(PreconditionError):
        negation_iso(QCategory.star(two), GirardFamily((1,)))


@pytest.mark.parametrize("base", ["2", "lukasiewicz-3", "girard-2", "diagonals-4"])
def test_negation_is_an_isomorphism(base):
    Q = fixtures.quantale(base)
    fam = girard_search(Q)
    for name, A in fixtures.categories(Q).items():
        if enumerate_presheaves(A).n > 40:
            continue
        N = negation_iso(A, fam)
        assert sorted(N.mapping) == list(range(N.cod.n))
        assert np.array_equal(N.cod.hom[np.ix_(N.mapping, N.mapping)], N.dom.hom)
