from itertools import product

import numpy as np
import pytest
from hypothesis import given, strategies as st

from oracles import brute_lda, compose_loops
from qkan import fixtures
from qkan.errors import PreconditionError, StructureError
from qkan.kan import (
    dual_kan_pair,
    fix_category,
    gamma_sup,
    k_preimage,
    k_square,
    kan_pair,
    kphi,
    kr_isomorphism,
    make_square,
    rphi,
    canonical_theta,
)
from qkan.presheaf import enumerate_presheaves, is_ccd, is_opccd
from qkan.qcat import QCategory, QFunctor, identity_functor, is_skeletal
from qkan.qdist import QDistributor, all_distributor_matrices, discretize, identity, is_regular
from qkan.quantaloid import Arrow


def single(Q, name):
    S = QCategory.star(Q)
    return QDistributor(S, S, [[Q.hom(0, 0).index(name)]])


def member_names(K):
    Q = K.base
    return sorted(tuple(Q.hom(K.parent.source.types[a], X).names[int(v)] for a, v in enumerate(K.values[k]))
                  for k, X in enumerate(K.types))


def kphi_oracle(phi):
    """Members ``λ`` of ``PB`` with ``(λ ∘ φ) ↙ φ = λ``, by scalar loops."""
    Q, A, B = phi.base, phi.dom, phi.cod
    PB = enumerate_presheaves(B)
    out = set()
    for k in range(PB.n):
        X, lam = PB.types[k], PB.values[k]
        pulled = compose_loops(Q, lam.reshape(-1, 1), phi.matrix, A.types, B.types, (X,))[:, 0]
        back = []
        for b in range(B.n):
            r = Q.hom(B.types[b], X).top
            for a in range(A.n):
                g = brute_lda(Q, Arrow(A.types[a], X, int(pulled[a])), Arrow(A.types[a], B.types[b], int(phi.matrix[a, b])))
                r = int(Q.hom(B.types[b], X).meet[r, g])
            back.append(r)
        if back == [int(v) for v in lam]:
            out.add((X, tuple(back)))
    return out


def test_identity_distributor_kan_pair(godel3):
    A = fixtures.chain_category(godel3)
    kp = kan_pair(identity(A))
    assert kp.pull == identity_functor(kp.PA) and kp.push == identity_functor(kp.PA)
    K = kphi(identity(A))
    assert K.n == kp.PA.n


def test_lukasiewicz_half_fixed_points(luk3):
    phi = single(luk3, "1/2")
    K = kphi(phi)
    assert member_names(K) == [("1",), ("1/2",)]
    assert not is_ccd(K) and not is_regular(phi)
    s = K.sup_by_formula(np.array([[0, 0], [2, 2]]), 0)
    assert np.array_equal(s, gamma_sup(K, np.array([[0, 0], [2, 2]]), 0))


@given(st.sampled_from(("2", "godel-3", "lukasiewicz-3", "boolean-4", "girard-2")), st.data())
def test_kphi_matches_fixed_point_oracle(base, data):
    Q = fixtures.quantale(base)
    ta = data.draw(st.lists(st.integers(0, Q.m - 1), min_size=1, max_size=2))
    tb = data.draw(st.lists(st.integers(0, Q.m - 1), min_size=1, max_size=2))
    A, B = QCategory.discrete(Q, ta), QCategory.discrete(Q, tb)
    M = [[data.draw(st.integers(0, Q.hom(x, y).n - 1)) for y in tb] for x in ta]
    phi = QDistributor(A, B, M)
    K = kphi(phi)
    got = {(K.types[k], tuple(int(v) for v in K.values[k])) for k in range(K.n)}
    assert got == kphi_oracle(phi)


@pytest.mark.parametrize("base", fixtures.CORE)
def test_kan_pairs_and_kr_iso_on_fixtures(base):
    Q = fixtures.quantale(base)
    cats = [A for A in fixtures.categories(Q).values() if A.n <= 2 and enumerate_presheaves(A).n <= 30]
    for A, B in product(cats, repeat=2):
        for M in all_distributor_matrices(A, B)[:8]:
            phi = QDistributor(A, B, M)
            kan_pair(phi)
            dual_kan_pair(phi)
            to_r, to_k = kr_isomorphism(phi)
            assert to_r.dom.n == to_k.dom.n
            assert kphi(phi).key() == kphi(discretize(phi)).key()


def test_fix_category_preconditions(two):
    P = enumerate_presheaves(QCategory.discrete(two, [0, 0]))
    ident = identity_functor(P)
    K = fix_category(ident, "monad")
    assert K.n == P.n and K.members == tuple(range(P.n))
    # constant at the bottom presheaf is idempotent but not above the identity
    bottom = P.index([0, 0], 0)
    const = QFunctor(P, P, [bottom] * P.n)
    with pytest.raises(PreconditionError):
        fix_category(const, "monad")
    assert fix_category(const, "comonad").n == 1
    with pytest.raises(ValueError):
        fix_category(ident, "closure")


def test_gamma_formula_on_rphi(luk3):
    phi = single(luk3, "1/2")
    R = rphi(phi)
    for X in range(luk3.m):
        vals = np.array(list(product(range(3), repeat=R.n)))
        assert np.array_equal(R.sup_by_formula(vals, X), gamma_sup(R, vals, X))


def test_identity_square_gives_identity(godel3):
    phi = single(godel3, "1/2")
    S = phi.dom
    sq = make_square(phi, phi, identity(S), identity(S))
    F, G = k_square(sq)
    assert F.dom == F.cod and F.mapping == tuple(range(F.dom.n)) == G.mapping


def test_non_commuting_square_rejected(luk3):
    phi, one = single(luk3, "1/2"), single(luk3, "1")
    zero = single(luk3, "0")
    with pytest.raises(StructureError, match="does not commute"):
        make_square(phi, one, one, zero)


def test_k_preimage_identity(godel3):
    psi = identity(QCategory.star(godel3))
    K = kphi(psi)
    sq = k_preimage(identity_functor(K), psi, psi)
    assert k_square(sq, Kphi=K, Kpsi=K)[0] == identity_functor(K)


def test_k_preimage_rejects_non_regular(luk3):
    psi = single(luk3, "1/2")
    K = kphi(psi)
    with pytest.raises(PreconditionError):
        k_preimage(identity_functor(K), psi, psi)


def test_canonical_theta_on_self_category(two):
    A = fixtures.self_category(two)
    theta, iso = canonical_theta(A)
    # T(0) is the empty presheaf and T(1) the representable at 1
    assert theta.matrix.tolist() == [[0, 1], [0, 1]]
    assert iso.dom.n == 2 and iso.cod.n == 2


@pytest.mark.parametrize("base", ["2", "godel-3", "lukasiewicz-3", "boolean-4"])
def test_canonical_theta_on_presheaf_categories(base):
    Q = fixtures.quantale(base)
    for A in fixtures.categories(Q).values():
        P = enumerate_presheaves(A)
        if P.n > 8 or not is_skeletal(P):
            continue
        theta, iso = canonical_theta(P)
        assert theta.dom is P
    with pytest.raises(PreconditionError):
        canonical_theta(QCategory.discrete(Q, [0, 0]))


@pytest.mark.parametrize("base", ["2", "godel-3", "lukasiewicz-3"])
def test_regular_gives_ccd_and_opccd_gives_regular(base):
    Q = fixtures.quantale(base)
    D1, D2 = QCategory.discrete(Q, [0]), QCategory.discrete(Q, [0, 0])
    for A, B in product((D1, D2), repeat=2):
        for M in all_distributor_matrices(A, B):
            phi = QDistributor(A, B, M)
            K = kphi(phi)
            reg = bool(is_regular(phi))
            if reg:
                assert is_ccd(K)
            if is_opccd(K):
                assert reg
