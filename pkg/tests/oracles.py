"""Brute-force reference implementations used to check the engine.

Everything here works straight from the definitions with plain loops over
elements, so it shares no code paths with the vectorised tables it checks.
"""
from __future__ import annotations

from itertools import product

import numpy as np

from qkan.lattice import FiniteLattice
from qkan.qcat import QCategory
from qkan.quantaloid import Arrow, Quantaloid


def lattice_from_covers(n: int, covers, name: str) -> FiniteLattice:
    leq = np.eye(n, dtype=bool)
    for a, b in covers:
        leq[a, b] = True
    for k in range(n):
        leq |= leq[:, [k]] & leq[[k], :]
    return FiniteLattice(leq, [f"{name}{i}" for i in range(n)])


def small_lattices() -> list[FiniteLattice]:
    """Every lattice with at most 5 elements, up to isomorphism (10 of them)."""
    out = [FiniteLattice.chain(n) for n in range(1, 6)]
    out.append(FiniteLattice.powerset(2))
    out.append(lattice_from_covers(5, [(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)], "m"))  # M3
    out.append(lattice_from_covers(5, [(0, 1), (1, 2), (2, 4), (0, 3), (3, 4)], "n"))  # N5
    out.append(lattice_from_covers(5, [(0, 1), (1, 2), (1, 3), (2, 4), (3, 4)], "b"))  # bottom + square
    out.append(lattice_from_covers(5, [(0, 1), (0, 2), (1, 3), (2, 3), (3, 4)], "t"))  # square + top
    return out


def monotone_tables(D: FiniteLattice, C: FiniteLattice):
    for t in product(range(C.n), repeat=D.n):
        if all(C.leq[t[x], t[y]] for x in range(D.n) for y in range(D.n) if D.leq[x, y]):
            yield t


def preserves_all_meets(D: FiniteLattice, C: FiniteLattice, t) -> bool:
    """``f(⋀S) = ⋀ f(S)`` for every subset ``S`` (the empty one included)."""
    for mask in range(2**D.n):
        S = [x for x in range(D.n) if mask >> x & 1]
        m = D.top
        for x in S:
            m = D.meet[m, x]
        fm = C.top
        for x in S:
            fm = C.meet[fm, t[x]]
        if t[m] != fm:
            return False
    return True


def preserves_all_joins(D: FiniteLattice, C: FiniteLattice, t) -> bool:
    for mask in range(2**D.n):
        S = [x for x in range(D.n) if mask >> x & 1]
        j = D.bottom
        for x in S:
            j = D.join[j, x]
        fj = C.bottom
        for x in S:
            fj = C.join[fj, t[x]]
        if t[j] != fj:
            return False
    return True


def greatest(L: FiniteLattice, candidates) -> int | None:
    cands = list(candidates)
    for c in cands:
        if all(L.leq[d, c] for d in cands):
            return c
    return None


def brute_lda(Q: Quantaloid, h: Arrow, f: Arrow) -> int:
    """Greatest ``g: Y -> Z`` with ``g ∘ f <= h`` by scanning ``hom(Y, Z)``."""
    Y, Z = f.dst, h.dst
    L = Q.hom(Y, Z)
    ok = [g for g in range(L.n) if Q.le(Q.compose(Arrow(Y, Z, g), f), h)]
    return greatest(L, ok)


def brute_rda(Q: Quantaloid, g: Arrow, h: Arrow) -> int:
    """Greatest ``f: X -> Y`` with ``g ∘ f <= h``."""
    X, Y = h.src, g.src
    L = Q.hom(X, Y)
    ok = [f for f in range(L.n) if Q.le(Q.compose(g, Arrow(X, Y, f)), h)]
    return greatest(L, ok)


def compose_loops(Q: Quantaloid, psi, phi, ta, tb, tc) -> np.ndarray:
    """``(psi ∘ phi)(x, z) = ⋁_y psi(y, z) ∘ phi(x, y)`` with scalar loops."""
    out = np.empty((len(ta), len(tc)), dtype=np.int64)
    for x, z in product(range(len(ta)), range(len(tc))):
        L = Q.hom(ta[x], tc[z])
        acc = L.bottom
        for y in range(len(tb)):
            term = Q.compose(Arrow(tb[y], tc[z], int(psi[y][z])), Arrow(ta[x], tb[y], int(phi[x][y])))
            acc = int(L.join[acc, term.idx])
        out[x, z] = acc
    return out


def cellwise_le(Q: Quantaloid, a, b, ta, tb) -> bool:
    return all(Q.hom(ta[x], tb[y]).leq[a[x][y], b[x][y]] for x in range(len(ta)) for y in range(len(tb)))


def presheaves_by_definition(A: QCategory) -> list[tuple[int, tuple]]:
    """``(type, values)`` for every ``μ`` with ``μ(y) ∘ A(x, y) <= μ(x)``, checked with scalar loops."""
    Q = A.base
    out = []
    for X in range(Q.m):
        sizes = [Q.hom(t, X).n for t in A.types]
        for vals in product(*[range(s) for s in sizes]):
            ok = True
            for x, y in product(range(A.n), repeat=2):
                c = Q.compose(Arrow(A.types[y], X, vals[y]), Arrow(A.types[x], A.types[y], int(A.hom[x, y])))
                if not Q.hom(A.types[x], X).leq[c.idx, vals[x]]:
                    ok = False
                    break
            if ok:
                out.append((X, vals))
    return out


def presheaf_hom(A: QCategory, mu, nu) -> int:
    """``PA(μ, ν) = ⋀_x ν(x) ↙ μ(x)`` by scanning for residuals."""
    Q = A.base
    (X, mv), (Y, nv) = mu, nu
    L = Q.hom(X, Y)
    acc = L.top
    for x in range(A.n):
        r = brute_lda(Q, Arrow(A.types[x], Y, nv[x]), Arrow(A.types[x], X, mv[x]))
        acc = int(L.meet[acc, r])
    return acc


def is_ccd_by_definition(A: QCategory):
    """Search all type-preserving ``T: A -> PA`` and a ``sup`` read off ``A(sup μ, y) = PA(μ, Yy)``.

    Returns ``None`` when ``A`` is not complete, else whether some ``T`` gives
    ``PA(Ta, ν) = A(a, sup ν)`` for every ``a`` and ``ν``.  Exponential; small inputs only.
    """
    P = presheaves_by_definition(A)
    yon = [(A.types[y], tuple(int(A.hom[x, y]) for x in range(A.n))) for y in range(A.n)]
    sup = []
    for mu in P:
        cands = [s for s in range(A.n) if A.types[s] == mu[0]
                 and all(A.hom[s, y] == presheaf_hom(A, mu, yon[y]) for y in range(A.n) if True)]
        if not cands:
            return None
        sup.append(cands[0])
    hom = [[presheaf_hom(A, m, n) for n in P] for m in P]
    choices = [[k for k, m in enumerate(P) if m[0] == A.types[a]] for a in range(A.n)]
    for T in product(*choices):
        if all(hom[T[a]][k] == A.hom[a, sup[k]] for a in range(A.n) for k in range(len(P))):
            return True
    return False
