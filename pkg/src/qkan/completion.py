"""Commuting squares of a quantaloid, the diagonal quotient D(Q), and its
regular and idempotent parts R(Q) and Idm(Q)."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Sequence

import numpy as np

from .errors import InternalError, StructureError, TypeMismatch
from .lattice import FiniteLattice
from .qcat import QCategory
from .qdist import QDistributor, dist_compose, subquantaloid
from .quantaloid import Arrow, GirardFamily, Quantaloid, family_report


@dataclass(frozen=True)
class Square:
    """``u: X1 -> X2`` and ``v: Y1 -> Y2`` with ``g ∘ u = v ∘ f`` for ``f: X1 -> Y1``, ``g: X2 -> Y2``."""

    src: Arrow
    dst: Arrow
    u: Arrow
    v: Arrow


@dataclass(frozen=True)
class DiagonalClass:
    src: Arrow
    dst: Arrow
    diagonal: Arrow


def make_square(Q: Quantaloid, src: Arrow, dst: Arrow, u: Arrow, v: Arrow) -> Square:
    if (u.src, u.dst) != (src.src, dst.src) or (v.src, v.dst) != (src.dst, dst.dst):
        raise TypeMismatch("square sides do not connect")
    left, right = Q.compose(dst, u), Q.compose(v, src)
    if left != right:
        raise StructureError(
            f"square does not commute: g∘u = {Q.arrow_name(left)}, v∘f = {Q.arrow_name(right)}"
        )
    return Square(src, dst, u, v)


def identity_square(Q: Quantaloid, f: Arrow) -> Square:
    return Square(f, f, Q.identity(f.src), Q.identity(f.dst))


def square_compose(Q: Quantaloid, s2: Square, s1: Square) -> Square:
    if s1.dst != s2.src:
        raise TypeMismatch("squares do not compose")
    return make_square(Q, s1.src, s2.dst, Q.compose(s2.u, s1.u), Q.compose(s2.v, s1.v))


def square_join(Q: Quantaloid, s1: Square, s2: Square) -> Square:
    if (s1.src, s1.dst) != (s2.src, s2.dst):
        raise TypeMismatch("squares are not parallel")
    u = Arrow(s1.u.src, s1.u.dst, int(Q.hom(s1.u.src, s1.u.dst).join[s1.u.idx, s2.u.idx]))
    v = Arrow(s1.v.src, s1.v.dst, int(Q.hom(s1.v.src, s1.v.dst).join[s1.v.idx, s2.v.idx]))
    return make_square(Q, s1.src, s1.dst, u, v)


def squares(Q: Quantaloid, f: Arrow, g: Arrow) -> list[Square]:
    """Every commuting square ``f -> g``, ``(u, v)`` in lexicographic index order."""
    out = []
    for u in Q.arrows(f.src, g.src):
        gu = Q.compose(g, u)
        for v in Q.arrows(f.dst, g.dst):
            if Q.compose(v, f) == gu:
                out.append(Square(f, g, u, v))
    return out


def diagonal_class(Q: Quantaloid, s: Square) -> DiagonalClass:
    return DiagonalClass(s.src, s.dst, Q.compose(s.dst, s.u))


def representatives(Q: Quantaloid, c: DiagonalClass) -> list[Square]:
    return [s for s in squares(Q, c.src, c.dst) if Q.compose(s.dst, s.u) == c.diagonal]


def class_compose(Q: Quantaloid, c2: DiagonalClass, c1: DiagonalClass) -> DiagonalClass:
    """Compose via the first representative of each class."""
    if c1.dst != c2.src:
        raise TypeMismatch("classes do not compose")
    r1, r2 = representatives(Q, c1), representatives(Q, c2)
    if not r1 or not r2:
        raise StructureError("class has no representing square")
    return diagonal_class(Q, square_compose(Q, r2[0], r1[0]))


def composition_is_well_defined(Q: Quantaloid, c2: DiagonalClass, c1: DiagonalClass) -> bool:
    """Every choice of representatives gives the same composite diagonal."""
    r1, r2 = representatives(Q, c1), representatives(Q, c2)
    diags = {Q.compose(s.dst, s.u) for s in (square_compose(Q, b, a) for a in r1 for b in r2)}
    return len(diags) <= 1


def dq_hom(Q: Quantaloid, f: Arrow, g: Arrow) -> list[DiagonalClass]:
    """Distinct diagonals of squares ``f -> g``, least index first."""
    seen = sorted({Q.compose(s.dst, s.u).idx for s in squares(Q, f, g)})
    return [DiagonalClass(f, g, Arrow(f.src, g.dst, i)) for i in seen]


def is_regular_arrow(Q: Quantaloid, f: Arrow) -> bool:
    """``f <= f ∘ f̄ ∘ f`` with ``f̄ = (f ↘ f) ↙ f``."""
    bar = arrow_bar(Q, f)
    return Q.le(f, Q.compose(f, Q.compose(bar, f)))


def arrow_bar(Q: Quantaloid, f: Arrow) -> Arrow:
    return Q.residual(Q.residual(f, f, "rda"), f, "lda")


def is_idempotent_arrow(Q: Quantaloid, e: Arrow) -> bool:
    return e.src == e.dst and Q.compose(e, e) == e


def rq_objects(Q: Quantaloid) -> list[Arrow]:
    return [f for f in Q.all_arrows() if is_regular_arrow(Q, f)]


def idmq_objects(Q: Quantaloid) -> list[Arrow]:
    return [e for e in Q.all_arrows() if is_idempotent_arrow(Q, e)]


def diagonal_quantaloid(Q: Quantaloid, objects: Sequence[Arrow] | None = None) -> Quantaloid:
    """``D(Q)`` (or its full part on ``objects``) as an explicit finite quantaloid."""
    objs = list(Q.all_arrows() if objects is None else objects)
    homs, elems = {}, {}
    for a, b in product(range(len(objs)), repeat=2):
        f, g = objs[a], objs[b]
        diags = [c.diagonal.idx for c in dq_hom(Q, f, g)]
        L = Q.hom(f.src, g.dst)
        elems[a, b] = diags
        homs[a, b] = FiniteLattice(L.leq[np.ix_(diags, diags)], [L.names[i] for i in diags])
    comp = {}
    for a, b, c in product(range(len(objs)), repeat=3):
        f, g, h = objs[a], objs[b], objs[c]
        pos = {d: k for k, d in enumerate(elems[a, c])}
        table = np.empty((len(elems[b, c]), len(elems[a, b])), dtype=np.int64)
        for j, d2 in enumerate(elems[b, c]):
            for i, d1 in enumerate(elems[a, b]):
                c1 = DiagonalClass(f, g, Arrow(f.src, g.dst, d1))
                c2 = DiagonalClass(g, h, Arrow(g.src, h.dst, d2))
                table[j, i] = pos[class_compose(Q, c2, c1).diagonal.idx]
        comp[a, b, c] = table
    ids = [elems[a, a].index(f.idx) for a, f in enumerate(objs)]
    names = [f"{Q.objects[f.src]}->{Q.objects[f.dst]}:{Q.arrow_name(f)}" for f in objs]
    return Quantaloid(names, homs, comp, ids, name=f"D({Q.name})")


@dataclass(frozen=True)
class RegularWitness:
    """``f ≅ f̄∘f`` in D(Q): ``forward = (f̄∘f, f̄): f -> f̄∘f``, ``backward = (1, f): f̄∘f -> f``."""

    arrow: Arrow
    bar: Arrow
    idempotent: Arrow
    forward: DiagonalClass
    backward: DiagonalClass


def rq_idmq_equivalence(Q: Quantaloid) -> list[RegularWitness]:
    """For every regular ``f`` the pair of mutually inverse classes between ``f`` and ``f̄∘f``."""
    out = []
    for f in rq_objects(Q):
        bar = arrow_bar(Q, f)
        e = Q.compose(bar, f)
        if not is_idempotent_arrow(Q, e):
            raise InternalError(f"f̄∘f is not idempotent for {Q.arrow_name(f)}")
        fwd = diagonal_class(Q, make_square(Q, f, e, e, bar))
        bwd = diagonal_class(Q, make_square(Q, e, f, Q.identity(f.src), f))
        there_back = class_compose(Q, bwd, fwd)
        back_there = class_compose(Q, fwd, bwd)
        if there_back != diagonal_class(Q, identity_square(Q, f)):
            raise InternalError(f"backward∘forward is not the identity on {Q.arrow_name(f)}")
        if back_there != diagonal_class(Q, identity_square(Q, e)):
            raise InternalError(f"forward∘backward is not the identity on {Q.arrow_name(e)}")
        out.append(RegularWitness(f, bar, e, fwd, bwd))
    return out


def negated_category_family(categories: Sequence[QCategory], family: GirardFamily, budget: int | None = None):
    """The family ``¬A`` inside the sub-quantaloid of Q-Dist on ``categories``.

    ``(¬A)(y, x) = d_tx ↙ A(x, y)``.  Returns the sub-quantaloid, the family
    (``None`` when some ``¬A`` is not a distributor) and its Girard report.
    """
    kwargs = {} if budget is None else {"budget": budget}
    sub, mats = subquantaloid(categories, **kwargs)
    Q = categories[0].base
    d = []
    for a, A in enumerate(categories):
        neg = np.empty((A.n, A.n), dtype=np.int64)
        for x, y in product(range(A.n), repeat=2):
            tx, ty = A.types[x], A.types[y]
            neg[y, x] = Q.lda_table(tx, ty, tx)[family.d[tx], A.hom[x, y]]
        hit = np.flatnonzero((mats[a, a] == neg).all(axis=(1, 2)))
        if len(hit) == 0:
            return sub, None, None
        d.append(int(hit[0]))
    fam = GirardFamily(tuple(d))
    return sub, fam, family_report(sub, fam)
