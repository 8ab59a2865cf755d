"""Q-categories, Q-functors, underlying orders, skeletal quotients and duals."""
from __future__ import annotations

from typing import Sequence

import numpy as np

from . import _matrix as mx
from .errors import Report, StructureError, TypeMismatch
from .quantaloid import Arrow, Quantaloid


class QCategory:
    """Objects with a type map into the base quantaloid and a hom matrix.

    ``hom[x, y]`` is an element index of ``base.hom(types[x], types[y])``.
    Construction checks shapes and ranges only; see :meth:`validate`.
    """

    def __init__(self, base: Quantaloid, names: Sequence[str], types: Sequence[int], hom):
        self.base = base
        self.names = tuple(str(s) for s in names)
        self.types = tuple(int(t) for t in types)
        n = len(self.types)
        if len(self.names) != n:
            raise StructureError("one name per object")
        if len(set(self.names)) != n:
            raise StructureError("object names must be distinct")
        for t in self.types:
            if not 0 <= t < base.m:
                raise StructureError(f"type {t} is not an object of the base quantaloid")
        if hom is not None:
            self._hom = self._check_hom(hom)
        self._index = {s: i for i, s in enumerate(self.names)}

    def _check_hom(self, hom) -> np.ndarray:
        n = len(self.types)
        hom = np.array(hom, dtype=mx.INT).reshape(n, n)
        for x in range(n):
            for y in range(n):
                if not 0 <= hom[x, y] < self.base.hom(self.types[x], self.types[y]).n:
                    raise StructureError(f"hom entry ({self.names[x]}, {self.names[y]}) outside its hom-lattice")
        hom.setflags(write=False)
        return hom

    @property
    def hom(self) -> np.ndarray:
        return self._hom

    @property
    def n(self) -> int:
        return len(self.types)

    def __len__(self) -> int:
        return len(self.types)

    def __repr__(self) -> str:
        return f"<QCategory {self.n} object(s) over {self.base.name or 'Q'}>"

    def key(self) -> tuple:
        """Structural key (ignores object names)."""
        return (id(self.base), self.types, self.hom.tobytes())

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, QCategory)
            and other.base is self.base
            and other.names == self.names
            and other.types == self.types
            and np.array_equal(other.hom, self.hom)
        )

    def __hash__(self) -> int:
        return hash((self.names,) + self.key())

    def obj(self, name) -> int:
        if isinstance(name, (int, np.integer)):
            return int(name)
        try:
            return self._index[str(name)]
        except KeyError:
            raise StructureError(f"unknown object {name!r}") from None

    def arrow(self, x, y) -> Arrow:
        x, y = self.obj(x), self.obj(y)
        return Arrow(self.types[x], self.types[y], int(self.hom[x, y]))

    # constructors

    @classmethod
    def star(cls, base: Quantaloid, X=0, name: str = "*") -> "QCategory":
        X = base.obj(X)
        return cls(base, [name], [X], [[base.identities[X]]])

    @classmethod
    def discrete(cls, base: Quantaloid, types: Sequence, names: Sequence[str] | None = None) -> "QCategory":
        types = [base.obj(t) for t in types]
        n = len(types)
        hom = np.empty((n, n), dtype=mx.INT)
        for x in range(n):
            for y in range(n):
                L = base.hom(types[x], types[y])
                hom[x, y] = base.identities[types[x]] if x == y else L.bottom
        if names is None:
            names = [f"x{i}" for i in range(n)]
        return cls(base, names, types, hom)

    @classmethod
    def terminal(cls, base: Quantaloid) -> "QCategory":
        """``(ob Q, ⊤)``: one object per Q-object, every hom the top arrow."""
        m = base.m
        hom = [[base.hom(X, Y).top for Y in range(m)] for X in range(m)]
        return cls(base, list(base.objects), list(range(m)), hom)

    def full_subcategory(self, members: Sequence[int], names: Sequence[str] | None = None) -> "QCategory":
        members = list(members)
        if names is None:
            names = [self.names[i] for i in members]
        return QCategory(self.base, names, [self.types[i] for i in members], self.hom[np.ix_(members, members)])

    def validate(self) -> Report:
        return validate_category(self)


class QFunctor:
    """Object map between Q-categories over the same base."""

    def __init__(self, dom: QCategory, cod: QCategory, mapping: Sequence[int]):
        if dom.base is not cod.base:
            raise TypeMismatch("functor between categories over different quantaloids")
        self.dom = dom
        self.cod = cod
        self.mapping = tuple(int(v) for v in mapping)
        if len(self.mapping) != dom.n or any(not 0 <= v < cod.n for v in self.mapping):
            raise StructureError("functor mapping does not fit its domain/codomain")

    def __call__(self, x: int) -> int:
        return self.mapping[x]

    def __eq__(self, other) -> bool:
        return isinstance(other, QFunctor) and other.dom is self.dom and other.cod is self.cod and other.mapping == self.mapping

    def __hash__(self) -> int:
        return hash(self.mapping)

    def __repr__(self) -> str:
        return f"QFunctor({list(self.mapping)})"

    def then(self, G: "QFunctor") -> "QFunctor":
        """``G ∘ self``."""
        if G.dom is not self.cod and G.dom.key() != self.cod.key():
            raise TypeMismatch("functors do not compose")
        return QFunctor(self.dom, G.cod, [G.mapping[v] for v in self.mapping])

    def validate(self) -> Report:
        return validate_functor(self)


def identity_functor(A: QCategory) -> QFunctor:
    return QFunctor(A, A, range(A.n))


def validate_category(A: QCategory) -> Report:
    Q, t = A.base, A.types
    for x in range(A.n):
        L = Q.hom(t[x], t[x])
        if not L.le(Q.identities[t[x]], int(A.hom[x, x])):
            return Report(False, "reflexivity", (A.names[x],))
    comp = mx.compose(Q, A.hom, A.hom, t, t, t)
    bad = ~mx.cellwise_leq(Q, comp, A.hom, t, t)
    if bad.any():
        x, z = (int(v) for v in np.argwhere(bad)[0])
        for y in range(A.n):
            c = Q.compose(A.arrow(y, z), A.arrow(x, y))
            if not Q.le(c, A.arrow(x, z)):
                return Report(False, "transitivity", (A.names[x], A.names[y], A.names[z]))
    return Report(True)


def validate_functor(F: QFunctor) -> Report:
    A, B = F.dom, F.cod
    m = np.array(F.mapping, dtype=mx.INT)
    for x in range(A.n):
        if A.types[x] != B.types[m[x]]:
            return Report(False, "type preservation", (A.names[x],), {"fully_faithful": False})
    image = B.hom[np.ix_(m, m)] if A.n else np.zeros((0, 0), dtype=mx.INT)
    ok = mx.cellwise_leq(A.base, A.hom, image, A.types, A.types)
    ff = bool(np.array_equal(image, A.hom))
    if not ok.all():
        x, y = (int(v) for v in np.argwhere(~ok)[0])
        return Report(False, "hom inequality", (A.names[x], A.names[y]), {"fully_faithful": ff})
    return Report(True, detail={"fully_faithful": ff})


def underlying_order(A: QCategory) -> np.ndarray:
    """``x <= y`` iff same type and ``1 <= A(x, y)``."""
    Q, t = A.base, A.types
    out = np.zeros((A.n, A.n), dtype=bool)
    for x in range(A.n):
        for y in range(A.n):
            if t[x] == t[y]:
                out[x, y] = Q.hom(t[x], t[x]).le(Q.identities[t[x]], int(A.hom[x, y]))
    return out


def is_skeletal(A: QCategory) -> bool:
    o = underlying_order(A)
    return not (o & o.T & ~np.eye(A.n, dtype=bool)).any()


def skeletal_quotient(A: QCategory) -> tuple[QCategory, QFunctor]:
    """Identify isomorphic objects; returns the quotient and the projection.

    Representatives are the first object of each class, so a skeletal input
    comes back unchanged with the identity projection.
    """
    o = underlying_order(A)
    iso = o & o.T
    reps: list[int] = []
    proj = [0] * A.n
    for x in range(A.n):
        for k, r in enumerate(reps):
            if iso[x, r]:
                proj[x] = k
                break
        else:
            proj[x] = len(reps)
            reps.append(x)
    Qc = A.full_subcategory(reps)
    return Qc, QFunctor(A, Qc, proj)


def dualize(A: QCategory) -> QCategory:
    """``A^op`` over ``Q^op`` with ``A^op(x, y) = A(y, x)``."""
    return QCategory(A.base.op, A.names, A.types, A.hom.T.copy())


def right_adjoint(F: QFunctor) -> QFunctor | None:
    """``G`` with ``B(Fx, y) = A(x, Gy)`` for all ``x, y``, if one exists.

    ``G(y)`` is forced: its column ``A(-, Gy)`` must equal ``B(F-, y)``.
    """
    A, B = F.dom, F.cod
    m = list(F.mapping)
    cols = {}
    for a in range(A.n):
        cols.setdefault((A.types[a], A.hom[:, a].tobytes()), a)
    G = []
    for y in range(B.n):
        target = np.ascontiguousarray(B.hom[m, y] if A.n else np.zeros(0, dtype=mx.INT), dtype=mx.INT)
        a = cols.get((B.types[y], target.tobytes()))
        if a is None:
            return None
        G.append(a)
    return QFunctor(B, A, G)


def left_adjoint(G: QFunctor) -> QFunctor | None:
    """``F`` with ``B(Fx, y) = A(x, Gy)``, where ``G: B -> A``."""
    B, A = G.dom, G.cod
    m = list(G.mapping)
    rows = {}
    for b in range(B.n):
        rows.setdefault((B.types[b], B.hom[b, :].tobytes()), b)
    F = []
    for x in range(A.n):
        target = np.ascontiguousarray(A.hom[x, m] if B.n else np.zeros(0, dtype=mx.INT), dtype=mx.INT)
        b = rows.get((A.types[x], target.tobytes()))
        if b is None:
            return None
        F.append(b)
    return QFunctor(A, B, F)


def is_left_adjoint(F: QFunctor) -> bool:
    return bool(validate_functor(F)) and right_adjoint(F) is not None
