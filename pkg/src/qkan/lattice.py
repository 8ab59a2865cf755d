"""Finite complete lattices stored as explicit order/join/meet tables.

Elements are the integers ``0..n-1``; ``names`` gives them printable labels.
Every check in the engine is exhaustive, so tables are materialised eagerly.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from itertools import product
from typing import Iterable, Sequence

import numpy as np

from .errors import StructureError


def _least_upper_bounds(leq: np.ndarray) -> np.ndarray:
    n = leq.shape[0]
    out = np.full((n, n), -1, dtype=np.int64)
    for x in range(n):
        ub = leq[x][None, :] & leq  # ub[y, z]: x <= z and y <= z
        # z is least iff it sits below every other upper bound
        bad = (ub[:, None, :] & ~leq[None, :, :]).any(axis=2)
        least = ub & ~bad
        has = least.any(axis=1)
        if not has.all():
            y = int(np.flatnonzero(~has)[0])
            raise StructureError(f"elements {x} and {y} have no least upper bound")
        out[x] = least.argmax(axis=1)
    return out


class FiniteLattice:
    """A finite lattice given by its order relation.

    ``join`` and ``meet`` may be supplied when they are already known (for
    example pointwise tables of a product); they are checked against ``leq``.
    """

    def __init__(self, leq, names: Sequence[str] | None = None, *, join=None, meet=None):
        leq = np.array(leq, dtype=bool)
        if leq.ndim != 2 or leq.shape[0] != leq.shape[1] or leq.shape[0] == 0:
            raise StructureError("order table must be a non-empty square matrix")
        n = leq.shape[0]
        if not leq.diagonal().all():
            raise StructureError("order is not reflexive")
        if (leq & leq.T & ~np.eye(n, dtype=bool)).any():
            x, y = np.argwhere(leq & leq.T & ~np.eye(n, dtype=bool))[0]
            raise StructureError(f"order is not antisymmetric: {x} <= {y} <= {x}")
        if ((leq.astype(np.int64) @ leq.astype(np.int64) > 0) & ~leq).any():
            raise StructureError("order is not transitive")
        self.n = n
        self.leq = leq
        self.leq.setflags(write=False)
        if join is None:
            join = _least_upper_bounds(leq)
        else:
            join = np.array(join, dtype=np.int64)
            self._check_bound_table(join, leq)
        if meet is None:
            meet = _least_upper_bounds(leq.T)
        else:
            meet = np.array(meet, dtype=np.int64)
            self._check_bound_table(meet, leq.T)
        self.join = join
        self.meet = meet
        self.join.setflags(write=False)
        self.meet.setflags(write=False)
        bottoms = np.flatnonzero(leq.all(axis=1))
        tops = np.flatnonzero(leq.all(axis=0))
        if len(bottoms) != 1 or len(tops) != 1:
            raise StructureError("lattice needs a unique bottom and top")
        self.bottom = int(bottoms[0])
        self.top = int(tops[0])
        if names is None:
            names = [str(i) for i in range(n)]
        names = [str(s) for s in names]
        if len(names) != n or len(set(names)) != n:
            raise StructureError("element names must be distinct, one per element")
        self.names = tuple(names)
        self._index = {s: i for i, s in enumerate(self.names)}

    @staticmethod
    def _check_bound_table(table, leq):
        n = leq.shape[0]
        if table.shape != (n, n) or table.min() < 0 or table.max() >= n:
            raise StructureError("bound table has wrong shape or range")
        expected = _least_upper_bounds(leq)
        if not np.array_equal(table, expected):
            raise StructureError("supplied bound table disagrees with the order")

    # construction helpers

    @classmethod
    def chain(cls, n: int, names: Sequence[str] | None = None) -> "FiniteLattice":
        idx = np.arange(n)
        leq = idx[:, None] <= idx[None, :]
        return cls(leq, names, join=np.maximum.outer(idx, idx), meet=np.minimum.outer(idx, idx))

    @classmethod
    def powerset(cls, k: int, names: Sequence[str] | None = None) -> "FiniteLattice":
        """Subsets of ``k`` atoms, element ``i`` being the bitmask ``i``."""
        idx = np.arange(2**k)
        leq = (idx[:, None] & ~idx[None, :]) == 0
        if names is None:
            letters = "abcdefghijklmnopqrstuvwxyz"
            names = []
            for m in range(2**k):
                if m == 0:
                    names.append("0")
                elif m == 2**k - 1:
                    names.append("1")
                else:
                    names.append("".join(letters[j] for j in range(k) if m >> j & 1))
        return cls(leq, names, join=np.bitwise_or.outer(idx, idx), meet=np.bitwise_and.outer(idx, idx))

    def dual(self) -> "FiniteLattice":
        return FiniteLattice(self.leq.T, self.names, join=self.meet, meet=self.join)

    def product(self, other: "FiniteLattice", names: Sequence[str] | None = None) -> "FiniteLattice":
        """Componentwise product; element ``(a, b)`` has index ``a * len(other) + b``."""
        m = other.n
        pairs = [(a, b) for a in range(self.n) for b in range(m)]
        A = np.array([p[0] for p in pairs])
        B = np.array([p[1] for p in pairs])
        leq = self.leq[A[:, None], A[None, :]] & other.leq[B[:, None], B[None, :]]
        join = self.join[A[:, None], A[None, :]] * m + other.join[B[:, None], B[None, :]]
        meet = self.meet[A[:, None], A[None, :]] * m + other.meet[B[:, None], B[None, :]]
        if names is None:
            names = [f"({self.names[a]},{other.names[b]})" for a, b in pairs]
        return FiniteLattice(leq, names, join=join, meet=meet)

    # element access

    def __len__(self) -> int:
        return self.n

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FiniteLattice)
            and self.names == other.names
            and np.array_equal(self.leq, other.leq)
        )

    def __hash__(self) -> int:
        return hash((self.names, self.leq.tobytes()))

    def __repr__(self) -> str:
        return f"FiniteLattice(n={self.n}, names={list(self.names)})"

    def index(self, name) -> int:
        if isinstance(name, (int, np.integer)):
            if not 0 <= name < self.n:
                raise StructureError(f"element {name} out of range")
            return int(name)
        try:
            return self._index[str(name)]
        except KeyError:
            raise StructureError(f"unknown lattice element {name!r}; have {list(self.names)}") from None

    def le(self, x: int, y: int) -> bool:
        return bool(self.leq[x, y])

    def join_all(self, xs: Iterable[int]) -> int:
        return reduce(lambda a, b: int(self.join[a, b]), xs, self.bottom)

    def meet_all(self, xs: Iterable[int]) -> int:
        return reduce(lambda a, b: int(self.meet[a, b]), xs, self.top)

    def is_distributive(self) -> bool:
        J, M = self.join, self.meet
        x, y, z = np.meshgrid(np.arange(self.n), np.arange(self.n), np.arange(self.n), indexing="ij")
        return bool(np.array_equal(M[x, J[y, z]], J[M[x, y], M[x, z]]))

    def is_boolean(self) -> bool:
        """Distributive and every element has a complement."""
        if not self.is_distributive():
            return False
        comp = (self.join == self.top) & (self.meet == self.bottom)
        return bool(comp.any(axis=1).all())


def bound(L: FiniteLattice, kind: str, subset: Iterable[int]) -> int:
    """Join (``kind="join"``) or meet of an arbitrary subset; empty gives bottom/top."""
    if kind == "join":
        return L.join_all(subset)
    if kind == "meet":
        return L.meet_all(subset)
    raise ValueError(f"kind must be 'join' or 'meet', not {kind!r}")


@dataclass(frozen=True)
class MonotoneMap:
    dom: FiniteLattice
    cod: FiniteLattice
    table: tuple

    def __post_init__(self):
        table = tuple(int(v) for v in self.table)
        object.__setattr__(self, "table", table)
        if len(table) != self.dom.n or any(not 0 <= v < self.cod.n for v in table):
            raise StructureError("map table does not fit its domain/codomain")
        t = np.array(table)
        if (self.dom.leq & ~self.cod.leq[t[:, None], t[None, :]]).any():
            x, y = np.argwhere(self.dom.leq & ~self.cod.leq[t[:, None], t[None, :]])[0]
            raise StructureError(f"map is not monotone: {x} <= {y} but images are not ordered")

    def __call__(self, x: int) -> int:
        return self.table[x]


def galois(left: MonotoneMap, right: MonotoneMap) -> bool:
    """``left(y) <= x  <=>  y <= right(x)`` for all ``x``, ``y``."""
    for x, y in product(range(right.dom.n), range(left.dom.n)):
        if right.dom.le(left(y), x) != left.dom.le(y, right(x)):
            return False
    return True


def find_adjoint(f: MonotoneMap, side: str) -> MonotoneMap | None:
    """Left or right adjoint of ``f``, or ``None`` when it has none.

    On a finite lattice the only possible left adjoint is
    ``g(y) = meet{x : y <= f(x)}`` (dually for the right adjoint); the
    candidate is built and then checked against every pair.
    """
    D, C = f.dom, f.cod
    if side == "left":
        cand = [D.meet_all(x for x in range(D.n) if C.le(y, f(x))) for y in range(C.n)]
        try:
            g = MonotoneMap(C, D, tuple(cand))
        except StructureError:
            return None
        return g if galois(g, f) else None
    if side == "right":
        cand = [D.join_all(x for x in range(D.n) if C.le(f(x), y)) for y in range(C.n)]
        try:
            g = MonotoneMap(C, D, tuple(cand))
        except StructureError:
            return None
        return g if galois(f, g) else None
    raise ValueError(f"side must be 'left' or 'right', not {side!r}")
