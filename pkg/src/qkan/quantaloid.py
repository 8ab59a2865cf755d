"""Finite quantaloids: composition tables, residuals, builders and Girard structure.

A quantaloid has objects ``0..m-1``.  Arrows ``X -> Y`` are element indices
of the lattice ``hom(X, Y)``.  Composition tables are indexed ``[g, f]`` for
``g: Y -> Z`` after ``f: X -> Y``.  Two residuals are materialised:

* ``h ↙ f`` (``lda``): for ``h: X -> Z``, ``f: X -> Y``, the largest
  ``g: Y -> Z`` with ``g ∘ f <= h``;
* ``g ↘ h`` (``rda``): for ``g: Y -> Z``, ``h: X -> Z``, the largest
  ``f: X -> Y`` with ``g ∘ f <= h``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import product
from typing import Mapping, NamedTuple, Sequence

import numpy as np

from .errors import BudgetExceeded, InternalError, PreconditionError, Report, StructureError, TypeMismatch
from .lattice import FiniteLattice

DEFAULT_GIRARD_BUDGET = 10**6


class Arrow(NamedTuple):
    src: int
    dst: int
    idx: int


class Quantaloid:
    """Finite quantaloid given by hom-lattices, composition tables and identities.

    Construction only checks shapes; :meth:`validate` checks the axioms.
    """

    def __init__(
        self,
        objects: Sequence[str],
        homs: Mapping[tuple[int, int], FiniteLattice],
        comp: Mapping[tuple[int, int, int], np.ndarray],
        identities: Sequence[int],
        name: str = "",
    ):
        self.objects = tuple(str(o) for o in objects)
        m = len(self.objects)
        if m == 0 or len(set(self.objects)) != m:
            raise StructureError("quantaloid needs distinct, non-empty object names")
        self.m = m
        self.name = name
        self._homs = {}
        for X, Y in product(range(m), repeat=2):
            if (X, Y) not in homs:
                raise StructureError(f"missing hom-lattice for ({X}, {Y})")
            self._homs[X, Y] = homs[X, Y]
        self._comp = {}
        for X, Y, Z in product(range(m), repeat=3):
            t = np.asarray(comp.get((X, Y, Z)), dtype=np.int64) if (X, Y, Z) in comp else None
            shape = (self._homs[Y, Z].n, self._homs[X, Y].n)
            if t is None or t.shape != shape:
                raise StructureError(f"composition table ({X},{Y},{Z}) must have shape {shape}")
            if t.size and (t.min() < 0 or t.max() >= self._homs[X, Z].n):
                raise StructureError(f"composition table ({X},{Y},{Z}) leaves hom({X},{Z})")
            t.setflags(write=False)
            self._comp[X, Y, Z] = t
        ids = [int(i) for i in identities]
        if len(ids) != m or any(not 0 <= ids[X] < self._homs[X, X].n for X in range(m)):
            raise StructureError("one identity per object, inside its endo-hom")
        self.identities = tuple(ids)
        self._objindex = {o: i for i, o in enumerate(self.objects)}
        self._lda: dict = {}
        self._rda: dict = {}
        self._op: Quantaloid | None = None

    def __repr__(self) -> str:
        label = self.name or "Quantaloid"
        return f"<{label}: {self.m} object(s), hom sizes {[self._homs[k].n for k in sorted(self._homs)]}>"

    # tables

    def hom(self, X: int, Y: int) -> FiniteLattice:
        return self._homs[X, Y]

    def comp_table(self, X: int, Y: int, Z: int) -> np.ndarray:
        return self._comp[X, Y, Z]

    def lda_table(self, X: int, Y: int, Z: int) -> np.ndarray:
        """``[h, f] -> h ↙ f`` for ``h: X->Z``, ``f: X->Y``; result in ``hom(Y, Z)``."""
        key = (X, Y, Z)
        if key not in self._lda:
            C = self._comp[X, Y, Z]  # [g, f] in hom(X, Z)
            LXZ, LYZ = self._homs[X, Z], self._homs[Y, Z]
            nh, nf = LXZ.n, self._homs[X, Y].n
            acc = np.full((nh, nf), LYZ.bottom, dtype=np.int64)
            for g in range(LYZ.n):
                ok = LXZ.leq[C[g][None, :], np.arange(nh)[:, None]]  # [h, f]: g∘f <= h
                acc = np.where(ok, LYZ.join[acc, g], acc)
            acc.setflags(write=False)
            self._lda[key] = acc
        return self._lda[key]

    def rda_table(self, X: int, Y: int, Z: int) -> np.ndarray:
        """``[g, h] -> g ↘ h`` for ``g: Y->Z``, ``h: X->Z``; result in ``hom(X, Y)``."""
        key = (X, Y, Z)
        if key not in self._rda:
            C = self._comp[X, Y, Z]
            LXZ, LXY = self._homs[X, Z], self._homs[X, Y]
            ng, nh = self._homs[Y, Z].n, LXZ.n
            acc = np.full((ng, nh), LXY.bottom, dtype=np.int64)
            for f in range(LXY.n):
                ok = LXZ.leq[C[:, f][:, None], np.arange(nh)[None, :]]  # [g, h]: g∘f <= h
                acc = np.where(ok, LXY.join[acc, f], acc)
            acc.setflags(write=False)
            self._rda[key] = acc
        return self._rda[key]

    # arrow-level API

    def obj(self, name) -> int:
        if isinstance(name, (int, np.integer)):
            if not 0 <= name < self.m:
                raise StructureError(f"object {name} out of range")
            return int(name)
        try:
            return self._objindex[str(name)]
        except KeyError:
            raise StructureError(f"unknown quantaloid object {name!r}") from None

    def arrow(self, X, Y, element) -> Arrow:
        X, Y = self.obj(X), self.obj(Y)
        return Arrow(X, Y, self._homs[X, Y].index(element))

    def arrow_name(self, a: Arrow) -> str:
        return self._homs[a.src, a.dst].names[a.idx]

    def identity(self, X) -> Arrow:
        X = self.obj(X)
        return Arrow(X, X, self.identities[X])

    def top(self, X, Y) -> Arrow:
        X, Y = self.obj(X), self.obj(Y)
        return Arrow(X, Y, self._homs[X, Y].top)

    def bottom(self, X, Y) -> Arrow:
        X, Y = self.obj(X), self.obj(Y)
        return Arrow(X, Y, self._homs[X, Y].bottom)

    def arrows(self, X, Y) -> list[Arrow]:
        X, Y = self.obj(X), self.obj(Y)
        return [Arrow(X, Y, i) for i in range(self._homs[X, Y].n)]

    def all_arrows(self) -> list[Arrow]:
        return [a for X, Y in product(range(self.m), repeat=2) for a in self.arrows(X, Y)]

    def compose(self, g: Arrow, f: Arrow) -> Arrow:
        if f.dst != g.src:
            raise TypeMismatch(f"cannot compose {g} after {f}")
        return Arrow(f.src, g.dst, int(self._comp[f.src, f.dst, g.dst][g.idx, f.idx]))

    def le(self, a: Arrow, b: Arrow) -> bool:
        if (a.src, a.dst) != (b.src, b.dst):
            raise TypeMismatch(f"{a} and {b} live in different hom-lattices")
        return self._homs[a.src, a.dst].le(a.idx, b.idx)

    def residual(self, h: Arrow, other: Arrow, side: str) -> Arrow:
        """``h ↙ other`` (``side="lda"``) or ``other ↘ h`` (``side="rda"``)."""
        if side == "lda":
            f = other
            if f.src != h.src:
                raise TypeMismatch(f"h ↙ f needs a common domain, got {h} and {f}")
            X, Y, Z = h.src, f.dst, h.dst
            return Arrow(Y, Z, int(self.lda_table(X, Y, Z)[h.idx, f.idx]))
        if side == "rda":
            g = other
            if g.dst != h.dst:
                raise TypeMismatch(f"g ↘ h needs a common codomain, got {g} and {h}")
            X, Y, Z = h.src, g.src, h.dst
            return Arrow(X, Y, int(self.rda_table(X, Y, Z)[g.idx, h.idx]))
        raise ValueError(f"side must be 'lda' or 'rda', not {side!r}")

    # structure

    def validate(self) -> Report:
        m = self.m
        for X, Y in product(range(m), repeat=2):
            C = self._comp[X, X, Y]
            L = self._homs[X, Y]
            if not np.array_equal(C[:, self.identities[X]], np.arange(L.n)):
                f = int(np.flatnonzero(C[:, self.identities[X]] != np.arange(L.n))[0])
                return Report(False, "right unit", (L.names[f],))
            C = self._comp[X, Y, Y]
            if not np.array_equal(C[self.identities[Y], :], np.arange(L.n)):
                f = int(np.flatnonzero(C[self.identities[Y], :] != np.arange(L.n))[0])
                return Report(False, "left unit", (L.names[f],))
        for W, X, Y, Z in product(range(m), repeat=4):
            # (h∘g)∘f == h∘(g∘f) for f: W->X, g: X->Y, h: Y->Z
            hg = self._comp[X, Y, Z]  # [h, g]
            gf = self._comp[W, X, Y]  # [g, f]
            left = self._comp[W, X, Z][hg[:, :, None], np.arange(gf.shape[1])[None, None, :]]
            right = self._comp[W, Y, Z][np.arange(hg.shape[0])[:, None, None], gf[None, :, :]]
            if not np.array_equal(left, right):
                h, g, f = (int(v) for v in np.argwhere(left != right)[0])
                names = (self._homs[Y, Z].names[h], self._homs[X, Y].names[g], self._homs[W, X].names[f])
                return Report(False, "associativity", names, {"objects": (W, X, Y, Z)})
        for X, Y, Z in product(range(m), repeat=3):
            C = self._comp[X, Y, Z]
            LXY, LYZ, LXZ = self._homs[X, Y], self._homs[Y, Z], self._homs[X, Z]
            if (C[LYZ.bottom, :] != LXZ.bottom).any() or (C[:, LXY.bottom] != LXZ.bottom).any():
                return Report(False, "bottom preservation", (X, Y, Z))
            # g∘(f1 ∨ f2) == g∘f1 ∨ g∘f2
            lhs = C[:, LXY.join]  # [g, f1, f2]
            rhs = LXZ.join[C[:, :, None], C[:, None, :]]
            if not np.array_equal(lhs, rhs):
                g, f1, f2 = (int(v) for v in np.argwhere(lhs != rhs)[0])
                return Report(False, "joins preserved on the right", (LYZ.names[g], LXY.names[f1], LXY.names[f2]))
            lhs = C[LYZ.join, :]  # [g1, g2, f]
            rhs = LXZ.join[C[:, None, :], C[None, :, :]]
            if not np.array_equal(lhs, rhs):
                g1, g2, f = (int(v) for v in np.argwhere(lhs != rhs)[0])
                return Report(False, "joins preserved on the left", (LYZ.names[g1], LYZ.names[g2], LXY.names[f]))
        return Report(True)

    def tables_equal(self, other: "Quantaloid") -> bool:
        if self.objects != other.objects or self.identities != other.identities:
            return False
        if any(self._homs[k] != other._homs[k] for k in self._homs):
            return False
        return all(np.array_equal(self._comp[k], other._comp[k]) for k in self._comp)

    @property
    def op(self) -> "Quantaloid":
        """Opposite quantaloid, cached so that ``Q.op.op is Q``."""
        if self._op is None:
            self._op = opposite(self)
            self._op._op = self
        return self._op

    @cached_property
    def is_one_object(self) -> bool:
        return self.m == 1

    def is_commutative(self) -> bool:
        if self.m != 1:
            return False
        C = self._comp[0, 0, 0]
        return bool(np.array_equal(C, C.T))

    def is_integral(self) -> bool:
        return self.m == 1 and self.identities[0] == self._homs[0, 0].top


# ---------------------------------------------------------------- builders


def _one_object(L: FiniteLattice, table, unit: int, name: str, obj: str = "*") -> Quantaloid:
    Q = Quantaloid([obj], {(0, 0): L}, {(0, 0, 0): np.asarray(table)}, [unit], name=name)
    return Q


def from_table(elements, leq, mult, unit, name: str = "table") -> Quantaloid:
    """One-object quantale from an order matrix and a multiplication table ``mult[g][f] = g∘f``."""
    L = FiniteLattice(leq, elements)
    table = np.array([[L.index(v) for v in row] for row in mult], dtype=np.int64) if len(mult) and isinstance(
        mult[0][0], str
    ) else np.asarray(mult, dtype=np.int64)
    return _one_object(L, table, L.index(unit), name)


def chain_names(size: int) -> list[str]:
    return [str(Fraction(i, size - 1)) for i in range(size)]


def chain_tnorm(size: int, tnorm: str) -> Quantaloid:
    """Equally spaced chain ``{0, 1/(n-1), ..., 1}`` with the Gödel or Łukasiewicz t-norm."""
    if size < 2:
        raise StructureError("a t-norm chain needs at least 2 elements")
    L = FiniteLattice.chain(size, chain_names(size))
    i = np.arange(size)
    if tnorm == "godel":
        table = np.minimum.outer(i, i)
    elif tnorm == "lukasiewicz":
        table = np.maximum(0, i[:, None] + i[None, :] - (size - 1))
    else:
        raise StructureError(f"unknown t-norm {tnorm!r}")
    return _one_object(L, table, size - 1, f"{tnorm}-{size}")


def boolean_frame(atoms: int) -> Quantaloid:
    """Powerset of ``atoms`` points with intersection as multiplication."""
    L = FiniteLattice.powerset(atoms)
    return _one_object(L, L.meet, L.top, f"boolean-{2**atoms}")


def diagonals(L: FiniteLattice) -> Quantaloid:
    """Quantaloid of diagonals of a complete Boolean algebra ``L``.

    Objects are the elements of ``L``; arrows ``X -> Y`` are the elements
    below ``X ∧ Y``; composition is meet and the identity on ``X`` is ``X``.
    """
    if not L.is_boolean():
        raise PreconditionError("diagonals are only built over Boolean algebras")
    n = L.n
    members = {}
    homs = {}
    for X, Y in product(range(n), repeat=2):
        m = int(L.meet[X, Y])
        els = [e for e in range(n) if L.le(e, m)]
        members[X, Y] = els
        sub = L.leq[np.ix_(els, els)]
        homs[X, Y] = FiniteLattice(sub, [L.names[e] for e in els])
    comp = {}
    for X, Y, Z in product(range(n), repeat=3):
        pos = {e: k for k, e in enumerate(members[X, Z])}
        comp[X, Y, Z] = np.array(
            [[pos[int(L.meet[g, f])] for f in members[X, Y]] for g in members[Y, Z]], dtype=np.int64
        ).reshape(len(members[Y, Z]), len(members[X, Y]))
    ids = [members[X, X].index(X) for X in range(n)]
    return Quantaloid(L.names, homs, comp, ids, name=f"D({n})")


def girard_envelope(Q0: Quantaloid) -> Quantaloid:
    """Girard quantaloid on pairs ``(f, f')`` with ``f: X->Y`` and ``f': Y->X``.

    Joins are ``(∨ f, ∧ f')``; composition is
    ``(g, g')∘(f, f') = (g∘f, (f' ↙ g) ∧ (f ↘ g'))``; identity ``(1_X, ⊤)``.
    """
    m = Q0.m
    homs = {}
    for X, Y in product(range(m), repeat=2):
        homs[X, Y] = Q0.hom(X, Y).product(Q0.hom(Y, X).dual())
    comp = {}
    for X, Y, Z in product(range(m), repeat=3):
        nXY, nYX = Q0.hom(X, Y).n, Q0.hom(Y, X).n
        nYZ, nZY = Q0.hom(Y, Z).n, Q0.hom(Z, Y).n
        nZX = Q0.hom(Z, X).n
        C = Q0.comp_table(X, Y, Z)
        lda = Q0.lda_table(Y, Z, X)  # [f', g] -> f' ↙ g : Z -> X
        rda = Q0.rda_table(Z, X, Y)  # [f, g'] -> f ↘ g' : Z -> X
        MZX = Q0.hom(Z, X).meet
        t = np.empty((nYZ * nZY, nXY * nYX), dtype=np.int64)
        for g, gp in product(range(nYZ), range(nZY)):
            for f, fp in product(range(nXY), range(nYX)):
                first = C[g, f]
                second = MZX[lda[fp, g], rda[f, gp]]
                t[g * nZY + gp, f * nYX + fp] = first * nZX + second
        comp[X, Y, Z] = t
    ids = [Q0.identities[X] * Q0.hom(X, X).n + Q0.hom(X, X).top for X in range(m)]
    return Quantaloid(Q0.objects, homs, comp, ids, name=f"G({Q0.name})")


def opposite(Q0: Quantaloid) -> Quantaloid:
    """Reverse every arrow: ``op(X, Y) = Q0(Y, X)`` and ``g ∘op f = f ∘ g``."""
    m = Q0.m
    homs = {(X, Y): Q0.hom(Y, X) for X, Y in product(range(m), repeat=2)}
    # op: f: X->Y is Q0 arrow Y->X; g: Y->Z is Q0 arrow Z->Y; g∘op f = f∘g: Z->X
    comp = {(X, Y, Z): Q0.comp_table(Z, Y, X).T.copy() for X, Y, Z in product(range(m), repeat=3)}
    return Quantaloid(Q0.objects, homs, comp, Q0.identities, name=f"{Q0.name}^op")


def build(spec: Mapping) -> Quantaloid:
    """Build and validate a quantaloid from a declarative spec mapping."""
    kind = spec.get("kind")
    if kind == "chain-tnorm":
        Q = chain_tnorm(int(spec["size"]), spec["tnorm"])
    elif kind == "boolean-frame":
        Q = boolean_frame(int(spec["atoms"]))
    elif kind == "diagonals":
        if "lattice" in spec:
            Q = diagonals(spec["lattice"])
        else:
            Q = diagonals(FiniteLattice.powerset(int(spec["atoms"])))
    elif kind == "girard-envelope":
        Q = girard_envelope(build(spec["of"]))
    elif kind == "opposite":
        Q = opposite(build(spec["of"]))
    elif kind == "table":
        leq = spec.get("leq")
        elements = spec["elements"]
        if leq is None:
            idx = {e: i for i, e in enumerate(elements)}
            leq = np.eye(len(elements), dtype=bool)
            for a, b in spec.get("order", []):
                leq[idx[a], idx[b]] = True
            # reflexive-transitive closure of the declared covers
            for k in range(len(elements)):
                leq |= leq[:, [k]] & leq[[k], :]
        Q = from_table(elements, leq, spec["mult"], spec["unit"], name=spec.get("name", "table"))
    else:
        raise StructureError(f"unknown quantaloid kind {kind!r}")
    report = Q.validate()
    if not report:
        raise StructureError(f"{kind} spec does not define a quantaloid: {report.axiom} at {report.witness}")
    return Q


# ---------------------------------------------------------------- Girard structure


@dataclass(frozen=True)
class GirardFamily:
    """One endo-arrow ``d_X`` per object (element indices of ``hom(X, X)``)."""

    d: tuple

    def arrow(self, X: int) -> Arrow:
        return Arrow(X, X, self.d[X])


def _negations(Q: Quantaloid, d, X: int, Y: int):
    """``d_X ↙ f`` and ``f ↘ d_Y`` for every ``f: X -> Y`` (both ``Y -> X``)."""
    left = Q.lda_table(X, Y, X)[d[X], :]
    right = Q.rda_table(Y, X, Y)[:, d[Y]]
    return left, right


def family_report(Q: Quantaloid, family: GirardFamily) -> Report:
    d = family.d
    if len(d) != Q.m:
        return Report(False, "family size", len(d))
    for X, Y in product(range(Q.m), repeat=2):
        left, right = _negations(Q, d, X, Y)
        if not np.array_equal(left, right):
            f = int(np.flatnonzero(left != right)[0])
            return Report(False, "cyclic", Q.hom(X, Y).names[f], {"objects": (X, Y)})
        ident = np.arange(Q.hom(X, Y).n)
        back_left = Q.rda_table(X, Y, X)[left, d[X]]  # (d_X ↙ f) ↘ d_X
        back_right = Q.lda_table(Y, X, Y)[d[Y], right]  # d_Y ↙ (f ↘ d_Y)
        if not (np.array_equal(back_left, ident) and np.array_equal(back_right, ident)):
            bad = (back_left != ident) | (back_right != ident)
            f = int(np.flatnonzero(bad)[0])
            return Report(False, "dualizing", Q.hom(X, Y).names[f], {"objects": (X, Y)})
    return Report(True)


def bottom_is_dualizing(Q: Quantaloid) -> bool:
    """``q = (q → ⊥) → ⊥`` for every ``q`` of a one-object quantale."""
    if Q.m != 1:
        raise PreconditionError("only defined for one-object quantales")
    L = Q.hom(0, 0)
    R = Q.lda_table(0, 0, 0)  # [h, f] -> h ↙ f
    q = np.arange(L.n)
    neg = R[L.bottom, q]
    return bool(np.array_equal(R[L.bottom, neg], q))


def girard_search(Q: Quantaloid, budget: int = DEFAULT_GIRARD_BUDGET) -> GirardFamily | None:
    """Lexicographically least cyclic dualizing family, or ``None``.

    The full product of endo-homs is scanned, so ``None`` means none exists.
    Each object's own cyclic/dualizing conditions prune its candidates first.
    """
    sizes = [Q.hom(X, X).n for X in range(Q.m)]
    total = int(np.prod(sizes, dtype=object))
    if total > budget:
        raise BudgetExceeded("girard family candidates", total, budget)
    local = []
    for X in range(Q.m):
        ok = []
        for e in range(sizes[X]):
            d = [0] * Q.m
            d[X] = e
            left, right = _negations(Q, d, X, X)
            ident = np.arange(sizes[X])
            if (
                np.array_equal(left, right)
                and np.array_equal(Q.rda_table(X, X, X)[left, e], ident)
                and np.array_equal(Q.lda_table(X, X, X)[e, right], ident)
            ):
                ok.append(e)
        local.append(ok)
    found = None
    for cand in product(*local):
        fam = GirardFamily(tuple(int(c) for c in cand))
        if family_report(Q, fam):
            found = fam
            break
    if Q.m == 1 and Q.is_commutative() and Q.is_integral():
        by_bottom = bottom_is_dualizing(Q)
        if by_bottom != (found is not None):
            raise InternalError("Girard search disagrees with the (q→⊥)→⊥ criterion")
    return found


def complement(Q: Quantaloid, family: GirardFamily, f: Arrow) -> Arrow:
    """``¬f = d_X ↙ f`` for ``f: X -> Y``."""
    report = family_report(Q, family)
    if not report:
        raise PreconditionError(f"not a cyclic dualizing family: {report.axiom} at {report.witness}")
    return Q.residual(family.arrow(f.src), f, "lda")
