"""Q-distributors: composition, residuals, the canonical quasi-inverse and regularity."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from . import _matrix as mx
from .errors import BudgetExceeded, InternalError, Report, StructureError, TypeMismatch
from .qcat import QCategory, QFunctor, validate_functor
from .quantaloid import Quantaloid

DEFAULT_SEARCH_BUDGET = 10**5


class QDistributor:
    """Matrix ``phi[x, y] in Q(tx, ty)`` for ``x`` in ``dom`` and ``y`` in ``cod``."""

    def __init__(self, dom: QCategory, cod: QCategory, matrix):
        if dom.base is not cod.base:
            raise TypeMismatch("distributor between categories over different quantaloids")
        self.dom = dom
        self.cod = cod
        M = np.array(matrix, dtype=mx.INT).reshape(dom.n, cod.n)
        Q = dom.base
        for x in range(dom.n):
            for y in range(cod.n):
                if not 0 <= M[x, y] < Q.hom(dom.types[x], cod.types[y]).n:
                    raise StructureError(f"entry ({dom.names[x]}, {cod.names[y]}) outside its hom-lattice")
        M.setflags(write=False)
        self.matrix = M

    @property
    def base(self) -> Quantaloid:
        return self.dom.base

    def __repr__(self) -> str:
        return f"QDistributor({self.dom.n}x{self.cod.n}, {self.matrix.tolist()})"

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, QDistributor)
            and _same(self.dom, other.dom)
            and _same(self.cod, other.cod)
            and np.array_equal(self.matrix, other.matrix)
        )

    def __hash__(self) -> int:
        return hash(self.matrix.tobytes())

    def __le__(self, other: "QDistributor") -> bool:
        _check_parallel(self, other)
        return bool(mx.leq(self.base, self.matrix, other.matrix, self.dom.types, self.cod.types))

    def entry_name(self, x: int, y: int) -> str:
        Q = self.base
        return Q.hom(self.dom.types[x], self.cod.types[y]).names[int(self.matrix[x, y])]

    def validate(self) -> Report:
        return validate_distributor(self)


def _same(A: QCategory, B: QCategory) -> bool:
    return A is B or A.key() == B.key()


def _check_parallel(a: QDistributor, b: QDistributor):
    if not (_same(a.dom, b.dom) and _same(a.cod, b.cod)):
        raise TypeMismatch("distributors are not parallel")


def identity(A: QCategory) -> QDistributor:
    return QDistributor(A, A, A.hom)


def bottom(A: QCategory, B: QCategory) -> QDistributor:
    return QDistributor(A, B, mx.constant(A.base, A.types, B.types, "bottom"))


def top(A: QCategory, B: QCategory) -> QDistributor:
    return QDistributor(A, B, mx.constant(A.base, A.types, B.types, "top"))


def join(a: QDistributor, b: QDistributor) -> QDistributor:
    _check_parallel(a, b)
    return QDistributor(a.dom, a.cod, mx.cellwise(a.base, a.matrix, b.matrix, a.dom.types, a.cod.types, "join"))


def validate_distributor(phi: QDistributor) -> Report:
    """Checks ``phi ∘ A <= phi`` and ``B ∘ phi <= phi``."""
    A, B, Q = phi.dom, phi.cod, phi.base
    left = mx.compose(Q, phi.matrix, A.hom, A.types, A.types, B.types)
    bad = ~mx.cellwise_leq(Q, left, phi.matrix, A.types, B.types)
    if bad.any():
        x, y = (int(v) for v in np.argwhere(bad)[0])
        return Report(False, "phi ∘ A <= phi", (A.names[x], B.names[y]), {"condition": 2})
    right = mx.compose(Q, B.hom, phi.matrix, A.types, B.types, B.types)
    bad = ~mx.cellwise_leq(Q, right, phi.matrix, A.types, B.types)
    if bad.any():
        x, y = (int(v) for v in np.argwhere(bad)[0])
        return Report(False, "B ∘ phi <= phi", (A.names[x], B.names[y]), {"condition": 2})
    return Report(True, detail={"condition": 2})


def dist_compose(psi: QDistributor, phi: QDistributor) -> QDistributor:
    """``(psi ∘ phi)(x, z) = ⋁_y psi(y, z) ∘ phi(x, y)``."""
    if not _same(phi.cod, psi.dom):
        raise TypeMismatch("middle categories differ")
    A, B, C = phi.dom, phi.cod, psi.cod
    return QDistributor(A, C, mx.compose(phi.base, psi.matrix, phi.matrix, A.types, B.types, C.types))


def dist_residual(xi: QDistributor, other: QDistributor, side: str) -> QDistributor:
    """``xi ↙ other`` (``side="lda"``, other: A -|-> B, xi: A -|-> C, result B -|-> C)
    or ``other ↘ xi`` (``side="rda"``, other: B -|-> C, xi: A -|-> C, result A -|-> B)."""
    Q = xi.base
    if side == "lda":
        phi = other
        if not _same(phi.dom, xi.dom):
            raise TypeMismatch("xi ↙ phi needs a common domain")
        A, B, C = xi.dom, phi.cod, xi.cod
        return QDistributor(B, C, mx.lda(Q, xi.matrix, phi.matrix, A.types, B.types, C.types))
    if side == "rda":
        psi = other
        if not _same(psi.cod, xi.cod):
            raise TypeMismatch("psi ↘ xi needs a common codomain")
        A, B, C = xi.dom, psi.dom, xi.cod
        return QDistributor(A, B, mx.rda(Q, psi.matrix, xi.matrix, A.types, B.types, C.types))
    raise ValueError(f"side must be 'lda' or 'rda', not {side!r}")


def phi_bar(phi: QDistributor) -> QDistributor:
    """``(phi ↘ phi) ↙ phi``: the largest ``g`` with ``phi ∘ g ∘ phi <= phi``."""
    return dist_residual(dist_residual(phi, phi, "rda"), phi, "lda")


@dataclass
class Regularity:
    regular: bool
    bar: QDistributor
    witness: object
    conditions: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.regular


def exists_inner_inverse(phi: QDistributor, budget: int = DEFAULT_SEARCH_BUDGET) -> bool | None:
    """Brute force: is there a distributor ``g`` with ``phi ∘ g ∘ phi = phi``?

    Returns ``None`` when the candidate space exceeds ``budget``.
    """
    A, B, Q = phi.dom, phi.cod, phi.base
    if mx.count_matrices(Q, B.types, A.types) > budget:
        return None
    g = all_distributor_matrices(B, A)
    gp = mx.compose(Q, g, phi.matrix, A.types, B.types, A.types)
    pgp = mx.compose(Q, phi.matrix, gp, A.types, A.types, B.types)
    return bool((pgp == phi.matrix).all(axis=(-2, -1)).any())


def is_regular(phi: QDistributor, search_budget: int = DEFAULT_SEARCH_BUDGET) -> Regularity:
    """Decide ``phi <= phi ∘ bar ∘ phi``.

    The equality form and the brute-force search for an inner inverse are
    computed alongside (the search only within ``search_budget``) and must
    agree.  The witness is ``bar`` on success, the first failing cell otherwise.
    """
    A, B, Q = phi.dom, phi.cod, phi.base
    bar = phi_bar(phi)
    pbp = mx.compose(Q, phi.matrix, mx.compose(Q, bar.matrix, phi.matrix, A.types, B.types, A.types), A.types, A.types, B.types)
    below = mx.cellwise_leq(Q, phi.matrix, pbp, A.types, B.types)
    iii = bool(below.all())
    ii = bool(np.array_equal(pbp, phi.matrix))
    i = exists_inner_inverse(phi, search_budget)
    conds = {"exists_g": i, "equality": ii, "inequality": iii}
    if ii != iii or (i is not None and i != iii):
        raise InternalError(f"regularity characterisations disagree: {conds}")
    if iii:
        return Regularity(True, bar, bar, conds)
    x, y = (int(v) for v in np.argwhere(~below)[0])
    witness = {"cell": (A.names[x], B.names[y]), "phi": phi.entry_name(x, y), "phi_bar_phi": Q.hom(A.types[x], B.types[y]).names[int(pbp[x, y])]}
    return Regularity(False, bar, witness, conds)


def functor_graph(F: QFunctor) -> tuple[QDistributor, QDistributor]:
    """Graph ``B(F-, -)`` and cograph ``B(-, F-)`` of a functor."""
    validate_functor(F).require()
    A, B = F.dom, F.cod
    m = list(F.mapping)
    graph = QDistributor(A, B, B.hom[m, :] if A.n else np.zeros((0, B.n)))
    cograph = QDistributor(B, A, B.hom[:, m] if A.n else np.zeros((B.n, 0)))
    return graph, cograph


def discrete_of(A: QCategory) -> QCategory:
    return QCategory.discrete(A.base, A.types, A.names)


def discretize(phi: QDistributor) -> QDistributor:
    """Same matrix between the underlying discrete categories."""
    return QDistributor(discrete_of(phi.dom), discrete_of(phi.cod), phi.matrix)


def residual_category(phi: QDistributor, side: str) -> QCategory:
    """``(A0, phi ↘ phi)`` (``side="dom"``) or ``(B0, phi ↙ phi)`` (``side="cod"``)."""
    if side == "dom":
        M = dist_residual(phi, phi, "rda").matrix
        return QCategory(phi.base, phi.dom.names, phi.dom.types, M)
    M = dist_residual(phi, phi, "lda").matrix
    return QCategory(phi.base, phi.cod.names, phi.cod.types, M)


def all_distributor_matrices(A: QCategory, B: QCategory) -> np.ndarray:
    """Every distributor matrix ``A -|-> B`` in lexicographic order, as a batch."""
    Q = A.base
    cand = mx.all_matrices(Q, A.types, B.types)
    if len(cand) == 0:
        return cand
    ok = mx.leq(Q, mx.compose(Q, cand, A.hom, A.types, A.types, B.types), cand, A.types, B.types)
    ok &= mx.leq(Q, mx.compose(Q, B.hom, cand, A.types, B.types, B.types), cand, A.types, B.types)
    return cand[ok]


def enumerate_distributors(A: QCategory, B: QCategory, budget: int = DEFAULT_SEARCH_BUDGET) -> Iterator[QDistributor]:
    count = mx.count_matrices(A.base, A.types, B.types)
    if count > budget:
        raise BudgetExceeded(f"distributor matrices {A.n}x{B.n}", count, budget)
    for M in all_distributor_matrices(A, B):
        yield QDistributor(A, B, M)


def subquantaloid(categories: Sequence[QCategory], budget: int = DEFAULT_SEARCH_BUDGET) -> tuple[Quantaloid, dict]:
    """Full sub-quantaloid of Q-Dist on the given categories.

    Returns the quantaloid and, for each pair ``(a, b)``, the batch of
    distributor matrices indexing ``hom(a, b)``.
    """
    from itertools import product

    from .lattice import FiniteLattice

    Q = categories[0].base
    k = len(categories)
    mats = {}
    homs = {}
    for a, b in product(range(k), repeat=2):
        A, B = categories[a], categories[b]
        if mx.count_matrices(Q, A.types, B.types) > budget:
            raise BudgetExceeded("sub-quantaloid hom", mx.count_matrices(Q, A.types, B.types), budget)
        M = all_distributor_matrices(A, B)
        mats[a, b] = M
        leq = mx.leq(Q, M[:, None], M[None, :], A.types, B.types)
        homs[a, b] = FiniteLattice(leq, [str(m.tolist()) for m in M])
    comp = {}
    ids = []
    for a in range(k):
        A = categories[a]
        ids.append(_lookup(mats[a, a], A.hom[None])[0])
    for a, b, c in product(range(k), repeat=3):
        A, B, C = categories[a], categories[b], categories[c]
        res = mx.compose(Q, mats[b, c][:, None], mats[a, b][None, :], A.types, B.types, C.types)
        comp[a, b, c] = _lookup(mats[a, c], res)
    names = [f"C{a}" for a in range(k)]
    return Quantaloid(names, homs, comp, ids, name="Q-Dist|fixtures"), mats


def _lookup(batch: np.ndarray, queries: np.ndarray) -> np.ndarray:
    index = {m.tobytes(): i for i, m in enumerate(np.ascontiguousarray(batch))}
    flat = queries.reshape((-1,) + batch.shape[1:])
    out = np.array([index[np.ascontiguousarray(q).tobytes()] for q in flat], dtype=mx.INT)
    return out.reshape(queries.shape[:-2])
