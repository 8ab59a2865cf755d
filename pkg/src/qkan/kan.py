"""Kan adjunctions, fixed-point categories, the functor K on squares and its preimage."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import _matrix as mx
from .errors import InternalError, PreconditionError, StructureError, TypeMismatch
from .presheaf import (
    PresheafCategory,
    cached,
    is_ccd,
    sup_values,
    tensor as tensor_in,
)
from .qcat import QCategory, QFunctor, is_skeletal, right_adjoint, underlying_order, validate_functor
from .qdist import QDistributor, dist_compose, is_regular, phi_bar
from .quantaloid import Arrow


def _map_values(P: PresheafCategory, fn) -> list[tuple[int, np.ndarray]]:
    """Apply ``fn(values_of_type_X, X)`` block-wise; yields ``(X, indices, result)``."""
    out = []
    for X in sorted(set(P.types)):
        idx = P.of_type(X)
        out.append((X, idx, fn(P.values[idx], X)))
    return out


def _functor_from(P: PresheafCategory, target: PresheafCategory, fn, what: str) -> QFunctor:
    mapping = np.empty(P.n, dtype=mx.INT)
    for X, idx, res in _map_values(P, fn):
        found = target.lookup(res, X)
        if (found < 0).any():
            raise InternalError(f"{what} left the target (co)presheaf category")
        mapping[idx] = found
    return QFunctor(P, target, mapping)


def _hom_equal(F: QFunctor, G: QFunctor) -> bool:
    """``cod(F)(F a, b) == dom(F)(a, G b)`` for all ``a``, ``b``: ``F ⊣ G``."""
    C, D = F.dom, F.cod
    lhs = D.hom[np.array(F.mapping, dtype=mx.INT)][:, :]
    rhs = C.hom[:, np.array(G.mapping, dtype=mx.INT)]
    return bool(np.array_equal(lhs, rhs))


@dataclass(frozen=True)
class KanPair:
    """``pull = φ*: PB -> PA`` (``λ ↦ λ∘φ``) left adjoint to ``push = φ_*: PA -> PB`` (``μ ↦ μ↙φ``)."""

    phi: QDistributor
    PA: PresheafCategory
    PB: PresheafCategory
    pull: QFunctor
    push: QFunctor


@dataclass(frozen=True)
class DualKanPair:
    """On copresheaves: ``pull = φ_†: P†B -> P†A`` (``λ ↦ φ↘λ``), ``push = φ†: P†A -> P†B`` (``μ ↦ φ∘μ``).

    The adjunction is ``pull ⊣ push`` (copresheaf homs run against the pointwise order).
    """

    phi: QDistributor
    PdA: PresheafCategory
    PdB: PresheafCategory
    pull: QFunctor
    push: QFunctor


def kan_pair(phi: QDistributor, budget: int | None = None) -> KanPair:
    Q, A, B = phi.base, phi.dom, phi.cod
    PA, PB = cached(A, "presheaf", budget), cached(B, "presheaf", budget)
    M = phi.matrix

    def pull(vals, X):
        return mx.compose(Q, vals[:, :, None], M, A.types, B.types, (X,))[:, :, 0]

    def push(vals, X):
        return mx.lda(Q, vals[:, :, None], M, A.types, B.types, (X,))[:, :, 0]

    star = _functor_from(PB, PA, pull, "λ∘φ")
    lower = _functor_from(PA, PB, push, "μ↙φ")
    if not _hom_equal(star, lower):
        raise InternalError("Kan adjunction hom-equality fails")
    return KanPair(phi, PA, PB, star, lower)


def dual_kan_pair(phi: QDistributor, budget: int | None = None) -> DualKanPair:
    Q, A, B = phi.base, phi.dom, phi.cod
    PdA, PdB = cached(A, "copresheaf", budget), cached(B, "copresheaf", budget)
    M = phi.matrix

    def pull(vals, X):
        return mx.rda(Q, M, vals[:, None, :], (X,), A.types, B.types)[:, 0, :]

    def push(vals, X):
        return mx.compose(Q, M, vals[:, None, :], (X,), A.types, B.types)[:, 0, :]

    lower = _functor_from(PdB, PdA, pull, "φ↘λ")
    upper = _functor_from(PdA, PdB, push, "φ∘μ")
    if not _hom_equal(lower, upper):
        raise InternalError("dual Kan adjunction hom-equality fails")
    return DualKanPair(phi, PdA, PdB, lower, upper)


# ------------------------------------------------------------ fixed points


class FixCategory(QCategory):
    """Full subcategory of the fixed points of an idempotent (co)monad ``F`` on ``parent``.

    ``members[k]`` is the parent index of member ``k``.  Suprema and tensors
    are computed from the parent: ``sup μ = F sup_parent(μ ∘ I^♮)`` and
    ``f ⊗ x = F(f ⊗_parent x)``.
    """

    def __init__(self, parent: QCategory, endo: QFunctor, kind: str):
        if kind not in ("monad", "comonad"):
            raise ValueError("kind must be 'monad' or 'comonad'")
        self.parent = parent
        self.endo = endo
        self.kind = kind
        F = endo.mapping
        self.members = tuple(c for c in range(parent.n) if F[c] == c)
        self.position = {c: k for k, c in enumerate(self.members)}
        mem = list(self.members)
        super().__init__(
            parent.base,
            [parent.names[c] for c in mem],
            [parent.types[c] for c in mem],
            parent.hom[np.ix_(mem, mem)],
        )

    @property
    def values(self) -> np.ndarray:
        """Member vectors when the parent is a (co)presheaf category."""
        return self.parent.values[list(self.members)]

    def inclusion(self) -> QFunctor:
        return QFunctor(self, self.parent, self.members)

    def restriction(self) -> QFunctor:
        return QFunctor(self.parent, self, [self.position[c] for c in self.endo.mapping])

    def member(self, values, X: int) -> int | None:
        """Member position of a parent (co)presheaf given by its values, if fixed."""
        c = self.parent.index(values, X)
        if c is None:
            return None
        return self.position.get(c)

    def sup_by_formula(self, values: np.ndarray, X: int) -> np.ndarray:
        """``F sup_parent(μ ∘ I^♮)`` for a batch of type-``X`` presheaves on this category."""
        C = self.parent
        values = mx.rows(values, self.n)
        # I^♮(c, b) = C(c, I b)
        inc = C.hom[:, list(self.members)]
        pushed = mx.compose(self.base, values[:, :, None], inc, C.types, self.types, (X,))[:, :, 0]
        s = sup_values(C, pushed, X)
        if (s < 0).any():
            raise PreconditionError("parent category lacks a supremum")
        return np.array([self.position[self.endo.mapping[c]] for c in s], dtype=mx.INT)

    def tensor_by_formula(self, f: Arrow, x: int) -> int:
        t = tensor_in(self.parent, f, self.members[x])
        if t is None:
            raise PreconditionError("parent category lacks a tensor")
        return self.position[self.endo.mapping[t]]


def fix_category(F: QFunctor, kind: str, check_complete: bool = False, budget: int | None = None) -> FixCategory:
    """Fixed points of ``F`` with the inclusion/restriction adjunction verified."""
    C = F.dom
    if F.cod is not C:
        raise TypeMismatch("fix_category needs an endofunctor")
    if not validate_functor(F):
        raise PreconditionError("not a Q-functor")
    m = F.mapping
    if any(m[m[c]] != m[c] for c in range(C.n)):
        raise PreconditionError("endofunctor is not idempotent")
    o = underlying_order(C)
    if kind == "monad" and not all(o[c, m[c]] for c in range(C.n)):
        raise PreconditionError("1 <= F fails")
    if kind == "comonad" and not all(o[m[c], c] for c in range(C.n)):
        raise PreconditionError("F <= 1 fails")
    if not is_skeletal(C):
        raise PreconditionError("parent category is not skeletal")
    if check_complete:
        from .presheaf import is_complete

        if not is_complete(C, budget):
            raise PreconditionError("parent category is not complete")
    B = FixCategory(C, F, kind)
    inc, res = B.inclusion(), B.restriction()
    adjoint = _hom_equal(res, inc) if kind == "monad" else _hom_equal(inc, res)
    if not adjoint:
        raise InternalError("inclusion and restriction are not adjoint")
    return B


def gamma_sup(K: FixCategory, values: np.ndarray, X: int) -> np.ndarray:
    """Suprema in a fixed-point subcategory of a presheaf category via ``Θ ∘ γ``.

    ``γ(a, μ) = μ(a)``.  For a comonad (the Rφ side) ``Θ ∘ γ`` is already a
    member; for a monad (the Kφ side) it is closed up by ``F`` first.
    """
    P = K.parent
    if not isinstance(P, PresheafCategory) or P.kind != "presheaf":
        raise PreconditionError("gamma formula needs a presheaf parent")
    A = P.source
    values = mx.rows(values, K.n)
    gamma = K.values.T  # A -|-> K
    composite = mx.compose(K.base, values[:, :, None], gamma, A.types, K.types, (X,))[:, :, 0]
    idx = P.lookup(composite, X)
    if (idx < 0).any():
        raise InternalError("Θ∘γ is not a presheaf")
    if K.kind == "monad":
        idx = np.array([K.endo.mapping[c] for c in idx], dtype=mx.INT)
    out = np.array([K.position.get(int(c), -1) for c in idx], dtype=mx.INT)
    if (out < 0).any():
        raise InternalError("Θ∘γ is not a fixed point")
    return out


def kphi(phi: QDistributor, budget: int | None = None) -> FixCategory:
    """``Kφ``: fixed points of ``φ_* φ*`` in ``PB``."""
    kp = kan_pair(phi, budget)
    return fix_category(kp.pull.then(kp.push), "monad")


def rphi(phi: QDistributor, budget: int | None = None) -> FixCategory:
    """``Rφ``: fixed points of ``φ* φ_*`` in ``PA``."""
    kp = kan_pair(phi, budget)
    return fix_category(kp.push.then(kp.pull), "comonad")


def kr_isomorphism(phi: QDistributor, budget: int | None = None) -> tuple[QFunctor, QFunctor]:
    """``φ*: Kφ -> Rφ`` and ``φ_*: Rφ -> Kφ``; raises unless they are inverse isomorphisms."""
    kp = kan_pair(phi, budget)
    K = fix_category(kp.pull.then(kp.push), "monad")
    R = fix_category(kp.push.then(kp.pull), "comonad")
    to_r = QFunctor(K, R, [R.position[kp.pull.mapping[c]] for c in K.members])
    to_k = QFunctor(R, K, [K.position[kp.push.mapping[c]] for c in R.members])
    if to_r.then(to_k).mapping != tuple(range(K.n)) or to_k.then(to_r).mapping != tuple(range(R.n)):
        raise InternalError("φ* and φ_* are not mutually inverse on fixed points")
    if not (validate_functor(to_r).detail["fully_faithful"] and validate_functor(to_k).detail["fully_faithful"]):
        raise InternalError("φ* and φ_* do not preserve homs on fixed points")
    return to_r, to_k


# ------------------------------------------------------------ the functor K


@dataclass(frozen=True)
class DistSquare:
    """``ψ∘ζ = η∘φ`` for ``φ: A⇸B``, ``ψ: A'⇸B'``, ``ζ: A⇸A'``, ``η: B⇸B'``."""

    phi: QDistributor
    psi: QDistributor
    zeta: QDistributor
    eta: QDistributor

    def diagonal(self) -> QDistributor:
        return dist_compose(self.eta, self.phi)


def make_square(phi, psi, zeta, eta) -> DistSquare:
    for d, dom, cod, what in (
        (zeta, phi.dom, psi.dom, "ζ"),
        (eta, phi.cod, psi.cod, "η"),
    ):
        if d.dom.key() != dom.key() or d.cod.key() != cod.key():
            raise TypeMismatch(f"{what} does not connect the square")
    left = dist_compose(psi, zeta).matrix
    right = dist_compose(eta, phi).matrix
    if not np.array_equal(left, right):
        x, y = (int(v) for v in np.argwhere(left != right)[0])
        raise StructureError(
            f"square does not commute at ({phi.dom.names[x]}, {psi.cod.names[y]}): "
            f"ψ∘ζ = {psi.cod.base.hom(phi.dom.types[x], psi.cod.types[y]).names[left[x, y]]}, "
            f"η∘φ = {psi.cod.base.hom(phi.dom.types[x], psi.cod.types[y]).names[right[x, y]]}"
        )
    return DistSquare(phi, psi, zeta, eta)


def square_then(second: DistSquare, first: DistSquare) -> DistSquare:
    """``(ζ', η') ∘ (ζ, η) = (ζ'∘ζ, η'∘η)``."""
    return make_square(
        first.phi, second.psi, dist_compose(second.zeta, first.zeta), dist_compose(second.eta, first.eta)
    )


def k_square(
    sq: DistSquare, budget: int | None = None, Kphi: FixCategory | None = None, Kpsi: FixCategory | None = None
) -> tuple[QFunctor, QFunctor]:
    """``K(ζ, η): Kψ -> Kφ`` (``λ' ↦ φ_*φ*(λ'∘η)``) and its right adjoint ``η_*`` restricted.

    Both are returned; the adjunction is checked on the member tables.
    Precomputed ``Kφ``/``Kψ`` may be passed in.
    """
    Kphi = kphi(sq.phi, budget) if Kphi is None else Kphi
    Kpsi = kphi(sq.psi, budget) if Kpsi is None else Kpsi
    Q = sq.phi.base
    B, B2 = sq.phi.cod, sq.psi.cod
    E = sq.eta.matrix
    closure = Kphi.endo.mapping
    forward = []
    for k, X in enumerate(Kpsi.types):
        lam = Kpsi.values[k]
        pulled = mx.compose(Q, lam[:, None], E, B.types, B2.types, (X,))[:, 0]
        c = Kphi.parent.index(pulled, X)
        if c is None:
            raise InternalError("λ'∘η is not a presheaf")
        forward.append(Kphi.position[closure[c]])
    backward = []
    for k, X in enumerate(Kphi.types):
        mu = Kphi.values[k]
        pushed = mx.lda(Q, mu[:, None], E, B.types, B2.types, (X,))[:, 0]
        pos = Kpsi.member(pushed, X)
        if pos is None:
            raise InternalError("μ↙η is not a fixed point of ψ_*ψ*")
        backward.append(pos)
    F = QFunctor(Kpsi, Kphi, forward)
    G = QFunctor(Kphi, Kpsi, backward)
    if not validate_functor(F) or not _hom_equal(F, G):
        raise InternalError("K(ζ, η) is not left adjoint to η_*")
    return F, G


def same_diagonal(s1: DistSquare, s2: DistSquare) -> bool:
    return s1.diagonal() == s2.diagonal()


def k_preimage(
    F: QFunctor,
    phi: QDistributor,
    psi: QDistributor,
    budget: int | None = None,
    Kphi: FixCategory | None = None,
    Kpsi: FixCategory | None = None,
) -> DistSquare:
    """A square ``(ζ, η): φ -> ψ`` with ``K(ζ, η) = F``, for regular ``ψ``.

    ``ξ: B ⇸ B'`` is read off ``y' ↦ F(ψ_*ψ*(Y y'))``; then ``ζ = ψ̄∘ξ∘φ``
    and ``η = ψ∘ψ̄∘ξ``.
    """
    if not is_regular(psi):
        raise PreconditionError("k_preimage needs a regular ψ")
    Kphi = kphi(phi, budget) if Kphi is None else Kphi
    Kpsi = kphi(psi, budget) if Kpsi is None else Kpsi
    if F.dom.key() != Kpsi.key() or F.cod.key() != Kphi.key():
        raise TypeMismatch("F must go from Kψ to Kφ")
    if not validate_functor(F) or right_adjoint(F) is None:
        raise PreconditionError("F is not a left adjoint Q-functor")
    B, B2 = phi.cod, psi.cod
    closure = Kpsi.endo.mapping
    xi = np.empty((B.n, B2.n), dtype=mx.INT)
    for y2 in range(B2.n):
        rep = Kpsi.parent.index(B2.hom[:, y2], B2.types[y2])
        image = F.mapping[Kpsi.position[closure[rep]]]
        xi[:, y2] = Kphi.values[image]
    xi_d = QDistributor(B, B2, xi)
    bar = phi_bar(psi)
    zeta = dist_compose(bar, dist_compose(xi_d, phi))
    eta = dist_compose(psi, dist_compose(bar, xi_d))
    sq = make_square(phi, psi, zeta, eta)
    got, _ = k_square(sq, budget, Kphi, Kpsi)
    if got.mapping != F.mapping:
        raise InternalError("K(ζ, η) differs from F")
    return sq


def canonical_theta(A: QCategory, budget: int | None = None) -> tuple[QDistributor, QFunctor]:
    """``θ_A`` with ``θ(-, x) = T x`` and the isomorphism ``A -> Kθ``, ``x ↦ A(-, x)``."""
    if not is_skeletal(A):
        raise PreconditionError("canonical θ needs a skeletal category")
    ccd = is_ccd(A, budget)
    if not ccd:
        raise PreconditionError(f"category is not (ccd): {ccd.reason}")
    T = ccd.witness
    PA = ccd.PA
    if any(ccd.sup[T.mapping[a]] != a for a in range(A.n)):
        raise InternalError("sup ∘ T is not the identity")
    theta = QDistributor(A, A, PA.values[list(T.mapping)].T)
    if dist_compose(theta, theta) != theta:
        raise InternalError("θ is not idempotent")
    K = kphi(theta, budget)
    image = []
    for x in range(A.n):
        pos = K.member(A.hom[:, x], A.types[x])
        if pos is None:
            raise InternalError("representable presheaf outside Kθ")
        image.append(pos)
    if sorted(image) != list(range(K.n)):
        raise InternalError("Kθ is larger than the Yoneda image")
    iso = QFunctor(A, K, image)
    if not validate_functor(iso).detail["fully_faithful"]:
        raise InternalError("Yoneda onto Kθ is not fully faithful")
    return theta, iso
