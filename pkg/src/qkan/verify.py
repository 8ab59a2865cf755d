"""Bounded, exhaustive verification of the library's theorems and the implication miner.

Every check quantifies a statement over all instances within the given
bounds, in a fixed canonical order, and returns a :class:`Verdict`.
Distributor sweeps run over discrete categories of sizes ``0..max_objects``
(shape ``a x b`` with ``a`` outer, then type assignments, then matrices in
lexicographic element-index order), followed by any distributors declared in
the workspace.  Category sweeps run over every valid category with at most
``max_objects`` objects, followed by the workspace's declared categories.
"""
from __future__ import annotations

import time
from dataclasses import asdict, dataclass, field
from itertools import product
from typing import Callable, Iterator

import numpy as np

from . import _matrix as mx
from .completion import (
    arrow_bar,
    class_compose,
    composition_is_well_defined,
    diagonal_quantaloid,
    dq_hom,
    is_regular_arrow,
    rq_idmq_equivalence,
)
from .errors import BudgetExceeded, InternalError, PreconditionError, QkanError
from .fixtures import self_category
from .kan import FixCategory, canonical_theta, gamma_sup, k_preimage, k_square, kphi, make_square, rphi
from .presheaf import (
    CCD,
    PresheafCategory,
    cached,
    inf_values,
    infs,
    is_ccd,
    is_complete,
    is_opccd,
    negate_values,
    negation_iso,
    sup_values,
    sups,
    tensor,
    cotensor,
)
from .qcat import QCategory, QFunctor, is_skeletal, right_adjoint, underlying_order, validate_functor
from .qdist import QDistributor, all_distributor_matrices, dist_compose, discretize, is_regular, phi_bar
from .quantaloid import Arrow, Quantaloid, bottom_is_dualizing, girard_search
from .workspace import Workspace, witness_document

DEFAULT_MAX_OBJECTS = 2
DEFAULT_CHECK_BUDGET = 10**5


@dataclass
class Bounds:
    max_objects: int = DEFAULT_MAX_OBJECTS
    budget: int = DEFAULT_CHECK_BUDGET
    presheaf_budget: int | None = None
    square_objects: int = 1

    def __post_init__(self):
        self.square_objects = min(self.square_objects, self.max_objects)


@dataclass
class Verdict:
    check: str
    result: str
    witness: object = None
    timing_s: float = 0.0
    counts: dict = field(default_factory=dict)
    details: dict = field(default_factory=dict)

    @property
    def exit_code(self) -> int:
        return {"holds": 0, "fails": 1, "budget-exceeded": 3}[self.result]

    def to_json(self) -> dict:
        return asdict(self)


class _Stop(Exception):
    """A sweep hit its instance budget."""


class _Counter:
    def __init__(self, budget: int):
        self.budget = budget
        self.total = 0
        self.by_shape: dict[str, int] = {}

    def tick(self, shape: str = "all") -> None:
        if self.total >= self.budget:
            raise _Stop()
        self.total += 1
        self.by_shape[shape] = self.by_shape.get(shape, 0) + 1

    def as_dict(self) -> dict:
        return {"instances": self.total, "by_shape": dict(self.by_shape)}


# ---------------------------------------------------------------- instance generators


def typed_sets(Q: Quantaloid, size: int) -> Iterator[tuple[int, ...]]:
    return product(range(Q.m), repeat=size)


def discrete_distributors(Q: Quantaloid, max_objects: int) -> Iterator[tuple[str, QDistributor]]:
    for a in range(max_objects + 1):
        for b in range(max_objects + 1):
            for ta in typed_sets(Q, a):
                A = QCategory.discrete(Q, ta, [f"a{i}" for i in range(a)])
                for tb in typed_sets(Q, b):
                    B = QCategory.discrete(Q, tb, [f"b{j}" for j in range(b)])
                    for M in mx.all_matrices(Q, A.types, B.types):
                        yield f"{a}x{b}", QDistributor(A, B, M)


def all_categories(Q: Quantaloid, max_objects: int, budget: int) -> Iterator[QCategory]:
    """Every valid category on ``0..max_objects`` objects (hom matrices in lexicographic order)."""
    for n in range(max_objects + 1):
        for types in typed_sets(Q, n):
            count = mx.count_matrices(Q, types, types)
            if count > budget:
                raise BudgetExceeded(f"category candidates on {n} objects", count, budget)
            cand = mx.all_matrices(Q, types, types)
            ok = np.ones(len(cand), dtype=bool)
            for x, X in enumerate(types):
                ok &= Q.hom(X, X).leq[Q.identities[X], cand[:, x, x]]
            cand = cand[ok]
            trans = mx.leq(Q, mx.compose(Q, cand, cand, types, types, types), cand, types, types)
            for H in cand[trans]:
                yield QCategory(Q, [f"x{i}" for i in range(n)], types, H)


class Context:
    """Workspace, bounds and memoised per-category answers for one run."""

    def __init__(self, ws: Workspace, bounds: Bounds):
        self.ws = ws
        self.Q = ws.base
        self.bounds = bounds
        self._ccd: dict = {}
        self._opccd: dict = {}
        self._kphi: dict = {}
        self._regular: dict = {}

    # sweeps

    def distributors(self) -> Iterator[tuple[str, QDistributor]]:
        yield from discrete_distributors(self.Q, self.bounds.max_objects)
        for name, phi in self.ws.distributors.items():
            yield f"declared:{name}", phi

    def categories(self) -> Iterator[tuple[str, QCategory]]:
        for A in all_categories(self.Q, self.bounds.max_objects, self.bounds.budget):
            yield f"{A.n}", A
        for name, A in self.ws.categories.items():
            yield f"declared:{name}", A

    # memoised answers

    def _phi_key(self, phi: QDistributor) -> tuple:
        return (phi.dom.key(), phi.cod.key(), phi.matrix.tobytes())

    def kphi(self, phi: QDistributor) -> FixCategory:
        k = self._phi_key(phi)
        if k not in self._kphi:
            self._kphi[k] = kphi(phi, self.bounds.presheaf_budget)
        return self._kphi[k]

    def regular(self, phi: QDistributor) -> bool:
        k = self._phi_key(phi)
        if k not in self._regular:
            self._regular[k] = bool(is_regular(phi, self.bounds.budget))
        return self._regular[k]

    def ccd(self, C: QCategory) -> CCD:
        k = C.key()
        if k not in self._ccd:
            self._ccd[k] = is_ccd(C, self.bounds.presheaf_budget)
        return self._ccd[k]

    def opccd(self, C: QCategory) -> CCD:
        k = C.key()
        if k not in self._opccd:
            self._opccd[k] = is_opccd(C, self.bounds.presheaf_budget)
        return self._opccd[k]

    # witnesses

    def phi_witness(self, phi: QDistributor, rechecks: list[tuple[str, str]], note: str = "") -> dict:
        cats = {"A": phi.dom} if phi.dom is phi.cod else {"A": phi.dom, "B": phi.cod}
        cod = "A" if phi.dom is phi.cod else "B"
        doc = witness_document(self.ws.base_spec, cats, {"phi": (phi, "A", cod)})
        return {
            "description": note,
            "phi": phi.matrix.tolist(),
            "workspace": doc,
            "recheck": [{"command": c, "expect": e} for c, e in rechecks],
        }

    def category_witness(self, A: QCategory, rechecks: list[tuple[str, str]], note: str = "") -> dict:
        doc = witness_document(self.ws.base_spec, {"A": A})
        return {
            "description": note,
            "workspace": doc,
            "recheck": [{"command": c, "expect": e} for c, e in rechecks],
        }


def _label(Q: Quantaloid, f: Arrow) -> str:
    if Q.m == 1:
        return Q.arrow_name(f)
    return f"{Q.objects[f.src]}->{Q.objects[f.dst]}:{Q.arrow_name(f)}"


def _state(b: bool) -> str:
    return "holds" if b else "fails"


# ---------------------------------------------------------------- the checks


def _sweep(ctx: Context, name: str, body: Callable, source: str = "distributors") -> Verdict:
    """Run ``body(shape, item)`` over a sweep; ``body`` returns a witness to stop, else ``None``."""
    start = time.perf_counter()
    counter = _Counter(ctx.bounds.budget)
    items = ctx.distributors() if source == "distributors" else ctx.categories()
    details: dict = {}
    try:
        for shape, item in items:
            counter.tick(shape)
            witness = body(shape, item, details)
            if witness is not None:
                return Verdict(name, "fails", witness, time.perf_counter() - start, counter.as_dict(), details)
    except _Stop:
        details["partial"] = True
        return Verdict(name, "budget-exceeded", None, time.perf_counter() - start, counter.as_dict(), details)
    except BudgetExceeded as exc:
        details["partial"] = True
        details["budget"] = str(exc)
        return Verdict(name, "budget-exceeded", None, time.perf_counter() - start, counter.as_dict(), details)
    return Verdict(name, "holds", None, time.perf_counter() - start, counter.as_dict(), details)


def check_regularity_characterisations(ctx: Context) -> Verdict:
    Q = ctx.Q

    def body(shape, phi, details):
        try:
            r = is_regular(phi, ctx.bounds.budget)
        except InternalError as exc:
            return ctx.phi_witness(phi, [("check regular phi", "fails")], str(exc))
        if r.conditions["exists_g"] is not None:
            details["searched"] = details.get("searched", 0) + 1
        return None

    v = _sweep(ctx, "regularity-characterisations", body)
    if v.result == "holds":
        # arrow level: f <= f∘f̄∘f against a search for any g with f∘g∘f = f
        for f in Q.all_arrows():
            search = any(Q.compose(f, Q.compose(g, f)) == f for g in Q.arrows(f.dst, f.src))
            if search != is_regular_arrow(Q, f):
                return Verdict(v.check, "fails", {"arrow": _label(Q, f)}, v.timing_s, v.counts, v.details)
        v.counts["arrows"] = len(Q.all_arrows())
    return v


def check_regular_idempotent_equivalence(ctx: Context) -> Verdict:
    start = time.perf_counter()
    Q = ctx.Q
    arrows = Q.all_arrows()
    pairs = 0
    for f, g, h in product(arrows, repeat=3):
        for c1 in dq_hom(Q, f, g):
            for c2 in dq_hom(Q, g, h):
                pairs += 1
                if pairs > ctx.bounds.budget:
                    return Verdict("regular-idempotent-equivalence", "budget-exceeded", None,
                                   time.perf_counter() - start, {"class_pairs": pairs - 1}, {"partial": True})
                if not composition_is_well_defined(Q, c2, c1):
                    w = {"first": [_label(Q, c1.src), _label(Q, c1.dst), _label(Q, c1.diagonal)],
                         "second": [_label(Q, c2.src), _label(Q, c2.dst), _label(Q, c2.diagonal)]}
                    return Verdict("regular-idempotent-equivalence", "fails", w, time.perf_counter() - start,
                                   {"class_pairs": pairs}, {})
    report = diagonal_quantaloid(Q).validate()
    if not report:
        return Verdict("regular-idempotent-equivalence", "fails", {"axiom": report.axiom},
                       time.perf_counter() - start, {"class_pairs": pairs}, {})
    try:
        wit = rq_idmq_equivalence(Q)
    except InternalError as exc:
        return Verdict("regular-idempotent-equivalence", "fails", {"error": str(exc)},
                       time.perf_counter() - start, {"class_pairs": pairs}, {})
    counts = {"class_pairs": pairs, "regular_arrows": len(wit), "arrows": len(arrows)}
    details = {
        "isomorphisms": [
            {"arrow": _label(Q, w.arrow), "idempotent": _label(Q, w.idempotent), "bar": _label(Q, w.bar)}
            for w in wit
        ]
    }
    return Verdict("regular-idempotent-equivalence", "holds", None, time.perf_counter() - start, counts, details)


def _yoneda_ok(A: QCategory, PA: PresheafCategory, PdA: PresheafCategory) -> str | None:
    from .presheaf import co_yoneda, yoneda

    Y, Yd = yoneda(A, PA), co_yoneda(A, PdA)
    if A.n:
        if not np.array_equal(PA.hom[list(Y.mapping), :], PA.values.T):
            return "PA(Yx, mu) != mu(x)"
        if not np.array_equal(PdA.hom[:, list(Yd.mapping)], PdA.values):
            return "P†A(lam, Y†x) != lam(x)"
    if not (validate_functor(Y).detail["fully_faithful"] and validate_functor(Yd).detail["fully_faithful"]):
        return "Yoneda embedding not fully faithful"
    return None


def check_yoneda(ctx: Context) -> Verdict:
    def body(shape, A, details):
        PA, PdA = cached(A, "presheaf", ctx.bounds.presheaf_budget), cached(A, "copresheaf", ctx.bounds.presheaf_budget)
        details["presheaves"] = details.get("presheaves", 0) + PA.n + PdA.n
        err = _yoneda_ok(A, PA, PdA)
        if err:
            return ctx.category_witness(A, [], err)
        return None

    return _sweep(ctx, "yoneda", body, "categories")


def presheaf_formula_mismatches(A: QCategory, budget: int | None = None) -> list[str]:
    """Compare the closed formulas for tensors, suprema and infima in ``PA`` and ``P†A``
    with the definitional answers.  Returns a list of failures (empty when all agree)."""
    Q = A.base
    PA, PdA = cached(A, "presheaf", budget), cached(A, "copresheaf", budget)
    bad: list[str] = []
    # tensors and cotensors
    for P, kind in ((PA, "presheaf"), (PdA, "copresheaf")):
        for k in range(P.n):
            X = P.types[k]
            v = P.values[k]
            for Y in range(Q.m):
                for f in Q.arrows(X, Y):
                    if kind == "presheaf":
                        w = [Q.comp_table(A.types[x], X, Y)[f.idx, v[x]] for x in range(A.n)]
                    else:
                        w = [Q.lda_table(X, Y, A.types[x])[v[x], f.idx] for x in range(A.n)]
                    if tensor(P, f, k) != P.index(w, Y):
                        bad.append(f"tensor in {kind} category at {P.names[k]} by {Q.arrow_name(f)}")
                for g in Q.arrows(Y, X):
                    if kind == "presheaf":
                        w = [Q.rda_table(A.types[x], Y, X)[g.idx, v[x]] for x in range(A.n)]
                    else:
                        w = [Q.comp_table(Y, X, A.types[x])[v[x], g.idx] for x in range(A.n)]
                    if cotensor(P, g, k) != P.index(w, Y):
                        bad.append(f"cotensor in {kind} category at {P.names[k]} by {Q.arrow_name(g)}")
    # suprema and infima against double enumerations
    PPA, PdPA = cached(PA, "presheaf", budget), cached(PA, "copresheaf", budget)
    PPdA, PdPdA = cached(PdA, "presheaf", budget), cached(PdA, "copresheaf", budget)
    Ymat = PA.values.T  # A -|-> PA, [a, mu] = mu(a)
    Ydmat = PdA.values  # P†A -|-> A, [lam, a] = lam(a)
    for Z in range(Q.m):
        idx = PPA.of_type(Z)
        if len(idx):
            th = PPA.values[idx]
            formula = mx.compose(Q, th[:, :, None], Ymat, A.types, PA.types, (Z,))[:, :, 0]
            if not np.array_equal(PA.lookup(formula, Z), sups(PA, PPA)[idx]):
                bad.append("sup in PA")
        idx = PdPA.of_type(Z)
        if len(idx):
            la = PdPA.values[idx]
            formula = mx.rda(Q, la[:, None, :], Ymat, A.types, (Z,), PA.types)[:, :, 0]
            if not np.array_equal(PA.lookup(formula, Z), infs(PA, PdPA)[idx]):
                bad.append("inf in PA")
        idx = PPdA.of_type(Z)
        if len(idx):
            th = PPdA.values[idx]
            formula = mx.lda(Q, Ydmat, th[:, :, None], PdA.types, (Z,), A.types)[:, 0, :]
            if not np.array_equal(PdA.lookup(formula, Z), sups(PdA, PPdA)[idx]):
                bad.append("sup in P†A")
        idx = PdPdA.of_type(Z)
        if len(idx):
            la = PdPdA.values[idx]
            formula = mx.compose(Q, Ydmat, la[:, None, :], (Z,), PdA.types, A.types)[:, 0, :]
            if not np.array_equal(PdA.lookup(formula, Z), infs(PdA, PdPdA)[idx]):
                bad.append("inf in P†A")
    return bad


def check_presheaf_formulas(ctx: Context) -> Verdict:
    def body(shape, A, details):
        bad = presheaf_formula_mismatches(A, ctx.bounds.presheaf_budget)
        if bad:
            return ctx.category_witness(A, [], "; ".join(bad[:5]))
        return None

    return _sweep(ctx, "presheaf-formulas", body, "categories")


def fix_sup_mismatch(K: FixCategory, budget: int | None = None) -> str | None:
    """Suprema in a fixed-point category three ways: definitional, via the parent, via ``γ``."""
    P = cached(K, "presheaf", budget)
    for X in sorted(set(P.types)):
        idx = P.of_type(X)
        vals = P.values[idx]
        direct = sup_values(K, vals, X)
        parent = K.sup_by_formula(vals, X)
        gamma = gamma_sup(K, vals, X)
        if not (np.array_equal(direct, parent) and np.array_equal(direct, gamma)):
            return f"{K.kind} fixed points: suprema disagree for type {X}"
    return None


def check_fix_suprema(ctx: Context) -> Verdict:
    def body(shape, phi, details):
        for K in (ctx.kphi(phi), rphi(phi, ctx.bounds.presheaf_budget)):
            err = fix_sup_mismatch(K, ctx.bounds.presheaf_budget)
            if err:
                return ctx.phi_witness(phi, [], err)
        return None

    return _sweep(ctx, "fix-suprema", body)


def _forward_image(F: QFunctor, PA: PresheafCategory) -> dict:
    """``F^→ μ = μ ∘ F^♮`` for every presheaf, grouped by type."""
    A, B, Q = F.dom, F.cod, F.dom.base
    Fn = B.hom[:, list(F.mapping)] if A.n else np.zeros((B.n, 0), dtype=mx.INT)  # [b, a] = B(b, Fa)
    out = {}
    for X in sorted(set(PA.types)):
        idx = PA.of_type(X)
        out[X] = (idx, mx.compose(Q, PA.values[idx][:, :, None], Fn, B.types, A.types, (X,))[:, :, 0])
    return out


def sup_preservation_agreement(F: QFunctor, budget: int | None = None) -> dict:
    """The three characterisations of left adjoints out of a complete category."""
    A, B, Q = F.dom, F.cod, F.dom.base
    i = right_adjoint(F) is not None
    PA = cached(A, "presheaf", budget)
    sA = sups(A, PA)
    oA, oB = underlying_order(A), underlying_order(B)
    iso = oB & oB.T  # suprema and tensors are unique only up to isomorphism
    ii = True
    for X, (idx, img) in _forward_image(F, PA).items():
        sB = sup_values(B, img, X)
        if not all(iso[F.mapping[s], t] for s, t in zip(sA[idx], sB)):
            ii = False
            break
    order_adjoint = True
    for b in range(B.n):
        same = [a for a in range(A.n) if A.types[a] == B.types[b]]
        if not any(all(oB[F.mapping[a2], b] == oA[a2, a] for a2 in same) for a in same):
            order_adjoint = False
            break
    tensors = all(
        iso[F.mapping[tensor(A, f, x)], tensor(B, f, F.mapping[x])]
        for x in range(A.n)
        for Y in range(Q.m)
        for f in Q.arrows(A.types[x], Y)
    )
    return {"left_adjoint": i, "sup_preserving": ii, "order_adjoint_and_tensors": order_adjoint and tensors}


def _functors(A: QCategory, B: QCategory) -> Iterator[QFunctor]:
    choices = [[b for b in range(B.n) if B.types[b] == A.types[a]] for a in range(A.n)]
    for image in product(*choices):
        F = QFunctor(A, B, image)
        if validate_functor(F):
            yield F


def _complete_categories(ctx: Context) -> list[tuple[str, QCategory]]:
    out = []
    for shape, A in ctx.categories():
        if is_complete(A, ctx.bounds.presheaf_budget):
            out.append((shape, A))
    return out


def check_sup_preservation(ctx: Context) -> Verdict:
    start = time.perf_counter()
    try:
        cats = _complete_categories(ctx)
    except BudgetExceeded as exc:
        return Verdict("sup-preservation", "budget-exceeded", None, time.perf_counter() - start, {}, {"budget": str(exc)})
    counter = _Counter(ctx.bounds.budget)
    try:
        for (_, A), (_, B) in product(cats, repeat=2):
            for F in _functors(A, B):
                counter.tick(f"{A.n}->{B.n}")
                r = sup_preservation_agreement(F, ctx.bounds.presheaf_budget)
                if len(set(r.values())) != 1:
                    doc = witness_document(ctx.ws.base_spec, {"A": A, "B": B})
                    w = {"functor": list(F.mapping), "characterisations": r, "workspace": doc}
                    return Verdict("sup-preservation", "fails", w, time.perf_counter() - start, counter.as_dict(), {})
    except _Stop:
        return Verdict("sup-preservation", "budget-exceeded", None, time.perf_counter() - start, counter.as_dict(), {"partial": True})
    return Verdict("sup-preservation", "holds", None, time.perf_counter() - start, counter.as_dict(),
                   {"complete_categories": len(cats)})


def check_retract_of_ccd(ctx: Context) -> Verdict:
    start = time.perf_counter()
    try:
        cats = _complete_categories(ctx)
    except BudgetExceeded as exc:
        return Verdict("retract-of-ccd", "budget-exceeded", None, time.perf_counter() - start, {}, {"budget": str(exc)})
    counter = _Counter(ctx.bounds.budget)
    try:
        for (_, A), (_, B) in product(cats, repeat=2):
            if not ctx.ccd(A):
                continue
            lefts_BA = [F for F in _functors(B, A) if right_adjoint(F) is not None]
            lefts_AB = [G for G in _functors(A, B) if right_adjoint(G) is not None]
            for F, G in product(lefts_BA, lefts_AB):
                if F.then(G).mapping != tuple(range(B.n)):
                    continue
                counter.tick(f"{B.n}<{A.n}")
                if not ctx.ccd(B):
                    doc = witness_document(ctx.ws.base_spec, {"A": A, "B": B})
                    w = {"section": list(F.mapping), "retraction": list(G.mapping), "workspace": doc,
                         "recheck": [{"command": "check ccd B", "expect": "fails"}]}
                    return Verdict("retract-of-ccd", "fails", w, time.perf_counter() - start, counter.as_dict(), {})
    except _Stop:
        return Verdict("retract-of-ccd", "budget-exceeded", None, time.perf_counter() - start, counter.as_dict(), {"partial": True})
    return Verdict("retract-of-ccd", "holds", None, time.perf_counter() - start, counter.as_dict(), {})


def check_idempotent_gives_ccd(ctx: Context) -> Verdict:
    def body(shape, phi, details):
        A, B = phi.dom, phi.cod
        if A.key() != B.key():
            return None
        theta = QDistributor(A, A, phi.matrix)
        if dist_compose(theta, theta) != theta:
            return None
        details["idempotents"] = details.get("idempotents", 0) + 1
        if not ctx.ccd(ctx.kphi(theta)):
            return ctx.phi_witness(theta, [("check ccd kphi:phi", "fails")], "idempotent θ with Kθ not (ccd)")
        return None

    return _sweep(ctx, "idempotent-gives-ccd", body)


def check_regular_implies_ccd(ctx: Context) -> Verdict:
    def body(shape, phi, details):
        if not ctx.regular(phi):
            return None
        details["regular"] = details.get("regular", 0) + 1
        K = ctx.kphi(phi)
        if not ctx.ccd(K):
            return ctx.phi_witness(
                phi, [("check regular phi", "holds"), ("check ccd kphi:phi", "fails")], "regular φ with Kφ not (ccd)"
            )
        Kb = ctx.kphi(dist_compose(phi, phi_bar(phi)))
        if sorted(map(tuple, K.values.tolist())) != sorted(map(tuple, Kb.values.tolist())):
            return ctx.phi_witness(phi, [], "Kφ differs from K(φ∘φ̄)")
        if is_skeletal(K):
            canonical_theta(K, ctx.bounds.presheaf_budget)
            details["theta_constructed"] = details.get("theta_constructed", 0) + 1
        return None

    return _sweep(ctx, "regular-implies-ccd", body)


def check_opccd_implies_regular(ctx: Context) -> Verdict:
    def body(shape, phi, details):
        if not ctx.opccd(ctx.kphi(phi)):
            return None
        details["opccd"] = details.get("opccd", 0) + 1
        if not ctx.regular(phi):
            return ctx.phi_witness(
                phi, [("check opccd kphi:phi", "holds"), ("check regular phi", "fails")], "Kφ op-ccd but φ not regular"
            )
        return None

    return _sweep(ctx, "opccd-implies-regular", body)


def check_kphi_discrete(ctx: Context) -> Verdict:
    start = time.perf_counter()
    counter = _Counter(ctx.bounds.budget)
    try:
        cats = [A for _, A in ctx.categories()]
        for A, B in product(cats, repeat=2):
            for M in all_distributor_matrices(A, B):
                counter.tick(f"{A.n}x{B.n}")
                phi = QDistributor(A, B, M)
                K, Kd = ctx.kphi(phi), ctx.kphi(discretize(phi))
                if sorted(map(tuple, K.values.tolist())) != sorted(map(tuple, Kd.values.tolist())):
                    w = ctx.phi_witness(phi, [], "Kφ differs from K|φ|")
                    return Verdict("kphi-discrete-invariance", "fails", w, time.perf_counter() - start, counter.as_dict(), {})
    except _Stop:
        return Verdict("kphi-discrete-invariance", "budget-exceeded", None, time.perf_counter() - start, counter.as_dict(), {"partial": True})
    except BudgetExceeded as exc:
        return Verdict("kphi-discrete-invariance", "budget-exceeded", None, time.perf_counter() - start, counter.as_dict(), {"budget": str(exc)})
    return Verdict("kphi-discrete-invariance", "holds", None, time.perf_counter() - start, counter.as_dict(), {})


# ---------------------------------------------------------------- squares and the functor K


def _join_map(K: QCategory) -> np.ndarray:
    """``join[a, b]``: the least upper bound in the underlying order (first one if not skeletal)."""
    o = underlying_order(K)
    out = np.full((K.n, K.n), -1, dtype=mx.INT)
    for a, b in product(range(K.n), repeat=2):
        ub = [c for c in range(K.n) if o[a, c] and o[b, c]]
        least = [c for c in ub if all(o[c, d] for d in ub)]
        if least:
            out[a, b] = least[0]
    return out


def square_report(ctx: Context, full: bool = True, functoriality: bool = True) -> Verdict:
    """All commuting squares between swept distributors: adjointness of ``K``,
    join preservation, ``K`` equal iff diagonals equal, fullness for regular targets.

    Squares are swept over discrete categories with at most ``bounds.square_objects``
    objects (the sweep is quadratic in distributors and cubic for composites).
    """
    start = time.perf_counter()
    Q = ctx.Q
    n_obj = ctx.bounds.square_objects
    phis = [phi for _, phi in discrete_distributors(Q, n_obj)]
    counts = {"pairs": 0, "squares": 0, "left_adjoints_lifted": 0, "joins": 0, "composites": 0}
    details = {"square_objects": n_obj}
    sweep: dict = {}

    def fail(phi, psi, note):
        w = {"description": note, "phi": phi.matrix.tolist(), "psi": psi.matrix.tolist(),
             "phi_shape": [phi.dom.types, phi.cod.types], "psi_shape": [psi.dom.types, psi.cod.types]}
        return Verdict("k-squares", "fails", w, time.perf_counter() - start, counts, details)

    try:
        Ks = [ctx.kphi(phi) for phi in phis]
        joins = [_join_map(K) for K in Ks]
        for i, phi in enumerate(phis):
            for j, psi in enumerate(phis):
                counts["pairs"] += 1
                Kphi, Kpsi = Ks[i], Ks[j]
                Z = all_distributor_matrices(phi.dom, psi.dom)
                H = all_distributor_matrices(phi.cod, psi.cod)
                left = mx.compose(Q, psi.matrix, Z, phi.dom.types, psi.dom.types, psi.cod.types)
                right = mx.compose(Q, H, phi.matrix, phi.dom.types, phi.cod.types, psi.cod.types)
                zeta_of: dict = {}
                for z in range(len(Z)):
                    zeta_of.setdefault(left[z].tobytes(), []).append(z)
                heads: dict = {}  # η index -> one ζ completing a square
                for h in range(len(H)):
                    zs = zeta_of.get(right[h].tobytes())
                    if zs:
                        counts["squares"] += len(zs)
                        heads[h] = zs[0]
                if counts["squares"] > ctx.bounds.budget:
                    raise _Stop()
                kmap = {}
                for h, z in heads.items():
                    sq = make_square(phi, psi, QDistributor(phi.dom, psi.dom, Z[z]), QDistributor(phi.cod, psi.cod, H[h]))
                    kmap[h] = k_square(sq, ctx.bounds.presheaf_budget, Kphi, Kpsi)[0].mapping
                sweep[i, j] = (H, kmap)
                # K(ζ, η) = K(ζ', η') iff the diagonals agree
                diag_of_k: dict = {}
                k_of_diag: dict = {}
                for h, k in kmap.items():
                    d = right[h].tobytes()
                    diag_of_k.setdefault(k, set()).add(d)
                    k_of_diag.setdefault(d, set()).add(k)
                if any(len(v) != 1 for v in k_of_diag.values()):
                    return fail(phi, psi, "squares with one diagonal give different K")
                if any(len(v) != 1 for v in diag_of_k.values()):
                    return fail(phi, psi, "squares with different diagonals give the same K")
                # joins of parallel squares go to pointwise joins in Kφ
                hs = sorted(heads)
                for a, h1 in enumerate(hs):
                    for h2 in hs[a + 1:]:
                        counts["joins"] += 1
                        zj = mx.cellwise(Q, Z[heads[h1]], Z[heads[h2]], phi.dom.types, psi.dom.types, "join")
                        hj = _row(H, mx.cellwise(Q, H[h1], H[h2], phi.cod.types, psi.cod.types, "join"))
                        if not np.array_equal(mx.compose(Q, psi.matrix, zj, phi.dom.types, psi.dom.types, psi.cod.types), right[hj]):
                            return fail(phi, psi, "join of squares is not a square")
                        want = tuple(int(joins[i][p, q]) for p, q in zip(kmap[h1], kmap[h2]))
                        if kmap[hj] != want:
                            return fail(phi, psi, "K does not preserve joins of squares")
                if full and ctx.regular(psi):
                    for F in _functors(Kpsi, Kphi):
                        if right_adjoint(F) is None:
                            continue
                        k_preimage(F, phi, psi, ctx.bounds.presheaf_budget, Kphi, Kpsi)
                        counts["left_adjoints_lifted"] += 1
        if functoriality:
            n = len(phis)
            for i, j, k in product(range(n), repeat=3):
                H1, k1 = sweep[i, j]
                H2, k2 = sweep[j, k]
                H3, k3 = sweep[i, k]
                phi, psi, chi = phis[i], phis[j], phis[k]
                for h1 in k1:
                    for h2 in k2:
                        counts["composites"] += 1
                        if counts["composites"] > ctx.bounds.budget:
                            raise _Stop()
                        hc = _row(H3, mx.compose(Q, H2[h2], H1[h1], phi.cod.types, psi.cod.types, chi.cod.types))
                        if k3.get(hc) != tuple(k1[h1][c] for c in k2[h2]):
                            return fail(phi, chi, "K is not functorial on composite squares")
    except _Stop:
        details["partial"] = True
        return Verdict("k-squares", "budget-exceeded", None, time.perf_counter() - start, counts, details)
    except BudgetExceeded as exc:
        details["budget"] = str(exc)
        return Verdict("k-squares", "budget-exceeded", None, time.perf_counter() - start, counts, details)
    return Verdict("k-squares", "holds", None, time.perf_counter() - start, counts, details)


def _row(batch: np.ndarray, m: np.ndarray) -> int:
    hit = np.flatnonzero((batch == m).all(axis=(1, 2)))
    if len(hit) == 0:
        raise InternalError("distributor missing from its enumeration")
    return int(hit[0])


def check_k_homomorphism(ctx: Context) -> Verdict:
    v = square_report(ctx, full=False, functoriality=True)
    v.check = "k-homomorphism"
    return v


def check_k_faithful(ctx: Context) -> Verdict:
    v = square_report(ctx, full=False, functoriality=False)
    v.check = "k-faithful-on-diagonals"
    return v


def check_k_full(ctx: Context) -> Verdict:
    v = square_report(ctx, full=True, functoriality=False)
    v.check = "k-full-for-regular-targets"
    return v


def check_k_equivalence(ctx: Context) -> Verdict:
    v = square_report(ctx, full=True, functoriality=False)
    v.check = "k-equivalence"
    if v.result != "holds":
        return v
    start = time.perf_counter()
    thetas = 0
    try:
        for _, A in ctx.categories():
            if is_skeletal(A) and is_complete(A, ctx.bounds.presheaf_budget) and ctx.ccd(A):
                canonical_theta(A, ctx.bounds.presheaf_budget)
                thetas += 1
    except BudgetExceeded as exc:
        v.result = "budget-exceeded"
        v.details["budget"] = str(exc)
    v.counts["skeletal_ccd_categories_represented"] = thetas
    v.timing_s += time.perf_counter() - start
    return v


# ---------------------------------------------------------------- Girard-dependent checks


def _girard_premise(ctx: Context, name: str):
    fam = girard_search(ctx.Q)
    if fam is None:
        return None, Verdict(name, "holds", None, 0.0, {}, {"premise": False, "note": "base is not Girard; statement holds vacuously"})
    return fam, None


def check_negation_iso(ctx: Context) -> Verdict:
    fam, vac = _girard_premise(ctx, "negation-isomorphism")
    if vac:
        return vac
    Q = ctx.Q

    def body(shape, A, details):
        PA, PdA = cached(A, "presheaf", ctx.bounds.presheaf_budget), cached(A, "copresheaf", ctx.bounds.presheaf_budget)
        N = negation_iso(A, fam, PA, PdA)
        if sorted(N.mapping) != list(range(PdA.n)) or not validate_functor(N).detail["fully_faithful"]:
            return ctx.category_witness(A, [], "¬ is not an isomorphism PA -> P†A")
        back = negate_values(Q, fam, A.types, PdA.values, PdA.types, "copresheaf")
        if not np.array_equal(back[list(N.mapping)], PA.values):
            return ctx.category_witness(A, [], "¬¬ is not the identity")
        return None

    v = _sweep(ctx, "negation-isomorphism", body, "categories")
    v.details["family"] = list(fam.d)
    return v


def check_girard_ccd_opccd(ctx: Context) -> Verdict:
    fam, vac = _girard_premise(ctx, "girard-ccd-iff-opccd")
    if vac:
        return vac

    def body(shape, A, details):
        if not is_complete(A, ctx.bounds.presheaf_budget):
            return None
        details["complete"] = details.get("complete", 0) + 1
        if bool(ctx.ccd(A)) != bool(ctx.opccd(A)):
            return ctx.category_witness(A, [("check ccd A", _state(bool(ctx.ccd(A)))), ("check opccd A", _state(bool(ctx.opccd(A))))],
                                        "(ccd) and (op-ccd) differ")
        return None

    return _sweep(ctx, "girard-ccd-iff-opccd", body, "categories")


def three_way(ctx: Context, phi: QDistributor) -> tuple[bool, bool, bool]:
    K = ctx.kphi(phi)
    return ctx.regular(phi), bool(ctx.ccd(K)), bool(ctx.opccd(K))


def check_girard_three_way(ctx: Context) -> Verdict:
    fam, vac = _girard_premise(ctx, "girard-three-way")
    if vac:
        return vac

    def body(shape, phi, details):
        r = three_way(ctx, phi)
        if len(set(r)) != 1:
            rc = [("check regular phi", _state(r[0])), ("check ccd kphi:phi", _state(r[1])), ("check opccd kphi:phi", _state(r[2]))]
            return ctx.phi_witness(phi, rc, f"regular={r[0]}, ccd={r[1]}, opccd={r[2]}")
        details["regular"] = details.get("regular", 0) + int(r[0])
        return None

    v = _sweep(ctx, "girard-three-way", body)
    v.details["family"] = list(fam.d)
    return v


def check_bottom_dualizing_criterion(ctx: Context) -> Verdict:
    """The five conditions for a commutative integral quantale: all true or all false."""
    name = "commutative-integral-girard-criterion"
    Q = ctx.Q
    start = time.perf_counter()
    if not (Q.m == 1 and Q.is_commutative() and Q.is_integral()):
        return Verdict(name, "holds", None, 0.0, {}, {"premise": False, "note": "base is not a commutative integral quantale"})
    cond: dict = {}
    witnesses: dict = {}
    cond["i"] = bottom_is_dualizing(Q)
    QQ = self_category(Q)
    cond["v"] = bool(ctx.opccd(QQ))
    counts = {"categories": 0, "distributors": 0}
    cond["ii"] = True
    for _, A in ctx.categories():
        counts["categories"] += 1
        if is_complete(A, ctx.bounds.presheaf_budget) and bool(ctx.ccd(A)) != bool(ctx.opccd(A)):
            cond["ii"] = False
            witnesses["ii"] = ctx.category_witness(A, [("check ccd A", _state(bool(ctx.ccd(A)))), ("check opccd A", _state(bool(ctx.opccd(A))))])
            break
    if cond["ii"] and bool(ctx.ccd(QQ)) != bool(ctx.opccd(QQ)):
        cond["ii"] = False
        witnesses["ii"] = ctx.category_witness(QQ, [("check ccd A", _state(bool(ctx.ccd(QQ)))), ("check opccd A", _state(bool(ctx.opccd(QQ))))], "Q as a category")
    cond["iii"] = cond["iv"] = True
    for _, phi in ctx.distributors():
        counts["distributors"] += 1
        if counts["distributors"] > ctx.bounds.budget:
            break
        reg, c, o = three_way(ctx, phi)
        if cond["iii"] and c != o:
            cond["iii"] = False
            witnesses["iii"] = ctx.phi_witness(phi, [("check ccd kphi:phi", _state(c)), ("check opccd kphi:phi", _state(o))])
        if cond["iv"] and reg != o:
            cond["iv"] = False
            witnesses["iv"] = ctx.phi_witness(phi, [("check regular phi", _state(reg)), ("check opccd kphi:phi", _state(o))])
        if not cond["iii"] and not cond["iv"]:
            break
    consistent = len(set(cond.values())) == 1
    details = {
        "premise": True,
        "conditions": cond,
        "bounded": ["ii", "iii", "iv"],
        "pattern": "all hold" if all(cond.values()) else ("all fail" if not any(cond.values()) else "mixed"),
    }
    result = "holds" if consistent else "fails"
    return Verdict(name, result, witnesses or None, time.perf_counter() - start, counts, details)


# ---------------------------------------------------------------- registry


@dataclass(frozen=True)
class Check:
    name: str
    aliases: tuple
    run: Callable[[Context], Verdict]
    summary: str


CHECKS = [
    Check("regularity-characterisations", ("prop2.1",), check_regularity_characterisations,
          "regular by search == equality form == inequality form"),
    Check("regular-idempotent-equivalence", ("prop2.3",), check_regular_idempotent_equivalence,
          "diagonal composition is well defined and each regular f is isomorphic to f̄∘f"),
    Check("yoneda", ("lemma3.2",), check_yoneda, "PA(Yx, μ) = μ(x) and its dual"),
    Check("presheaf-formulas", ("prop3.4",), check_presheaf_formulas,
          "closed formulas for tensors, sups and infs in PA and P†A"),
    Check("sup-preservation", ("prop3.6",), check_sup_preservation,
          "left adjoint == sup-preserving == order adjoint preserving tensors"),
    Check("retract-of-ccd", ("prop4.4",), check_retract_of_ccd, "retracts of (ccd) categories are (ccd)"),
    Check("idempotent-gives-ccd", ("prop4.5",), check_idempotent_gives_ccd, "Kθ is (ccd) for idempotent θ"),
    Check("regular-implies-ccd", ("thm4.6",), check_regular_implies_ccd, "regular φ gives (ccd) Kφ"),
    Check("k-homomorphism", ("prop5.1",), check_k_homomorphism, "K is a join-preserving functor into left adjoints"),
    Check("k-faithful-on-diagonals", ("prop5.2",), check_k_faithful, "K(ζ,η) = K(ζ',η') iff same diagonal"),
    Check("k-full-for-regular-targets", ("prop5.3",), check_k_full, "every left adjoint Kψ -> Kφ lifts when ψ is regular"),
    Check("k-equivalence", ("thm5.6",), check_k_equivalence, "faithful, full and essentially surjective"),
    Check("opccd-implies-regular", ("thm6.2",), check_opccd_implies_regular, "(op-ccd) Kφ forces φ regular"),
    Check("kphi-discrete-invariance", ("lemma-kphi-discrete",), check_kphi_discrete, "Kφ = K|φ|"),
    Check("fix-suprema", ("lemma-fix-sup",), check_fix_suprema, "suprema in Kφ and Rφ three ways"),
    Check("negation-isomorphism", ("prop7.5",), check_negation_iso, "¬: PA -> P†A is an isomorphism (Girard base)"),
    Check("girard-ccd-iff-opccd", ("prop7.6",), check_girard_ccd_opccd, "(ccd) iff (op-ccd) (Girard base)"),
    Check("girard-three-way", ("thm7.7",), check_girard_three_way, "regular iff (ccd) Kφ iff (op-ccd) Kφ (Girard base)"),
    Check("commutative-integral-girard-criterion", ("thm8.2",), check_bottom_dualizing_criterion,
          "for commutative integral quantales the five conditions stand or fall together"),
]

_BY_NAME = {c.name: c for c in CHECKS}
_BY_NAME.update({a: c for c in CHECKS for a in c.aliases})


def check_names() -> list[str]:
    return sorted(_BY_NAME)


def verify(ws: Workspace, check_id: str, bounds: Bounds | None = None) -> Verdict:
    try:
        chk = _BY_NAME[check_id]
    except KeyError:
        raise KeyError(f"unknown check {check_id!r}; known: {', '.join(check_names())}") from None
    ctx = Context(ws, bounds or Bounds())
    start = time.perf_counter()
    try:
        v = chk.run(ctx)
    except BudgetExceeded as exc:
        v = Verdict(chk.name, "budget-exceeded", None, 0.0, {}, {"partial": True, "budget": str(exc)})
    v.timing_s = time.perf_counter() - start
    v.details.setdefault("aliases", list(chk.aliases))
    return v


# ---------------------------------------------------------------- implication miner

IMPLICATIONS = {
    1: ("(op-ccd) Kφ => φ regular", lambda r, c, o: (not o) or r),
    2: ("φ regular => (ccd) Kφ", lambda r, c, o: (not r) or c),
    3: ("(ccd) Kφ => (op-ccd) Kφ", lambda r, c, o: (not c) or o),
    4: ("φ regular => (op-ccd) Kφ", lambda r, c, o: (not r) or o),
    5: ("(ccd) Kφ => φ regular", lambda r, c, o: (not c) or r),
}


def mine(ws: Workspace, implication: int, bounds: Bounds | None = None) -> Verdict:
    """Search the distributor sweep for the first counterexample to an implication.

    ``holds`` only means none was found within the bounds.  Implications 1 and
    2 are theorems, so a counterexample to either raises :class:`InternalError`.
    """
    if implication not in IMPLICATIONS:
        raise KeyError(f"implication must be one of {sorted(IMPLICATIONS)}")
    text, ok = IMPLICATIONS[implication]
    ctx = Context(ws, bounds or Bounds())
    name = f"implication-{implication}"

    def body(shape, phi, details):
        r, c, o = three_way(ctx, phi)
        if ok(r, c, o):
            return None
        if implication in (1, 2):
            raise InternalError(f"counterexample to a theorem ({text}) at {phi.matrix.tolist()}")
        # Kφ ≅ Rφ, so the comonad side must give the same answers
        R = rphi(phi, ctx.bounds.presheaf_budget)
        if (bool(ctx.ccd(R)), bool(ctx.opccd(R))) != (c, o):
            raise InternalError(f"Kφ and Rφ disagree on (ccd)/(op-ccd) at {phi.matrix.tolist()}")
        details["cross_check"] = "Rφ agrees with Kφ"
        rc = [("check regular phi", _state(r)), ("check ccd kphi:phi", _state(c)), ("check opccd kphi:phi", _state(o))]
        return ctx.phi_witness(phi, rc, f"{text} fails: regular={r}, ccd={c}, opccd={o}")

    v = _sweep(ctx, name, body)
    v.details.update({"implication": text, "scope": "bounded search; no universal claim beyond the enumerated instances"})
    return v
