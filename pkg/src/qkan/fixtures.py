"""Named small quantaloids and categories used throughout the tests and checks."""
from __future__ import annotations

from functools import lru_cache

import numpy as np

from .qcat import QCategory
from .quantaloid import Quantaloid, build

SPECS = {
    "2": {"kind": "chain-tnorm", "size": 2, "tnorm": "godel"},
    "godel-3": {"kind": "chain-tnorm", "size": 3, "tnorm": "godel"},
    "lukasiewicz-3": {"kind": "chain-tnorm", "size": 3, "tnorm": "lukasiewicz"},
    "boolean-4": {"kind": "boolean-frame", "atoms": 2},
    "diagonals-4": {"kind": "diagonals", "atoms": 2},
    "girard-2": {"kind": "girard-envelope", "of": {"kind": "chain-tnorm", "size": 2, "tnorm": "godel"}},
    "girard-godel-3": {"kind": "girard-envelope", "of": {"kind": "chain-tnorm", "size": 3, "tnorm": "godel"}},
}

# the six bases every category-level property is checked on
CORE = ("2", "godel-3", "lukasiewicz-3", "boolean-4", "diagonals-4", "girard-2")


@lru_cache(maxsize=None)
def quantale(name: str) -> Quantaloid:
    return build(SPECS[name])


def two() -> Quantaloid:
    return quantale("2")


def chain_category(Q: Quantaloid, X: int = 0) -> QCategory:
    """Two objects ``a <= b`` of type ``X``: ``A(a, b) = 1``, ``A(b, a) = ⊥``."""
    L = Q.hom(X, X)
    one = Q.identities[X]
    return QCategory(Q, ["a", "b"], [X, X], [[one, one], [L.bottom, one]])


def categories(Q: Quantaloid) -> dict[str, QCategory]:
    """Small fixture categories over ``Q``.

    Singletons of every type, the empty category, a discrete pair, a
    two-element chain, the terminal ``(ob Q, ⊤)`` and, for one-object
    bases, ``Q`` itself as a category.
    """
    out: dict[str, QCategory] = {"empty": QCategory.discrete(Q, [])}
    for X in range(Q.m):
        out[f"star[{Q.objects[X]}]"] = QCategory.star(Q, X)
    out["pair"] = QCategory.discrete(Q, [0, 0])
    if Q.m > 1:
        out["mixed-pair"] = QCategory.discrete(Q, [0, Q.m - 1])
    out["chain"] = chain_category(Q)
    out["terminal"] = QCategory.terminal(Q)
    if Q.m == 1:
        out["Q"] = self_category(Q)
    return out


def self_category(Q: Quantaloid) -> QCategory:
    """A one-object quantale as a category: objects its elements, hom ``q -> r``."""
    if Q.m != 1:
        raise ValueError("only one-object quantales are categories over themselves this way")
    L = Q.hom(0, 0)
    R = Q.lda_table(0, 0, 0)  # [h, f] = h ↙ f
    hom = np.array([[R[r, q] for r in range(L.n)] for q in range(L.n)], dtype=np.int64)
    return QCategory(Q, list(L.names), [0] * L.n, hom)

