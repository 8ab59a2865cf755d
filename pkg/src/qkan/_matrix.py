"""Batched matrix calculus over a finite quantaloid.

A matrix ``phi: A -|-> B`` is an integer array ``[..., i, j]`` whose entry
lives in ``hom(ta[i], tb[j])``.  Leading axes are batch axes and broadcast
like numpy, so one call handles a whole enumeration at once.  Python loops
run over matrix cells only; batch axes stay vectorised.
"""
from __future__ import annotations

import numpy as np

from .quantaloid import Quantaloid

INT = np.int64


def _lead(*arrays):
    return np.broadcast_shapes(*(a.shape[:-2] for a in arrays))


def compose(Q: Quantaloid, psi, phi, ta, tb, tc) -> np.ndarray:
    """``(psi ∘ phi)[i, k] = ⋁_j psi[j, k] ∘ phi[i, j]`` for ``phi: A->B``, ``psi: B->C``."""
    psi = np.asarray(psi, dtype=INT)
    phi = np.asarray(phi, dtype=INT)
    lead = _lead(psi, phi)
    out = np.empty(lead + (len(ta), len(tc)), dtype=INT)
    for i, X in enumerate(ta):
        for k, Z in enumerate(tc):
            J = Q.hom(X, Z).join
            acc = np.full(lead, Q.hom(X, Z).bottom, dtype=INT)
            for j, Y in enumerate(tb):
                acc = J[acc, Q.comp_table(X, Y, Z)[psi[..., j, k], phi[..., i, j]]]
            out[..., i, k] = acc
    return out


def lda(Q: Quantaloid, xi, phi, ta, tb, tc) -> np.ndarray:
    """``(xi ↙ phi)[j, k] = ⋀_i xi[i, k] ↙ phi[i, j]`` for ``xi: A->C``, ``phi: A->B``."""
    xi = np.asarray(xi, dtype=INT)
    phi = np.asarray(phi, dtype=INT)
    lead = _lead(xi, phi)
    out = np.empty(lead + (len(tb), len(tc)), dtype=INT)
    for j, Y in enumerate(tb):
        for k, Z in enumerate(tc):
            M = Q.hom(Y, Z).meet
            acc = np.full(lead, Q.hom(Y, Z).top, dtype=INT)
            for i, X in enumerate(ta):
                acc = M[acc, Q.lda_table(X, Y, Z)[xi[..., i, k], phi[..., i, j]]]
            out[..., j, k] = acc
    return out


def rda(Q: Quantaloid, psi, xi, ta, tb, tc) -> np.ndarray:
    """``(psi ↘ xi)[i, j] = ⋀_k psi[j, k] ↘ xi[i, k]`` for ``psi: B->C``, ``xi: A->C``."""
    psi = np.asarray(psi, dtype=INT)
    xi = np.asarray(xi, dtype=INT)
    lead = _lead(psi, xi)
    out = np.empty(lead + (len(ta), len(tb)), dtype=INT)
    for i, X in enumerate(ta):
        for j, Y in enumerate(tb):
            M = Q.hom(X, Y).meet
            acc = np.full(lead, Q.hom(X, Y).top, dtype=INT)
            for k, Z in enumerate(tc):
                acc = M[acc, Q.rda_table(X, Y, Z)[psi[..., j, k], xi[..., i, k]]]
            out[..., i, j] = acc
    return out


def cellwise_leq(Q: Quantaloid, a, b, ta, tb) -> np.ndarray:
    a = np.asarray(a, dtype=INT)
    b = np.asarray(b, dtype=INT)
    lead = _lead(a, b)
    out = np.empty(lead + (len(ta), len(tb)), dtype=bool)
    for i, X in enumerate(ta):
        for j, Y in enumerate(tb):
            out[..., i, j] = Q.hom(X, Y).leq[a[..., i, j], b[..., i, j]]
    return out


def leq(Q: Quantaloid, a, b, ta, tb) -> np.ndarray:
    """Batch of booleans: every cell of ``a`` is below the matching cell of ``b``."""
    return cellwise_leq(Q, a, b, ta, tb).all(axis=(-2, -1))


def cellwise(Q: Quantaloid, a, b, ta, tb, op: str) -> np.ndarray:
    """Pointwise join or meet of two matrices."""
    a = np.asarray(a, dtype=INT)
    b = np.asarray(b, dtype=INT)
    lead = _lead(a, b)
    out = np.empty(lead + (len(ta), len(tb)), dtype=INT)
    for i, X in enumerate(ta):
        for j, Y in enumerate(tb):
            table = Q.hom(X, Y).join if op == "join" else Q.hom(X, Y).meet
            out[..., i, j] = table[a[..., i, j], b[..., i, j]]
    return out


def constant(Q: Quantaloid, ta, tb, which: str) -> np.ndarray:
    out = np.empty((len(ta), len(tb)), dtype=INT)
    for i, X in enumerate(ta):
        for j, Y in enumerate(tb):
            L = Q.hom(X, Y)
            out[i, j] = L.top if which == "top" else L.bottom
    return out


def all_matrices(Q: Quantaloid, ta, tb) -> np.ndarray:
    """Every matrix of shape ``ta x tb`` in lexicographic order (row-major cells)."""
    sizes = [Q.hom(X, Y).n for X in ta for Y in tb]
    if not sizes:
        return np.zeros((1, len(ta), len(tb)), dtype=INT)
    grids = np.indices(sizes, dtype=INT).reshape(len(sizes), -1).T
    return grids.reshape(-1, len(ta), len(tb))


def count_matrices(Q: Quantaloid, ta, tb) -> int:
    total = 1
    for X in ta:
        for Y in tb:
            total *= Q.hom(X, Y).n
    return total


def rows(a, n: int) -> np.ndarray:
    """View ``a`` as a batch of length-``n`` vectors; a flat input of length ``n`` is one vector."""
    a = np.asarray(a, dtype=INT)
    if a.ndim == 2 and a.shape[1] == n:
        return a
    if n == 0:
        return a.reshape(a.shape[0] if a.ndim >= 2 else 1, 0)
    return a.reshape(-1, n)
