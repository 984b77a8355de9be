"""Brute-force reference implementations used to cross-check the fast paths."""

from __future__ import annotations

from fractions import Fraction
from itertools import product
from typing import Sequence

import numpy as np

from . import interval as ir
from .contexts import DEFAULT_TOL, Context, context_leq
from .dasein import SpectralFamily, family_from_cells, spectral_family, spectral_leq


def dasein_brute(a, v: Context, mode: str, tol: float = DEFAULT_TOL,
                 family: SpectralFamily | None = None) -> list[float]:
    """Spectral-order optimum over all ``Σ c_i Q_i`` with ``c_i`` in the spectrum of ``a``.

    inner: the greatest candidate below ``a``; outer: the least candidate above.
    Returns the coefficient tuple, asserting the optimum really dominates.
    """
    fam = family if family is not None else spectral_family(a, tol)
    spectrum = list(fam.values)
    cands = []
    for coeffs in product(spectrum, repeat=len(v)):
        f = family_from_cells(coeffs, v.cells, fam.eps)
        ok = spectral_leq(f, fam, tol) if mode == "inner" else spectral_leq(fam, f, tol)
        if ok:
            cands.append((coeffs, f))
    if not cands:
        raise AssertionError("no candidate operator on the right side of a")
    better = (lambda x, y: spectral_leq(y, x, tol)) if mode == "inner" else (lambda x, y: spectral_leq(x, y, tol))
    best = cands[0]
    for c in cands[1:]:
        if better(c[1], best[1]):
            best = c
    for c in cands:
        if not better(best[1], c[1]):
            raise AssertionError("candidate set has no spectral-order optimum")
    return list(best[0])


def interval_lub_brute(family: Sequence[ir.RatInterval]) -> ir.RatInterval | None:
    """Least upper bound by search over intervals with endpoints taken from the family.

    Candidates are upper bounds (contained in every member); the answer is the
    candidate below all others, or ``None`` if there is no upper bound.
    """
    ends = sorted({x.lo for x in family} | {x.hi for x in family})
    uppers = [
        ir.RatInterval(lo, hi)
        for lo in ends for hi in ends
        if lo <= hi and all(ir.leq(x, ir.RatInterval(lo, hi)) for x in family)
    ]
    for u in uppers:
        if all(ir.leq(u, w) for w in uppers):
            return u
    return None


def meet_brute(fragment, a: str, b: str) -> str | None:
    """Greatest common lower bound of two labels by exhaustive search in a fragment."""
    lower = [x for x in fragment.labels()
             if context_leq(fragment[x], fragment[a]) and context_leq(fragment[x], fragment[b])]
    for x in lower:
        if all(context_leq(fragment[y], fragment[x]) for y in lower):
            return x
    return None


def spectrum_contains(a_spectrum: Sequence[float], q: Fraction, tol: float = DEFAULT_TOL) -> bool:
    return any(abs(float(q) - lam) <= tol * max(1.0, abs(lam)) for lam in a_spectrum)


def numpy_eigenvalues(h) -> np.ndarray:
    """LAPACK eigenvalues, a reference for the Jacobi solver."""
    return np.linalg.eigvalsh(np.asarray(h, dtype=complex))
