"""Spectral order, daseinisation into contexts, and interval-valued sections.

Daseinisation approximates a Hermitian operator ``A`` inside a context ``V``
from below (inner) and from above (outer) in the spectral order.  Evaluating
both approximants at a character of ``V`` gives an interval of possible
values of ``A``; collecting these over a downward-closed set of contexts
gives an order-preserving map into the interval domain.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from . import interval as ir
from . import order
from .contexts import (
    DEFAULT_TOL,
    Context,
    ContextFragment,
    _as_matrix,
    _fro,
    cluster_gap,
    context_equal,
    eigendecompose,
    is_projection,
)
from .errors import (
    DimMismatch,
    NotDirected,
    NotDownwardClosed,
    NotOrderPreserving,
    NotProjection,
    SchemaError,
    UnknownLabel,
)

MODES = ("inner", "outer")


def as_rational(x: float, tol: float = DEFAULT_TOL) -> Fraction:
    """Snap a float to a small-denominator rational when one lies within ``tol``."""
    snapped = Fraction(x).limit_denominator(10**4)
    if abs(float(snapped) - x) <= tol * max(1.0, abs(x)):
        return snapped
    return Fraction(x)


# --------------------------------------------------------- spectral families


@dataclass(frozen=True, eq=False)
class SpectralFamily:
    """Right-continuous step family ``λ ↦ E_λ`` given by its jumps.

    ``values`` are the (clustered) eigenvalues in increasing order and
    ``projections`` the matching eigenprojections; ``E_λ`` is the sum of the
    eigenprojections with eigenvalue at most ``λ``.
    """

    values: tuple
    projections: tuple
    eps: float = 0.0

    @property
    def dim(self) -> int:
        return self.projections[0].shape[0]

    def at(self, lam: float) -> np.ndarray:
        out = np.zeros((self.dim, self.dim), dtype=complex)
        for v, p in zip(self.values, self.projections):
            if v <= lam + self.eps:
                out = out + p
        return out

    def jumps(self) -> list[tuple[float, np.ndarray]]:
        out, acc = [], np.zeros((self.dim, self.dim), dtype=complex)
        for v, p in zip(self.values, self.projections):
            acc = acc + p
            out.append((v, acc))
        return out

    def operator(self) -> np.ndarray:
        return sum(v * p for v, p in zip(self.values, self.projections))


def spectral_family(a, tol: float = DEFAULT_TOL) -> SpectralFamily:
    a = _as_matrix(a)
    spaces = eigendecompose(a, tol)
    return SpectralFamily(
        tuple(e.value for e in spaces),
        tuple(e.projection for e in spaces),
        cluster_gap(a, tol) / 2,
    )


def family_from_cells(coefficients: Sequence[float], cells: Sequence[np.ndarray],
                      eps: float = 0.0) -> SpectralFamily:
    """Family of ``Σ c_i Q_i`` read off directly from an orthogonal decomposition."""
    groups: dict[float, np.ndarray] = {}
    for c, q in zip(coefficients, cells):
        groups[c] = groups.get(c, 0) + q
    values = sorted(groups)
    return SpectralFamily(tuple(values), tuple(groups[v] for v in values), eps)


def _family(x, tol) -> SpectralFamily:
    return x if isinstance(x, SpectralFamily) else spectral_family(x, tol)


def spectral_leq(a, b, tol: float = DEFAULT_TOL) -> bool:
    """``a ≼ b``: ``E^a_λ ≥ E^b_λ`` at every jump of either family.

    Accepts matrices or precomputed :class:`SpectralFamily` objects.
    """
    fa, fb = _family(a, tol), _family(b, tol)
    if fa.dim != fb.dim:
        raise DimMismatch("operators have different dimensions")
    for lam in sorted(set(fa.values) | set(fb.values)):
        ea, eb = fa.at(lam), fb.at(lam)
        if float(np.max(np.abs(ea @ eb - eb))) > tol * fa.dim:
            return False
    return True


# -------------------------------------------------------------- projections


def _check_mode(mode: str) -> None:
    if mode not in MODES:
        raise SchemaError(f"mode must be 'inner' or 'outer', got {mode!r}")


def _outer_cells(p: np.ndarray, v: Context, tol: float) -> list[bool]:
    return [_fro(q @ p) > tol for q in v.cells]


def _inner_cells(p: np.ndarray, v: Context, tol: float) -> list[bool]:
    return [float(np.max(np.abs(q @ p - q))) <= tol for q in v.cells]


def _sum_cells(v: Context, mask: Sequence[bool]) -> np.ndarray:
    out = np.zeros((v.dim, v.dim), dtype=complex)
    for q, keep in zip(v.cells, mask):
        if keep:
            out = out + q
    return out


def dasein_projection(p, v: Context, mode: str, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Outer: smallest projection of ``v`` above ``p``.  Inner: largest below ``p``."""
    _check_mode(mode)
    p = _as_matrix(p)
    if p.shape != (v.dim, v.dim):
        raise DimMismatch("projection and context have different dimensions")
    if not is_projection(p, tol):
        raise NotProjection("input is not a Hermitian projection")
    mask = _outer_cells(p, v, tol) if mode == "outer" else _inner_cells(p, v, tol)
    return _sum_cells(v, mask)


# -------------------------------------------------------- self-adjoint case


def dasein_coefficients(a, v: Context, mode: str, tol: float = DEFAULT_TOL,
                        family: SpectralFamily | None = None) -> list[float]:
    """Coefficient of each cell of ``v`` in the daseinised operator.

    Outer uses the family ``λ ↦ inner(E_λ)``; inner uses
    ``λ ↦ inf_{μ>λ} outer(E_μ)``.  Each coefficient is the first threshold at
    which the family contains the cell.
    """
    _check_mode(mode)
    fam = family if family is not None else spectral_family(a, tol)
    if fam.dim != v.dim:
        raise DimMismatch("operator and context have different dimensions")
    jumps = list(fam.values)
    grid = sorted(
        set(jumps)
        | {(x + y) / 2 for x, y in zip(jumps, jumps[1:])}
        | {jumps[-1] + 1.0}
    )
    if mode == "outer":
        families = {lam: _inner_cells(fam.at(lam), v, tol) for lam in jumps}
    else:
        outer_at = {mu: _outer_cells(fam.at(mu), v, tol) for mu in grid}
        families = {}
        for lam in jumps:
            above = [outer_at[mu] for mu in grid if mu > lam]
            families[lam] = [all(col) for col in zip(*above)]
    coeffs = []
    for i in range(len(v)):
        hit = next((lam for lam in jumps if families[lam][i]), None)
        if hit is None:
            raise AssertionError("spectral family never reaches a cell")
        coeffs.append(hit)
    return coeffs


def dasein_selfadjoint(a, v: Context, mode: str, tol: float = DEFAULT_TOL,
                       family: SpectralFamily | None = None) -> np.ndarray:
    coeffs = dasein_coefficients(a, v, mode, tol, family)
    return sum((c * q for c, q in zip(coeffs, v.cells)), np.zeros((v.dim, v.dim), dtype=complex))


@dataclass(frozen=True, eq=False)
class Character:
    """Point of the Gel'fand spectrum: evaluation at one cell of a context."""

    context: Context
    index: int

    def __post_init__(self):
        if not 0 <= self.index < len(self.context):
            raise IndexError(f"context has {len(self.context)} cells, no index {self.index}")

    @property
    def cell(self) -> np.ndarray:
        return self.context.cells[self.index]

    def __call__(self, b) -> complex:
        b = _as_matrix(b)
        q = self.cell
        val = np.trace(q @ b) / np.trace(q).real
        return complex(val)

    def restrict(self, coarser: Context, tol: float = DEFAULT_TOL) -> Character:
        """The character of ``coarser`` whose cell contains this one."""
        q = self.cell
        for j, c in enumerate(coarser.cells):
            if float(np.max(np.abs(c @ q - q))) <= tol:
                return Character(coarser, j)
        raise ValueError("target context is not coarser than the character's context")


def value_interval(a, v: Context, chi: Character, tol: float = DEFAULT_TOL,
                   family: SpectralFamily | None = None) -> ir.RatInterval:
    """``[χ(inner), χ(outer)]`` as exact rationals (endpoints are eigenvalues of ``a``)."""
    fam = family if family is not None else spectral_family(a, tol)
    lo = dasein_coefficients(a, v, "inner", tol, fam)[chi.index]
    hi = dasein_coefficients(a, v, "outer", tol, fam)[chi.index]
    return ir.RatInterval(as_rational(lo, tol), as_rational(hi, tol))


# ------------------------------------------------------------------ sections


@dataclass(frozen=True, eq=False)
class GlobalSection:
    """Order-preserving assignment of intervals to a downward-closed set of labels.

    ``intervals[l]`` must contain ``intervals[m]`` whenever ``l ⊑ m``: the
    value is less sharp on coarser contexts.
    """

    poset: order.FinitePoset
    intervals: Mapping

    def __post_init__(self):
        dom = list(self.intervals)
        for lab in dom:
            self.poset.index(lab)
        if not self.poset.is_lower(dom):
            raise NotDownwardClosed("section domain is not downward closed")
        for x, y in self.poset.relation:
            if x in self.intervals and y in self.intervals:
                if not ir.leq(self.intervals[x], self.intervals[y]):
                    raise NotOrderPreserving(
                        f"interval at {x} ({self.intervals[x]}) does not contain the one at {y} ({self.intervals[y]})"
                    )
        ordered = {lab: self.intervals[lab] for lab in self.poset.sorted_elements() if lab in self.intervals}
        object.__setattr__(self, "intervals", ordered)

    @property
    def domain(self) -> list:
        return list(self.intervals)

    def __getitem__(self, label):
        return self.intervals[label]

    def leq(self, other: GlobalSection) -> bool:
        return self.domain == other.domain and all(
            ir.leq(self[k], other[k]) for k in self.domain
        )

    def as_map(self) -> order.MonotoneMap:
        """The section as a map between finite posets (image intervals ordered by reverse inclusion)."""
        src = self.poset.subposet(self.domain)
        image = list(dict.fromkeys(self.intervals.values()))
        names = {x: repr(x) for x in image}
        tgt = order.validate_poset(
            [names[x] for x in image],
            [(names[x], names[y]) for x in image for y in image if x != y and ir.leq(x, y)],
        )
        return order.MonotoneMap(src, tgt, {k: names[v] for k, v in self.intervals.items()})

    def restrict(self, label) -> GlobalSection:
        """The local section on ``↓label``."""
        keep = self.poset.down(label)
        if label not in self.intervals:
            raise UnknownLabel(label)
        return GlobalSection(self.poset, {k: v for k, v in self.intervals.items() if k in keep})

    def to_json(self) -> dict:
        return {"intervals": {str(k): ir.to_json(v) for k, v in self.intervals.items()}}


def section_at(a, fragment: ContextFragment, top_label: str, chi: Character,
               tol: float = DEFAULT_TOL) -> GlobalSection:
    """Value intervals of ``a`` on ``↓top``, following ``chi`` down by cell domination."""
    if top_label not in fragment.contexts:
        raise UnknownLabel(top_label)
    top = fragment[top_label]
    if chi.context is not top and not context_equal(chi.context, top, tol):
        raise ValueError("character does not belong to the top context")
    fam = spectral_family(a, tol)
    out = {}
    for lab in fragment.poset.sorted_elements():
        if not fragment.poset.leq(lab, top_label):
            continue
        v = fragment[lab]
        out[lab] = value_interval(a, v, chi.restrict(v, tol), tol, fam)
    return GlobalSection(fragment.poset, out)


def section_pointwise_sup(sections: Sequence[GlobalSection]) -> GlobalSection:
    """Supremum of a finite directed family of sections: labelwise intersection."""
    sections = list(sections)
    if not sections:
        raise NotDirected("the empty family is not directed")
    dom = sections[0].domain
    for s in sections[1:]:
        if s.domain != dom or s.poset != sections[0].poset:
            raise SchemaError("sections live on different domains")
    out = {lab: ir.sup_directed([s[lab] for s in sections]) for lab in dom}
    for i, s in enumerate(sections):
        for t in sections[i + 1:]:
            if not any(s.leq(u) and t.leq(u) for u in sections):
                raise NotDirected("two sections have no upper bound in the family")
    return GlobalSection(sections[0].poset, out)


def section_decompose(s: GlobalSection) -> tuple[dict, dict]:
    """Split into the lower-endpoint map (order-preserving) and upper-endpoint map (order-reversing)."""
    mu, nu = {}, {}
    for lab, x in s.intervals.items():
        if x is ir.BOT:
            raise ValueError(f"bottom interval at {lab} has no finite endpoints")
        mu[lab], nu[lab] = x.lo, x.hi
    for x, y in s.poset.relation:
        if x in mu and y in mu:
            assert mu[x] <= mu[y] and nu[x] >= nu[y]
    assert all(mu[k] <= nu[k] for k in mu)
    return mu, nu


def section_recompose(poset: order.FinitePoset, mu: Mapping, nu: Mapping) -> GlobalSection:
    if set(mu) != set(nu):
        raise SchemaError("endpoint maps have different domains")
    return GlobalSection(poset, {k: ir.RatInterval(mu[k], nu[k]) for k in mu})


def glue(poset: order.FinitePoset, local: Mapping) -> GlobalSection:
    """Assemble a section from local sections ``{label: section on ↓label}`` that agree on overlaps."""
    out: dict = {}
    for lab, s in local.items():
        if set(s.domain) != set(poset.down(lab)):
            raise NotDownwardClosed(f"local section at {lab} is not defined on its down-set")
        for k, x in s.intervals.items():
            if k in out and out[k] != x:
                raise ValueError(f"local sections disagree at {k}")
            out[k] = x
    return GlobalSection(poset, out)
