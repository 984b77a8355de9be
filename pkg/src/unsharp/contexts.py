"""Abelian subalgebras of finite-dimensional matrix algebras.

A context is stored through its minimal projections: pairwise-orthogonal
Hermitian projections summing to the identity.  Inclusion of algebras is
the coarsening order on these partitions of unity; the trivial context
``{1}`` is the bottom element.

All numerics are double precision with an explicit tolerance ``tol``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import order
from .errors import (
    DimMismatch,
    NoConvergence,
    NonCommuting,
    NotContext,
    NotDirected,
    NotHermitian,
    NotHomomorphism,
    NotProjection,
    SchemaError,
)

DEFAULT_TOL = 1e-9
KEY_DIGITS = 12
DIM_CAP_EXACT = 16
DIM_CAP_FLOAT = 32


def _fro(m: np.ndarray) -> float:
    return float(np.sqrt(np.sum(np.abs(m) ** 2)))


def _as_matrix(h) -> np.ndarray:
    m = np.asarray(h, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimMismatch(f"expected a square matrix, got shape {m.shape}")
    return m


def _scale(h: np.ndarray) -> float:
    return max(1.0, float(np.max(np.abs(h)))) if h.size else 1.0


def is_hermitian(h, tol: float = DEFAULT_TOL) -> bool:
    h = _as_matrix(h)
    return float(np.max(np.abs(h - h.conj().T), initial=0.0)) <= tol * _scale(h)


def is_projection(p, tol: float = DEFAULT_TOL) -> bool:
    p = _as_matrix(p)
    return is_hermitian(p, tol) and float(np.max(np.abs(p @ p - p), initial=0.0)) <= tol


# ------------------------------------------------------------------ Jacobi


def jacobi(h, max_sweeps: int = 100) -> tuple[np.ndarray, np.ndarray]:
    """Cyclic Jacobi diagonalisation of a Hermitian matrix.

    Returns ``(values, vectors)`` with ``h ≈ vectors @ diag(values) @ vectors^H``,
    values in ascending order.
    """
    a = _as_matrix(h).copy()
    a = (a + a.conj().T) / 2
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    scale = _fro(a) or 1.0
    for _ in range(max_sweeps):
        off = _fro(a - np.diag(np.diag(a)))
        if off <= 1e-15 * scale * max(n, 1):
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                r = abs(apq)
                if r <= 1e-300:
                    continue
                phase = np.conj(apq / r)
                theta = 0.5 * math.atan2(2 * r, (a[q, q] - a[p, p]).real)
                c, s = math.cos(theta), math.sin(theta)
                # phase rotation making a[p, q] real, then a real plane rotation
                g = np.array([[c, s], [-s * phase, c * phase]], dtype=complex)
                idx = [p, q]
                a[:, idx] = a[:, idx] @ g
                a[idx, :] = g.conj().T @ a[idx, :]
                v[:, idx] = v[:, idx] @ g
                a[p, q] = a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
    else:
        raise NoConvergence(f"Jacobi did not converge in {max_sweeps} sweeps")
    values = np.real(np.diag(a))
    perm = np.argsort(values, kind="stable")
    return values[perm], v[:, perm]


@dataclass(frozen=True, eq=False)
class Eigenspace:
    value: float
    projection: np.ndarray

    @property
    def rank(self) -> int:
        return int(round(np.trace(self.projection).real))


def cluster_gap(h, tol: float = DEFAULT_TOL) -> float:
    h = _as_matrix(h)
    return tol * _scale(h) * h.shape[0]


def eigendecompose(h, tol: float = DEFAULT_TOL) -> list[Eigenspace]:
    """Spectral decomposition with eigenvalues closer than the cluster gap merged."""
    h = _as_matrix(h)
    if not is_hermitian(h, tol):
        raise NotHermitian("matrix is not Hermitian within tolerance")
    values, vectors = jacobi(h)
    gap = cluster_gap(h, tol)
    groups: list[list[int]] = []
    for k, lam in enumerate(values):
        if groups and lam - values[groups[-1][-1]] <= gap:
            groups[-1].append(k)
        else:
            groups.append([k])
    out = []
    for g in groups:
        vec = vectors[:, g]
        proj = vec @ vec.conj().T
        out.append(Eigenspace(float(np.mean(values[g])), (proj + proj.conj().T) / 2))
    recon = sum((e.value * e.projection for e in out), np.zeros_like(h))
    if float(np.max(np.abs(recon - h), initial=0.0)) > 10 * tol * _scale(h) * max(1, len(values)):
        raise NoConvergence("eigendecomposition does not reconstruct the input")
    return out


def clean_projection(m) -> np.ndarray:
    """Nearest projection: span of the eigenvectors with eigenvalue above 1/2."""
    m = _as_matrix(m)
    values, vectors = jacobi((m + m.conj().T) / 2)
    vec = vectors[:, values > 0.5]
    p = vec @ vec.conj().T
    return (p + p.conj().T) / 2


# ----------------------------------------------------------------- contexts


def _proj_key(p: np.ndarray, digits: int = KEY_DIGITS) -> tuple:
    rank = int(round(np.trace(p).real))
    flat = []
    for z in p.ravel():
        flat.append(-round(float(z.real), digits) + 0.0)
        flat.append(-round(float(z.imag), digits) + 0.0)
    return (rank, tuple(flat))


@dataclass(frozen=True, eq=False)
class Context:
    """An abelian subalgebra given by its minimal projections (its cells).

    Cells are validated as a partition of unity and stored in canonical order:
    by rank, then by rounded entries.
    """

    cells: tuple
    tol: float = field(default=DEFAULT_TOL, compare=False)

    def __post_init__(self):
        cells = [_as_matrix(c) for c in self.cells]
        if not cells:
            raise NotContext("a context needs at least one cell")
        n = cells[0].shape[0]
        for c in cells:
            if c.shape != (n, n):
                raise DimMismatch("cells have different dimensions")
            if not is_projection(c, self.tol):
                raise NotProjection("cell is not a Hermitian projection")
            if _fro(c) <= 0.5:
                raise NotContext("zero cell")
        for a, b in combinations(cells, 2):
            if float(np.max(np.abs(a @ b))) > self.tol:
                raise NotContext("cells are not pairwise orthogonal")
        if float(np.max(np.abs(sum(cells) - np.eye(n)))) > self.tol:
            raise NotContext("cells do not sum to the identity")
        for c in cells:
            c.setflags(write=False)
        cells.sort(key=_proj_key)
        object.__setattr__(self, "cells", tuple(cells))

    @property
    def dim(self) -> int:
        return self.cells[0].shape[0]

    def __len__(self) -> int:
        return len(self.cells)

    @property
    def is_bottom(self) -> bool:
        return len(self.cells) == 1

    def key(self) -> tuple:
        return (len(self.cells), tuple(_proj_key(c) for c in self.cells))

    def contains_operator(self, a, tol: float | None = None) -> bool:
        """``a`` is a linear combination of the cells."""
        tol = self.tol if tol is None else tol
        a = _as_matrix(a)
        coeffs = [np.trace(c @ a) / np.trace(c).real for c in self.cells]
        recon = sum(z * c for z, c in zip(coeffs, self.cells))
        return float(np.max(np.abs(recon - a))) <= tol * _scale(a) * self.dim

    def describe(self) -> str:
        parts = []
        for c in self.cells:
            d = np.real(np.diag(c))
            if _fro(c - np.diag(np.diag(c))) <= self.tol:
                parts.append("{" + ",".join(str(i + 1) for i in np.nonzero(d > 0.5)[0]) + "}")
            else:
                parts.append(f"rank{int(round(d.sum()))}")
        return " ".join(parts)

    @classmethod
    def bottom(cls, dim: int, tol: float = DEFAULT_TOL) -> Context:
        return cls((np.eye(dim, dtype=complex),), tol)

    @classmethod
    def diagonal(cls, groups: Sequence[Iterable[int]], dim: int | None = None,
                 tol: float = DEFAULT_TOL) -> Context:
        """Diagonal context from a partition of the basis indices (0-based)."""
        groups = [sorted(set(g)) for g in groups]
        n = dim if dim is not None else sum(len(g) for g in groups)
        cells = []
        for g in groups:
            c = np.zeros((n, n), dtype=complex)
            c[g, g] = 1.0
            cells.append(c)
        return cls(tuple(cells), tol)

    @classmethod
    def from_basis(cls, unitary, groups: Sequence[Iterable[int]], tol: float = DEFAULT_TOL) -> Context:
        """Cells spanned by groups of columns of a unitary."""
        u = _as_matrix(unitary)
        cells = []
        for g in groups:
            cols = u[:, sorted(g)]
            p = cols @ cols.conj().T
            cells.append((p + p.conj().T) / 2)
        return cls(tuple(cells), tol)


class _Incompatible:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "Incompatible"

    def __bool__(self):
        return False


INCOMPATIBLE = _Incompatible()


def _same_dim(v1: Context, v2: Context) -> None:
    if v1.dim != v2.dim:
        raise DimMismatch(f"contexts live in M_{v1.dim} and M_{v2.dim}")


def context_equal(v1: Context, v2: Context, tol: float = DEFAULT_TOL) -> bool:
    if v1.dim != v2.dim or len(v1) != len(v2):
        return False
    unmatched = list(v2.cells)
    for p in v1.cells:
        for k, q in enumerate(unmatched):
            if float(np.max(np.abs(p - q))) <= tol:
                del unmatched[k]
                break
        else:
            return False
    return True


def context_of(hs: Sequence, tol: float = DEFAULT_TOL) -> Context:
    """The context generated by pairwise-commuting Hermitian operators.

    Minimal projections are the nonzero products of one spectral projection
    per operator.
    """
    hs = [_as_matrix(h) for h in hs]
    if not hs:
        raise SchemaError("need at least one operator")
    n = hs[0].shape[0]
    for h in hs:
        if h.shape != (n, n):
            raise DimMismatch("operators have different dimensions")
        if not is_hermitian(h, tol):
            raise NotHermitian("operator is not Hermitian within tolerance")
    for a, b in combinations(hs, 2):
        if float(np.max(np.abs(a @ b - b @ a))) > tol * _scale(a) * _scale(b) * n:
            raise NonCommuting("operators do not commute")
    cells = [np.eye(n, dtype=complex)]
    for h in hs:
        projs = [e.projection for e in eigendecompose(h, tol)]
        nxt = []
        for c in cells:
            for p in projs:
                prod = c @ p
                if _fro(prod) > 0.5:
                    nxt.append(clean_projection(prod))
        cells = nxt
    return Context(tuple(cells), tol)


def context_leq(v1: Context, v2: Context, tol: float = DEFAULT_TOL) -> bool:
    """The algebra of ``v1`` is contained in that of ``v2``."""
    _same_dim(v1, v2)
    for p in v1.cells:
        covering = [q for q in v2.cells if _fro(p @ q) > tol]
        total = sum(covering, np.zeros_like(p))
        if float(np.max(np.abs(p - total))) > tol:
            return False
    return True


def context_meet(v1: Context, v2: Context, tol: float = DEFAULT_TOL) -> Context:
    """Intersection algebra from connected components of the overlap graph."""
    _same_dim(v1, v2)
    k1 = len(v1)
    parent = list(range(k1 + len(v2)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i, p in enumerate(v1.cells):
        for j, q in enumerate(v2.cells):
            if _fro(p @ q) > tol:
                parent[find(i)] = find(k1 + j)
    comps: dict[int, list[int]] = {}
    for i in range(k1):
        comps.setdefault(find(i), []).append(i)
    cells = [clean_projection(sum(v1.cells[i] for i in members)) for members in comps.values()]
    return Context(tuple(cells), v1.tol)


def context_join(v1: Context, v2: Context, tol: float = DEFAULT_TOL):
    """Common refinement of commuting contexts, or :data:`INCOMPATIBLE`."""
    _same_dim(v1, v2)
    for p in v1.cells:
        for q in v2.cells:
            if float(np.max(np.abs(p @ q - q @ p))) > tol:
                return INCOMPATIBLE
    cells = []
    for p in v1.cells:
        for q in v2.cells:
            prod = p @ q
            if _fro(prod) > 0.5:
                cells.append(clean_projection(prod))
    return Context(tuple(cells), v1.tol)


def directed_sup_contexts(s: Sequence[Context], tol: float = DEFAULT_TOL) -> Context:
    """Supremum of a finite directed family: its maximum, cross-checked against iterated joins."""
    s = list(s)
    if not s:
        raise NotDirected("the empty family is not directed")
    for v in s[1:]:
        _same_dim(s[0], v)
    for a, b in combinations(s, 2):
        if not any(context_leq(a, z, tol) and context_leq(b, z, tol) for z in s):
            raise NotDirected("a pair of contexts has no upper bound in the family")
    top = next(z for z in s if all(context_leq(v, z, tol) for v in s))
    joined = s[0]
    for v in s[1:]:
        joined = context_join(joined, v, tol)
        if joined is INCOMPATIBLE:
            raise AssertionError("directed family with incompatible members")
    if not context_equal(top, joined, tol):
        raise AssertionError("iterated join differs from the maximum")
    return top


def respects_blocks(v: Context, blocks: Sequence[int], tol: float = DEFAULT_TOL) -> bool:
    """Every cell lies in the block-diagonal algebra ``M_{n1} ⊕ ... ⊕ M_{nk}``."""
    if sum(blocks) != v.dim:
        raise DimMismatch("block sizes do not add up to the dimension")
    mask = _block_mask(blocks)
    return all(float(np.max(np.abs(c[~mask]), initial=0.0)) <= tol for c in v.cells)


def _block_mask(blocks: Sequence[int]) -> np.ndarray:
    n = sum(blocks)
    mask = np.zeros((n, n), dtype=bool)
    start = 0
    for b in blocks:
        mask[start:start + b, start:start + b] = True
        start += b
    return mask


# ------------------------------------------------------------ homomorphisms


def _block_units(blocks: Sequence[int]) -> list[tuple[int, int]]:
    units, start = [], 0
    for b in blocks:
        units.extend((start + i, start + j) for i in range(b) for j in range(b))
        start += b
    return units


@dataclass(frozen=True, eq=False)
class StarHom:
    """A linear map fixed by the images of the matrix units of the source algebra."""

    source_dim: int
    target_dim: int
    unit_images: Mapping[tuple[int, int], np.ndarray]
    source_blocks: tuple[int, ...] = ()

    def __post_init__(self):
        blocks = tuple(self.source_blocks) or (self.source_dim,)
        if sum(blocks) != self.source_dim:
            raise DimMismatch("source blocks do not add up to the source dimension")
        object.__setattr__(self, "source_blocks", blocks)
        images = {}
        for unit in _block_units(blocks):
            if unit not in self.unit_images:
                raise NotHomomorphism(f"missing image of matrix unit {unit}")
            m = _as_matrix(self.unit_images[unit])
            if m.shape != (self.target_dim, self.target_dim):
                raise DimMismatch(f"image of {unit} has shape {m.shape}")
            images[unit] = m
        extra = set(self.unit_images) - set(images)
        if extra:
            raise NotHomomorphism(f"images given for units outside the source blocks: {sorted(extra)}")
        object.__setattr__(self, "unit_images", images)

    def __call__(self, a) -> np.ndarray:
        a = _as_matrix(a)
        out = np.zeros((self.target_dim, self.target_dim), dtype=complex)
        for (i, j), img in self.unit_images.items():
            if a[i, j] != 0:
                out = out + a[i, j] * img
        return out

    def verify(self, tol: float = DEFAULT_TOL) -> None:
        """Raise :class:`NotHomomorphism` unless multiplicative, *-preserving and unital."""
        units = list(self.unit_images)
        for (i, j) in units:
            if float(np.max(np.abs(self.unit_images[(i, j)].conj().T - self.unit_images[(j, i)]))) > tol:
                raise NotHomomorphism(f"adjoint of E{i}{j} is not preserved")
        zero = np.zeros((self.target_dim, self.target_dim))
        for (i, j) in units:
            for (k, l) in units:
                expect = self.unit_images[(i, l)] if j == k else zero
                got = self.unit_images[(i, j)] @ self.unit_images[(k, l)]
                if float(np.max(np.abs(got - expect))) > tol:
                    raise NotHomomorphism(f"E{i}{j}·E{k}{l} is not preserved")
        unit = sum(self.unit_images[(i, i)] for i in range(self.source_dim))
        if float(np.max(np.abs(unit - np.eye(self.target_dim)))) > tol:
            raise NotHomomorphism("the identity is not preserved")


def identity_hom(n: int, blocks: Sequence[int] = ()) -> StarHom:
    blocks = tuple(blocks) or (n,)
    images = {}
    for i, j in _block_units(blocks):
        e = np.zeros((n, n), dtype=complex)
        e[i, j] = 1.0
        images[(i, j)] = e
    return StarHom(n, n, images, blocks)


def compose(phi: StarHom, psi: StarHom) -> StarHom:
    """``phi ∘ psi``."""
    if psi.target_dim != phi.source_dim:
        raise DimMismatch("homomorphisms are not composable")
    images = {u: phi(img) for u, img in psi.unit_images.items()}
    return StarHom(psi.source_dim, phi.target_dim, images, psi.source_blocks)


def embedding_hom(source_blocks: Sequence[int], multiplicities: Sequence[int], unitary=None) -> StarHom:
    """``A ↦ W (⊕_t A_t ⊗ 1_{k_t}) W^H``: each source block repeated ``k_t`` times.

    Every unital *-homomorphism between finite-dimensional algebras has this
    form up to the choice of ``W``; ``k_t = 0`` kills a block.
    """
    blocks = tuple(source_blocks)
    if len(multiplicities) != len(blocks):
        raise DimMismatch("one multiplicity per block")
    m = sum(blocks)
    n = sum(b * k for b, k in zip(blocks, multiplicities))
    w = np.eye(n, dtype=complex) if unitary is None else _as_matrix(unitary)
    images = {}
    src_start, tgt_start = 0, 0
    for b, k in zip(blocks, multiplicities):
        for i in range(b):
            for j in range(b):
                e = np.zeros((n, n), dtype=complex)
                for copy in range(k):
                    off = tgt_start + copy * b
                    e[off + i, off + j] = 1.0
                images[(src_start + i, src_start + j)] = w @ e @ w.conj().T
        src_start += b
        tgt_start += b * k
    return StarHom(m, n, images, blocks)


def apply_hom(phi: StarHom, v: Context, tol: float = DEFAULT_TOL, verify: bool = True) -> Context:
    """Image context ``{phi(P)}`` with zero images dropped."""
    if v.dim != phi.source_dim:
        raise DimMismatch(f"context in M_{v.dim}, homomorphism from dimension {phi.source_dim}")
    if verify:
        phi.verify(tol)
    if not respects_blocks(v, phi.source_blocks, tol):
        raise DimMismatch("context does not lie in the source block algebra")
    cells = []
    for p in v.cells:
        img = phi(p)
        if _fro(img) > 0.5:
            cells.append(clean_projection(img))
    return Context(tuple(cells), v.tol)


# ----------------------------------------------------------------- fragments


@dataclass(frozen=True, eq=False)
class ContextFragment:
    """A finite set of contexts with its inclusion order (labels ``V0, V1, ...``)."""

    poset: order.FinitePoset
    contexts: Mapping[str, Context]

    def label_of(self, v: Context, tol: float = DEFAULT_TOL) -> str | None:
        for lab, w in self.contexts.items():
            if context_equal(v, w, tol):
                return lab
        return None

    def __getitem__(self, label: str) -> Context:
        return self.contexts[label]

    def labels(self) -> list[str]:
        return list(self.contexts)

    def to_json(self) -> dict:
        out = self.poset.to_json()
        out["labels"] = {lab: context_to_json(v) for lab, v in self.contexts.items()}
        return out

    def to_dot(self) -> str:
        tips = {lab: v.describe() for lab, v in self.contexts.items()}
        return self.poset.to_dot("contexts", tips)


def fragment_build(vs: Sequence[Context], close_under_meets: bool = True, include_bottom: bool = True,
                   tol: float = DEFAULT_TOL) -> ContextFragment:
    vs = list(vs)
    if not vs:
        raise SchemaError("need at least one context")
    for v in vs[1:]:
        _same_dim(vs[0], v)
    uniq: list[Context] = []

    def add(v: Context) -> bool:
        if any(context_equal(v, w, tol) for w in uniq):
            return False
        uniq.append(v)
        return True

    for v in vs:
        add(v)
    if include_bottom:
        add(Context.bottom(vs[0].dim, tol))
    if close_under_meets:
        changed = True
        while changed:
            changed = False
            for a, b in combinations(list(uniq), 2):
                if add(context_meet(a, b, tol)):
                    changed = True
    uniq.sort(key=Context.key)
    labels = [f"V{k}" for k in range(len(uniq))]
    edges = [
        (labels[i], labels[j])
        for i, a in enumerate(uniq)
        for j, b in enumerate(uniq)
        if i != j and context_leq(a, b, tol)
    ]
    poset = order.validate_poset(labels, edges)
    return ContextFragment(poset, dict(zip(labels, uniq)))


# --------------------------------------------------------------------- JSON


def _num(x) -> float:
    if isinstance(x, bool):
        raise SchemaError(f"not a number: {x!r}")
    if isinstance(x, (int, float)):
        return float(x)
    if isinstance(x, str):
        try:
            return float(Fraction(x.strip()))
        except (ValueError, ZeroDivisionError):
            raise SchemaError(f"not a rational: {x!r}") from None
    raise SchemaError(f"not a number: {x!r}")


def matrix_from_json(data, path: str = "$") -> np.ndarray:
    if not isinstance(data, dict) or "entries" not in data:
        raise SchemaError("matrix needs 'entries'", path)
    rows = data["entries"]
    n = data.get("dim", len(rows) if isinstance(rows, list) else None)
    if not isinstance(rows, list) or len(rows) != n:
        raise SchemaError(f"'entries' must have {n} rows", path + ".entries")
    m = np.zeros((n, n), dtype=complex)
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != n:
            raise SchemaError(f"row must have {n} entries", f"{path}.entries[{i}]")
        for j, z in enumerate(row):
            p = f"{path}.entries[{i}][{j}]"
            try:
                if isinstance(z, list):
                    if len(z) != 2:
                        raise SchemaError("complex entry must be [re, im]", p)
                    m[i, j] = complex(_num(z[0]), _num(z[1]))
                else:
                    m[i, j] = _num(z)
            except SchemaError as e:
                raise SchemaError(str(e), p) from None
    return m


def _clean_float(x: float) -> float:
    return 0.0 if abs(x) < 1e-15 else float(x)


def matrix_to_json(m) -> dict:
    m = _as_matrix(m)
    return {
        "dim": m.shape[0],
        "entries": [[[_clean_float(z.real), _clean_float(z.imag)] for z in row] for row in m],
    }


def context_to_json(v: Context) -> dict:
    return {"dim": v.dim, "cells": [matrix_to_json(c) for c in v.cells], "describe": v.describe()}


def context_from_json(data, tol: float = DEFAULT_TOL, path: str = "$") -> Context:
    """Accepts ``cells`` (projection matrices), ``diagonal`` (0-based index groups)
    or ``operators`` (commuting Hermitian matrices generating the context)."""
    if not isinstance(data, dict):
        raise SchemaError("context must be an object", path)
    if "cells" in data:
        cells = [matrix_from_json(c, f"{path}.cells[{k}]") for k, c in enumerate(data["cells"])]
        return Context(tuple(cells), tol)
    if "diagonal" in data:
        groups = data["diagonal"]
        if not isinstance(groups, list) or not all(isinstance(g, list) for g in groups):
            raise SchemaError("'diagonal' must be a list of index lists", path + ".diagonal")
        return Context.diagonal(groups, data.get("dim"), tol)
    if "operators" in data:
        ops = [matrix_from_json(c, f"{path}.operators[{k}]") for k, c in enumerate(data["operators"])]
        return context_of(ops, tol)
    raise SchemaError("context needs 'cells', 'diagonal' or 'operators'", path)


def fragment_from_json(data, tol: float = DEFAULT_TOL, path: str = "$") -> ContextFragment:
    """Either a fragment as emitted by :meth:`ContextFragment.to_json` (with ``labels``)
    or a build request ``{"contexts": [...], "close_under_meets": ..., "include_bottom": ...}``."""
    if not isinstance(data, dict):
        raise SchemaError("fragment must be an object", path)
    if "labels" in data:
        labels = data["labels"]
        ctxs = {lab: context_from_json(c, tol, f"{path}.labels.{lab}") for lab, c in labels.items()}
        edges = [
            (a, b) for a, va in ctxs.items() for b, vb in ctxs.items()
            if a != b and context_leq(va, vb, tol)
        ]
        return ContextFragment(order.validate_poset(list(ctxs), edges), ctxs)
    if "contexts" in data:
        vs = [context_from_json(c, tol, f"{path}.contexts[{k}]") for k, c in enumerate(data["contexts"])]
        return fragment_build(vs, bool(data.get("close_under_meets", True)),
                              bool(data.get("include_bottom", True)), tol)
    raise SchemaError("fragment needs 'labels' or 'contexts'", path)


def hom_from_json(data, path: str = "$") -> StarHom:
    if not isinstance(data, dict):
        raise SchemaError("homomorphism must be an object", path)
    for key in ("source_dim", "target_dim", "unit_images"):
        if key not in data:
            raise SchemaError(f"missing {key!r}", path)
    images = {}
    for key, m in data["unit_images"].items():
        try:
            i, j = (int(t) for t in key.split(","))
        except ValueError:
            raise SchemaError("unit key must be 'i,j'", f"{path}.unit_images.{key}") from None
        images[(i, j)] = matrix_from_json(m, f"{path}.unit_images.{key}")
    return StarHom(int(data["source_dim"]), int(data["target_dim"]), images,
                   tuple(data.get("source_blocks", ())))


def hom_to_json(phi: StarHom) -> dict:
    return {
        "source_dim": phi.source_dim,
        "target_dim": phi.target_dim,
        "source_blocks": list(phi.source_blocks),
        "unit_images": {f"{i},{j}": matrix_to_json(m) for (i, j), m in sorted(phi.unit_images.items())},
    }


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)
