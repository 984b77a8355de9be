"""Partitions of the positive integers describing contexts of the diagonal algebra.

A projection in the diagonal algebra of ``ℓ²(ℕ)`` is a subset of ``ℕ = {1, 2, ...}``;
a context generated by finitely many such projections is a partition of ``ℕ``.
Cells are finite unions of arithmetic progressions ``{a + kd : k ≥ 0}`` plus
finite sets.  Such sets are eventually periodic, so every question about them
is decided exactly on a finite window.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from .contexts import Context
from .errors import MalformedCells, SchemaError, UnsupportedFamily


@dataclass(frozen=True)
class Cell:
    aps: tuple = ()
    fin: frozenset = frozenset()

    def __post_init__(self):
        aps = tuple(sorted({(int(a), int(d)) for a, d in self.aps}))
        for a, d in aps:
            if a < 1 or d < 1:
                raise MalformedCells(f"progression {a}+{d}k must have start ≥ 1 and step ≥ 1")
        fin = frozenset(int(n) for n in self.fin)
        if any(n < 1 for n in fin):
            raise MalformedCells("finite part must contain positive integers")
        if not aps and not fin:
            raise MalformedCells("empty cell")
        object.__setattr__(self, "aps", aps)
        object.__setattr__(self, "fin", fin)

    def horizon(self) -> int:
        return max([a for a, _ in self.aps] + list(self.fin) + [1])

    def period(self) -> int:
        return math.lcm(*[d for _, d in self.aps]) if self.aps else 1

    def indicator(self, n: int) -> np.ndarray:
        """Membership of ``1..n`` as a boolean array."""
        ks = np.arange(1, n + 1)
        out = np.zeros(n, dtype=bool)
        for a, d in self.aps:
            out |= (ks >= a) & ((ks - a) % d == 0)
        for m in self.fin:
            if m <= n:
                out[m - 1] = True
        return out

    def __contains__(self, n: int) -> bool:
        return n in self.fin or any(n >= a and (n - a) % d == 0 for a, d in self.aps)

    def is_finite(self) -> bool:
        return not self.aps

    def union(self, other: Cell) -> Cell:
        return Cell(self.aps + other.aps, self.fin | other.fin)

    def describe(self) -> str:
        parts = [f"{{{a}+{d}k}}" if d > 1 else f"{{{a},{a + 1},...}}" for a, d in self.aps]
        if self.fin:
            parts.insert(0, "{" + ",".join(map(str, sorted(self.fin))) + "}")
        return "∪".join(parts)

    def to_json(self) -> dict:
        return {"aps": [list(ap) for ap in self.aps], "fin": sorted(self.fin)}


def ap(start: int, step: int) -> Cell:
    return Cell(((start, step),))


def finite(*ns: int) -> Cell:
    return Cell((), frozenset(ns))


@dataclass(frozen=True)
class NatPartition:
    """A partition of ℕ into finitely many cells, or the discrete partition (``cells=None``)."""

    cells: tuple | None = None
    window: int = field(init=False, repr=False, compare=False, default=0)
    _horizon: int = field(init=False, repr=False, compare=False, default=1)
    _period: int = field(init=False, repr=False, compare=False, default=1)
    _labels: dict = field(init=False, repr=False, compare=False, default_factory=dict)

    def __post_init__(self):
        if self.cells is None:
            return
        cells = tuple(self.cells)
        if not cells:
            raise MalformedCells("a partition needs at least one cell")
        n = max(c.horizon() for c in cells) + math.lcm(*[c.period() for c in cells])
        counts = sum(c.indicator(n).astype(int) for c in cells)
        if np.any(counts > 1):
            k = int(np.argmax(counts > 1)) + 1
            raise MalformedCells(f"cells overlap at {k}")
        if np.any(counts == 0):
            k = int(np.argmax(counts == 0)) + 1
            raise MalformedCells(f"cells miss {k}")
        firsts = [int(np.argmax(c.indicator(n))) for c in cells]
        cells = tuple(c for _, c in sorted(zip(firsts, cells), key=lambda t: t[0]))
        object.__setattr__(self, "cells", cells)
        object.__setattr__(self, "window", n)
        object.__setattr__(self, "_horizon", max(c.horizon() for c in cells))
        object.__setattr__(self, "_period", math.lcm(*[c.period() for c in cells]))

    @property
    def is_discrete(self) -> bool:
        return self.cells is None

    @property
    def is_bottom(self) -> bool:
        return self.cells is not None and len(self.cells) == 1

    def horizon(self) -> int:
        return self._horizon

    def period(self) -> int:
        return self._period

    def labels(self, n: int) -> np.ndarray:
        """Cell index of each of ``1..n`` (cached per window length)."""
        if n not in self._labels:
            if self.cells is None:
                out = np.arange(n)
            else:
                out = np.full(n, -1)
                for i, c in enumerate(self.cells):
                    out[c.indicator(n)] = i
            out.setflags(write=False)
            self._labels[n] = out
        return self._labels[n]

    def describe(self) -> str:
        if self.cells is None:
            return "discrete"
        return " | ".join(c.describe() for c in self.cells)

    def to_json(self) -> dict:
        if self.cells is None:
            return {"kind": "discrete"}
        return {"kind": "finite", "cells": [c.to_json() for c in self.cells]}


def make_context(kind: str, j: int | None = None, cells: Sequence[Cell] | None = None) -> NatPartition:
    """``ve`` evens/odds, ``vj`` first ``j`` singletons plus tail, ``vm`` discrete, ``bottom``, ``custom``."""
    if kind == "ve":
        return NatPartition((ap(2, 2), ap(1, 2)))
    if kind == "vj":
        if j is None or j < 0:
            raise SchemaError("vj needs j ≥ 0")
        return NatPartition(tuple(finite(i) for i in range(1, j + 1)) + (ap(j + 1, 1),))
    if kind == "vm":
        return NatPartition(None)
    if kind == "bottom":
        return NatPartition((ap(1, 1),))
    if kind == "custom":
        if cells is None:
            raise SchemaError("custom partition needs cells")
        return NatPartition(tuple(cells))
    raise SchemaError(f"unknown partition kind {kind!r}")


def _window(*vs: NatPartition) -> int:
    return max(v.horizon() for v in vs) + math.lcm(*[v.period() for v in vs])


def refines_leq(v1: NatPartition, v2: NatPartition) -> bool:
    """The algebra of ``v1`` is inside that of ``v2``: each cell of ``v2`` lies in a cell of ``v1``."""
    if v2.is_discrete:
        return True
    if v1.is_discrete:
        return False
    n = _window(v1, v2)
    l1, l2 = v1.labels(n), v2.labels(n)
    # each v2 label must map to a single v1 label
    first = np.full(len(v2.cells), -1)
    first[l2[::-1]] = l1[::-1]
    return bool(np.all(first[l2] == l1))


def same_partition(v1: NatPartition, v2: NatPartition) -> bool:
    return refines_leq(v1, v2) and refines_leq(v2, v1)


@dataclass(frozen=True)
class VjChain:
    """The chain ``V_start ⊑ V_{start+step} ⊑ ...`` (cofinal in ``(V_j)`` for any start/step)."""

    start: int = 1
    step: int = 1

    def __post_init__(self):
        if self.start < 0 or self.step < 1:
            raise SchemaError("chain needs start ≥ 0 and step ≥ 1")

    def member(self, k: int) -> NatPartition:
        return make_context("vj", self.start + k * self.step)

    def first_covering(self, n: int) -> int:
        """Smallest chain index ``j`` with ``{n}`` a cell of ``V_j``."""
        k = max(0, -(-(n - self.start) // self.step))
        return self.start + k * self.step


def chain_sup(family, check_upto: int = 64) -> NatPartition:
    """Supremum of a registered infinite chain: every singleton eventually appears, so the sup is discrete."""
    if not isinstance(family, VjChain):
        raise UnsupportedFamily("only the parametric V_j chain and its cofinal subchains are supported")
    for n in range(1, check_upto + 1):
        j = family.first_covering(n)
        if finite(n) not in make_context("vj", j).cells:
            raise AssertionError(f"{{{n}}} is not a cell of V_{j}")
    return make_context("vm")


def _set_partitions(items: list) -> Iterator[list[list]]:
    if not items:
        yield []
        return
    head, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        yield [[head]] + part
        for i in range(len(part)):
            yield part[:i] + [[head] + part[i]] + part[i + 1:]


def strictly_below(v: NatPartition) -> list[NatPartition]:
    """Every partition strictly coarser than ``v``: all proper merges of its cells."""
    if v.is_discrete:
        raise UnsupportedFamily("the discrete partition has infinitely many coarsenings")
    out = []
    for blocks in _set_partitions(list(v.cells)):
        if len(blocks) == len(v.cells):
            continue
        merged = []
        for b in blocks:
            c = b[0]
            for other in b[1:]:
                c = c.union(other)
            merged.append(c)
        out.append(NatPartition(tuple(merged)))
    out.sort(key=lambda p: (len(p.cells), p.describe()))
    return out


def truncate(v: NatPartition, n: int) -> Context:
    """Compression to ``span{e_1..e_n}``: the diagonal context of ``M_n`` with cells cut to ``1..n``."""
    labels = v.labels(n)
    groups = [np.nonzero(labels == k)[0].tolist() for k in sorted(set(labels.tolist()))]
    return Context.diagonal(groups, n)


# ----------------------------------------------------------------- witness


@dataclass
class Part:
    name: str
    passed: bool
    detail: str
    first_failure: object = None

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed, "detail": self.detail,
                "first_failure": self.first_failure}


@dataclass
class Certificate:
    bound: int
    ve: NatPartition
    parts: list

    @property
    def passed(self) -> bool:
        return all(p.passed for p in self.parts)

    @property
    def first_failing_part(self) -> str | None:
        return next((p.name for p in self.parts if not p.passed), None)

    def to_json(self) -> dict:
        return {
            "bound": self.bound,
            "ve": self.ve.describe(),
            "parts": [p.to_json() for p in self.parts],
            "passed": self.passed,
            "first_failing_part": self.first_failing_part,
        }


def sec6_witness(bound: int, ve: NatPartition | None = None) -> Certificate:
    """Check that the chain ``(V_j)`` shows ``V_e`` is not way below itself.

    (i) the chain is directed; (ii) its sup is discrete and lies above ``V_e``;
    (iii) ``V_e`` is contained in no ``V_j``; (iv) ``V_e`` is an atom, so the
    directed sup of everything way below it is the bottom.
    """
    if bound < 2:
        raise SchemaError("bound must be at least 2")
    ve = make_context("ve") if ve is None else ve
    chain = [make_context("vj", j) for j in range(1, bound + 1)]
    parts = []

    bad = next(((i + 1, j + 1) for i in range(bound) for j in range(i + 1, bound)
                if not refines_leq(chain[i], chain[j])), None)
    parts.append(Part("directed", bad is None,
                      f"V_i ⊑ V_j for all 1 ≤ i < j ≤ {bound}", None if bad is None else list(bad)))

    top = chain_sup(VjChain())
    ok = top.is_discrete and refines_leq(ve, top)
    parts.append(Part("sup_above", ok, "sup of the chain is discrete and contains V_e"))

    bad_j = next((j for j in range(1, bound + 1) if refines_leq(ve, chain[j - 1])), None)
    parts.append(Part("not_below_members", bad_j is None,
                      f"V_e ⋢ V_j for every j ≤ {bound}", bad_j))

    below = strictly_below(ve)
    atom = len(below) == 1 and below[0].is_bottom and not ve.is_bottom
    parts.append(Part("atom", atom,
                      "only the bottom lies strictly below V_e, so the sup of its approximants is the bottom"
                      if atom else f"{len(below)} partitions strictly below V_e"))
    return Certificate(bound, ve, parts)


# -------------------------------------------------------------------- JSON


def partition_from_json(data, path: str = "$") -> NatPartition:
    if not isinstance(data, dict) or "kind" not in data:
        raise SchemaError("partition needs 'kind'", path)
    kind = data["kind"]
    if kind == "discrete":
        return make_context("vm")
    if kind in ("ve", "vm", "bottom"):
        return make_context(kind)
    if kind == "vj":
        return make_context("vj", int(data.get("j", -1)))
    if kind != "finite":
        raise SchemaError(f"unknown kind {kind!r}", path + ".kind")
    cells = data.get("cells")
    if not isinstance(cells, list):
        raise SchemaError("'cells' must be a list", path + ".cells")
    out = []
    for k, c in enumerate(cells):
        p = f"{path}.cells[{k}]"
        if not isinstance(c, dict):
            raise SchemaError("cell must be an object", p)
        try:
            aps = [tuple(x) for x in c.get("aps", [])]
            if any(len(x) != 2 for x in aps):
                raise SchemaError("progression must be [start, step]", p + ".aps")
            out.append(Cell(tuple(aps), frozenset(c.get("fin", []))))
        except TypeError:
            raise SchemaError("malformed cell", p) from None
    return NatPartition(tuple(out))
