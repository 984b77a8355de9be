"""Finite posets and their domain-theoretic properties.

Every property here is computed from its definition by enumerating subsets,
so the module doubles as the oracle for the order structure produced by the
other modules.  Subsets are encoded as integer bitmasks over the element
order fixed at construction time.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations
from typing import Hashable, Iterable, Iterator, Mapping

from .errors import CycleError, NotDirected, PartialMap, SchemaError, SizeCapExceeded, UnknownLabel

Label = Hashable

#: definitional way-below enumerates subsets of up to this many elements
WAY_BELOW_CAP = 20
#: exhaustive domain reports enumerate all 2^n subsets
REPORT_CAP = 12


def _sort_key(label: Label) -> tuple[str, str]:
    return (type(label).__name__, str(label))


@dataclass(frozen=True)
class FinitePoset:
    """A finite partial order stored as its full reflexive-transitive relation.

    Build instances with :func:`validate_poset`; the constructor assumes the
    relation is already closed and antisymmetric and only indexes it.
    """

    elements: tuple
    relation: frozenset
    _index: dict = field(init=False, repr=False, compare=False)
    _up: tuple = field(init=False, repr=False, compare=False)
    _down: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        index = {x: i for i, x in enumerate(self.elements)}
        up = [0] * len(self.elements)
        down = [0] * len(self.elements)
        for x, y in self.relation:
            up[index[x]] |= 1 << index[y]
            down[index[y]] |= 1 << index[x]
        object.__setattr__(self, "_index", index)
        object.__setattr__(self, "_up", tuple(up))
        object.__setattr__(self, "_down", tuple(down))

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, x) -> bool:
        return x in self._index

    def index(self, x: Label) -> int:
        try:
            return self._index[x]
        except (KeyError, TypeError):
            raise UnknownLabel(x) from None

    def leq(self, x: Label, y: Label) -> bool:
        return bool(self._up[self.index(x)] >> self.index(y) & 1)

    def up(self, x: Label) -> frozenset:
        return self._unmask(self._up[self.index(x)])

    def down(self, x: Label) -> frozenset:
        return self._unmask(self._down[self.index(x)])

    def sorted_elements(self) -> list:
        return sorted(self.elements, key=_sort_key)

    def covers(self) -> list[tuple]:
        """Hasse diagram edges (x, y) with x < y and nothing strictly between."""
        edges = []
        for x, y in self.relation:
            if x == y:
                continue
            i, j = self._index[x], self._index[y]
            between = (self._up[i] & self._down[j]) & ~(1 << i | 1 << j)
            if not between:
                edges.append((x, y))
        return sorted(edges, key=lambda e: (_sort_key(e[0]), _sort_key(e[1])))

    def is_upper(self, s: Iterable[Label]) -> bool:
        m = self.mask(s)
        return all(self._up[i] & ~m == 0 for i in _bits(m))

    def is_lower(self, s: Iterable[Label]) -> bool:
        m = self.mask(s)
        return all(self._down[i] & ~m == 0 for i in _bits(m))

    def subposet(self, s: Iterable[Label]) -> FinitePoset:
        keep = set(s)
        for x in keep:
            self.index(x)
        elems = tuple(x for x in self.elements if x in keep)
        rel = frozenset((x, y) for x, y in self.relation if x in keep and y in keep)
        return FinitePoset(elems, rel)

    # bitmask helpers
    def mask(self, s: Iterable[Label]) -> int:
        m = 0
        for x in s:
            m |= 1 << self.index(x)
        return m

    def _unmask(self, m: int) -> frozenset:
        return frozenset(self.elements[i] for i in _bits(m))

    # serialisation
    def to_json(self) -> dict:
        elems = self.sorted_elements()
        strict = sorted(
            ([x, y] for x, y in self.relation if x != y),
            key=lambda e: (_sort_key(e[0]), _sort_key(e[1])),
        )
        return {"elements": elems, "leq": strict}

    def to_dot(self, name: str = "poset", tooltips: Mapping[Label, str] | None = None) -> str:
        lines = [f"digraph {name} {{", "  rankdir=BT;"]
        for x in self.sorted_elements():
            attrs = ""
            if tooltips and x in tooltips:
                attrs = f" [tooltip={json.dumps(tooltips[x])}]"
            lines.append(f"  {json.dumps(str(x))}{attrs};")
        for x, y in self.covers():
            lines.append(f"  {json.dumps(str(x))} -> {json.dumps(str(y))};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def _bits(m: int) -> Iterator[int]:
    i = 0
    while m:
        if m & 1:
            yield i
        m >>= 1
        i += 1


def validate_poset(elements: Iterable[Label], raw_relation: Iterable[tuple]) -> FinitePoset:
    """Close ``raw_relation`` reflexively and transitively and check antisymmetry."""
    elems = tuple(elements)
    if len(set(elems)) != len(elems):
        raise SchemaError("element labels must be distinct")
    index = {x: i for i, x in enumerate(elems)}
    n = len(elems)
    reach = [1 << i for i in range(n)]
    for pair in raw_relation:
        x, y = pair
        if x not in index:
            raise UnknownLabel(x)
        if y not in index:
            raise UnknownLabel(y)
        reach[index[x]] |= 1 << index[y]
    # Warshall closure on bitmask rows
    for k in range(n):
        bit = 1 << k
        for i in range(n):
            if reach[i] & bit:
                reach[i] |= reach[k]
    for i in range(n):
        for j in range(i + 1, n):
            if reach[i] >> j & 1 and reach[j] >> i & 1:
                raise CycleError(f"{elems[i]!r} and {elems[j]!r} lie on a cycle")
    rel = frozenset((elems[i], elems[j]) for i in range(n) for j in _bits(reach[i]))
    return FinitePoset(elems, rel)


def poset_from_json(data: dict) -> FinitePoset:
    if not isinstance(data, dict):
        raise SchemaError("expected an object", "$")
    if "elements" not in data or not isinstance(data["elements"], list):
        raise SchemaError("missing list 'elements'", "$.elements")
    edges = data.get("leq", [])
    if not isinstance(edges, list):
        raise SchemaError("'leq' must be a list of pairs", "$.leq")
    for k, e in enumerate(edges):
        if not isinstance(e, list) or len(e) != 2:
            raise SchemaError("each edge must be a 2-element list", f"$.leq[{k}]")
    return validate_poset(data["elements"], [tuple(e) for e in edges])


# ---------------------------------------------------------------- directed sets


def _directed_mask(p: FinitePoset, m: int) -> bool:
    if m == 0:
        return False
    members = list(_bits(m))
    for a, b in combinations(members, 2):
        if m & p._up[a] & p._up[b] == 0:
            return False
    return True


def _sup_mask(p: FinitePoset, m: int, within: int | None = None) -> int | None:
    """Index of the least upper bound of mask ``m`` inside ``within`` (default: all)."""
    ub = within if within is not None else (1 << len(p.elements)) - 1
    for i in _bits(m):
        ub &= p._up[i]
    for i in _bits(ub):
        if ub & ~p._up[i] == 0:
            return i
    return None


def is_directed(p: FinitePoset, s: Iterable[Label]) -> bool:
    """Nonempty and every pair has an upper bound inside ``s``."""
    return _directed_mask(p, p.mask(s))


def sup(p: FinitePoset, s: Iterable[Label]):
    """Least upper bound of ``s`` in ``p``, or ``None`` when it does not exist."""
    i = _sup_mask(p, p.mask(s))
    return None if i is None else p.elements[i]


def directed_sup(p: FinitePoset, s: Iterable[Label]):
    s = list(s)
    m = p.mask(s)
    if not _directed_mask(p, m):
        raise NotDirected(f"{sorted(s, key=_sort_key)} is not directed")
    i = _sup_mask(p, m)
    if i is None:
        raise AssertionError("finite directed set without supremum")
    return p.elements[i]


def _check_cap(p: FinitePoset, cap: int) -> None:
    if len(p) > cap:
        raise SizeCapExceeded(f"poset has {len(p)} elements, cap is {cap}")


def _directed_subsets(p: FinitePoset) -> list[tuple[int, int]]:
    """All directed subsets of ``p`` with the index of their supremum."""
    out = []
    for m in range(1, 1 << len(p)):
        if _directed_mask(p, m):
            s = _sup_mask(p, m)
            out.append((m, -1 if s is None else s))
    return out


def way_below(p: FinitePoset, x: Label, y: Label, method: str = "definitional",
              cap: int = WAY_BELOW_CAP) -> bool:
    """x is way below y.

    ``method="definitional"`` searches every directed S with y below its
    supremum for one avoiding the up-set of x.  ``method="order"`` uses the
    finite-poset collapse of way-below onto the order.
    """
    i, j = p.index(x), p.index(y)
    if method == "order":
        return p.leq(x, y)
    if method != "definitional":
        raise ValueError(f"unknown method {method!r}")
    _check_cap(p, cap)
    avoid = ((1 << len(p)) - 1) & ~p._up[i]
    # a counterexample S must avoid the up-set of x entirely
    sub = avoid
    while sub:
        if _directed_mask(p, sub):
            s = _sup_mask(p, sub)
            if s is not None and p._up[j] >> s & 1:
                return False
        sub = (sub - 1) & avoid
    return True


# -------------------------------------------------------------- domain report


@dataclass(frozen=True)
class DomainReport:
    is_dcpo: bool
    compact_elements: frozenset
    is_continuous: bool
    is_algebraic: bool
    is_bounded_complete: bool
    is_finitely_bounded_complete: bool
    is_almost_bounded_complete: bool
    is_almost_finitely_bounded_complete: bool
    is_complete_lattice: bool
    is_L_domain: bool
    way_below: frozenset

    def to_json(self) -> dict:
        return {
            "is_dcpo": self.is_dcpo,
            "compact_elements": sorted(self.compact_elements, key=_sort_key),
            "is_continuous": self.is_continuous,
            "is_algebraic": self.is_algebraic,
            "is_bounded_complete": self.is_bounded_complete,
            "is_finitely_bounded_complete": self.is_finitely_bounded_complete,
            "is_almost_bounded_complete": self.is_almost_bounded_complete,
            "is_almost_finitely_bounded_complete": self.is_almost_finitely_bounded_complete,
            "is_complete_lattice": self.is_complete_lattice,
            "is_L_domain": self.is_L_domain,
            "way_below": sorted(([x, y] for x, y in self.way_below),
                                key=lambda e: (_sort_key(e[0]), _sort_key(e[1]))),
        }


def domain_report(p: FinitePoset, cap: int = REPORT_CAP) -> DomainReport:
    """Compute every flag of :class:`DomainReport` by exhaustive enumeration."""
    _check_cap(p, cap)
    n = len(p)
    full = (1 << n) - 1
    directed = _directed_subsets(p)
    is_dcpo = all(s >= 0 for _, s in directed)

    wb = [[False] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            wb[i][j] = all(m & p._up[i] for m, s in directed if s >= 0 and p._up[j] >> s & 1)
    compact = [i for i in range(n) if wb[i][i]]
    compact_mask = sum(1 << i for i in compact)

    def approximated(basis: int) -> bool:
        for y in range(n):
            approx = sum(1 << x for x in range(n) if wb[x][y]) & basis
            if not _directed_mask(p, approx) or _sup_mask(p, approx) != y:
                return False
        return True

    continuous = approximated(full)
    algebraic = approximated(compact_mask)

    bounded_complete = True
    almost_bounded_complete = True
    complete_lattice = True
    for m in range(0, 1 << n):
        ub = full
        for i in _bits(m):
            ub &= p._up[i]
        has_sup = _sup_mask(p, m) is not None
        if not has_sup:
            complete_lattice = False
            if ub:
                bounded_complete = False
                if m:
                    almost_bounded_complete = False

    # finite subsets via the empty set and pairs; larger finite sets follow by induction
    pairs_ok = True
    for a in range(n):
        for b in range(a + 1, n):
            m = 1 << a | 1 << b
            if p._up[a] & p._up[b] and _sup_mask(p, m) is None:
                pairs_ok = False
    empty_ok = n == 0 or _sup_mask(p, 0) is not None
    finitely_bc = pairs_ok and empty_ok

    ideals_ok = all(_complete_lattice_within(p, p._down[x]) for x in range(n))
    l_domain = is_dcpo and continuous and ideals_ok

    relation = frozenset(
        (p.elements[i], p.elements[j]) for i in range(n) for j in range(n) if wb[i][j]
    )
    return DomainReport(
        is_dcpo=is_dcpo,
        compact_elements=frozenset(p.elements[i] for i in compact),
        is_continuous=is_dcpo and continuous,
        is_algebraic=is_dcpo and algebraic,
        is_bounded_complete=bounded_complete,
        is_finitely_bounded_complete=finitely_bc,
        is_almost_bounded_complete=almost_bounded_complete,
        is_almost_finitely_bounded_complete=pairs_ok,
        is_complete_lattice=complete_lattice,
        is_L_domain=l_domain,
        way_below=relation,
    )


def _complete_lattice_within(p: FinitePoset, region: int) -> bool:
    sub = region
    while True:
        if _sup_mask(p, sub, within=region) is None:
            return False
        if sub == 0:
            return True
        sub = (sub - 1) & region


def is_basis(p: FinitePoset, basis: Iterable[Label], cap: int = REPORT_CAP) -> bool:
    """Every x is the directed supremum of the basis elements way below it."""
    report = domain_report(p, cap)
    b = p.mask(basis)
    for y in p.elements:
        approx = p.mask(x for x in p.elements if (x, y) in report.way_below) & b
        if not _directed_mask(p, approx) or _sup_mask(p, approx) != p.index(y):
            return False
    return True


# ------------------------------------------------------------- Scott topology


def is_scott_open(p: FinitePoset, g: Iterable[Label], cap: int = REPORT_CAP) -> bool:
    """Upper set that is inaccessible by directed suprema.

    Inaccessibility is checked over all directed subsets when ``p`` fits under
    ``cap``; above it only the upper-set condition is tested, which is
    equivalent on finite posets.
    """
    g = list(g)
    m = p.mask(g)
    if not p.is_upper(g):
        return False
    if len(p) <= cap:
        for d, s in _directed_subsets(p):
            if s >= 0 and m >> s & 1 and not d & m:
                return False
    return True


def scott_opens(p: FinitePoset, cap: int = REPORT_CAP) -> list[frozenset]:
    _check_cap(p, cap)
    opens = []
    for m in range(1 << len(p)):
        g = p._unmask(m)
        if is_scott_open(p, g, cap):
            opens.append(g)
    return opens


def is_hausdorff(p: FinitePoset, cap: int = REPORT_CAP) -> bool:
    """Distinct points have disjoint Scott-open neighbourhoods."""
    opens = scott_opens(p, cap)
    for x, y in combinations(p.elements, 2):
        if not any(x in u and y in w and not (u & w) for u in opens for w in opens):
            return False
    return True


def order_is_trivial(p: FinitePoset) -> bool:
    return all(x == y for x, y in p.relation)


# ------------------------------------------------------------ monotone maps


@dataclass(frozen=True)
class MonotoneMap:
    source: FinitePoset
    target: FinitePoset
    mapping: Mapping

    def __call__(self, x):
        return self.mapping[x]


def is_monotone(f: MonotoneMap) -> bool:
    return all(f.target.leq(f(x), f(y)) for x, y in f.source.relation)


def preserves_directed_sups(f: MonotoneMap, cap: int = REPORT_CAP) -> bool:
    _check_cap(f.source, cap)
    src, tgt = f.source, f.target
    for m, s in _directed_subsets(src):
        image = {f(x) for x in src._unmask(m)}
        if sup(tgt, image) != f(src.elements[s]):
            return False
    return True


def map_check(f: MonotoneMap, cap: int = REPORT_CAP) -> bool:
    """Scott-continuity: monotone and preserving directed suprema."""
    missing = [x for x in f.source.elements if x not in f.mapping]
    if missing:
        raise PartialMap(f"no image for {sorted(missing, key=_sort_key)}")
    for x in f.source.elements:
        f.target.index(f(x))
    monotone = is_monotone(f)
    preserving = preserves_directed_sups(f, cap)
    if monotone != preserving:
        raise AssertionError("monotonicity and sup-preservation disagree on a finite poset")
    return monotone and preserving
