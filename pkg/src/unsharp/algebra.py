"""Finite algebras over arbitrary signatures and their subalgebra posets.

Carrier elements are the indices ``0..n-1``.  Operation tables are numpy
integer arrays of shape ``(n,) * arity``; a constant is a 0-d array.  Terms
evaluate elementwise over arrays of valuations, which keeps exhaustive
equation checks fast.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, permutations
from typing import Iterable, Mapping, Sequence, Union

import numpy as np

from . import order
from .errors import SchemaError, SizeCapExceeded, UnboundVariable

#: brute-force subset enumeration is used up to this carrier size
BRUTE_FORCE_CAP = 12
#: maximum number of valuations a single ``satisfies`` call may enumerate
VALUATION_CAP = 10**6


@dataclass(frozen=True)
class Signature:
    symbols: tuple[tuple[str, int], ...]

    def __post_init__(self):
        names = [s for s, _ in self.symbols]
        if len(set(names)) != len(names):
            raise SchemaError("operation names must be distinct")
        if any(a < 0 for _, a in self.symbols):
            raise SchemaError("arities must be non-negative")

    def arity(self, name: str) -> int:
        for s, a in self.symbols:
            if s == name:
                return a
        raise SchemaError(f"unknown operation symbol {name!r}")


@dataclass(frozen=True, eq=False)
class FiniteAlgebra:
    carrier_size: int
    tables: Mapping[str, np.ndarray]
    names: tuple[str, ...] | None = None

    def __post_init__(self):
        n = self.carrier_size
        clean = {}
        for name, t in self.tables.items():
            t = np.asarray(t, dtype=np.int64)
            if t.ndim and t.shape != (n,) * t.ndim:
                raise SchemaError(f"table of {name!r} has shape {t.shape}, expected {(n,) * t.ndim}")
            if t.size and (t.min() < 0 or t.max() >= n):
                raise SchemaError(f"table of {name!r} has entries outside 0..{n - 1}")
            t.setflags(write=False)
            clean[name] = t
        object.__setattr__(self, "tables", clean)
        if self.names is not None and len(self.names) != n:
            raise SchemaError("names must label every carrier element")

    @property
    def signature(self) -> Signature:
        return Signature(tuple((k, t.ndim) for k, t in self.tables.items()))

    def name(self, i: int) -> str:
        return self.names[i] if self.names else str(i)

    def label(self, subset: Iterable[int]) -> str:
        return "{" + ",".join(self.name(i) for i in sorted(subset)) + "}"


# ------------------------------------------------------------------- terms


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class App:
    symbol: str
    args: tuple = ()


Term = Union[Var, App]


def parse_term(obj, path: str = "$") -> Term:
    """Nested-array syntax: ``"x"`` is a variable, ``["mul", t1, t2]`` an application.

    Constants are written as one-element lists, e.g. ``["e"]``.
    """
    if isinstance(obj, str):
        return Var(obj)
    if isinstance(obj, list) and obj and isinstance(obj[0], str):
        return App(obj[0], tuple(parse_term(a, f"{path}[{k + 1}]") for k, a in enumerate(obj[1:])))
    raise SchemaError("term must be a variable name or [symbol, args...]", path)


def term_to_json(t: Term):
    if isinstance(t, Var):
        return t.name
    return [t.symbol, *(term_to_json(a) for a in t.args)]


def variables(t: Term) -> list[str]:
    """Variable occurrences in left-to-right order (with repetitions)."""
    if isinstance(t, Var):
        return [t.name]
    out = []
    for a in t.args:
        out.extend(variables(a))
    return out


def check_arities(t: Term, sig: Signature) -> None:
    if isinstance(t, App):
        if sig.arity(t.symbol) != len(t.args):
            raise SchemaError(f"{t.symbol!r} applied to {len(t.args)} arguments, arity is {sig.arity(t.symbol)}")
        for a in t.args:
            check_arities(a, sig)


@dataclass(frozen=True)
class Equation:
    lhs: Term
    rhs: Term
    vars: tuple[str, ...]

    def __post_init__(self):
        declared = set(self.vars)
        for side in (self.lhs, self.rhs):
            extra = set(variables(side)) - declared
            if extra:
                raise SchemaError(f"undeclared variables {sorted(extra)}")


def equation_from_json(data, path: str = "$") -> Equation:
    if not isinstance(data, dict) or "lhs" not in data or "rhs" not in data:
        raise SchemaError("equation needs 'lhs' and 'rhs'", path)
    lhs = parse_term(data["lhs"], path + ".lhs")
    rhs = parse_term(data["rhs"], path + ".rhs")
    vs = data.get("vars")
    if vs is None:
        vs = sorted(set(variables(lhs)) | set(variables(rhs)))
    return Equation(lhs, rhs, tuple(vs))


def eval_term(a: FiniteAlgebra, t: Term, v: Mapping[str, int]) -> int:
    """Inductive evaluation of ``t`` under the valuation ``v``."""
    return int(_eval(a, t, {k: np.asarray(x) for k, x in v.items()}, ()))


def _eval(a: FiniteAlgebra, t: Term, env: Mapping[str, np.ndarray], shape: tuple) -> np.ndarray:
    if isinstance(t, Var):
        try:
            return env[t.name]
        except KeyError:
            raise UnboundVariable(t.name) from None
    table = a.tables.get(t.symbol)
    if table is None:
        raise SchemaError(f"unknown operation symbol {t.symbol!r}")
    if table.ndim != len(t.args):
        raise SchemaError(f"{t.symbol!r} applied to {len(t.args)} arguments, arity is {table.ndim}")
    if table.ndim == 0:
        return np.broadcast_to(table, shape)
    args = tuple(_eval(a, s, env, shape) for s in t.args)
    return table[args]


def linearity_check(e: Equation) -> bool:
    """Each variable occurs at most once on each side."""
    return all(len(vs) == len(set(vs)) for vs in (variables(e.lhs), variables(e.rhs)))


# ------------------------------------------------------------- subalgebras


def _images(a: FiniteAlgebra, members: np.ndarray) -> np.ndarray:
    out = []
    for t in a.tables.values():
        if t.ndim == 0:
            out.append(t.reshape(1))
        elif members.size:
            out.append(t[np.ix_(*[members] * t.ndim)].ravel())
    return np.unique(np.concatenate(out)) if out else np.empty(0, dtype=np.int64)


def generate(a: FiniteAlgebra, g: Iterable[int]) -> frozenset[int]:
    """Least subalgebra containing ``g``, by iterating images to a fixed point."""
    current = set(int(x) for x in g)
    for x in current:
        if not 0 <= x < a.carrier_size:
            raise SchemaError(f"element {x} outside the carrier")
    while True:
        members = np.fromiter(sorted(current), dtype=np.int64, count=len(current))
        nxt = current | set(_images(a, members).tolist())
        if nxt == current:
            return frozenset(current)
        current = nxt


def is_closed(a: FiniteAlgebra, b: Iterable[int]) -> bool:
    b = set(b)
    members = np.fromiter(sorted(b), dtype=np.int64, count=len(b))
    return set(_images(a, members).tolist()) <= b


def _subalgebras_closure(a: FiniteAlgebra) -> list[frozenset[int]]:
    # every subalgebra is reached from the least one by adding elements one by one
    start = generate(a, ())
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for b in frontier:
            for x in range(a.carrier_size):
                if x not in b:
                    c = generate(a, b | {x})
                    if c not in seen:
                        seen.add(c)
                        nxt.append(c)
        frontier = nxt
    return _sorted_subsets(seen)


def _subalgebras_brute(a: FiniteAlgebra, cap: int = BRUTE_FORCE_CAP) -> list[frozenset[int]]:
    if a.carrier_size > cap:
        raise SizeCapExceeded(f"brute force over 2^{a.carrier_size} subsets exceeds cap {cap}")
    found = []
    for m in range(1 << a.carrier_size):
        b = frozenset(i for i in range(a.carrier_size) if m >> i & 1)
        if is_closed(a, b):
            found.append(b)
    return _sorted_subsets(found)


def _sorted_subsets(subsets: Iterable[frozenset[int]]) -> list[frozenset[int]]:
    return sorted(subsets, key=lambda b: (len(b), sorted(b)))


@dataclass(frozen=True, eq=False)
class SubalgebraLattice:
    """A family of subalgebras ordered by inclusion, with its poset."""

    algebra: FiniteAlgebra
    members: tuple[frozenset[int], ...]
    poset: order.FinitePoset
    labels: Mapping[str, frozenset[int]] = field(repr=False)

    def label(self, b: Iterable[int]) -> str:
        return self.algebra.label(b)

    def meet(self, *bs: Iterable[int]) -> frozenset[int]:
        out = frozenset(range(self.algebra.carrier_size))
        for b in bs:
            out &= frozenset(b)
        return out

    def join(self, *bs: Iterable[int]) -> frozenset[int]:
        union = set()
        for b in bs:
            union |= set(b)
        return generate(self.algebra, union)


def _lattice(a: FiniteAlgebra, members: list[frozenset[int]]) -> SubalgebraLattice:
    labels = {a.label(b): b for b in members}
    edges = [(a.label(b), a.label(c)) for b in members for c in members if b <= c]
    poset = order.validate_poset(list(labels), edges)
    return SubalgebraLattice(a, tuple(members), poset, labels)


def enumerate_subalgebras(a: FiniteAlgebra, method: str = "closure",
                          cap: int = BRUTE_FORCE_CAP) -> SubalgebraLattice:
    """All subalgebras of ``a``, ordered by inclusion.

    ``method="closure"`` grows subalgebras by generating from one extra
    element at a time; ``method="brute"`` tests every subset for closure and
    serves as the independent oracle.
    """
    if method == "closure":
        members = _subalgebras_closure(a)
    elif method == "brute":
        members = _subalgebras_brute(a, cap)
    else:
        raise ValueError(f"unknown method {method!r}")
    return _lattice(a, members)


def satisfies(a: FiniteAlgebra, b: Iterable[int], e: Equation | Sequence[Equation],
              cap: int = VALUATION_CAP) -> bool:
    """Every valuation of the variables into ``b`` makes both sides equal.

    ``e`` may be a single equation or a system; the empty system is always
    satisfied.
    """
    system = [e] if isinstance(e, Equation) else list(e)
    b = sorted(set(b))
    for eq in system:
        k = len(eq.vars)
        count = len(b) ** k
        if count > cap:
            raise SizeCapExceeded(f"{count} valuations exceed cap {cap}")
        if not b and k:
            continue
        base = np.asarray(b, dtype=np.int64)
        if k:
            grids = np.meshgrid(*[base] * k, indexing="ij")
            env = {name: g.ravel() for name, g in zip(eq.vars, grids)}
            shape = (count,)
        else:
            env, shape = {}, ()
        lhs = _eval(a, eq.lhs, env, shape)
        rhs = _eval(a, eq.rhs, env, shape)
        if not np.array_equal(np.broadcast_to(lhs, shape), np.broadcast_to(rhs, shape)):
            return False
    return True


def sub_e_poset(a: FiniteAlgebra, es: Sequence[Equation], method: str = "closure") -> SubalgebraLattice:
    """The subalgebras satisfying every equation of ``es``, as an induced subposet."""
    full = enumerate_subalgebras(a, method)
    members = [b for b in full.members if satisfies(a, b, es)]
    return _lattice(a, members)


def is_finitely_generated(a: FiniteAlgebra, c: Iterable[int]) -> bool:
    # finite carriers make every subalgebra generated by its own (finite) elements
    return generate(a, c) == frozenset(c)


def way_below_fg(lattice: SubalgebraLattice, c: Iterable[int], b: Iterable[int]) -> bool:
    """Inclusion plus finite generation; on a finite algebra the second part always holds."""
    c, b = frozenset(c), frozenset(b)
    return c <= b and is_finitely_generated(lattice.algebra, c)


def sub_fin(a: FiniteAlgebra, b: Iterable[int]) -> list[frozenset[int]]:
    """Subalgebras generated by finite subsets of ``b``."""
    b = sorted(set(b))
    found = {generate(a, g) for r in range(len(b) + 1) for g in combinations(b, r)}
    return _sorted_subsets(found)


@dataclass(frozen=True)
class SubEReport:
    size: int
    downward_closed: bool
    directed_sups_closed: bool
    bounded_complete: bool
    algebraic: bool
    complete_lattice: bool
    linear: bool

    def to_json(self) -> dict:
        return dict(self.__dict__)


def sub_e_report(a: FiniteAlgebra, es: Sequence[Equation]) -> SubEReport:
    """Check that the equational subposet is a Scott-closed, bounded-complete algebraic domain."""
    full = enumerate_subalgebras(a)
    sub = sub_e_poset(a, es)
    keep = set(sub.members)
    downward = all(c in keep for b in keep for c in full.members if c <= b)
    # directed families inside the subposet: their unions must satisfy the equations again
    directed_ok = True
    members = list(sub.members)
    p = sub.poset
    if len(members) > order.REPORT_CAP:
        raise SizeCapExceeded("too many subalgebras for the directed-family check")
    for r in range(1, len(members) + 1):
        for fam in combinations(members, r):
            if order.is_directed(p, [a.label(b) for b in fam]):
                union = frozenset().union(*fam)
                if union not in keep or not satisfies(a, union, es):
                    directed_ok = False
    report = order.domain_report(p)
    return SubEReport(
        size=len(members),
        downward_closed=downward,
        directed_sups_closed=directed_ok,
        bounded_complete=report.is_bounded_complete,
        algebraic=report.is_algebraic,
        complete_lattice=report.is_complete_lattice,
        linear=all(linearity_check(e) for e in es),
    )


# ---------------------------------------------------------- example algebras


def cyclic_group(n: int) -> FiniteAlgebra:
    """``(Z_n; +, 0, -)``."""
    i = np.arange(n)
    return FiniteAlgebra(n, {
        "add": (i[:, None] + i[None, :]) % n,
        "zero": np.array(0),
        "neg": (-i) % n,
    })


def group_from_elements(elements: Sequence, mul, identity, names: Sequence[str] | None = None) -> FiniteAlgebra:
    """Group algebra ``(G; mul, e, inv)`` from an explicit element list."""
    index = {g: k for k, g in enumerate(elements)}
    n = len(elements)
    table = np.array([[index[mul(x, y)] for y in elements] for x in elements])
    e = index[identity]
    inv = np.array([int(np.nonzero(table[k] == e)[0][0]) for k in range(n)])
    return FiniteAlgebra(n, {"mul": table, "e": np.array(e), "inv": inv},
                         tuple(names) if names else None)


def symmetric_group(k: int) -> FiniteAlgebra:
    """``S_k`` acting on ``0..k-1``; ``mul(p, q)`` applies ``q`` first."""
    perms = sorted(permutations(range(k)))
    compose = lambda p, q: tuple(p[q[i]] for i in range(k))  # noqa: E731
    names = [_cycle_name(p) for p in perms]
    return group_from_elements(perms, compose, tuple(range(k)), names)


def dihedral_group(m: int) -> FiniteAlgebra:
    """Symmetries of the regular m-gon as pairs ``(r, s)`` meaning ``rot^r refl^s``."""
    elems = [(r, s) for s in (0, 1) for r in range(m)]

    def mul(x, y):
        r1, s1 = x
        r2, s2 = y
        return ((r1 + (-r2 if s1 else r2)) % m, (s1 + s2) % 2)

    names = [f"r{r}" if not s else f"s{r}" for r, s in elems]
    return group_from_elements(elems, mul, (0, 0), names)


def _cycle_name(p: tuple) -> str:
    seen, cycles = set(), []
    for start in range(len(p)):
        if start in seen or p[start] == start:
            seen.add(start)
            continue
        cyc, x = [], start
        while x not in seen:
            seen.add(x)
            cyc.append(str(x + 1))
            x = p[x]
        cycles.append("(" + "".join(cyc) + ")")
    return "".join(cycles) or "e"


def commutativity(op: str = "mul") -> Equation:
    x, y = Var("x"), Var("y")
    return Equation(App(op, (x, y)), App(op, (y, x)), ("x", "y"))


# ------------------------------------------------------------------- JSON


def algebra_from_json(data, path: str = "$") -> FiniteAlgebra:
    if not isinstance(data, dict):
        raise SchemaError("algebra must be an object", path)
    n = data.get("carrier")
    if not isinstance(n, int) or isinstance(n, bool) or n < 0:
        raise SchemaError("'carrier' must be a non-negative integer", path + ".carrier")
    ops = data.get("ops")
    if not isinstance(ops, dict):
        raise SchemaError("'ops' must be an object", path + ".ops")
    tables = {}
    for name, op_def in ops.items():
        p = f"{path}.ops.{name}"
        if not isinstance(op_def, dict) or "arity" not in op_def or "table" not in op_def:
            raise SchemaError("operation needs 'arity' and 'table'", p)
        arity = op_def["arity"]
        try:
            t = np.asarray(op_def["table"], dtype=np.int64)
        except (TypeError, ValueError):
            raise SchemaError("table must be a (nested) integer array", p + ".table") from None
        if t.ndim != arity:
            raise SchemaError(f"table has {t.ndim} dimensions, arity is {arity}", p + ".table")
        tables[name] = t
    names = data.get("names")
    return FiniteAlgebra(n, tables, tuple(names) if names else None)


def algebra_to_json(a: FiniteAlgebra) -> dict:
    out = {"carrier": a.carrier_size,
           "ops": {k: {"arity": int(t.ndim), "table": t.tolist()} for k, t in a.tables.items()}}
    if a.names:
        out["names"] = list(a.names)
    return out


def lattice_to_json(lat: SubalgebraLattice) -> dict:
    return {
        "poset": lat.poset.to_json(),
        "members": {lat.label(b): sorted(b) for b in lat.members},
    }
