"""The interval domain of closed rational intervals, and its lift with a bottom.

Intervals are ordered by reverse inclusion: ``x ⊑ y`` means ``y`` is the
sharper value.  All arithmetic is exact (:class:`fractions.Fraction`).
Every operation accepts :data:`BOT` as well, which stands for the whole real
line and sits below everything.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from itertools import combinations
from typing import Iterable, Union

from .errors import NotDirected, SchemaError, Unbounded


def to_fraction(value) -> Fraction:
    """Exact conversion from int, Fraction, float or a ``"p/q"``/decimal string."""
    if isinstance(value, bool):
        raise SchemaError(f"not a number: {value!r}")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise SchemaError(f"not a rational: {value!r}") from None
    raise SchemaError(f"not a number: {value!r}")


@dataclass(frozen=True, order=False)
class RatInterval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        lo, hi = to_fraction(self.lo), to_fraction(self.hi)
        if lo > hi:
            raise ValueError(f"empty interval [{lo}, {hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def is_sharp(self) -> bool:
        return self.lo == self.hi

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def __contains__(self, q) -> bool:
        return self.lo <= q <= self.hi

    def __repr__(self):
        return f"[{self.lo}, {self.hi}]"


class _Bottom:
    """The least element of the lifted domain (the whole real line)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "⊥"

    def __reduce__(self):
        return (_Bottom, ())


BOT = _Bottom()
IRBotElement = Union[RatInterval, _Bottom]


def interval(lo, hi) -> RatInterval:
    return RatInterval(to_fraction(lo), to_fraction(hi))


def embed_real(q) -> RatInterval:
    """The maximal element ``[q, q]``."""
    q = to_fraction(q)
    return RatInterval(q, q)


def leq(x: IRBotElement, y: IRBotElement) -> bool:
    """Reverse inclusion: ``x ⊇ y``."""
    if x is BOT:
        return True
    if y is BOT:
        return False
    return x.lo <= y.lo and y.hi <= x.hi


def way_below(x: IRBotElement, y: IRBotElement) -> bool:
    """``y`` lies in the interior of ``x``; the bottom is way below everything."""
    if x is BOT:
        return True
    if y is BOT:
        return False
    return x.lo < y.lo and y.hi < x.hi


def _proper(s: Iterable[IRBotElement]) -> list[RatInterval]:
    return [x for x in s if x is not BOT]


def _intersection(xs: list[RatInterval]) -> RatInterval | None:
    lo = max(x.lo for x in xs)
    hi = min(x.hi for x in xs)
    return RatInterval(lo, hi) if lo <= hi else None


def sup_directed(s: Iterable[IRBotElement]) -> IRBotElement:
    """Supremum of a finite directed family: the intersection.

    A finite family of intervals is directed exactly when its members overlap
    pairwise.
    """
    s = list(s)
    if not s:
        raise NotDirected("the empty family is not directed")
    xs = _proper(s)
    if not xs:
        return BOT
    for a, b in combinations(xs, 2):
        if max(a.lo, b.lo) > min(a.hi, b.hi):
            raise NotDirected(f"{a} and {b} are disjoint")
    return _intersection(xs)


def sup_bounded(s: Iterable[IRBotElement], lifted: bool = False) -> IRBotElement:
    """Supremum of a family with an upper bound (a common point).

    In the unlifted domain the family must be nonempty; with ``lifted=True``
    the empty family has supremum :data:`BOT`.
    """
    s = list(s)
    if not s:
        if lifted:
            return BOT
        raise Unbounded("the empty family has no supremum without a bottom element")
    xs = _proper(s)
    if not xs:
        return BOT
    out = _intersection(xs)
    if out is None:
        raise Unbounded("the intervals share no common point")
    return out


def meet(x: IRBotElement, y: IRBotElement) -> IRBotElement:
    """Greatest lower bound: the convex hull of the union."""
    if x is BOT or y is BOT:
        return BOT
    return RatInterval(min(x.lo, y.lo), max(x.hi, y.hi))


def meet_all(s: Iterable[IRBotElement]) -> IRBotElement:
    return reduce(meet, s)


def scott_basic_member(t: IRBotElement, witness: IRBotElement) -> bool:
    """``t`` lies in the basic Scott-open set of intervals way above ``witness``.

    For a proper witness ``[a, b]`` that set is the closed intervals inside
    the open interval ``(a, b)``.
    """
    return way_below(witness, t)


def approximating_chain(y: RatInterval, length: int) -> list[RatInterval]:
    """``[y.lo - 1/k, y.hi + 1/k]`` for ``k = 1..length``; each is way below ``y``."""
    return [RatInterval(y.lo - Fraction(1, k), y.hi + Fraction(1, k)) for k in range(1, length + 1)]


def interpolant(x: RatInterval, y: RatInterval) -> RatInterval:
    """Midpoint interval strictly between ``x`` and ``y`` when ``x ≪ y``."""
    return RatInterval((x.lo + y.lo) / 2, (y.hi + x.hi) / 2)


def _fmt(q: Fraction) -> str:
    return str(q)


def to_json(x: IRBotElement) -> dict:
    if x is BOT:
        return {"bot": True}
    return {"lo": _fmt(x.lo), "hi": _fmt(x.hi)}


def from_json(data, path: str = "$") -> IRBotElement:
    if not isinstance(data, dict):
        raise SchemaError("interval must be an object", path)
    if data.get("bot") is True:
        return BOT
    if "lo" not in data or "hi" not in data:
        raise SchemaError("interval needs 'lo' and 'hi'", path)
    lo = to_fraction(data["lo"])
    hi = to_fraction(data["hi"])
    if lo > hi:
        raise SchemaError(f"lo > hi ({lo} > {hi})", path)
    return RatInterval(lo, hi)
