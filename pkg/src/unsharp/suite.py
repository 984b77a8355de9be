"""The seeded acceptance battery: one function per criterion, aggregated by :func:`run_all`."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

import numpy as np

from . import algebra as ua
from . import interval as ir
from . import oracles, order, sampling
from . import partitions as pt
from .contexts import (
    DEFAULT_TOL,
    Context,
    apply_hom,
    compose,
    context_equal,
    context_join,
    context_leq,
    directed_sup_contexts,
    fragment_build,
    identity_hom,
)
from .dasein import (
    Character,
    GlobalSection,
    dasein_coefficients,
    section_at,
    section_decompose,
    section_pointwise_sup,
    section_recompose,
    spectral_family,
    value_interval,
)

MAX_FAILURES = 5


@dataclass
class Result:
    number: int
    name: str
    checks: int = 0
    failed: int = 0
    failures: list = field(default_factory=list)

    def check(self, ok: bool, what) -> None:
        self.checks += 1
        if not ok:
            self.failed += 1
            if len(self.failures) < MAX_FAILURES:
                self.failures.append(what)

    @property
    def passed(self) -> bool:
        return self.checks > 0 and self.failed == 0

    def to_json(self) -> dict:
        return {
            "criterion": self.number,
            "name": self.name,
            "checks": self.checks,
            "passed": self.passed,
            "failed": self.failed,
            "failures": self.failures,
        }


def _g(seed: int, k: int) -> np.random.Generator:
    return np.random.default_rng([seed, k])


# ---------------------------------------------------------------- criteria


def interval_laws(seed: int, n: int = 1000) -> Result:
    r = Result(1, "interval-domain laws")
    g = _g(seed, 1)
    xs = [sampling.random_interval(g) for _ in range(n)]
    for i in range(n):
        x, y, z = xs[i], xs[(i + 1) % n], xs[(i + 7) % n]
        if ir.way_below(x, y):
            r.check(ir.leq(x, y), ["way_below without leq", repr(x), repr(y)])
            m = ir.interpolant(x, y)
            r.check(ir.way_below(x, m) and ir.way_below(m, y), ["interpolation", repr(x), repr(y)])
        r.check(ir.meet(x, y) == ir.meet(y, x), ["meet commutative", repr(x), repr(y)])
        r.check(ir.meet(x, x) == x, ["meet idempotent", repr(x)])
        r.check(ir.meet(ir.meet(x, y), z) == ir.meet(x, ir.meet(y, z)), ["meet associative", repr(x)])
        r.check(ir.leq(ir.meet(x, y), x) and ir.leq(ir.meet(x, y), y), ["meet is a lower bound", repr(x)])
    # directed families: intervals sharing a common point
    for _ in range(n // 4):
        p = sampling.random_rational(g)
        fam = []
        for _ in range(int(g.integers(1, 6))):
            a, b = sampling.random_rational(g, 0, 5), sampling.random_rational(g, 0, 5)
            fam.append(ir.RatInterval(p - abs(a), p + abs(b)))
        r.check(ir.sup_directed(fam) == oracles.interval_lub_brute(fam), ["sup_directed", [repr(x) for x in fam]])
    r.check(ir.way_below(ir.BOT, ir.BOT) and ir.sup_directed([ir.BOT]) is ir.BOT, "bottom laws")
    return r


def interval_points(seed: int) -> Result:
    r = Result(2, "interval point checks")
    r.check(ir.way_below(ir.interval(0, 3), ir.interval(1, 2)), "[0,3] << [1,2]")
    got = ir.sup_directed([ir.interval(0, 3), ir.interval(1, 3), ir.interval(1, "5/2")])
    r.check(got == ir.interval(1, Fraction(5, 2)), ["intersection", repr(got)])
    r.check(ir.scott_basic_member(ir.interval(1, 2), ir.interval(0, 3)), "[1,2] in the basic open of [0,3]")
    return r


def poset_collapse(seed: int, n: int = 500) -> Result:
    r = Result(3, "finite-poset collapse")
    g = _g(seed, 3)
    for k in range(n):
        p = sampling.random_poset(g, 7)
        rep = order.domain_report(p)
        r.check(rep.way_below == p.relation, ["way_below differs from leq", k])
        r.check(rep.is_continuous and rep.is_algebraic, ["not continuous/algebraic", k])
        r.check(rep.is_finitely_bounded_complete == rep.is_bounded_complete, ["finite vs full bounded completeness", k])
        r.check(rep.is_almost_finitely_bounded_complete == rep.is_almost_bounded_complete,
                ["almost variants disagree", k])
        x, y = p.elements[int(g.integers(len(p)))], p.elements[int(g.integers(len(p)))]
        r.check(order.way_below(p, x, y) == order.way_below(p, x, y, method="order"), ["direct way_below", k])
    return r


def universal_algebra(seed: int) -> Result:
    r = Result(4, "subalgebra lattices")
    z4 = ua.cyclic_group(4)
    for method in ("closure", "brute"):
        r.check(len(ua.enumerate_subalgebras(z4, method).members) == 3, ["|Sub Z4|", method])
    s3 = ua.symmetric_group(3)
    comm = [ua.commutativity()]
    r.check(len(ua.sub_e_poset(s3, comm).members) == 5, "|Sub S3 / commutative|")
    brute = [b for b in ua.enumerate_subalgebras(s3, "brute").members if ua.satisfies(s3, b, comm)]
    r.check(len(brute) == 5, "|Sub S3 / commutative| by subset search")
    groups = {"S3": s3, "D4": ua.dihedral_group(4), "Z6": ua.cyclic_group(6)}
    for name, a in groups.items():
        lat = ua.enumerate_subalgebras(a)
        other = ua.enumerate_subalgebras(a, "brute")
        r.check(set(lat.members) == set(other.members), ["closure vs brute", name])
        rep = order.domain_report(lat.poset)
        r.check(rep.is_complete_lattice, ["complete lattice", name])
        r.check(rep.is_algebraic, ["algebraic", name])
        op = "add" if name == "Z6" else "mul"
        sub = ua.sub_e_report(a, [ua.commutativity(op)])
        r.check(sub.bounded_complete and sub.algebraic, ["bounded-complete algebraic", name])
        r.check(sub.downward_closed and sub.directed_sups_closed, ["closed under subalgebras and directed unions", name])
    return r


def matrix_contexts(seed: int, n_frag: int = 100, n_hom: int = 100, n_chain: int = 100) -> Result:
    r = Result(5, "matrix context posets and functor")
    g = _g(seed, 5)
    for k in range(n_frag):
        frag = sampling.random_fragment(g, int(g.integers(2, 5)))
        rep = order.domain_report(frag.poset)
        r.check(rep.is_bounded_complete and rep.is_algebraic, ["fragment report", k])
        # every two-element chain of the fragment
        for a, b in combinations(frag.labels(), 2):
            if frag.poset.leq(a, b) or frag.poset.leq(b, a):
                top = b if frag.poset.leq(a, b) else a
                got = directed_sup_contexts([frag[a], frag[b]])
                r.check(context_equal(got, frag[top]), ["fragment chain sup", k, a, b])
    for k in range(n_chain):
        chain = sampling.random_diagonal_chain(g, int(g.integers(2, 6)))
        got = directed_sup_contexts(chain)
        joined = chain[0]
        for v in chain[1:]:
            joined = context_join(joined, v)
        r.check(context_equal(got, chain[-1]) and context_equal(joined, chain[-1]), ["diagonal chain", k])
    for k in range(n_hom):
        blocks = [(1, 1), (2,), (1, 2), (1, 1, 1), (3,)][int(g.integers(5))]
        perm = bool(k % 2 == 0)
        psi = sampling.random_hom(g, blocks, permutation=perm, min_mult=0 if len(blocks) > 1 else 1)
        phi = sampling.random_hom(g, (psi.target_dim,), permutation=perm)
        v = Context.diagonal(sampling.random_groups(g, sum(blocks))) if perm else sampling.random_block_context(g, blocks)
        ident = apply_hom(identity_hom(psi.source_dim, blocks), v)
        left = apply_hom(compose(phi, psi), v)
        right = apply_hom(phi, apply_hom(psi, v))
        if perm:
            ok_id = len(ident) == len(v) and all(np.array_equal(a, b) for a, b in zip(ident.cells, v.cells))
            ok_comp = len(left) == len(right) and all(np.array_equal(a, b) for a, b in zip(left.cells, right.cells))
        else:
            ok_id, ok_comp = context_equal(ident, v), context_equal(left, right)
        r.check(ok_id, ["identity law", k])
        r.check(ok_comp, ["composition law", k])
        # monotone on the down-set of v
        w = pt_coarsening(g, v)
        r.check(context_leq(apply_hom(psi, w), apply_hom(psi, v)), ["monotone", k])
    return r


def pt_coarsening(g: np.random.Generator, v: Context) -> Context:
    """Random coarsening of a context by merging cells."""
    merge = sampling.random_groups(g, len(v))
    return Context(tuple(sum(v.cells[i] for i in block) for block in merge), v.tol)


def daseinisation(seed: int, n: int = 50) -> Result:
    r = Result(6, "daseinisation oracle")
    g = _g(seed, 6)
    a = np.diag([1.0, 2.0, 3.0]).astype(complex)
    v = Context.diagonal([[0], [1, 2]])
    r.check(np.allclose(_dasein(a, v, "inner"), np.diag([1, 2, 2])), "worked inner")
    r.check(np.allclose(_dasein(a, v, "outer"), np.diag([1, 3, 3])), "worked outer")
    r.check(value_interval(a, v, Character(v, _cell_index(v, 1))) == ir.interval(2, 3), "worked [2,3]")
    r.check(value_interval(a, v, Character(v, _cell_index(v, 0))) == ir.interval(1, 1), "worked [1,1]")
    for k in range(n):
        dim = int(g.integers(2, 5))
        a, spectrum = sampling.random_hermitian(g, dim)
        fam = spectral_family(a)
        frag = sampling.operator_fragment(g, a)
        for lab in frag.labels():
            ctx = frag[lab]
            for mode in ("inner", "outer"):
                fast = dasein_coefficients(a, ctx, mode, family=fam)
                slow = oracles.dasein_brute(a, ctx, mode, family=fam)
                r.check(np.allclose(fast, slow, atol=DEFAULT_TOL, rtol=0), ["oracle", k, lab, mode])
            sharp = ctx.contains_operator(a)
            for i in range(len(ctx)):
                iv = value_interval(a, ctx, Character(ctx, i), family=fam)
                r.check(iv.lo in spectrum and iv.hi in spectrum, ["endpoint outside spectrum", k, lab])
                if sharp:
                    r.check(iv.is_sharp, ["not sharp in a context containing A", k, lab])
            for i in range(len(ctx)):
                try:
                    section_at(a, frag, lab, Character(ctx, i))
                    r.check(True, None)
                except ValueError as e:
                    r.check(False, ["nesting", k, lab, str(e)])
    return r


def _dasein(a, v, mode):
    c = dasein_coefficients(a, v, mode)
    return sum(x * q for x, q in zip(c, v.cells))


def _cell_index(v: Context, basis_index: int) -> int:
    return next(i for i, q in enumerate(v.cells) if q[basis_index, basis_index].real > 0.5)


def section_dcpo(seed: int, n: int = 40) -> Result:
    r = Result(7, "section dcpo shadow")
    g = _g(seed, 7)
    for k in range(n):
        frag = sampling.random_fragment(g, int(g.integers(2, 5)))
        fam = sampling.directed_section_family(g, frag.poset)
        try:
            s = section_pointwise_sup(fam)
            r.check(all(t.leq(s) for t in fam), ["sup is not an upper bound", k])
        except ValueError as e:
            r.check(False, ["pointwise sup", k, str(e)])
        for t in fam:
            mu, nu = section_decompose(t)
            back = section_recompose(t.poset, mu, nu)
            r.check(back.intervals == t.intervals, ["round trip", k])
            ok = all(mu[x] <= mu[y] and nu[x] >= nu[y] for x, y in t.poset.relation)
            r.check(ok, ["endpoint monotonicity", k])
        r.check(order.map_check(fam[0].as_map()), ["section is not Scott-continuous", k])
    return r


def sec6(seed: int, bound: int = 128) -> Result:
    r = Result(8, "non-continuity witness")
    cert = pt.sec6_witness(bound)
    for part in cert.parts:
        r.check(part.passed, ["witness part failed", part.name])
    mutants = {
        "singleton_split": (pt.NatPartition((pt.finite(1), pt.ap(2, 1))), "not_below_members"),
        "pair_split": (pt.NatPartition((pt.finite(1, 2), pt.ap(3, 1))), "not_below_members"),
        "three_cells": (pt.NatPartition((pt.ap(2, 2), pt.finite(1), pt.ap(3, 2))), "atom"),
    }
    for name, (ve, expected) in mutants.items():
        c = pt.sec6_witness(bound, ve)
        r.check(c.first_failing_part == expected, ["mutant", name, c.first_failing_part])
    n = 16
    truncs = {j: pt.truncate(pt.make_context("vj", j), n) for j in range(0, 16)}
    truncs["ve"] = pt.truncate(pt.make_context("ve"), n)
    symbolic = {j: pt.make_context("vj", j) for j in range(0, 16)}
    symbolic["ve"] = pt.make_context("ve")
    for a, b in combinations(list(truncs), 2):
        for x, y in ((a, b), (b, a)):
            if pt.refines_leq(symbolic[x], symbolic[y]):
                r.check(context_leq(truncs[x], truncs[y]), ["truncation not monotone", str(x), str(y)])
    frag = fragment_build([truncs[j] for j in range(0, 16)], close_under_meets=False)
    labels = frag.labels()
    chain = len(labels) == 16 and all(frag.poset.leq(x, y) or frag.poset.leq(y, x) for x, y in combinations(labels, 2))
    r.check(chain, "truncations form a 16-element chain")
    return r


CRITERIA = [interval_laws, interval_points, poset_collapse, universal_algebra,
            matrix_contexts, daseinisation, section_dcpo, sec6]


def run_all(seed: int = 0) -> dict:
    results = [c(seed) for c in CRITERIA]
    return {
        "seed": seed,
        "criteria": [res.to_json() for res in results],
        "passed": all(res.passed for res in results),
    }
