from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from unsharp import contexts as cx
from unsharp import dasein as ds
from unsharp import interval as ir
from unsharp import oracles, order, sampling
from unsharp.contexts import Context
from unsharp.errors import NotDirected, NotDownwardClosed, NotHermitian, NotOrderPreserving, NotProjection

A123 = np.diag([1.0, 2.0, 3.0])
V1_23 = Context.diagonal([[0], [1, 2]])
X = np.array([[0.0, 1.0], [1.0, 0.0]])


def cell_index(v, diag):
    target = np.diag(np.asarray(diag, dtype=float))
    return next(i for i, q in enumerate(v.cells) if np.allclose(q, target))


def test_spectral_family_examples():
    jumps = ds.spectral_family(A123).jumps()
    assert [lam for lam, _ in jumps] == pytest.approx([1, 2, 3])
    assert np.allclose(jumps[0][1], np.diag([1, 0, 0]))
    assert np.allclose(jumps[1][1], np.diag([1, 1, 0]))
    assert np.allclose(jumps[2][1], np.eye(3))
    (lam,  e), = ds.spectral_family(np.eye(3)).jumps()
    assert lam == pytest.approx(1) and np.allclose(e, np.eye(3))
    (l0, e0), (l1, e1) = ds.spectral_family(X).jumps()
    assert (l0, l1) == pytest.approx((-1, 1))
    assert np.allclose(e0, (np.eye(2) - X) / 2) and np.allclose(e1, np.eye(2))
    with pytest.raises(NotHermitian):
        ds.spectral_family(np.array([[0, 1], [0, 0]]))


def test_spectral_leq_examples():
    assert ds.spectral_leq(A123, A123)
    assert ds.spectral_leq(np.diag([1.0, 2, 2]), A123)
    assert not ds.spectral_leq(A123, np.diag([1.0, 2, 2]))
    assert ds.spectral_leq(-np.eye(2), X) and ds.spectral_leq(X, np.eye(2))
    # X and diag(−1, 1) share a spectrum but neither dominates the other
    assert not ds.spectral_leq(X, np.diag([-1.0, 1])) and not ds.spectral_leq(np.diag([-1.0, 1]), X)


def test_dasein_projection_examples():
    p = np.diag([1.0, 0, 0])
    for mode in ds.MODES:
        assert np.allclose(ds.dasein_projection(p, V1_23, mode), p)
    q = np.diag([1.0, 1, 0])
    bot = Context.bottom(3)
    assert np.allclose(ds.dasein_projection(q, bot, "outer"), np.eye(3))
    assert np.allclose(ds.dasein_projection(q, bot, "inner"), 0)
    assert np.allclose(ds.dasein_projection(q, V1_23, "outer"), np.eye(3))
    assert np.allclose(ds.dasein_projection(q, V1_23, "inner"), p)
    with pytest.raises(NotProjection):
        ds.dasein_projection(np.diag([2.0, 0, 0]), V1_23, "inner")


def test_dasein_worked_example():
    assert np.allclose(ds.dasein_selfadjoint(A123, V1_23, "outer"), np.diag([1, 3, 3]))
    assert np.allclose(ds.dasein_selfadjoint(A123, V1_23, "inner"), np.diag([1, 2, 2]))
    for mode in ds.MODES:
        assert oracles.dasein_brute(A123, V1_23, mode) == ds.dasein_coefficients(A123, V1_23, mode)


def test_dasein_fixed_point_and_bottom():
    a = np.diag([5.0, -1.0, -1.0])
    for mode in ds.MODES:
        assert np.allclose(ds.dasein_selfadjoint(a, V1_23, mode), a)
    bot = Context.bottom(2)
    assert np.allclose(ds.dasein_selfadjoint(X, bot, "inner"), -np.eye(2))
    assert np.allclose(ds.dasein_selfadjoint(X, bot, "outer"), np.eye(2))
    assert oracles.dasein_brute(X, bot, "inner") == pytest.approx([-1])


def test_value_interval_examples():
    upper = ds.Character(V1_23, cell_index(V1_23, [0, 1, 1]))
    lower = ds.Character(V1_23, cell_index(V1_23, [1, 0, 0]))
    assert ds.value_interval(A123, V1_23, upper) == ir.RatInterval(F(2), F(3))
    assert ds.value_interval(A123, V1_23, lower) == ir.RatInterval(F(1), F(1))
    bot = Context.bottom(3)
    assert ds.value_interval(A123, bot, ds.Character(bot, 0)) == ir.RatInterval(F(1), F(3))


def test_character_evaluation_and_restriction():
    chi = ds.Character(V1_23, cell_index(V1_23, [0, 1, 1]))
    assert chi(np.diag([7.0, 4.0, 4.0])) == pytest.approx(4)
    fine = Context.diagonal([[0], [1], [2]])
    e3 = ds.Character(fine, cell_index(fine, [0, 0, 1]))
    assert e3.restrict(V1_23).index == chi.index
    with pytest.raises(ValueError):
        chi.restrict(fine)
    with pytest.raises(IndexError):
        ds.Character(V1_23, 2)


@pytest.fixture
def m3_fragment():
    groups = ([[0], [1], [2]], [[0, 1], [2]], [[0, 2], [1]], [[0], [1, 2]])
    return cx.fragment_build([Context.diagonal(gs) for gs in groups])


def test_section_at_partition_lattice(m3_fragment):
    frag = m3_fragment
    top_ctx = Context.diagonal([[0], [1], [2]])
    top = frag.label_of(top_ctx)
    chi = ds.Character(frag[top], cell_index(frag[top], [0, 0, 1]))
    s = ds.section_at(A123, frag, top, chi)
    at = lambda gs: s[frag.label_of(Context.diagonal(gs))]
    assert at([[0], [1], [2]]) == ir.RatInterval(F(3), F(3))
    assert at([[0, 1], [2]]) == ir.RatInterval(F(3), F(3))
    assert at([[0, 2], [1]]) == ir.RatInterval(F(1), F(3))
    assert at([[0, 1, 2]]) == ir.RatInterval(F(1), F(3))
    for x, y in frag.poset.relation:
        assert ir.leq(s[x], s[y])
    assert order.map_check(s.as_map())

    mu, nu = ds.section_decompose(s)
    mid = frag.label_of(Context.diagonal([[0, 2], [1]]))
    assert mu[top] == 3 and mu[mid] == 1
    assert set(nu.values()) == {F(3)}
    back = ds.section_recompose(frag.poset, mu, nu)
    assert back.intervals == s.intervals


def test_section_at_scalar_and_singleton(m3_fragment):
    frag = m3_fragment
    top = frag.label_of(Context.diagonal([[0], [1], [2]]))
    s = ds.section_at(2.5 * np.eye(3), frag, top, ds.Character(frag[top], 1))
    assert set(s.intervals.values()) == {ir.RatInterval(F(5, 2), F(5, 2))}
    mu, nu = ds.section_decompose(s)
    assert mu == nu and set(mu.values()) == {F(5, 2)}

    single = cx.fragment_build([Context.bottom(3)])
    s = ds.section_at(A123, single, "V0", ds.Character(single["V0"], 0))
    assert s.intervals == {"V0": ir.RatInterval(F(1), F(3))}


def test_section_validation():
    p = order.validate_poset(["a", "b"], [("a", "b")])
    with pytest.raises(NotDownwardClosed):
        ds.GlobalSection(p, {"b": ir.RatInterval(F(0), F(1))})
    with pytest.raises(NotOrderPreserving):
        ds.GlobalSection(p, {"a": ir.RatInterval(F(0), F(1)), "b": ir.RatInterval(F(0), F(2))})


def test_pointwise_sup_examples():
    p = order.validate_poset(["a", "b"], [("a", "b")])
    s = ds.GlobalSection(p, {"a": ir.RatInterval(F(0), F(4)), "b": ir.RatInterval(F(1), F(3))})
    assert ds.section_pointwise_sup([s]).intervals == s.intervals
    t = ds.GlobalSection(p, {"a": ir.RatInterval(F(1), F(3)), "b": ir.RatInterval(F(2), F(3))})
    sup = ds.section_pointwise_sup([s, t])
    assert sup.intervals == t.intervals
    u = ds.GlobalSection(p, {"a": ir.RatInterval(F(0), F(4)), "b": ir.RatInterval(F(0), F(1, 2))})
    with pytest.raises(NotDirected):
        ds.section_pointwise_sup([s, u])


def test_decompose_rejects_bottom_interval():
    p = order.validate_poset(["a"], [])
    with pytest.raises(ValueError):
        ds.section_decompose(ds.GlobalSection(p, {"a": ir.BOT}))


def test_glue_and_restrict(m3_fragment):
    frag = m3_fragment
    top = frag.label_of(Context.diagonal([[0], [1], [2]]))
    s = ds.section_at(A123, frag, top, ds.Character(frag[top], 0))
    local = {lab: s.restrict(lab) for lab in frag.labels()}
    assert ds.glue(frag.poset, local).intervals == s.intervals


# ------------------------------------------------------------- properties


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 4))
def test_oracle_equivalence(seed, dim):
    g = np.random.default_rng(seed)
    a, spectrum = sampling.random_hermitian(g, dim)
    frag = sampling.operator_fragment(g, a)
    fam = ds.spectral_family(a)
    for lab in frag.labels():
        v = frag[lab]
        for mode in ds.MODES:
            got = ds.dasein_coefficients(a, v, mode, family=fam)
            assert got == pytest.approx(oracles.dasein_brute(a, v, mode, family=fam))
        for i in range(len(v)):
            iv = ds.value_interval(a, v, ds.Character(v, i), family=fam)
            assert iv.lo in spectrum and iv.hi in spectrum
        if v.contains_operator(a):
            inner = ds.dasein_coefficients(a, v, "inner", family=fam)
            assert inner == ds.dasein_coefficients(a, v, "outer", family=fam)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10**6), st.integers(2, 4))
def test_dasein_monotone_in_context(seed, dim):
    g = np.random.default_rng(seed)
    a, _ = sampling.random_hermitian(g, dim)
    frag = sampling.operator_fragment(g, a)
    fam = ds.spectral_family(a)
    ops = {lab: {m: ds.dasein_selfadjoint(a, frag[lab], m, family=fam) for m in ds.MODES}
           for lab in frag.labels()}
    for lab in frag.labels():
        assert ds.spectral_leq(ops[lab]["inner"], a) and ds.spectral_leq(a, ops[lab]["outer"])
    for x, y in frag.poset.relation:
        assert ds.spectral_leq(ops[x]["inner"], ops[y]["inner"])
        assert ds.spectral_leq(ops[y]["outer"], ops[x]["outer"])


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**6))
def test_sections_monotone_iff_scott_continuous(seed):
    g = np.random.default_rng(seed)
    poset = sampling.random_poset(g, 6)
    s = sampling.random_section(g, poset)
    assert order.map_check(s.as_map())
    mu, nu = ds.section_decompose(s)
    assert ds.section_recompose(poset, mu, nu).intervals == s.intervals


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**6))
def test_directed_families_have_sections_as_sups(seed):
    g = np.random.default_rng(seed)
    poset = sampling.random_poset(g, 5)
    fam = sampling.directed_section_family(g, poset)
    sup = ds.section_pointwise_sup(fam)
    assert all(s.leq(sup) for s in fam)
    for x in sup.domain:
        assert sup[x] == oracles.interval_lub_brute([s[x] for s in fam])
