import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from unsharp import algebra as ua
from unsharp import order
from unsharp.errors import SchemaError, SizeCapExceeded, UnboundVariable

x, y, z = ua.Var("x"), ua.Var("y"), ua.Var("z")


def _idx(a, name):
    return a.names.index(name)


def test_eval_term_examples():
    z3 = ua.cyclic_group(3)
    assert ua.eval_term(z3, ua.App("add", (x, y)), {"x": 1, "y": 2}) == 0
    assert ua.eval_term(z3, x, {"x": 2}) == 2
    nested = ua.parse_term(["add", ["add", "x", "y"], "z"])
    assert ua.eval_term(z3, nested, {"x": 1, "y": 1, "z": 2}) == 1
    with pytest.raises(UnboundVariable):
        ua.eval_term(z3, x, {})


def test_generate_examples():
    z6 = ua.cyclic_group(6)
    assert ua.generate(z6, {2}) == {0, 2, 4}
    assert ua.generate(z6, set()) == {0}
    assert ua.generate(z6, range(6)) == frozenset(range(6))


@settings(max_examples=50, deadline=None)
@given(st.sets(st.integers(0, 7)), st.sets(st.integers(0, 7)))
def test_generate_is_closure_operator(g, h):
    a = ua.dihedral_group(4)
    cg = ua.generate(a, g)
    assert g <= cg
    assert ua.generate(a, cg) == cg
    assert ua.is_closed(a, cg)
    if g <= h:
        assert cg <= ua.generate(a, h)


def test_sub_z4_chain():
    for method in ("closure", "brute"):
        lat = ua.enumerate_subalgebras(ua.cyclic_group(4), method)
        assert [sorted(b) for b in lat.members] == [[0], [0, 2], [0, 1, 2, 3]]
        p = lat.poset
        assert all(p.leq(u, v) or p.leq(v, u) for u, v in itertools.combinations(p.elements, 2))


@pytest.mark.parametrize("name,factory,count", [
    ("S3", lambda: ua.symmetric_group(3), 6),
    ("D4", lambda: ua.dihedral_group(4), 10),
    ("Z6", lambda: ua.cyclic_group(6), 4),
])
def test_subalgebra_lattice(name, factory, count):
    a = factory()
    lat = ua.enumerate_subalgebras(a)
    assert len(lat.members) == count
    assert set(lat.members) == set(ua.enumerate_subalgebras(a, "brute").members)
    top = frozenset(range(a.carrier_size))
    assert top in lat.members
    rep = order.domain_report(lat.poset)
    assert rep.is_complete_lattice and rep.is_algebraic
    assert rep.compact_elements == frozenset(lat.poset.elements)
    for b, c in itertools.combinations(lat.members, 2):
        m = lat.meet(b, c)
        assert m == b & c and m in lat.members
        lowers = [u for u in lat.members if u <= b and u <= c]
        assert all(u <= m for u in lowers)
        j = lat.join(b, c)
        uppers = [u for u in lat.members if b <= u and c <= u]
        assert j in uppers and all(j <= u for u in uppers)


def test_directed_join_is_union():
    a = ua.dihedral_group(4)
    lat = ua.enumerate_subalgebras(a)
    members = list(lat.members)
    for r in (2, 3):
        for fam in itertools.combinations(members, r):
            if order.is_directed(lat.poset, [lat.label(b) for b in fam]):
                assert lat.join(*fam) == frozenset().union(*fam)


def test_satisfies_examples():
    s3 = ua.symmetric_group(3)
    comm = ua.commutativity()
    assert ua.satisfies(s3, {_idx(s3, "e"), _idx(s3, "(12)")}, comm)
    assert not ua.satisfies(s3, range(6), comm)
    assert ua.satisfies(s3, range(6), [])
    with pytest.raises(SizeCapExceeded):
        ua.satisfies(s3, range(6), comm, cap=10)


def test_sub_e_examples():
    s3 = ua.symmetric_group(3)
    sub = ua.sub_e_poset(s3, [ua.commutativity()])
    assert sorted(len(b) for b in sub.members) == [1, 2, 2, 2, 3]
    z4 = ua.cyclic_group(4)
    assert ua.sub_e_poset(z4, [ua.commutativity("add")]).members == ua.enumerate_subalgebras(z4).members


@pytest.mark.parametrize("a,op", [(ua.symmetric_group(3), "mul"), (ua.dihedral_group(4), "mul"),
                                  (ua.cyclic_group(6), "add")])
def test_sub_e_report(a, op):
    rep = ua.sub_e_report(a, [ua.commutativity(op)])
    assert rep.downward_closed and rep.directed_sups_closed
    assert rep.bounded_complete and rep.algebraic and rep.linear


def test_d4_abelian_subgroups():
    assert len(ua.sub_e_poset(ua.dihedral_group(4), [ua.commutativity()]).members) == 9


def test_linearity():
    assert ua.linearity_check(ua.commutativity())
    assert not ua.linearity_check(ua.Equation(ua.App("mul", (x, x)), x, ("x",)))
    e = ua.Equation(ua.App("e"), ua.App("e"), ())
    assert ua.linearity_check(e)


def test_way_below_fg_degenerate_on_finite_algebras():
    z4 = ua.cyclic_group(4)
    lat = ua.enumerate_subalgebras(z4)
    full = frozenset(range(4))
    assert ua.way_below_fg(lat, {0, 2}, full)
    assert not ua.way_below_fg(lat, full, {0, 2})
    for b in lat.members:
        assert ua.way_below_fg(lat, b, b)
    for b, c in itertools.product(lat.members, repeat=2):
        assert ua.way_below_fg(lat, b, c) == order.way_below(lat.poset, lat.label(b), lat.label(c))
    assert ua.sub_fin(z4, full)[-1] == full


def test_equation_validation_and_json():
    with pytest.raises(SchemaError):
        ua.Equation(x, y, ("x",))
    e = ua.equation_from_json({"lhs": ["mul", "x", "y"], "rhs": ["mul", "y", "x"]})
    assert e.vars == ("x", "y")
    assert ua.term_to_json(e.lhs) == ["mul", "x", "y"]
    with pytest.raises(SchemaError):
        ua.parse_term(3)


def test_constants_in_terms():
    s3 = ua.symmetric_group(3)
    unit = ua.equation_from_json({"lhs": ["mul", "x", ["e"]], "rhs": "x"})
    assert ua.satisfies(s3, range(6), unit)


def test_algebra_json_roundtrip_and_errors():
    a = ua.symmetric_group(3)
    b = ua.algebra_from_json(ua.algebra_to_json(a))
    assert all(np.array_equal(a.tables[k], b.tables[k]) for k in a.tables)
    with pytest.raises(SchemaError):
        ua.algebra_from_json({"carrier": 2, "ops": {"f": {"arity": 1, "table": [0, 5]}}})
    with pytest.raises(SchemaError):
        ua.algebra_from_json({"carrier": 2, "ops": {"f": {"arity": 2, "table": [0, 1]}}})
    with pytest.raises(SchemaError):
        ua.Signature((("f", 1), ("f", 2)))


def test_brute_force_cap():
    with pytest.raises(SizeCapExceeded):
        ua.enumerate_subalgebras(ua.cyclic_group(13), "brute")
    assert len(ua.enumerate_subalgebras(ua.cyclic_group(13)).members) == 2
