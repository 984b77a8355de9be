"""Command-line front end.

Exit codes: 0 every check passed, 1 a property or witness failed,
2 malformed input, 3 a size cap was exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import algebra as ua
from . import contexts as cx
from . import dasein as ds
from . import interval as ir
from . import order
from . import partitions as pt
from . import suite
from .errors import (
    DimMismatch,
    NotHermitian,
    NotHomomorphism,
    NotDirected,
    SchemaError,
    SizeCapExceeded,
    Unbounded,
    UnsharpError,
)

EXIT_OK, EXIT_FAILED, EXIT_INPUT, EXIT_CAP = 0, 1, 2, 3


class Failed(Exception):
    """A check ran to completion and came out false."""

    def __init__(self, report: dict):
        self.report = report


# ----------------------------------------------------------------- loading


def _load(path: str):
    try:
        return json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise SchemaError(f"no such file: {path}") from None
    except json.JSONDecodeError as e:
        raise SchemaError(f"invalid JSON: {e.msg} (line {e.lineno})", "$") from None


def _check_dim(n: int, cfg) -> None:
    if n > cfg.cap_dim:
        raise SizeCapExceeded(f"dimension {n} exceeds cap {cfg.cap_dim}")


BUILTIN_ALGEBRAS = {
    "Z4": lambda: ua.cyclic_group(4),
    "Z6": lambda: ua.cyclic_group(6),
    "S3": lambda: ua.symmetric_group(3),
    "D4": lambda: ua.dihedral_group(4),
}


def _algebra(source: str) -> ua.FiniteAlgebra:
    if source.startswith("builtin:"):
        name = source.split(":", 1)[1]
        if name not in BUILTIN_ALGEBRAS:
            raise SchemaError(f"unknown builtin algebra {name!r}; choose from {sorted(BUILTIN_ALGEBRAS)}")
        return BUILTIN_ALGEBRAS[name]()
    return ua.algebra_from_json(_load(source))


def _equations(source: str | None, a: ua.FiniteAlgebra) -> list[ua.Equation]:
    if source is None:
        return []
    if source.startswith("builtin:commutative"):
        op = source.split(":")[2] if source.count(":") == 2 else ("mul" if "mul" in a.tables else "add")
        return [ua.commutativity(op)]
    data = _load(source)
    if isinstance(data, dict):
        data = data.get("equations", [data])
    if not isinstance(data, list):
        raise SchemaError("equations must be a list", "$")
    es = [ua.equation_from_json(e, f"$[{k}]") for k, e in enumerate(data)]
    sig = a.signature
    for e in es:
        ua.check_arities(e.lhs, sig)
        ua.check_arities(e.rhs, sig)
    return es


def _check_valuations(a: ua.FiniteAlgebra, es, cfg) -> None:
    for e in es:
        count = a.carrier_size ** len(e.vars)
        if count > cfg.cap_valuations:
            raise SizeCapExceeded(f"{count} valuations exceed cap {cfg.cap_valuations}")


def _parse_interval(text: str) -> ir.IRBotElement:
    t = text.strip()
    if t.lower() in ("bot", "⊥"):
        return ir.BOT
    t = t.strip("[]")
    parts = t.split(",")
    if len(parts) == 1:
        return ir.embed_real(parts[0])
    if len(parts) != 2:
        raise SchemaError(f"cannot read interval {text!r}; use 'lo,hi', '[lo,hi]', a number or 'bot'")
    lo, hi = ir.to_fraction(parts[0]), ir.to_fraction(parts[1])
    if lo > hi:
        raise SchemaError(f"empty interval {text!r}")
    return ir.RatInterval(lo, hi)


# ---------------------------------------------------------------- commands


def cmd_poset_check(cfg) -> dict:
    p = order.poset_from_json(_load(cfg.file))
    if len(p) > cfg.cap_poset:
        raise SizeCapExceeded(f"{len(p)} elements exceed cap {cfg.cap_poset}")
    rep = order.domain_report(p, cap=cfg.cap_poset).to_json()
    out = {"poset": p.to_json(), "report": rep, "dot": p.to_dot()}
    missing = [k for k in cfg.expect if not rep.get(k)]
    if cfg.expect:
        out["expected"] = {k: bool(rep.get(k)) for k in cfg.expect}
    if missing:
        out["failed"] = missing
        raise Failed(out)
    return out


IR_OPS = ("leq", "way_below", "sup", "sup_bounded", "meet", "basic_member", "interpolant")


def cmd_ir_eval(cfg) -> dict:
    args = [_parse_interval(a) for a in cfg.args]
    op = cfg.op

    def need(k):
        if len(args) != k:
            raise SchemaError(f"{op} takes {k} intervals, got {len(args)}")

    if op in ("leq", "way_below", "basic_member"):
        need(2)
        fn = {"leq": ir.leq, "way_below": ir.way_below,
              "basic_member": lambda t, w: ir.scott_basic_member(t, w)}[op]
        result = fn(*args)
    elif op == "sup":
        result = ir.to_json(ir.sup_directed(args))
    elif op == "sup_bounded":
        result = ir.to_json(ir.sup_bounded(args, lifted=True))
    elif op == "meet":
        if not args:
            raise SchemaError("meet needs at least one interval")
        result = ir.to_json(ir.meet_all(args))
    elif op == "interpolant":
        need(2)
        if not ir.way_below(*args):
            raise Failed({"op": op, "args": cfg.args, "failed": ["first argument is not way below the second"]})
        result = ir.to_json(ir.interpolant(*args))
    else:
        raise SchemaError(f"unknown op {op!r}")
    return {"op": op, "args": [ir.to_json(a) for a in args], "result": result}


def cmd_subalg_enumerate(cfg) -> dict:
    a = _algebra(cfg.algebra)
    es = _equations(cfg.equations, a)
    _check_valuations(a, es, cfg)
    lat = ua.sub_e_poset(a, es, cfg.method) if es else ua.enumerate_subalgebras(a, cfg.method)
    out = ua.lattice_to_json(lat)
    out["count"] = len(lat.members)
    out["dot"] = lat.poset.to_dot("subalgebras")
    return out


def cmd_subalg_check(cfg) -> dict:
    a = _algebra(cfg.algebra)
    es = _equations(cfg.equations, a)
    _check_valuations(a, es, cfg)
    lat = ua.enumerate_subalgebras(a)
    if len(lat.members) > cfg.cap_poset:
        raise SizeCapExceeded(f"{len(lat.members)} subalgebras exceed cap {cfg.cap_poset}")
    brute = ua.enumerate_subalgebras(a, "brute")
    rep = order.domain_report(lat.poset, cap=cfg.cap_poset)
    out = {
        "count": len(lat.members),
        "oracle_agrees": set(brute.members) == set(lat.members),
        "complete_lattice": rep.is_complete_lattice,
        "algebraic": rep.is_algebraic,
    }
    if es:
        sub = ua.sub_e_report(a, es)
        out["equational"] = sub.to_json()
    flags = [out["oracle_agrees"], out["complete_lattice"], out["algebraic"]]
    if es:
        sub_j = out["equational"]
        flags += [sub_j["downward_closed"], sub_j["directed_sups_closed"],
                  sub_j["bounded_complete"], sub_j["algebraic"]]
    if not all(flags):
        raise Failed(out)
    return out


def _fragment(path: str, cfg) -> cx.ContextFragment:
    frag = cx.fragment_from_json(_load(path), cfg.tol)
    _check_dim(next(iter(frag.contexts.values())).dim, cfg)
    return frag


def _context(path: str, cfg) -> cx.Context:
    v = cx.context_from_json(_load(path), cfg.tol)
    _check_dim(v.dim, cfg)
    return v


def cmd_contexts_build(cfg) -> dict:
    frag = _fragment(cfg.file, cfg)
    rep = order.domain_report(frag.poset, cap=cfg.cap_poset) if len(frag.contexts) <= cfg.cap_poset else None
    out = frag.to_json()
    out["dot"] = frag.to_dot()
    if rep is not None:
        out["report"] = {"is_bounded_complete": rep.is_bounded_complete, "is_algebraic": rep.is_algebraic}
    return out


def cmd_contexts_meet(cfg) -> dict:
    v1, v2 = _context(cfg.a, cfg), _context(cfg.b, cfg)
    return {"result": cx.context_to_json(cx.context_meet(v1, v2, cfg.tol))}


def cmd_contexts_join(cfg) -> dict:
    v1, v2 = _context(cfg.a, cfg), _context(cfg.b, cfg)
    j = cx.context_join(v1, v2, cfg.tol)
    return {"result": "Incompatible" if j is cx.INCOMPATIBLE else cx.context_to_json(j)}


def cmd_contexts_functor(cfg) -> dict:
    phi = cx.hom_from_json(_load(cfg.hom))
    _check_dim(max(phi.source_dim, phi.target_dim), cfg)
    frag = _fragment(cfg.fragment, cfg)
    try:
        phi.verify(cfg.tol)
    except NotHomomorphism as e:
        raise Failed({"failed": ["homomorphism"], "reason": str(e)}) from None
    images = {lab: cx.apply_hom(phi, v, cfg.tol, verify=False) for lab, v in frag.contexts.items()}
    bad = [[x, y] for x, y in frag.poset.relation if not cx.context_leq(images[x], images[y], cfg.tol)]
    ident = cx.identity_hom(phi.source_dim, phi.source_blocks)
    id_ok = all(cx.context_equal(cx.apply_hom(ident, v, cfg.tol), v, cfg.tol) for v in frag.contexts.values())
    out = {
        "images": {lab: cx.context_to_json(v) for lab, v in images.items()},
        "monotone": not bad,
        "identity_law": id_ok,
    }
    if bad or not id_ok:
        out["counterexamples"] = bad
        raise Failed(out)
    return out


def _matrix(path: str, cfg):
    data = _load(path)
    m = cx.matrix_from_json(data)
    _check_dim(m.shape[0], cfg)
    if not cx.is_hermitian(m, cfg.tol):
        raise NotHermitian("matrix is not Hermitian")
    return m


def _character(source: str | None, frag: cx.ContextFragment):
    if source is None:
        return None
    if ":" not in source:
        raise SchemaError("character must be LABEL:CELL, e.g. V3:0")
    lab, idx = source.rsplit(":", 1)
    if lab not in frag.contexts:
        raise SchemaError(f"unknown context label {lab!r}")
    try:
        return lab, ds.Character(frag[lab], int(idx))
    except (ValueError, IndexError) as e:
        raise SchemaError(f"bad cell index in {source!r}: {e}") from None


def cmd_dasein_value(cfg) -> dict:
    a = _matrix(cfg.matrix, cfg)
    frag = _fragment(cfg.contexts, cfg)
    if a.shape[0] != next(iter(frag.contexts.values())).dim:
        raise DimMismatch("matrix and contexts have different dimensions")
    fam = ds.spectral_family(a, cfg.tol)
    chosen = _character(cfg.character, frag)
    rows = []
    for lab in frag.labels():
        v = frag[lab]
        if chosen is not None:
            top, chi = chosen
            if not frag.poset.leq(lab, top):
                continue
            cells = [chi.restrict(v, cfg.tol).index]
        else:
            cells = range(len(v))
        for i in cells:
            iv = ds.value_interval(a, v, ds.Character(v, i), cfg.tol, fam)
            rows.append({"context": lab, "cell": i, "describe": v.describe(), **ir.to_json(iv)})
    return {"spectrum": [str(ds.as_rational(x, cfg.tol)) for x in fam.values], "intervals": rows}


def cmd_dasein_section(cfg) -> dict:
    a = _matrix(cfg.matrix, cfg)
    frag = _fragment(cfg.contexts, cfg)
    chosen = _character(cfg.character, frag)
    if chosen is None:
        raise SchemaError("dasein section needs --character LABEL:CELL")
    top, chi = chosen
    s = ds.section_at(a, frag, top, chi, cfg.tol)
    out = s.to_json()
    out["fragment"] = s.domain
    out["top"] = top
    out["scott_continuous"] = order.map_check(s.as_map(), cap=cfg.cap_poset) if len(s.domain) <= cfg.cap_poset else None
    return out


def cmd_witness_sec6(cfg) -> dict:
    ve = pt.partition_from_json(_load(cfg.ve)) if cfg.ve else None
    cert = pt.sec6_witness(cfg.bound, ve)
    out = cert.to_json()
    if not cert.passed:
        raise Failed(out)
    return out


def cmd_suite_all(cfg) -> dict:
    out = suite.run_all(cfg.seed)
    if not out["passed"]:
        raise Failed(out)
    return out


# ------------------------------------------------------------------ output


def _text(report: dict) -> str:
    if "intervals" in report and isinstance(report["intervals"], list):
        rows = report["intervals"]
        width = max([len(r["context"]) for r in rows] + [7])
        lines = [f"{'context':<{width}}  cell  interval"]
        for r in rows:
            iv = "⊥" if r.get("bot") else f"[{r['lo']}, {r['hi']}]"
            lines.append(f"{r['context']:<{width}}  {r['cell']:>4}  {iv}")
        return "\n".join(lines)
    if "criteria" in report:
        return "\n".join(
            f"criterion {c['criterion']}: {'PASS' if c['passed'] else 'FAIL'}  {c['name']} ({c['checks']} checks)"
            for c in report["criteria"]
        )
    if "parts" in report:
        lines = [f"{p['name']:<18} {'PASS' if p['passed'] else 'FAIL'}  {p['detail']}" for p in report["parts"]]
        lines.append("witness: " + ("PASS" if report["passed"] else f"FAIL at {report['first_failing_part']}"))
        return "\n".join(lines)
    return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False)


def render(report: dict, fmt: str) -> str:
    if fmt == "dot":
        if "dot" not in report:
            raise SchemaError("this command has no DOT output")
        return report["dot"]
    if fmt == "text":
        return _text(report)
    return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False)


# ------------------------------------------------------------------ parser


def _positive_int(text: str) -> int:
    v = int(text)
    if v <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _positive_tol(text: str) -> float:
    try:
        v = float(Fraction(text))
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if v <= 0:
        raise argparse.ArgumentTypeError("tolerance must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=_positive_tol, default=cx.DEFAULT_TOL)
    common.add_argument("--format", choices=("json", "dot", "text"), default="json")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--cap-poset", type=_positive_int, default=order.REPORT_CAP)
    common.add_argument("--cap-valuations", type=_positive_int, default=ua.VALUATION_CAP)
    common.add_argument("--cap-dim", type=_positive_int, default=cx.DIM_CAP_FLOAT)
    common.add_argument("--out", help="write the report to this file instead of stdout")

    parser = argparse.ArgumentParser(prog="unsharp", description=__doc__.splitlines()[0])
    groups = parser.add_subparsers(dest="group", required=True)

    def sub(group, name, fn, help_):
        p = group.add_parser(name, parents=[common], help=help_)
        p.set_defaults(fn=fn, name=name)
        return p

    g = groups.add_parser("poset", help="finite posets").add_subparsers(dest="cmd", required=True)
    p = sub(g, "check", cmd_poset_check, "domain-theoretic report for a poset JSON file")
    p.add_argument("file")
    p.add_argument("--expect", action="append", default=[],
                   help="report flag that must be true (repeatable), e.g. is_algebraic")

    g = groups.add_parser("ir", help="interval domain").add_subparsers(dest="cmd", required=True)
    p = sub(g, "eval", cmd_ir_eval, "evaluate an interval operation")
    p.add_argument("op", choices=IR_OPS)
    p.add_argument("args", nargs="*", help="intervals as lo,hi or [lo,hi], a number, or bot")

    g = groups.add_parser("subalg", help="subalgebra lattices").add_subparsers(dest="cmd", required=True)
    for name, fn, help_ in (("enumerate", cmd_subalg_enumerate, "list subalgebras"),
                            ("check", cmd_subalg_check, "lattice and domain checks")):
        p = sub(g, name, fn, help_)
        p.add_argument("algebra", help="algebra JSON file or builtin:Z4|Z6|S3|D4")
        p.add_argument("--equations", help="equations JSON file or builtin:commutative[:OP]")
        if name == "enumerate":
            p.add_argument("--method", choices=("closure", "brute"), default="closure")

    g = groups.add_parser("contexts", help="matrix contexts").add_subparsers(dest="cmd", required=True)
    p = sub(g, "build", cmd_contexts_build, "build a context fragment")
    p.add_argument("file")
    for name, fn in (("meet", cmd_contexts_meet), ("join", cmd_contexts_join)):
        p = sub(g, name, fn, f"{name} of two contexts")
        p.add_argument("a")
        p.add_argument("b")
    p = sub(g, "functor", cmd_contexts_functor, "push a fragment along a *-homomorphism")
    p.add_argument("--hom", required=True)
    p.add_argument("--fragment", required=True)

    g = groups.add_parser("dasein", help="daseinisation").add_subparsers(dest="cmd", required=True)
    for name, fn in (("value", cmd_dasein_value), ("section", cmd_dasein_section)):
        p = sub(g, name, fn, f"unsharp {name}s of an operator")
        p.add_argument("--matrix", required=True)
        p.add_argument("--contexts", required=True)
        p.add_argument("--character", help="LABEL:CELL, cell index in the context's canonical order")

    g = groups.add_parser("witness", help="symbolic witnesses").add_subparsers(dest="cmd", required=True)
    p = sub(g, "sec6", cmd_witness_sec6, "non-continuity of the context poset of the diagonal algebra")
    p.add_argument("--bound", type=int, default=128)
    p.add_argument("--ve", help="replacement partition JSON for the even/odd context")

    g = groups.add_parser("suite", help="property suites").add_subparsers(dest="cmd", required=True)
    sub(g, "all", cmd_suite_all, "run the full acceptance battery")
    return parser


def _emit(text: str, cfg) -> None:
    if cfg.out:
        Path(cfg.out).write_text(text + "\n")
    else:
        sys.stdout.write(text + "\n")


def main(argv=None) -> int:
    parser = build_parser()
    cfg = parser.parse_args(argv)
    command = f"{cfg.group} {cfg.name}"
    header = {"command": command, "seed": cfg.seed, "tol": cfg.tol}
    try:
        body = cfg.fn(cfg)
        code, status = EXIT_OK, "pass"
    except Failed as f:
        body, code, status = f.report, EXIT_FAILED, "fail"
    except SizeCapExceeded as e:
        body, code, status = {"error": str(e)}, EXIT_CAP, "cap_exceeded"
    except SchemaError as e:
        body, code, status = {"error": str(e), "path": e.path}, EXIT_INPUT, "input_error"
    except (UnsharpError, ValueError, KeyError, IndexError) as e:
        kind = type(e).__name__
        failed_kinds = (NotDirected, Unbounded)
        code = EXIT_FAILED if isinstance(e, failed_kinds) else EXIT_INPUT
        body = {"error": str(e), "kind": kind}
        status = "fail" if code == EXIT_FAILED else "input_error"
    report = {**header, "status": status, **body}
    try:
        text = render(report, cfg.format)
    except SchemaError as e:
        text = json.dumps({**header, "status": "input_error", "error": str(e)}, sort_keys=True, indent=2)
        code = EXIT_INPUT
    _emit(text, cfg)
    return code


if __name__ == "__main__":
    sys.exit(main())
