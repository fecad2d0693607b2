"""Command-line front end.

Exit codes: 0 success, 2 usage or parse error, 3 violated construction
hypothesis, 4 mathematical failure (singular matrix, degenerate cone, ...).
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Sequence

from . import chains, hjcf, kahler, surface, toric
from .errors import HJToricError, InvalidFraction, UsageError
from .exact import SymPoly, format_rational

VERBS = ("hj", "chain", "fan", "classify", "construct", "realize", "stability", "kahler", "example")

_INT64 = 2 ** 63


@dataclass
class CommandRequest:
    verb: str
    args: dict = field(default_factory=dict)
    format: str = "text"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def parse_fraction(token: str) -> tuple[int, int]:
    """``"p/q"`` with ``0 < p < q`` coprime, as exact integers."""
    parts = token.split("/")
    try:
        if len(parts) != 2:
            raise ValueError
        p, q = int(parts[0]), int(parts[1])
    except ValueError:
        raise UsageError(f"expected a fraction p/q, got {token!r}") from None
    try:
        hjcf.check_fraction(p, q)
    except InvalidFraction as exc:
        raise UsageError(f"{token!r}: {exc}") from None
    return p, q


def _int_list(token: str) -> list[int]:
    try:
        return [int(x) for x in token.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"expected a comma-separated list of integers, got {token!r}") from None


def _build_parser() -> argparse.ArgumentParser:
    fmt = _Parser(add_help=False)
    fmt.add_argument("--format", choices=("json", "text"), default="text")

    parser = _Parser(prog="hjtoric", description="Hirzebruch-Jung resolutions, blow-up chains and Kähler classes.")
    sub = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    hj = sub.add_parser("hj", help="continued-fraction expansions")
    hj_sub = hj.add_subparsers(dest="action", required=True, parser_class=_Parser)
    e = hj_sub.add_parser("expand", parents=[fmt])
    e.add_argument("fraction")
    ev = hj_sub.add_parser("evaluate", parents=[fmt])
    ev.add_argument("digits", nargs="+", type=int)

    ch = sub.add_parser("chain", parents=[fmt], help="blow-up chain of a weight p/q")
    ch.add_argument("fraction")
    ch.add_argument("--ascii", action="store_true")

    fan = sub.add_parser("fan", help="two-dimensional fans")
    fan_sub = fan.add_subparsers(dest="action", required=True, parser_class=_Parser)
    w = fan_sub.add_parser("wps", parents=[fmt])
    w.add_argument("weights", nargs=3, type=int)
    for name in ("resolve", "selfint"):
        f = fan_sub.add_parser(name, parents=[fmt])
        f.add_argument("fan_file", help="fan JSON document, or - for stdin")

    cl = sub.add_parser("classify", parents=[fmt], help="type of the cone spanned by two rays")
    cl.add_argument("coords", nargs=4, type=int, metavar="N", help="ray coordinates UX UY VX VY")

    co = sub.add_parser("construct", parents=[fmt])
    co.add_argument("--genus", type=int, required=True)
    co.add_argument("-r", type=int, required=True)
    co.add_argument("--orders", type=_int_list, required=True)

    re_ = sub.add_parser("realize", parents=[fmt])
    re_.add_argument("--genus", type=int, required=True)
    re_.add_argument("--degree", type=int, required=True)

    st = sub.add_parser("stability", parents=[fmt])
    st.add_argument("surface_file")

    ka = sub.add_parser("kahler")
    ka_sub = ka.add_subparsers(dest="action", required=True, parser_class=_Parser)
    so = ka_sub.add_parser("solve", parents=[fmt])
    so.add_argument("config_file")
    so.add_argument("volumes_file")

    ex = sub.add_parser("example", parents=[fmt])
    ex.add_argument("name", choices=sorted(kahler._EXAMPLES))
    return parser


def parse_command(argv: Sequence[str]) -> CommandRequest:
    ns = _build_parser().parse_args(list(argv))
    args = {k: v for k, v in vars(ns).items() if k not in ("verb", "format")}
    if "fraction" in args:
        args["p"], args["q"] = parse_fraction(args.pop("fraction"))
    return CommandRequest(ns.verb, args, getattr(ns, "format", "text"))


# -- JSON helpers ----------------------------------------------------------------

def _int_out(n: int):
    return n if -_INT64 <= n < _INT64 else str(n)


def jsonable(obj: Any):
    """Convert library values to plain JSON data."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, int):
        return _int_out(obj)
    if isinstance(obj, Fraction):
        return format_rational(obj)
    if isinstance(obj, SymPoly):
        return str(obj)
    if isinstance(obj, surface.Section):
        return obj.value
    if isinstance(obj, toric.Vec):
        return [_int_out(obj.x), _int_out(obj.y)]
    if isinstance(obj, kahler.IntersectionMatrix):
        return {"basis": list(obj.basis), "entries": obj.rows()}
    if hasattr(obj, "to_dict"):
        return jsonable(obj.to_dict())
    if isinstance(obj, dict):
        return {str(jsonable(k)) if not isinstance(k, str) else k: jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(x) for x in obj]
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def _load_json(path: str):
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: invalid JSON ({exc})") from exc


# -- text rendering ---------------------------------------------------------------

def render_chain_ascii(c: chains.CurveChain) -> str:
    parts = []
    for i, node in enumerate(c.nodes):
        parts.append(f"({node.self_int})" + ("[F]" if i == c.marker else ""))
    return "--".join(parts)


def _render_chain_table(c: chains.CurveChain) -> str:
    width = max(len(l) for l in c.labels)
    lines = []
    for i, node in enumerate(c.nodes):
        mark = "  <- fiber" if i == c.marker else ""
        lines.append(f"{node.label:<{width}}  {node.self_int:>4}{mark}")
    return "\n".join(lines)


def _render_matrix(Q: kahler.IntersectionMatrix) -> str:
    width = max(len(str(x)) for row in Q.entries for x in row)
    lw = max(len(l) for l in Q.basis)
    return "\n".join(
        f"{l:<{lw}}  " + " ".join(f"{x:>{width}}" for x in row) for l, row in zip(Q.basis, Q.entries)
    )


def _render_construction(rep: surface.ConstructionReport) -> str:
    lines = [
        f"genus {rep.genus}, r = {rep.r}",
        f"orbifold Euler characteristic {format_rational(rep.euler_orb)}",
        f"deg L = {rep.bundle_degree}",
    ]
    for pt in rep.points:
        zero, inf = pt.singularities
        lines.append(
            f"{pt.label}: q={pt.q} p={pt.p} n={pt.n} weight {format_rational(pt.weight)} on infinity; "
            f"{zero} on zero section, {inf} on infinity section; chain {render_chain_ascii(pt.chain)}"
        )
    s = rep.surface
    lines.append(
        "slopes: zero " + format_rational(surface.slope(s, "zero"))
        + ", infinity " + format_rational(surface.slope(s, "infinity"))
    )
    return "\n".join(lines)


def _selfint_doc(selfint: dict) -> list:
    return [{"ray": jsonable(r), "self_int": n} for r, n in selfint.items()]


# -- dispatch -------------------------------------------------------------------

def execute(req: CommandRequest) -> tuple[Any, str]:
    """Run a request; return (JSON-ready document, text rendering)."""
    a = req.args
    if req.verb == "hj":
        if a["action"] == "expand":
            digits = hjcf.hj_expand(a["p"], a["q"])
            nested = hjcf.nested_fraction(digits)
            doc = {"p": a["p"], "q": a["q"], "digits": digits, "nested": nested}
            return doc, f"{json.dumps(digits)}\n{a['p']}/{a['q']} = {nested}"
        p, q = hjcf.hj_evaluate(a["digits"])
        doc = {"digits": a["digits"], "p": p, "q": q}
        return doc, f"{hjcf.nested_fraction(a['digits'])} = {p}/{q}"

    if req.verb == "chain":
        c = chains.blowup_chain(a["p"], a["q"])
        text = render_chain_ascii(c) if a.get("ascii") else _render_chain_table(c)
        return c.to_dict(), text

    if req.verb == "fan":
        if a["action"] == "wps":
            f = toric.wps_fan(*a["weights"])
            return f.to_dict(), "rays: " + " ".join(str(tuple(r)) for r in f.rays)
        f = toric.Fan2D.from_dict(_load_json(a["fan_file"]))
        if a["action"] == "resolve":
            r = toric.resolve_fan(f)
            added = toric.added_rays(f, r)
            text = "rays: " + " ".join(str(tuple(x)) for x in r.rays)
            text += "\nadded: " + " ".join(str(tuple(x)) for x in added)
            return r.to_dict(), text
        si = toric.self_intersections(f)
        doc = {"rays": jsonable(list(f.rays)), "self_intersections": _selfint_doc(si), "sum": sum(si.values())}
        return doc, "\n".join(f"{tuple(r)}: {n}" for r, n in si.items())

    if req.verb == "classify":
        ux, uy, vx, vy = a["coords"]
        cone = toric.Cone2D((ux, uy), (vx, vy))
        t = toric.classify_cone(cone)
        doc = {"cone": cone.to_dict(), "type": t.to_dict()}
        return doc, f"cone {tuple(cone.u)}, {tuple(cone.v)}: {t}"

    if req.verb in ("construct", "realize"):
        if req.verb == "construct":
            rep = surface.theoremB_construction(a["genus"], a["r"], a["orders"])
        else:
            rep = surface.realize_degree(a["genus"], a["degree"])
        return rep.to_dict(), _render_construction(rep)

    if req.verb == "stability":
        s = surface.ParabolicRuledSurface.from_dict(_load_json(a["surface_file"]))
        slopes = {sec.value: surface.slope(s, sec) for sec in surface.Section}
        bad = surface.instability_report(s)
        doc = {
            "slopes": jsonable(slopes),
            "destabilizing": {sec.value: jsonable(mu) for sec, mu in bad.items()},
            "note": "only the zero and infinity sections are examined",
        }
        text = "\n".join(f"mu({k}) = {format_rational(v)}" for k, v in slopes.items())
        text += "\n" + (
            "destabilized by: " + ", ".join(sec.value for sec in bad) if bad
            else "neither the zero nor the infinity section destabilizes"
        )
        return doc, text

    if req.verb == "kahler":
        cfg = kahler.CurveConfig.from_dict(_load_json(a["config_file"]))
        vols = kahler.parse_volumes(_load_json(a["volumes_file"]))
        Q = kahler.assemble_Q(cfg)
        sol = kahler.solve_class(Q, vols)
        return sol.to_dict(), sol.class_text()

    if req.verb == "example":
        rep = kahler.builtin_example(a["name"])
        return _example_doc(rep), _example_text(rep)

    raise UsageError(f"unknown verb {req.verb!r}")  # pragma: no cover


def _example_doc(rep: dict) -> dict:
    name = rep["name"]
    if name == "cp2":
        return {
            "name": name,
            "chain": rep["chain"].to_dict(),
            "Q": jsonable(rep["Q"]),
            "I": jsonable(rep["I"]),
            "solution": rep["solution"].to_dict(),
        }
    if name == "cp1t2":
        return {
            "name": name,
            "chain": rep["chain"].to_dict(),
            "evaluations": jsonable(rep["evaluations"]),
            "construction": rep["construction"].to_dict(),
            "Q": jsonable(rep["Q"]),
            "solution": rep["solution"].to_dict(),
            "side_conditions": list(rep["side_conditions"]),
        }
    return {
        "name": name,
        "fan": rep["fan"].to_dict(),
        "resolved": rep["resolved"].to_dict(),
        "added": jsonable(rep["added"]),
        "self_intersections": _selfint_doc(rep["self_intersections"]),
        "classification": {
            k: {"cone": rep["cones"][k].to_dict(), "type": t.to_dict()} for k, t in rep["classification"].items()
        },
        "subchain": [
            {"label": l, "ray": jsonable(r), "self_int": n}
            for l, (r, n) in zip(rep["subchain_labels"], rep["subchain"])
        ],
        "selfint_sum": rep["selfint_sum"],
    }


def _example_text(rep: dict) -> str:
    name = rep["name"]
    if name == "cp2":
        sol = rep["solution"]
        return "\n".join([
            render_chain_ascii(rep["chain"]) + "   (" + ", ".join(rep["chain"].labels) + ")",
            _render_matrix(rep["Q"]),
            "I = [" + ", ".join(str(rep["I"][l]) for l in sol.basis) + "]",
            sol.class_text(),
        ])
    if name == "cp1t2":
        lines = [render_chain_ascii(rep["chain"]) + "   (" + ", ".join(rep["chain"].labels) + ")"]
        lines += [f"[w].{k} = {v}" for k, v in rep["evaluations"].items()]
        lines.append(_render_construction(rep["construction"]))
        lines.append(rep["solution"].class_text())
        lines.append("side condition: " + ", ".join(rep["side_conditions"]))
        return "\n".join(lines)
    lines = [
        "fan: " + " ".join(str(tuple(r)) for r in rep["fan"].rays),
        "resolution adds: " + " ".join(str(tuple(r)) for r in rep["added"]),
    ]
    lines += [f"cone({k}): {t}" for k, t in rep["classification"].items()]
    lines += [f"{tuple(r)}: {n}" for r, n in rep["self_intersections"].items()]
    lines.append(f"sum of self-intersections: {rep['selfint_sum']}")
    return "\n".join(lines)


def main(argv: Sequence[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        req = parse_command(argv)
        doc, text = execute(req)
    except HJToricError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    if req.format == "json":
        print(json.dumps(jsonable(doc), indent=2))
    else:
        print(text)
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
