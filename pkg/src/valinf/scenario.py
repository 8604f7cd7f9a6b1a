"""JSON scenario files: named valuations, polynomials, and options.

All rationals are strings "p/q" (or "p"); no floating point anywhere.
The canonical serialization round-trips through parse exactly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from . import poly
from .cluster import (Cluster, Free, Node, PointAtInfinity, SatU, SatV)
from .errors import DomainError
from .exact import Ext, NEG_INF, POS_INF
from .valuations import (Curve, Divisorial, Monomial, ROOT, Root, Valuation,
                         curve_of_series)

FORMAT = 1


class ScenarioError(DomainError):
    pass


def parse_rational(s) -> Fraction:
    if isinstance(s, int):
        return Fraction(s)
    if not isinstance(s, str):
        raise ScenarioError(f"rational must be a string, got {s!r}")
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as e:
        raise ScenarioError(f"bad rational {s!r}: {e}") from e


def format_rational(q: Fraction) -> str:
    return str(Fraction(q))


def format_ext(x: Ext) -> str:
    if x == POS_INF:
        return "+inf"
    if x == NEG_INF:
        return "-inf"
    return format_rational(x.q)


@dataclass
class Scenario:
    valuations: dict = field(default_factory=dict)
    polynomials: dict = field(default_factory=dict)
    options: dict = field(default_factory=dict)
    algebraize: dict | None = None


def _parse_base(obj) -> PointAtInfinity:
    chart = obj.get("chart")
    if chart == "y":
        return PointAtInfinity("y")
    if chart == "x":
        return PointAtInfinity("x", parse_rational(obj.get("c", "0")))
    raise ScenarioError(f"base chart must be 'x' or 'y', got {chart!r}")


def _format_base(base: PointAtInfinity) -> dict:
    if base.chart == "y":
        return {"chart": "y"}
    return {"chart": "x", "c": format_rational(base.c)}


def _parse_step(obj):
    t = obj.get("type")
    if t == "free":
        return Free(parse_rational(obj.get("c", "0")))
    if t == "satellite-u":
        return SatU()
    if t == "satellite-v":
        return SatV()
    raise ScenarioError(f"unknown step type {t!r}")


def _format_step(step) -> dict:
    if isinstance(step, Free):
        return {"type": "free", "c": format_rational(step.c)}
    if isinstance(step, SatU):
        return {"type": "satellite-u"}
    return {"type": "satellite-v"}


def parse_valuation(obj) -> Valuation:
    kind = obj.get("kind")
    if kind == "root":
        return ROOT
    if kind == "monomial":
        return Monomial(parse_rational(obj["s"]), parse_rational(obj["t"]))
    if kind == "divisorial":
        base = _parse_base(obj["base"])
        steps = [_parse_step(s) for s in obj.get("steps", [])]
        nodes = [Node(parent=-1, base=base, step=None)]
        for k, st in enumerate(steps):
            nodes.append(Node(parent=k, base=None, step=st))
        cl = Cluster(nodes)
        return Divisorial(cl, len(cl) - 1)
    if kind == "curve":
        base = _parse_base(obj["base"])
        m = int(obj["m"])
        coeffs = {int(k): parse_rational(v)
                  for k, v in obj.get("coefficients", {}).items()}
        K = int(obj.get("K", max(coeffs, default=0) + 1))
        return curve_of_series(base, m, coeffs, K,
                               exact=bool(obj.get("exact", False)))
    raise ScenarioError(f"unknown valuation kind {kind!r}")


def format_valuation(v: Valuation) -> dict:
    if isinstance(v, Root):
        return {"kind": "root"}
    if isinstance(v, Monomial):
        return {"kind": "monomial", "s": format_rational(v.s),
                "t": format_rational(v.t)}
    if isinstance(v, Divisorial):
        path = v.cluster.path(v.node)
        base = v.cluster.nodes[path[0]].base
        return {"kind": "divisorial", "base": _format_base(base),
                "steps": [_format_step(v.cluster.nodes[i].step)
                          for i in path[1:]]}
    if isinstance(v, Curve):
        s = v.branch.series
        out = {"kind": "curve", "base": _format_base(v.branch.base),
               "m": s.m, "K": s.K,
               "coefficients": {str(j): format_rational(c)
                                for j, c in s.coeffs}}
        if s.exact:
            out["exact"] = True
        return out
    raise ScenarioError(f"cannot serialize {v!r}")


def parse_scenario(text: str) -> Scenario:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise ScenarioError(
            f"invalid JSON at line {e.lineno} column {e.colno}: {e.msg}")
    if obj.get("format") != FORMAT:
        raise ScenarioError(f"unsupported format {obj.get('format')!r}; "
                            f"expected {FORMAT}")
    sc = Scenario()
    for name, spec in obj.get("valuations", {}).items():
        sc.valuations[name] = parse_valuation(spec)
    for name, text_p in obj.get("polynomials", {}).items():
        if not isinstance(text_p, str):
            raise ScenarioError(f"polynomial {name!r} must be a string")
        try:
            sc.polynomials[name] = poly.parse(text_p)
        except Exception as e:
            raise ScenarioError(f"polynomial {name!r}: {e}") from e
    sc.options = dict(obj.get("options", {}))
    sc.algebraize = obj.get("algebraize")
    return sc


def serialize_scenario(sc: Scenario) -> str:
    obj = {"format": FORMAT}
    if sc.valuations:
        obj["valuations"] = {n: format_valuation(v)
                             for n, v in sorted(sc.valuations.items())}
    if sc.polynomials:
        obj["polynomials"] = {n: poly.to_string(p)
                              for n, p in sorted(sc.polynomials.items())}
    if sc.options:
        obj["options"] = dict(sorted(sc.options.items()))
    if sc.algebraize is not None:
        obj["algebraize"] = sc.algebraize
    return json.dumps(obj, indent=2, sort_keys=True)


def load_scenario(path: str) -> Scenario:
    with open(path) as f:
        return parse_scenario(f.read())
