"""JSON and text renderings of chain runs and invariant reports."""

from __future__ import annotations

import json
import math
from fractions import Fraction
from importlib import resources

from .algebra import Covector, format_polynomial
from .chain import ChainReport, OrderedGenerator
from .invariants import InvariantReport


def _rational(x) -> str | None:
    if x is None:
        return None
    if x == math.inf:
        return "inf"
    return str(Fraction(x))


def _payload(g: OrderedGenerator):
    if isinstance(g.payload, Covector):
        return [format_polynomial(p) for p in g.payload.coeffs]
    return format_polynomial(g.payload)


def _entry(g: OrderedGenerator, kind: str) -> dict:
    return {
        "label": g.label,
        kind: _payload(g),
        "order": _rational(g.order),
        "provenance": g.provenance.as_dict(),
    }


def invariants_to_dict(report: InvariantReport) -> dict:
    return {
        "s": report.s.value if report.s.finite else None,
        "s_stable": report.s.stable,
        "s_truncation_degree": report.s.truncation_degree,
        "q": report.q,
        "p_lower": _rational(report.p_lower),
        "p_upper": report.p_upper,
        "type_lower": _rational(report.type_lower),
        "type_upper": report.type_upper,
        "p_agreement": report.agreement,
        "inequalities": [
            {"name": i.name, "holds": i.holds, "lhs": i.lhs, "rhs": i.rhs}
            for i in report.inequalities
        ],
    }


def chain_to_dict(report: ChainReport, invariants: InvariantReport | None = None) -> dict:
    r = report.registry.get("r")
    out = {
        "n": report.spec.n,
        "F": [format_polynomial(f) for f in report.spec.F],
        "convention": report.convention,
        "r": {"order": _rational(r.order), "provenance": r.provenance.as_dict()},
        "steps": [
            {
                "k": step.k,
                "M": [_entry(g, "covector") for g in step.M],
                "J": [_entry(g, "generator") for g in step.J],
                "I": [_entry(g, "generator") for g in step.I],
                "radical_quality": step.radical_quality,
                "radical_case": step.radical_case,
            }
            for step in report.steps
        ],
        "status": report.status,
        "final_order": _rational(report.final_order),
        "notes": list(report.notes),
    }
    if invariants is not None:
        out["invariants"] = invariants_to_dict(invariants)
    return out


def dumps(obj: dict) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=True) + "\n"


def load_schema() -> dict:
    text = resources.files("kohn").joinpath("trace.schema.json").read_text(encoding="utf-8")
    return json.loads(text)


def _prov_text(prov: dict) -> str:
    inner = ", ".join(prov["from"])
    root = f"; root {prov['root']}" if "root" in prov else ""
    return f"{prov['rule']}({inner}{root})"


def chain_to_text(report: ChainReport, invariants: InvariantReport | None = None) -> str:
    data = chain_to_dict(report, invariants)
    lines = [
        f"domain: n = {data['n']}; F = " + "; ".join(data["F"]),
        f"convention: {data['convention']}",
        f"r: order {data['r']['order']} INIT_R",
    ]
    for step in data["steps"]:
        lines.append(f"step {step['k']} (radical {step['radical_case']}, {step['radical_quality']})")
        for kind, key in (("M", "covector"), ("J", "generator"), ("I", "generator")):
            if not step[kind]:
                lines.append(f"  {kind}  (none)")
            for e in step[kind]:
                body = "[" + ", ".join(e[key]) + "]" if key == "covector" else e[key]
                lines.append(
                    f"  {kind}  {e['label']:<6} order {e['order']:<6} {body}   "
                    f"{_prov_text(e['provenance'])}"
                )
    lines.append(f"status: {data['status']}")
    lines.append(f"final order: {data['final_order'] if data['final_order'] else '-'}")
    for note in data["notes"]:
        lines.append(f"note: {note}")
    if invariants is not None:
        lines.append(invariants_to_text(invariants))
    return "\n".join(lines) + "\n"


def invariants_to_text(report: InvariantReport) -> str:
    d = invariants_to_dict(report)
    s = d["s"] if d["s"] is not None else f"unresolved (truncation up to {d['s_truncation_degree']})"
    lines = [
        f"s = {s}",
        f"q = {d['q'] if d['q'] is not None else '-'}",
        f"p in [{d['p_lower']}, {d['p_upper'] if d['p_upper'] is not None else '-'}]"
        + (" (bracket closed)" if d["p_agreement"] else ""),
        f"order of finite type in [{d['type_lower']}, "
        f"{d['type_upper'] if d['type_upper'] is not None else '-'}]",
    ]
    for i in d["inequalities"]:
        verdict = "holds" if i["holds"] else "VIOLATED"
        lines.append(f"  {i['name']}: {i['lhs']} vs {i['rhs']} {verdict}")
    return "\n".join(lines)
