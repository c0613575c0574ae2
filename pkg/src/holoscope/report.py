"""Deterministic JSON/text rendering of pipeline results.

Exact rationals become {"exact": "p/q"}; floats become {"float": "%.17g"}
plus a "decimal" string when an extended-precision value is available.
Keys are sorted on output, and only the top-level "timing" entry varies
between runs.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from . import __version__
from .asymptotics import AsymptoticFit, CrossValidation, Estimate, make_context
from .certificates import Curve, GCertificate
from .exact import Poly, isolate_roots
from .guess import Recurrence
from .multisum import ExactSequence
from .ode import LinearODE, SingularityReport, Verdict

PREFIX_LENGTH = 12


def exact(x) -> dict:
    return {"exact": str(Fraction(x))}


def flt(x, decimal: str | None = None) -> dict | None:
    if x is None:
        return None
    out = {"float": "%.17g" % float(x)}
    if decimal is not None:
        out["decimal"] = decimal
    return out


def poly(p: Poly, var: str = "z") -> dict:
    return {"coeffs": [exact(c) for c in p.coeffs], "text": p.to_str(var)}


def _complex(z, ctx) -> dict:
    out = {"re": ctx.nstr(z.real, ctx.dps, min_fixed=-ctx.inf, max_fixed=ctx.inf, strip_zeros=False)}
    if z.imag:
        out["im"] = ctx.nstr(z.imag, ctx.dps, min_fixed=-ctx.inf, max_fixed=ctx.inf, strip_zeros=False)
    return out


def sequence(s: ExactSequence) -> dict:
    return {
        "offset": s.offset,
        "length": len(s),
        "last_index": s.last,
        "provenance": s.provenance,
        "digest_sha256": s.digest(),
        "prefix": [exact(v) for v in s.values[:PREFIX_LENGTH]],
        "all_integers": all(v.denominator == 1 for v in s.values),
    }


def recurrence(r: Recurrence) -> dict:
    return {
        "order": r.order,
        "degree": r.degree,
        "coeffs": [poly(p, "n") for p in r.coeffs],
        "text": r.to_str(),
    }


def ode(o: LinearODE) -> dict:
    return {
        "order": o.order,
        "coeffs": [poly(p) for p in o.coeffs],
        "inhom": poly(o.inhom),
        "text": o.to_str(),
    }


def singularities(rep: SingularityReport) -> dict:
    ctx = make_context()
    factors = []
    for fr in rep.factors:
        entry: dict[str, Any] = {
            "factor": poly(fr.factor),
            "multiplicity": fr.multiplicity,
            "origin": fr.is_origin,
            "regular": fr.regular,
            "roots": [dict(_complex(r.box.mpc(ctx), ctx), radius=flt(r.box.radius)) for r in fr.roots],
        }
        if fr.exponent_poly is not None:
            entry["exponent_poly"] = poly(fr.exponent_poly, "alpha")
            entry["exponent_roots"] = [_complex(a.box.mpc(ctx), ctx) for a in isolate_roots(fr.exponent_poly)]
            entry["rational_exponents"] = [exact(x) for x in fr.rational_exponents]
            entry["all_rational"] = not fr.has_irrational_exponent
            entry["log_power_bound"] = fr.log_bound
        factors.append(entry)
    return {"factors": factors, "origin_is_candidate": rep.origin_note}


def verdict(v: Verdict) -> dict:
    return {"kind": v.kind.value, "trace": list(v.trace)}


def estimate(e: Estimate | None) -> dict | None:
    if e is None:
        return None
    return {
        "value": flt(e.value, e.digits),
        "gauge": flt(e.gauge),
        "extrapolants": [flt(x) for x in e.extrapolants],
        "n_max": e.n_max,
    }


def fit(f: AsymptoticFit) -> dict:
    s_class = exact(f.s_class) if isinstance(f.s_class, Fraction) else flt(f.s_class)
    return {
        "growth": estimate(f.growth),
        "theta": estimate(f.theta),
        "s_class": s_class,
        "s_raw": flt(f.s_raw),
        "s_gauge": flt(f.s_gauge),
        "notes": list(f.notes),
    }


def cross_validation(cv: CrossValidation) -> dict:
    return {
        "consistent": cv.consistent,
        "matched_root": cv.matched_root,
        "predicted_growth": flt(cv.predicted_growth),
        "growth_error": flt(cv.growth_error),
        "matched_exponent": cv.matched_exponent,
        "predicted_theta": flt(cv.predicted_theta),
        "theta_error": flt(cv.theta_error),
        "notes": list(cv.notes),
    }


def curve(c: Curve, points: bool = False) -> dict:
    out = {
        "bound": flt(c.bound),
        "alarm": c.alarm,
        "slope": flt(c.slope),
        "last": flt(c.points[-1][1]) if c.points else None,
    }
    if points:
        out["points"] = [[n, flt(v)] for n, v in c.points]
    return out


def certificate(g: GCertificate, points: bool = False) -> dict:
    return {
        "height": curve(g.height, points),
        "denominator": curve(g.denominator, points),
        "holonomic": g.holonomic,
        "verdict": g.verdict,
        "notes": list(g.notes),
    }


def error(stage: str, exc: BaseException, **extra) -> dict:
    out = {"stage": stage, "type": type(exc).__name__, "message": str(exc)}
    out.update(extra)
    return out


def envelope(command: str) -> dict:
    return {"tool": {"name": "holoscope", "version": __version__}, "command": command}


def dumps(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def without_timing(report: dict) -> dict:
    return {k: v for k, v in report.items() if k != "timing"}


# text ---------------------------------------------------------------------------------

def _fmt(x) -> str:
    if isinstance(x, dict):
        if "exact" in x:
            return x["exact"]
        if "decimal" in x:
            return x["decimal"]
        if "float" in x:
            return x["float"]
        if "re" in x:
            return x["re"] + (f" + {x['im']}i" if "im" in x else "")
    return str(x)


def to_text(report: dict) -> str:
    lines = [f"holoscope {report['tool']['version']} :: {report['command']}"]
    if "input" in report:
        for k, v in report["input"].items():
            lines.append(f"  input.{k}: {v}")
    if "sequence" in report:
        s = report["sequence"]
        lines.append(f"sequence: a_{s['offset']}..a_{s['last_index']} ({s['provenance']}), sha256 {s['digest_sha256'][:16]}")
        lines.append("  prefix: " + ", ".join(_fmt(v) for v in s["prefix"]))
    if report.get("recurrence"):
        lines.append(f"recurrence: {report['recurrence']['text']}")
    if report.get("ode"):
        lines.append(f"ode: {report['ode']['text']}")
    if report.get("singularities"):
        for fr in report["singularities"]["factors"]:
            roots = ", ".join(_fmt(r) for r in fr["roots"])
            lines.append(f"singular factor {fr['factor']['text']} (mult {fr['multiplicity']}, "
                         f"{'regular' if fr['regular'] else 'irregular'}): roots {roots}")
            if "exponent_poly" in fr:
                lines.append(f"  exponents: roots of {fr['exponent_poly']['text']}")
                for a in fr["exponent_roots"]:
                    lines.append(f"    alpha = {_fmt(a)}")
                rats = ", ".join(_fmt(x) for x in fr["rational_exponents"]) or "none"
                lines.append(f"  rational exponents: {rats}; all rational: {fr['all_rational']}")
    if report.get("fit"):
        f = report["fit"]
        lines.append(f"gevrey class s: {_fmt(f['s_class'])}")
        for key in ("growth", "theta"):
            if f.get(key):
                lines.append(f"{key}: {_fmt(f[key]['value'])} (gauge {_fmt(f[key]['gauge'])})")
        for note in f.get("notes", []):
            lines.append(f"  note: {note}")
    if report.get("cross_validation"):
        cv = report["cross_validation"]
        lines.append(f"cross-validation: {'consistent' if cv['consistent'] else 'inconsistent'}"
                     f" (root {cv['matched_root']}, exponent {cv['matched_exponent']})")
    if report.get("certificates"):
        c = report["certificates"]
        lines.append(f"certificate: {c['verdict']}; height bound {_fmt(c['height']['bound'])}, "
                     f"denominator bound {_fmt(c['denominator']['bound'])}")
    if report.get("lcm_table"):
        for row in report["lcm_table"]:
            lines.append(f"  n={row['n']} L_n={row['L_n']['exact']} log(L_n)/n={_fmt(row['ratio'])}")
    if report.get("verdict"):
        lines.append(f"verdict: {report['verdict']['kind']}")
        for step in report["verdict"]["trace"]:
            if step.get("step") == "conclusion":
                lines.append(f"  {step['detail']}")
    for err in report.get("errors", []):
        lines.append(f"error in {err['stage']}: {err['type']}: {err['message']}")
    lines.append(f"exit code: {report.get('exit_code', 0)}")
    return "\n".join(lines) + "\n"
