"""Command-line front end.

    holoscope analyze-term TERM_FILE [--nmax N]
    holoscope obstruct REC_FILE --initials a0,a1,... [--nmax N]
    holoscope fit SEQ_FILE [--depth K]
    holoscope certify SEQ_FILE [--table height|denominator]
    holoscope lcm-table [--nmax N]

Exit codes: 0 success or consistent exponents, 2 input error, 3 unbalanced
term, 4 infinite support, 5 no recurrence found, 6 singular recurrence step,
7 asymptotic fit failure, 10 obstruction, 11 inconclusive.
"""

from __future__ import annotations

import argparse
import logging
import sys
import time
from contextlib import contextmanager
from dataclasses import asdict, dataclass
from fractions import Fraction

from . import report as R
from .asymptotics import FitError, cross_validate, fit_sequence, precision_digits
from .certificates import g_certificate, lcm_binomial_table, to_csv
from .guess import (
    InsufficientDataError,
    RecurrenceFormatError,
    SingularStepError,
    continue_sequence,
    extend_sequence,
    guess_recurrence,
    read_recurrence,
    required_length,
    verify_recurrence,
)
from .multisum import SequenceFormatError, eval_sequence, read_sequence
from .ode import VerdictKind, obstruction_verdict, rec_to_ode, singular_points
from .terms import (
    InfiniteSupportError,
    TermParseError,
    check_balance,
    parse_term,
    recession_witness,
    to_binomial_form,
)

log = logging.getLogger("holoscope")

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_UNBALANCED = 3
EXIT_INFINITE = 4
EXIT_NO_RECURRENCE = 5
EXIT_SINGULAR_STEP = 6
EXIT_FIT = 7
EXIT_OBSTRUCTION = 10
EXIT_INCONCLUSIVE = 11

VERDICT_EXIT = {
    VerdictKind.CONSISTENT: EXIT_OK,
    VerdictKind.OBSTRUCTION: EXIT_OBSTRUCTION,
    VerdictKind.INCONCLUSIVE: EXIT_INCONCLUSIVE,
}


@dataclass(frozen=True)
class PipelineConfig:
    n_max: int = 60
    max_order: int = 6
    max_degree: int = 8
    depth: int = 4
    fit_nmax: int = 500
    ode_check_terms: int = 100


class _Timer:
    def __init__(self):
        self.stages: dict[str, float] = {}

    @contextmanager
    def __call__(self, name: str):
        t0 = time.perf_counter()
        try:
            yield
        finally:
            self.stages[name] = round(time.perf_counter() - t0, 6)


def _finish(rep: dict, code: int, timer: _Timer) -> tuple[dict, int]:
    rep["exit_code"] = code
    rep["timing"] = timer.stages
    return rep, code


def _ode_check(o, s, cfg: PipelineConfig, rec) -> dict:
    N = min(s.last, cfg.ode_check_terms)
    upto = N - rec.order - rec.degree
    residual = o.series_residual(s.values[: N + 1], max(upto, 0))
    return {"terms": N + 1, "checked_through": upto, "vanishes": all(c == 0 for c in residual)}


def _analysis_tail(rep: dict, timer: _Timer, rec, s_exact, cfg: PipelineConfig, initial) -> int:
    """Shared stages after a recurrence is known: ODE, exponents, verdict, fit, certificates."""
    with timer("ode"):
        o = rec_to_ode(rec, initial)
        rep["ode"] = R.ode(o)
        rep["ode_check"] = _ode_check(o, s_exact, cfg, rec)
    with timer("singularities"):
        sing = singular_points(o)
        rep["singularities"] = R.singularities(sing)
    with timer("verdict"):
        v = obstruction_verdict(o, s_exact, sing, rec)
        rep["verdict"] = R.verdict(v)
    code = VERDICT_EXIT[v.kind]
    with timer("fit"):
        try:
            s_fit = continue_sequence(rec, s_exact, max(cfg.fit_nmax, s_exact.last))
            f = fit_sequence(s_fit, cfg.depth)
            rep["fit"] = R.fit(f)
            rep["fit_sequence"] = R.sequence(s_fit)
            if sing.finite_nonzero:
                rep["cross_validation"] = R.cross_validation(cross_validate(f, sing))
        except (FitError, SingularStepError) as exc:
            rep["errors"].append(R.error("fit", exc))
    with timer("certificates"):
        rep["certificates"] = R.certificate(g_certificate(s_exact, holonomic=True))
    return code


def cmd_analyze_term(path: str, cfg: PipelineConfig) -> tuple[dict, int]:
    timer = _Timer()
    rep = R.envelope("analyze-term")
    rep["config"] = dict(asdict(cfg), precision=precision_digits())
    rep["errors"] = []
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        rep["errors"].append(R.error("read", exc))
        return _finish(rep, EXIT_INPUT, timer)
    rep["input"] = {"term": text.strip()}
    with timer("parse"):
        try:
            t = parse_term(text)
        except TermParseError as exc:
            rep["errors"].append(R.error("parse", exc, line=exc.line, column=exc.col))
            return _finish(rep, EXIT_INPUT, timer)
    rep["term"] = {"text": t.to_str(), "r": t.r}
    balanced, residual = check_balance(t)
    rep["term"]["balanced"] = balanced
    if not balanced:
        rep["errors"].append({"stage": "balance", "type": "UnbalancedTermError",
                              "message": f"term is not balanced: residual {residual.to_str(t.var_names)}",
                              "residual": residual.to_str(t.var_names)})
        return _finish(rep, EXIT_UNBALANCED, timer)
    witness = recession_witness(t)
    rep["term"]["finite_support"] = witness is None
    if witness is not None:
        exc = InfiniteSupportError(witness)
        rep["errors"].append(R.error("support", exc, direction=list(witness)))
        return _finish(rep, EXIT_INFINITE, timer)
    rep["term"]["binomial_form"] = [
        {"top": top.to_str(t.var_names), "bottom": bot.to_str(t.var_names), "power": sign}
        for top, bot, sign in to_binomial_form(t).binomials
    ]
    n_eval = max(cfg.n_max, required_length(cfg.max_order, cfg.max_degree) - 1)
    with timer("multisum"):
        s = eval_sequence(t, n_eval)
    rep["sequence"] = R.sequence(s)
    with timer("guess"):
        try:
            rec = guess_recurrence(s, cfg.max_order, cfg.max_degree)
        except InsufficientDataError as exc:
            rec = None
            rep["errors"].append(R.error("guess", exc, required=exc.required))
    if rec is None:
        if not rep["errors"]:
            rep["errors"].append({"stage": "guess", "type": "NoRecurrence",
                                  "message": f"no recurrence with order <= {cfg.max_order}, degree <= {cfg.max_degree}"})
        return _finish(rep, EXIT_NO_RECURRENCE, timer)
    rep["recurrence"] = R.recurrence(rec)
    rep["recurrence"]["verified_on"] = [s.offset, s.last]
    # the verdict stays in the report; a completed term analysis exits 0 whatever it says
    _analysis_tail(rep, timer, rec, s, cfg, s.values[: rec.order])
    return _finish(rep, EXIT_OK, timer)


def _parse_initials(text: str) -> list[Fraction]:
    try:
        return [Fraction(x.strip()) for x in text.split(",") if x.strip()]
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"initial values must be comma-separated rationals, got {text!r}") from None


def cmd_obstruct(path: str, initials: str, cfg: PipelineConfig) -> tuple[dict, int]:
    timer = _Timer()
    rep = R.envelope("obstruct")
    rep["config"] = dict(asdict(cfg), precision=precision_digits())
    rep["errors"] = []
    try:
        rec = read_recurrence(path)
        init = _parse_initials(initials)
        if len(init) != rec.order:
            raise ValueError(f"need {rec.order} initial values, got {len(init)}")
    except (OSError, RecurrenceFormatError, ValueError) as exc:
        rep["errors"].append(R.error("input", exc))
        return _finish(rep, EXIT_INPUT, timer)
    rep["input"] = {"recurrence": rec.to_str(), "initials": [str(x) for x in init]}
    rep["recurrence"] = R.recurrence(rec)
    with timer("extend"):
        try:
            s = extend_sequence(rec, init, cfg.n_max)
        except SingularStepError as exc:
            rep["errors"].append(R.error("extend", exc, n=exc.n))
            return _finish(rep, EXIT_SINGULAR_STEP, timer)
    rep["sequence"] = R.sequence(s)
    rep["recurrence"]["verified_on"] = [s.offset, s.last] if verify_recurrence(rec, s) else None
    code = _analysis_tail(rep, timer, rec, s, cfg, init)
    return _finish(rep, code, timer)


def cmd_fit(path: str, cfg: PipelineConfig) -> tuple[dict, int]:
    timer = _Timer()
    rep = R.envelope("fit")
    rep["config"] = {"depth": cfg.depth, "precision": precision_digits()}
    rep["errors"] = []
    try:
        s = read_sequence(path)
    except (OSError, SequenceFormatError) as exc:
        rep["errors"].append(R.error("input", exc))
        return _finish(rep, EXIT_INPUT, timer)
    rep["sequence"] = R.sequence(s)
    with timer("fit"):
        try:
            rep["fit"] = R.fit(fit_sequence(s, cfg.depth))
        except FitError as exc:
            rep["errors"].append(R.error("fit", exc))
            return _finish(rep, EXIT_FIT, timer)
    return _finish(rep, EXIT_OK, timer)


def cmd_certify(path: str, cfg: PipelineConfig) -> tuple[dict, int]:
    timer = _Timer()
    rep = R.envelope("certify")
    rep["errors"] = []
    try:
        s = read_sequence(path)
    except (OSError, SequenceFormatError) as exc:
        rep["errors"].append(R.error("input", exc))
        return _finish(rep, EXIT_INPUT, timer)
    rep["sequence"] = R.sequence(s)
    holonomic = False
    with timer("guess"):
        try:
            holonomic = guess_recurrence(s, cfg.max_order, cfg.max_degree) is not None
        except InsufficientDataError as exc:
            rep["errors"].append(R.error("guess", exc, required=exc.required))
    with timer("certificates"):
        try:
            rep["certificates"] = R.certificate(g_certificate(s, holonomic), points=True)
        except ValueError as exc:
            rep["errors"].append(R.error("certificates", exc))
            return _finish(rep, EXIT_INPUT, timer)
    return _finish(rep, EXIT_OK, timer)


def cmd_lcm_table(n_max: int) -> tuple[dict, int]:
    timer = _Timer()
    rep = R.envelope("lcm-table")
    rep["errors"] = []
    with timer("table"):
        rows = lcm_binomial_table(n_max)
    rep["lcm_table"] = [{"n": n, "L_n": R.exact(L), "ratio": R.flt(q)} for n, L, q in rows]
    return _finish(rep, EXIT_OK, timer)


# argument handling --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="holoscope", description="Holonomic sequence analysis toolkit.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, nmax_default):
        sp.add_argument("--nmax", type=int, default=nmax_default)
        sp.add_argument("--max-order", type=int, default=6)
        sp.add_argument("--max-degree", type=int, default=8)
        sp.add_argument("--depth", type=int, default=4)
        sp.add_argument("--fit-nmax", type=int, default=500)
        sp.add_argument("--out", default="-")
        sp.add_argument("--format", choices=("json", "text"), default="json")

    a = sub.add_parser("analyze-term", help="full pipeline for a balanced multisum term")
    a.add_argument("term_file")
    common(a, 60)
    o = sub.add_parser("obstruct", help="exponent obstruction test for a recurrence")
    o.add_argument("recurrence_file")
    o.add_argument("--initials", required=True, help="comma-separated a_0,...,a_{d-1}")
    common(o, 2000)
    f = sub.add_parser("fit", help="asymptotic fit of a sequence file")
    f.add_argument("sequence_file")
    common(f, 0)
    c = sub.add_parser("certify", help="height and denominator certificates of a sequence file")
    c.add_argument("sequence_file")
    c.add_argument("--table", choices=("height", "denominator"), help="emit one curve as CSV instead")
    common(c, 0)
    t = sub.add_parser("lcm-table", help="lcm of binomial coefficients")
    t.add_argument("--csv", action="store_true", help="emit 'n,value' CSV of log(L_n)/n")
    common(t, 500)
    return p


def _emit(text: str, out: str) -> None:
    if out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, stream=sys.stderr)
    cfg = PipelineConfig(n_max=args.nmax, max_order=args.max_order, max_degree=args.max_degree,
                         depth=args.depth, fit_nmax=args.fit_nmax)
    try:
        precision_digits()
    except FitError as exc:
        print(f"holoscope: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.command == "analyze-term":
        rep, code = cmd_analyze_term(args.term_file, cfg)
    elif args.command == "obstruct":
        rep, code = cmd_obstruct(args.recurrence_file, args.initials, cfg)
    elif args.command == "fit":
        rep, code = cmd_fit(args.sequence_file, cfg)
    elif args.command == "certify":
        rep, code = cmd_certify(args.sequence_file, cfg)
        if args.table and code == EXIT_OK:
            cert = g_certificate(read_sequence(args.sequence_file), rep["certificates"]["holonomic"])
            curve = cert.height if args.table == "height" else cert.denominator
            _emit(to_csv(curve.points), args.out)
            return code
    else:
        if args.nmax < 1:
            print("holoscope: --nmax must be at least 1", file=sys.stderr)
            return EXIT_INPUT
        rep, code = cmd_lcm_table(args.nmax)
        if args.csv:
            _emit(to_csv([(n, q) for n, _, q in lcm_binomial_table(args.nmax)]), args.out)
            return code
    for err in rep.get("errors", []):
        print(f"holoscope: {err['stage']}: {err['message']}", file=sys.stderr)
    _emit(R.dumps(rep) if args.format == "json" else R.to_text(rep), args.out)
    return code


if __name__ == "__main__":
    sys.exit(main())
