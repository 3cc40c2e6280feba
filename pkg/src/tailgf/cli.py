"""Command-line front end.

Subcommands mirror the library layers: `eval` (generating functions and
tail generating functions), `profile` (fixed points and rates), `psi`
(kernel values and integrals), `transition` (the semigroup F_t(s)),
`simulate` (Monte Carlo), `yaglom`, `survival`, `critical-expansion`,
`wlimit`, `termination` (limit laws), and `verify` (the acceptance
battery).

Laws and families are given as JSON: inline (`--law '{"type": "finite",
"p": [0.4, 0, 0.4], "defect": 0.2}'`) or as a path to a JSON file.  Output
is JSON (default) or CSV with full float precision; `--out` redirects it
to a file.  Exit codes: 0 success, 2 invalid specification or domain, 3
numerical failure (including failed verification).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from .acceptance import CRITERION_NAMES, run_all
from .errors import (
    ConstraintError,
    DivergenceError,
    DomainError,
    InsufficientEventsError,
    NotExtendableError,
    NumericalError,
    RegimeError,
    TailgfError,
)
from .kernels import get_kernel, koenigs, psi, psi_integral
from .laws import moments, tail_gf
from .lawspec import law_to_spec, load_family, load_law
from .limits import (
    critical_expansion,
    survival_expansion,
    termination_limit,
    w_transform,
    w_transform_classical,
    yaglom,
)
from .profiles import get_profile
from .simulate import SimConfig, estimate_pgf, simulate
from .transition import absorption, transition

SPEC_ERRORS = (ConstraintError, DomainError, NotExtendableError, RegimeError,
               DivergenceError)
NUMERIC_ERRORS = (NumericalError, InsufficientEventsError)


def _float_list(text: str) -> list:
    out = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        try:
            out.append(float(part))
        except ValueError:
            out.append(complex(part))
    return out


def _jsonable(obj):
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    if isinstance(obj, float) and not math.isfinite(obj):
        return repr(obj)
    raise TypeError(f"not JSON-serializable: {type(obj).__name__}")


def _fmt_cell(value) -> str:
    if isinstance(value, float):
        return "%.17g" % value
    if isinstance(value, (dict, list, tuple)):
        return json.dumps(value, default=_jsonable)
    return str(value)


def _csv_text(payload) -> str:
    if isinstance(payload, dict) and isinstance(payload.get("rows"), list):
        rows = payload["rows"]
        header = list(rows[0].keys()) if rows else []
        lines = [",".join(header)]
        lines += [",".join(_fmt_cell(row[h]) for h in header) for row in rows]
        extras = [(k, v) for k, v in payload.items() if k != "rows"]
        lines += [f"{k},{_fmt_cell(v)}" for k, v in extras]
        return "\n".join(lines) + "\n"
    if isinstance(payload, dict):
        lines = ["key,value"] + [f"{k},{_fmt_cell(v)}" for k, v in payload.items()]
        return "\n".join(lines) + "\n"
    raise DomainError("csv output needs a mapping payload")


def _emit(payload, args) -> None:
    if args.format == "json":
        text = json.dumps(payload, indent=2, default=_jsonable) + "\n"
    else:
        text = _csv_text(payload)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _law_arg(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--law", required=True,
                        help="law spec: inline JSON or a path to a JSON file")


def _output_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--format", choices=("json", "csv"), default="json")
    parser.add_argument("--out", default=None, help="write output to this file")


def _cmd_eval(args) -> dict:
    law = load_law(args.law)
    if args.derivative is not None:
        if args.at is None:
            raise DomainError("--derivative needs --at")
        value = law.derivative(args.at, args.derivative)
        return {"law": law_to_spec(law), "at": args.at,
                "derivative": args.derivative, "value": value}
    if not args.points:
        raise DomainError("need --points (or --at with --derivative)")
    points = _float_list(args.points)
    value = tail_gf(law, tuple(points), method=args.method)
    return {"law": law_to_spec(law), "points": points,
            "order": len(points), "value": value}


def _cmd_profile(args) -> dict:
    law = load_law(args.law)
    prof = get_profile(law)
    m = moments(law)
    out = prof.as_dict()
    out["defect"] = law.defect
    out["mean"] = m.m1
    out["m2"] = m.m2
    return out


def _cmd_psi(args) -> dict:
    law = load_law(args.law)
    kernel = get_kernel(law)
    if args.action == "eval":
        xs = _float_list(args.x)
        rows = [{"x": x, "psi": psi(kernel, x)} for x in xs]
        return {"mode": kernel.mode.value, "rows": rows}
    value = psi_integral(kernel, args.a, args.b, method=args.method)
    return {"mode": kernel.mode.value, "a": args.a, "b": args.b, "integral": value}


def _cmd_transition(args) -> dict:
    law = load_law(args.law)
    out = {"t": args.t, "s": args.s}
    if args.method == "all":
        results = transition(law, args.t, args.s, method="all")
        out["rows"] = [
            {"method": name, "value": res.value, "err_estimate": res.err_estimate}
            for name, res in results.items()
        ]
    else:
        res = transition(law, args.t, args.s, method=args.method)
        out.update({"method": res.method, "value": res.value,
                    "err_estimate": res.err_estimate})
    if args.absorption:
        out["absorption"] = absorption(law, args.t)
    return out


def _cmd_simulate(args) -> dict:
    law = load_law(args.law)
    times = tuple(_float_list(args.times)) if args.times else ()
    config = SimConfig(law, query_times=times, horizon=args.horizon,
                       replicates=args.replicates, seed=args.seed,
                       max_population=args.cap,
                       initial_population=args.initial)
    out = simulate(config, force_python=args.force_python)
    payload = dict(out.summary())
    if args.pgf_at:
        rows = []
        for spec in args.pgf_at:
            t_txt, s_txt = spec.split(":")
            t, s = float(t_txt), float(s_txt)
            est = estimate_pgf(out, t, s)
            rows.append({"t": t, "s": s, "estimate": est.value,
                         "stderr": est.stderr, "n": est.n})
        payload["rows"] = rows
    return payload


def _cmd_yaglom(args) -> dict:
    law = load_law(args.law)
    prof = get_profile(law)
    y = yaglom(prof, get_kernel(law), args.n)
    rows = [{"k": k + 1, "pi": float(p)} for k, p in enumerate(y.pi)]
    return {
        "rows": rows,
        "mass": float(np.sum(y.pi)),
        "tail_exponent": y.tail_exponent,
        "tail_constant": y.tail_constant,
        "r": y.r,
    }


def _cmd_survival(args) -> dict:
    law = load_law(args.law)
    prof = get_profile(law)
    exp = survival_expansion(prof, get_kernel(law), args.t)
    return {"t": exp.t, "first_term": exp.first_term,
            "second_term": exp.second_term, "total": exp.total,
            "alpha": exp.alpha, "k0": exp.k0, "k1": exp.k1}


def _cmd_critical_expansion(args) -> dict:
    law = load_law(args.law)
    exp = critical_expansion(law, n=args.n)
    out = {"m2": exp.m2, "m3": exp.m3, "lead": exp.lead,
           "log_coeff": exp.log_coeff, "const_coeff": exp.const_coeff}
    if args.n:
        out["rows"] = [{"k": k + 1, "h": float(v)} for k, v in enumerate(exp.h)]
    return out


def _cmd_wlimit(args) -> dict:
    law = load_law(args.law)
    prof = get_profile(law)
    w = w_transform(law, prof)
    out = {"q": w.q, "gamma": w.gamma, "degenerate": w.degenerate,
           "mean": w.mean, "second_moment": w.second_moment}
    if args.rho:
        rows = []
        for rho in _float_list(args.rho):
            row = {"rho": rho, "eta": w.eta(rho)}
            if args.classical:
                row["eta_classical"] = w_transform_classical(law, prof, rho)
            rows.append(row)
        out["rows"] = rows
    return out


def _cmd_termination(args) -> dict:
    family = load_family(args.family)
    lim = termination_limit(family)
    out = {"kind": lim.kind, "notes": lim.notes}
    if args.u:
        out["rows"] = [{"u": u, "cdf": lim.cdf(u)} for u in _float_list(args.u)]
    if args.t:
        if args.eps is None:
            raise DomainError("--t needs --eps to map times to the limit variable")
        rows = []
        for t in _float_list(args.t):
            u = lim.u_of_t(args.eps, t)
            rows.append({"t": t, "u": u, "cdf": lim.cdf(u)})
        out["time_rows"] = rows
    return out


def _parse_suite(text: str) -> list:
    if text.strip().lower() == "all":
        return sorted(CRITERION_NAMES)
    by_name = {name: num for num, name in CRITERION_NAMES.items()}
    numbers = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if part.isdigit():
            num = int(part)
            if num not in CRITERION_NAMES:
                raise DomainError(f"no criterion {num}")
        elif part in by_name:
            num = by_name[part]
        else:
            raise DomainError(f"unknown criterion {part!r}")
        numbers.append(num)
    return numbers


def _cmd_verify(args) -> int:
    numbers = _parse_suite(args.suite)
    results = run_all(numbers)
    if args.format == "json":
        payload = [
            {"number": r.number, "name": r.name, "passed": r.passed,
             "details": r.details, "elapsed": r.elapsed}
            for r in results
        ]
        text = json.dumps(payload, indent=2) + "\n"
        if args.out:
            Path(args.out).write_text(text)
        else:
            sys.stdout.write(text)
    else:
        for r in results:
            print(r.line())
    return 0 if all(r.passed for r in results) else 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tailgf",
        description="extendable branching processes: tail generating functions, "
                    "transition functionals, simulation, and limit laws",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="tail generating functions and derivatives")
    _law_arg(p)
    p.add_argument("--points", help="comma-separated nodes of the tail GF")
    p.add_argument("--method", choices=("auto", "series", "direct"), default="auto")
    p.add_argument("--at", type=float, help="evaluation point for --derivative")
    p.add_argument("--derivative", type=int, help="derivative order at --at")
    _output_args(p)

    p = sub.add_parser("profile", help="fixed points, rates, and regime")
    _law_arg(p)
    _output_args(p)

    p = sub.add_parser("psi", help="kernel values and integrals")
    psub = p.add_subparsers(dest="action", required=True)
    pe = psub.add_parser("eval", help="pointwise kernel values")
    _law_arg(pe)
    pe.add_argument("--x", required=True, help="comma-separated points")
    _output_args(pe)
    pi = psub.add_parser("integral", help="kernel integral over [a, b]")
    _law_arg(pi)
    pi.add_argument("--a", type=float, required=True)
    pi.add_argument("--b", type=float, required=True)
    pi.add_argument("--method", choices=("auto", "closed", "quadrature"),
                    default="auto")
    _output_args(pi)

    p = sub.add_parser("transition", help="F_t(s) by one or all methods")
    _law_arg(p)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--s", type=float, required=True)
    p.add_argument("--method", default="auto",
                   choices=("auto", "ode", "implicit", "closed", "all"))
    p.add_argument("--absorption", action="store_true",
                   help="also report extinct/killed/alive masses at time t")
    _output_args(p)

    p = sub.add_parser("simulate", help="Monte Carlo replicates")
    _law_arg(p)
    p.add_argument("--horizon", type=float, default=10.0)
    p.add_argument("--replicates", type=int, default=1000)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--times", help="comma-separated snapshot times")
    p.add_argument("--cap", type=int, default=10_000_000)
    p.add_argument("--initial", type=int, default=1)
    p.add_argument("--pgf-at", action="append", metavar="T:S",
                   help="estimate E[s^Z_t] at time T and argument S (repeatable)")
    p.add_argument("--force-python", action="store_true")
    _output_args(p)

    p = sub.add_parser("yaglom", help="quasi-stationary law")
    _law_arg(p)
    p.add_argument("--n", type=int, default=20)
    _output_args(p)

    p = sub.add_parser("survival", help="two-term survival expansion")
    _law_arg(p)
    p.add_argument("--t", type=float, required=True)
    _output_args(p)

    p = sub.add_parser("critical-expansion", help="long-time critical expansion")
    _law_arg(p)
    p.add_argument("--n", type=int, default=0, help="series coefficients to extract")
    _output_args(p)

    p = sub.add_parser("wlimit", help="supercritical martingale limit")
    _law_arg(p)
    p.add_argument("--rho", help="comma-separated transform arguments")
    p.add_argument("--classical", action="store_true",
                   help="cross-check with the classical integral route")
    _output_args(p)

    p = sub.add_parser("termination", help="near-critical killing-time limits")
    p.add_argument("--family", required=True,
                   help="family spec: inline JSON or a path to a JSON file")
    p.add_argument("--u", help="comma-separated points of the limit variable")
    p.add_argument("--t", help="comma-separated physical times (needs --eps)")
    p.add_argument("--eps", type=float, help="family parameter for --t")
    _output_args(p)

    p = sub.add_parser("verify", help="run the acceptance battery")
    p.add_argument("--suite", default="all",
                   help="'all', or a comma-separated list of numbers/names")
    _output_args(p)

    return parser


_COMMANDS = {
    "eval": _cmd_eval,
    "profile": _cmd_profile,
    "psi": _cmd_psi,
    "transition": _cmd_transition,
    "simulate": _cmd_simulate,
    "yaglom": _cmd_yaglom,
    "survival": _cmd_survival,
    "critical-expansion": _cmd_critical_expansion,
    "wlimit": _cmd_wlimit,
    "termination": _cmd_termination,
}


def _fail(exc: Exception, code: int) -> int:
    diag = {"error": type(exc).__name__, "message": str(exc)}
    sys.stderr.write(json.dumps(diag) + "\n")
    return code


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "verify":
            return _cmd_verify(args)
        payload = _COMMANDS[args.command](args)
        _emit(payload, args)
        return 0
    except SPEC_ERRORS as exc:
        return _fail(exc, 2)
    except NUMERIC_ERRORS as exc:
        return _fail(exc, 3)
    except (json.JSONDecodeError, FileNotFoundError, KeyError, ValueError) as exc:
        return _fail(exc, 2)
    except TailgfError as exc:
        return _fail(exc, 3)


if __name__ == "__main__":
    sys.exit(main())
