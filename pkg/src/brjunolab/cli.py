"""Command-line surface.

Subcommands:

  cf       -- expansion table (n, a_n, p_n, q_n, tau_n, log beta_n)
  brjuno   -- series value with certified tail bound (Btilde at rationals)
  pexp     -- p-exponent log-log scan: CSV of scales + summary JSON
  selftest -- run the acceptance criteria, exit 0 iff all pass

Number grammar for --x (covers every reference point of the theory):

  golden | silver | p/q | per:[a1,..;b1,..] | tau:<real> | rand:<seed>:<depth>

Exit codes: 0 success, 2 input error, 3 resource (integer budget) error.
Every run embeds its RunConfig in the output, and identical configs produce
byte-identical files: floats are serialized with repr and JSON keys are
sorted.  Output formats are documented in docs/formats.md and the JSON
shapes in schemas/.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import asdict, dataclass
from fractions import Fraction

from . import __version__
from .cf import (CFNumber, ExpansionTerminated, QuotientBudgetError,
                 construct_tau_number, convergents, diophantine_profile)
from .regularity import EstimationError, estimate_p_exponent
from .series import (BrjunoBudgetError, BrjunoRationalError, eval_B,
                     eval_Btilde, check_functional_equation)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_RESOURCE = 3


class XSpecError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    x: str = ""
    depth: int = 0
    tol: float = 0.0
    p: int = 1
    j_min: int = 8
    j_max: int = 18
    seed: int = 0
    fmt: str = "json"
    out: str = ""

    def as_dict(self):
        return {k: v for k, v in asdict(self).items() if v not in ("", None)}


def parse_x_spec(spec: str) -> CFNumber:
    """Parse the --x grammar into a CFNumber."""
    spec = spec.strip()
    if spec == "golden":
        return CFNumber.golden()
    if spec == "silver":
        return CFNumber.silver()
    if spec.startswith("per:"):
        body = spec[4:].strip()
        if not (body.startswith("[") and body.endswith("]")):
            raise XSpecError(f"malformed periodic spec {spec!r}")
        inner = body[1:-1]
        if ";" not in inner:
            raise XSpecError("periodic spec needs 'preperiod;period'")
        pre_s, cyc_s = inner.split(";", 1)
        try:
            pre = [int(t) for t in pre_s.split(",") if t.strip()]
            cyc = [int(t) for t in cyc_s.split(",") if t.strip()]
        except ValueError as exc:
            raise XSpecError(f"bad quotient in {spec!r}") from exc
        if not cyc:
            raise XSpecError("period part must be nonempty")
        return CFNumber.from_periodic(pre, cyc, label=spec)
    if spec.startswith("tau:"):
        try:
            tau = float(spec[4:])
        except ValueError as exc:
            raise XSpecError(f"bad tau in {spec!r}") from exc
        return construct_tau_number(tau, a1=2)
    if spec.startswith("rand:"):
        parts = spec.split(":")
        if len(parts) != 3:
            raise XSpecError("random spec is rand:<seed>:<depth>")
        try:
            seed, depth = int(parts[1]), int(parts[2])
        except ValueError as exc:
            raise XSpecError(f"bad random spec {spec!r}") from exc
        x = CFNumber.from_random(seed, label=spec)
        x.stream.prefix(depth)
        return x
    if "/" in spec:
        try:
            fr = Fraction(spec)
        except (ValueError, ZeroDivisionError) as exc:
            raise XSpecError(f"bad rational {spec!r}") from exc
        whole = math.floor(fr)
        frac = fr - whole
        if frac == 0:
            raise XSpecError("integers have an empty expansion")
        x = CFNumber.from_rational(frac, label=spec)
        x.integer_part_removed = whole
        return x
    raise XSpecError(f"unrecognized x spec {spec!r}")


def _emit(text: str, out_path: str):
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _run_json(config: RunConfig, results, errors=()) -> str:
    doc = {"config": config.as_dict(), "results": results,
           "errors": list(errors), "version": __version__}
    return json.dumps(doc, sort_keys=True, allow_nan=False) + "\n"


def cmd_cf(args) -> int:
    config = RunConfig("cf", x=args.x, depth=args.depth, fmt=args.format,
                       out=args.out or "")
    x = parse_x_spec(args.x)
    whole = getattr(x, "integer_part_removed", 0)
    try:
        convs = convergents(x, args.depth)
        prof = diophantine_profile(x, max(1, min(args.depth,
                                                 convs[-1].n or 1)))
    except QuotientBudgetError as exc:
        sys.stderr.write(f"resource error: {exc}\n")
        return EXIT_RESOURCE
    quots = x.stream.prefix(args.depth)
    taus = dict(prof.taus)
    rows = []
    for c in convs[2:]:
        n = c.n
        rows.append({
            "n": n,
            "a": quots[n - 1],
            "p": str(c.p),
            "q": str(c.q),
            "tau_n": taus.get(n),
            "log_beta": (prof.log_betas[n] if n < len(prof.log_betas)
                         else None),
        })
    if args.format == "csv":
        lines = ["n,a,p,q,tau_n,log_beta"]
        for r in rows:
            tau = "" if r["tau_n"] is None else repr(r["tau_n"])
            lb = "" if r["log_beta"] is None else repr(r["log_beta"])
            lines.append(f'{r["n"]},{r["a"]},{r["p"]},{r["q"]},{tau},{lb}')
        if whole:
            lines.insert(0, f"# integer part {whole} removed")
        _emit("\n".join(lines) + "\n", args.out)
    else:
        results = {"rows": rows, "integer_part_removed": whole,
                   "truncated": len(convs) - 2 < args.depth}
        _emit(_run_json(config, results), args.out)
    return EXIT_OK


def cmd_brjuno(args) -> int:
    config = RunConfig("brjuno", x=args.x, tol=args.tol, fmt="json",
                       out=args.out or "")
    x = parse_x_spec(args.x)
    errors = []
    if x.kind == "rational":
        value = float(eval_Btilde(x.rational_value))
        results = {"value": value, "depth": len(x.stream.prefix(10**6)),
                   "tail_bound": 0.0, "routed": "Btilde"}
    else:
        try:
            ev = eval_B(x, args.tol)
        except BrjunoBudgetError as exc:
            part = exc.partial
            results = {"value": float(part.value), "depth": part.depth,
                       "tail_bound": part.tail_bound, "routed": "B"}
            errors.append(str(exc))
            doc = _run_json(config, results, errors)
            _emit(doc, args.out)
            return EXIT_RESOURCE
        results = {"value": float(ev.value), "depth": ev.depth,
                   "tail_bound": ev.tail_bound, "routed": "B"}
        if args.check_feq:
            resid = check_functional_equation(x, args.tol)
            results["functional_equation_residual"] = resid
            results["functional_equation_ok"] = bool(resid <= 2 * args.tol)
    _emit(_run_json(config, results, errors), args.out)
    return EXIT_OK


def cmd_pexp(args) -> int:
    config = RunConfig("pexp", x=args.x, p=args.p, j_min=args.jmin,
                       j_max=args.jmax, fmt="csv", out=args.out or "")
    x = parse_x_spec(args.x)
    try:
        est = estimate_p_exponent(x, args.p, args.jmin, args.jmax)
    except EstimationError as exc:
        sys.stderr.write(f"estimation failed: {exc}\n")
        return EXIT_INPUT
    lines = ["j,log2_rho,log2_Mp"]
    for logr, logm in est.scales:
        j = round(-logr / math.log(2.0))
        lines.append(f"{j},{repr(logr / math.log(2.0))},"
                     f"{repr(logm / math.log(2.0))}")
    _emit("\n".join(lines) + "\n", args.out)
    summary = {"slope": est.slope, "intercept": est.intercept,
               "r_squared": est.r_squared, "rmse": est.rmse,
               "kind": est.kind, "p": est.p,
               "dropped_scales": est.dropped}
    sys.stdout.write(_run_json(config, summary))
    return EXIT_OK


def cmd_selftest(args) -> int:
    from .acceptance import run_acceptance
    ids = None
    if args.criteria:
        try:
            ids = {int(t) for t in args.criteria.replace(",", " ").split()}
        except ValueError:
            sys.stderr.write("criteria must be a comma list of integers\n")
            return EXIT_INPUT
    ok, report = run_acceptance(ids=ids, stream=sys.stdout)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(report, fh, sort_keys=True, indent=2, allow_nan=False)
            fh.write("\n")
    sys.stdout.write("ALL PASS\n" if ok else "FAILURES PRESENT\n")
    return EXIT_OK if ok else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="brjunolab",
        description="Brjuno function laboratory: certified series values, "
                    "singular quadrature, and regularity estimation.")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    p_cf = sub.add_parser("cf", help="continued-fraction table")
    p_cf.add_argument("--x", required=True)
    p_cf.add_argument("--depth", type=int, default=10)
    p_cf.add_argument("--format", choices=("csv", "json"), default="csv")
    p_cf.add_argument("--out", default=None)
    p_cf.set_defaults(func=cmd_cf)

    p_b = sub.add_parser("brjuno", help="Brjuno series value")
    p_b.add_argument("--x", required=True)
    p_b.add_argument("--tol", type=float, default=1e-9)
    p_b.add_argument("--check-feq", action="store_true",
                     help="also report the functional-equation residual")
    p_b.add_argument("--out", default=None)
    p_b.set_defaults(func=cmd_brjuno)

    p_p = sub.add_parser("pexp", help="p-exponent scan")
    p_p.add_argument("--x", required=True)
    p_p.add_argument("--p", type=int, choices=(1, 2), default=1)
    p_p.add_argument("--jmin", type=int, default=8)
    p_p.add_argument("--jmax", type=int, default=18)
    p_p.add_argument("--out", default=None,
                     help="CSV path (summary JSON goes to stdout)")
    p_p.set_defaults(func=cmd_pexp)

    p_s = sub.add_parser("selftest", help="run acceptance criteria")
    p_s.add_argument("--criteria", default="",
                     help="comma list of criterion ids (default: all)")
    p_s.add_argument("--out", default=None, help="JSON report path")
    p_s.set_defaults(func=cmd_selftest)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except XSpecError as exc:
        sys.stderr.write(f"input error: {exc}\n")
        return EXIT_INPUT
    except (ValueError, ExpansionTerminated, BrjunoRationalError) as exc:
        sys.stderr.write(f"input error: {exc}\n")
        return EXIT_INPUT
    except (QuotientBudgetError, BrjunoBudgetError, MemoryError) as exc:
        sys.stderr.write(f"resource error: {exc}\n")
        return EXIT_RESOURCE


if __name__ == "__main__":
    sys.exit(main())
