"""Acceptance suite: every shipped claim as a runnable pass/fail criterion.

The registry below is the single source of truth for `brjunolab selftest`
and for tests/test_acceptance.py.  Expensive exponent estimates are
memoized on the run context so criteria that share reference points
(golden, silver, the tau = 3 and tau = 4 constructions) do not recompute
them.

Setting BRJUNO_SELFTEST_PERTURB to a comma-separated list of criterion ids
forces those criteria to run with impossible tolerance bands: a controlled
demonstration that the harness actually fails when a number moves.
"""
from __future__ import annotations

import math
import os
import time
from dataclasses import dataclass
from fractions import Fraction

from . import __version__
from .cf import (CFNumber, construct_tau_number, verify_cf_invariants)
from .quadrature import Interval, average_formula_bm, haar_cwt, integrate_B
from .regularity import (estimate_holder_primitive, estimate_p_exponent,
                         local_dimension, modulus_fit_badly_approximable)
from .rng import derive_stream_seed
from .series import check_functional_equation, eval_B, eval_Btilde
from .spectrum import analytic_spectrum, empirical_spectrum, jarnik_dim

RANDOM_MASTER_SEED = 0x5EED_B12A
SPECTRUM_SEED = 20260810

#: local-dimension fits use the deep window [14, 22]: at rational centers the
#: slope approaches 1 only like 1 - c/log(1/rho), and the shallower default
#: window has not yet shed the log correction
DIM_J_RANGE = (14, 22)


@dataclass
class Check:
    name: str
    value: float
    lo: float
    hi: float
    ok: bool
    note: str = ""


@dataclass
class CriterionResult:
    cid: int
    title: str
    passed: bool
    checks: list
    seconds: float
    error: str = ""


class Checker:
    def __init__(self, perturbed: bool):
        self.perturbed = perturbed
        self.checks: list[Check] = []

    def within(self, name, value, lo, hi, note="") -> bool:
        if self.perturbed:
            lo, hi = hi + 1.0, hi + 2.0
            note = (note + " " if note else "") + "(perturbed band)"
        ok = lo <= value <= hi
        self.checks.append(Check(name, float(value), float(lo), float(hi),
                                 ok, note))
        return ok

    def is_true(self, name, flag, note="") -> bool:
        flag = bool(flag) and not self.perturbed
        if self.perturbed:
            note = (note + " " if note else "") + "(perturbed)"
        self.checks.append(Check(name, 1.0 if flag else 0.0, 1.0, 1.0,
                                 flag, note))
        return flag

    @property
    def all_ok(self) -> bool:
        return all(c.ok for c in self.checks)


class RunContext:
    """Reference points and memoized estimates shared across criteria."""

    def __init__(self):
        self._points = {}
        self._pexp = {}
        self._holder = {}

    def point(self, label: str) -> CFNumber:
        if label not in self._points:
            if label == "golden":
                self._points[label] = CFNumber.golden()
            elif label == "silver":
                self._points[label] = CFNumber.silver()
            elif label == "tau3":
                self._points[label] = construct_tau_number(3, a1=2)
            elif label == "tau4":
                self._points[label] = construct_tau_number(4, a1=2)
            elif label == "third":
                self._points[label] = CFNumber.from_rational(Fraction(1, 3))
            elif label == "half":
                self._points[label] = CFNumber.from_rational(Fraction(1, 2))
            elif label == "random":
                self._points[label] = CFNumber.from_random(
                    derive_stream_seed(RANDOM_MASTER_SEED, 424242))
            else:
                raise KeyError(label)
        return self._points[label]

    def pexp(self, label: str, p: int):
        key = (label, p)
        if key not in self._pexp:
            self._pexp[key] = estimate_p_exponent(self.point(label), p)
        return self._pexp[key]

    def holder(self, label: str):
        if label not in self._holder:
            self._holder[label] = estimate_holder_primitive(self.point(label))
        return self._holder[label]


# ---------------------------------------------------------------------------
# criteria


def _c1_btilde_closed_form(ctx, chk):
    worst = 0.0
    for k in range(2, 101):
        worst = max(worst, abs(float(eval_Btilde(Fraction(1, k))) - math.log(k)))
    chk.within("max |Btilde(1/k) - log k|, k=2..100", worst, 0.0, 1e-12)


def _c2_fixed_points(ctx, chk):
    golden_val = (math.sqrt(5.0) - 1.0) / 2.0
    silver_val = math.sqrt(2.0) - 1.0
    for label, xval in (("golden", golden_val), ("silver", silver_val)):
        closed = math.log(1.0 / xval) / (1.0 - xval)
        got = eval_B(ctx.point(label), 1e-10).value
        chk.within(f"|B({label}) - closed form|", abs(got - closed), 0.0, 1e-9)


def _c3_functional_equation(ctx, chk):
    tol = 1e-9
    worst = 0.0
    for i in range(20):
        x = CFNumber.from_random(derive_stream_seed(RANDOM_MASTER_SEED, i))
        x.stream.prefix(60)
        worst = max(worst, check_functional_equation(x, tol))
    chk.within("max residual over 20 random numbers", worst, 0.0, 2 * tol)


def _c4_cf_invariants(ctx, chk):
    from .series import gamma_bounds_check
    points = [("golden", ctx.point("golden")), ("silver", ctx.point("silver")),
              ("tau3", ctx.point("tau3")), ("tau4", ctx.point("tau4"))]
    points += [(f"rand{i}", CFNumber.from_random(
        derive_stream_seed(RANDOM_MASTER_SEED, 100 + i))) for i in range(20)]
    all_ok = True
    worst_gamma_slack = 0.0
    depth_note = []
    for label, x in points:
        rep = verify_cf_invariants(x, 40)
        if not rep.all_ok:
            all_ok = False
            depth_note.append(f"{label}:{rep.failures[:3]}")
        if rep.depth_checked < 40:
            depth_note.append(f"{label} capped at depth {rep.depth_checked}")
        for k, lower, gamma, upper in gamma_bounds_check(x, 40):
            worst_gamma_slack = max(worst_gamma_slack,
                                    lower - gamma, gamma - upper)
    chk.is_true("determinant/beta-sign/Eq20/Eq21 on all 24 points", all_ok,
                "; ".join(depth_note[:4]))
    chk.within("worst Eq22 two-sided slack", worst_gamma_slack,
               -math.inf, 1e-12)


def _c5_theorem1(ctx, chk):
    bands = [("golden", 0.40, 0.60), ("third", -0.08, 0.08),
             ("tau3", 0.23, 0.43), ("tau4", 0.17, 0.33)]
    for label, lo, hi in bands:
        est = ctx.pexp(label, 1)
        chk.within(f"p=1 slope at {label}", est.slope, lo, hi)
        chk.is_true(
            f"fit reliable at {label}", est.fit_is_reliable(),
            f"r2={est.r_squared:.3f} rmse={est.rmse:.3f}")


def _c6_p_independence(ctx, chk):
    for label in ("golden", "silver"):
        e1, e2 = ctx.pexp(label, 1), ctx.pexp(label, 2)
        chk.within(f"|slope_p1 - slope_p2| at {label}",
                   abs(e1.slope - e2.slope), 0.0, 0.15)
        chk.within(f"Hoelder ordering slope_p2 - slope_p1 at {label}",
                   e2.slope - e1.slope, -math.inf, 0.05)


def _c7_wavelet_law(ctx, chk):
    p0, q0, p1, q1 = 1, 0, 0, 1
    worst = 0.0
    count = 0
    while True:
        p0, q0, p1, q1 = p1, q1, p1 + p0, q1 + q0
        if q1 < 2:
            continue
        if q1 > 610:
            break
        a = 1e-3 / (q1 * q1)
        c = haar_cwt(a, Fraction(p1, q1))
        worst = max(worst, abs(q1 * c - math.log(2.0)))
        count += 1
    chk.within(f"max |q C_B - log 2| over {count} golden convergents",
               worst, 0.0, 0.1)


def _c8_eq9_agreement(ctx, chk):
    r = Fraction(1, 2)
    q = 2
    for h in (1e-3, 1e-4):
        hf = Fraction(h).limit_denominator(10**12)
        res = integrate_B(Interval(r, r + hf), float(hf) * 1e-4)
        avg = res.value / float(hf)
        model = float(average_formula_bm(r, h))
        bound = 10.0 * q * h * math.log(1.0 / (q * q * h))
        chk.within(f"|average - model| at h={h:g}", abs(avg - model),
                   0.0, bound)


def _c9_modulus_order(ctx, chk):
    for label in ("golden", "silver"):
        est = modulus_fit_badly_approximable(ctx.point(label))
        chk.within(f"modulus slope at {label}", est.slope, 1.35, 1.65)


def _c10_primitive_holder(ctx, chk):
    bands = [("golden", 1.35, 1.65), ("half", 0.9, 1.1), ("tau4", 1.15, 1.35)]
    for label, lo, hi in bands:
        est = ctx.holder(label)
        chk.within(f"primitive Hoelder slope at {label}", est.slope, lo, hi)
    for label in ("golden", "silver", "tau3", "tau4"):
        gap = ctx.holder(label).slope - ctx.pexp(label, 1).slope
        chk.within(f"Lemma-7 ordering gap at {label}", gap,
                   1.0 - 0.15, math.inf)


def _c11_local_dimension(ctx, chk):
    jmin, jmax = DIM_J_RANGE
    for label in ("golden", "half", "random"):
        est = local_dimension(ctx.point(label), jmin, jmax)
        chk.within(f"local dimension slope at {label}", est.slope, 0.92, 1.05)


def _c12_spectrum(ctx, chk):
    exact_ok = all(
        analytic_spectrum(1.0 / tau) == jarnik_dim(tau)
        for tau in [2 + k / 8 for k in range(0, 64)] + [10.0, 100.0, 1e6])
    chk.is_true("analytic_spectrum(1/tau) == jarnik_dim(tau) on grid",
                exact_ok)
    spec1 = empirical_spectrum(512, depth=60, seed=SPECTRUM_SEED)
    chk.within("empirical mass in H in [0.4, 0.6)",
               spec1.mass_in(0.4, 0.6), 0.85, 1.0)
    spec2 = empirical_spectrum(512, depth=60, seed=SPECTRUM_SEED)
    chk.is_true("bit-reproducible under fixed seed",
                spec1.estimates == spec2.estimates and spec1.bins == spec2.bins)


CRITERIA = [
    (1, "Exact rational values Btilde(1/k) = log k", _c1_btilde_closed_form),
    (2, "Fixed-point closed forms at golden and silver", _c2_fixed_points),
    (3, "Functional-equation residuals (20 random numbers)",
     _c3_functional_equation),
    (4, "Exact CF invariants to depth 40", _c4_cf_invariants),
    (5, "Desk-scale 1-exponents (Theorem 1 values)", _c5_theorem1),
    (6, "p-independence of the exponent (p = 1 vs 2)", _c6_p_independence),
    (7, "Haar wavelet law q C_B -> log 2 at golden convergents",
     _c7_wavelet_law),
    (8, "Local-average model agreement at 1/2", _c8_eq9_agreement),
    (9, "Modulus of continuity order 3/2 at badly approximable points",
     _c9_modulus_order),
    (10, "Primitive Hoelder exponents and Lemma-7 ordering",
     _c10_primitive_holder),
    (11, "Local dimension of B dx is 1", _c11_local_dimension),
    (12, "Spectrum: analytic law and empirical concentration", _c12_spectrum),
]


def _finite(v: float) -> float:
    """Clamp non-finite band edges so reports stay strict JSON."""
    if math.isinf(v):
        return 1e308 if v > 0 else -1e308
    return v


def perturbed_ids() -> set:
    raw = os.environ.get("BRJUNO_SELFTEST_PERTURB", "")
    out = set()
    for tok in raw.replace(",", " ").split():
        try:
            out.add(int(tok))
        except ValueError:
            continue
    return out


def run_acceptance(ids=None, stream=None):
    """Run the (selected) criteria; returns (all_passed, report dict)."""
    ctx = RunContext()
    perturb = perturbed_ids()
    selected = [c for c in CRITERIA if ids is None or c[0] in ids]
    results = []
    errors = []
    all_passed = True
    for cid, title, func in selected:
        chk = Checker(cid in perturb)
        t0 = time.time()
        error = ""
        try:
            func(ctx, chk)
        except Exception as exc:                      # noqa: BLE001
            error = f"{type(exc).__name__}: {exc}"
            errors.append({"criterion": cid, "error": error})
        seconds = time.time() - t0
        passed = chk.all_ok and not error
        all_passed = all_passed and passed
        results.append(CriterionResult(cid, title, passed, chk.checks,
                                       seconds, error))
        if stream is not None:
            tag = "PASS" if passed else "FAIL"
            stream.write(f"[{cid:2d}] {tag}  {title}  ({seconds:.1f}s)\n")
            for c in chk.checks:
                mark = "ok " if c.ok else "BAD"
                band = (f"[{c.lo:.6g}, {c.hi:.6g}]"
                        if not math.isinf(c.lo) or not math.isinf(c.hi)
                        else "")
                note = f"  {c.note}" if c.note else ""
                stream.write(f"      {mark} {c.name}: {c.value:.6g} "
                             f"in {band}{note}\n")
            if error:
                stream.write(f"      error: {error}\n")
            stream.flush()
    report = {
        "config": {
            "criteria": [c[0] for c in selected],
            "perturbed": sorted(perturb),
            "seed": RANDOM_MASTER_SEED,
            "spectrum_seed": SPECTRUM_SEED,
        },
        "results": [
            {
                "id": r.cid,
                "title": r.title,
                "passed": r.passed,
                "seconds": round(r.seconds, 3),
                "error": r.error,
                "checks": [
                    {"name": c.name, "value": _finite(c.value),
                     "lo": _finite(c.lo), "hi": _finite(c.hi),
                     "ok": c.ok, "note": c.note}
                    for c in r.checks
                ],
            }
            for r in results
        ],
        "errors": errors,
        "version": __version__,
    }
    return all_passed, report
