"""Pointwise regularity estimators.

All estimators share the same template: measure a local quantity at dyadic
scales rho_j = 2^-j, fit log(quantity) against log(rho) by least squares,
and report the slope together with fit quality.  The quantities are

  * p-exponent:        M_p(rho), the optimal-constant local oscillation;
  * modulus fit:       the unnormalized integral 2 rho M_1(rho);
  * primitive Hoelder: sup over a probe net of |second difference| of the
                       primitive at span 2^-j;
  * local dimension:   the mass int B over [x0 - rho, x0 + rho].

Fit quality is part of the contract: every estimate carries r^2 and the
residual RMS.  For flat data (slope ~ 0, e.g. rational centers) r^2 is
structurally near zero however good the fit, so the RMS is the meaningful
gate there.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .cf import CFNumber, convergents
from .quadrature import (Interval, integrate_B, oscillation_at,
                         _center_fraction)

DEFAULT_J_MIN = 8
DEFAULT_J_MAX = 18

#: Lemma-8 style probe window: radius 2^-j * log^2(2^j), with gamma = 2 fixed
PROBE_LOG_EXPONENT = 2


class EstimationError(RuntimeError):
    """Fewer than five usable scales survived."""


@dataclass
class ExponentEstimate:
    slope: float
    intercept: float
    r_squared: float
    scales: list                # (log rho, log M) pairs, rho decreasing
    p: float
    kind: str
    rmse: float = 0.0
    dropped: list = field(default_factory=list)
    detail: dict = field(default_factory=dict)

    def fit_is_reliable(self, r2_floor: float = 0.9,
                        flat_rmse: float = 0.05) -> bool:
        """r^2 gate with the flat-line carve-out (see module docstring)."""
        return self.r_squared >= r2_floor or self.rmse <= flat_rmse


def loglog_fit(points, p, kind, dropped=()) -> ExponentEstimate:
    if len(points) < 5:
        raise EstimationError(f"only {len(points)} scales survived, need >= 5")
    n = len(points)
    xs = [x for x, _ in points]
    ys = [y for _, y in points]
    mx, my = sum(xs) / n, sum(ys) / n
    sxx = sum((x - mx) ** 2 for x in xs)
    sxy = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
    slope = sxy / sxx
    intercept = my - slope * mx
    ss_res = sum((y - slope * x - intercept) ** 2 for x, y in zip(xs, ys))
    ss_tot = sum((y - my) ** 2 for y in ys)
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 0.0
    return ExponentEstimate(slope=slope, intercept=intercept, r_squared=r2,
                            scales=list(points), p=p, kind=kind,
                            rmse=math.sqrt(ss_res / n), dropped=list(dropped))


def _scale_fractions(j_min, j_max):
    if not (4 <= j_min < j_max <= 22):
        raise ValueError("need 4 <= j_min < j_max <= 22")
    return [(j, Fraction(1, 1 << j)) for j in range(j_min, j_max + 1)]


def estimate_p_exponent(x0: CFNumber, p: float = 1,
                        j_min: int = DEFAULT_J_MIN,
                        j_max: int = DEFAULT_J_MAX) -> ExponentEstimate:
    """Slope of log M_p(2^-j) vs log 2^-j; estimates the p-exponent at x0.

    M_p is already the normalized average root, so no -1/p offset applies.
    Scales whose quadrature fails are dropped (recorded); fewer than five
    survivors raise EstimationError.
    """
    if p not in (1, 2):
        raise ValueError("p must be 1 or 2")
    scales = _scale_fractions(j_min, j_max)
    center = _center_fraction(x0, Fraction(1, 1 << (j_max + 24)))
    pts, dropped = [], []
    for j, rho in scales:
        try:
            m = oscillation_at(center, rho, p)
            pts.append((math.log(float(rho)), math.log(m)))
        except (ValueError, OverflowError) as exc:
            dropped.append((j, repr(exc)))
    return loglog_fit(pts, p, "p_exponent", dropped)


def compare_p_exponents(x0: CFNumber, j_min: int = DEFAULT_J_MIN,
                        j_max: int = DEFAULT_J_MAX):
    """(estimate for p=1, estimate for p=2, |slope difference|) on shared scales."""
    e1 = estimate_p_exponent(x0, 1, j_min, j_max)
    e2 = estimate_p_exponent(x0, 2, j_min, j_max)
    return e1, e2, abs(e1.slope - e2.slope)


def modulus_fit_badly_approximable(x0: CFNumber, j_min: int = DEFAULT_J_MIN,
                                   j_max: int = DEFAULT_J_MAX) -> ExponentEstimate:
    """Fit of the unnormalized integral log(2 rho M_1(rho)) vs log rho.

    A slope of 3/2 certifies the extremal two-sided rho^(3/2) behavior that
    characterizes badly approximable centers; well-approximable centers
    break away from it.  The largest partial quotient seen over the probe
    window is recorded in ``detail`` (the boundedness hypothesis is
    verified on the computed window, never assumed).
    """
    window = x0.stream.prefix(60)
    scales = _scale_fractions(j_min, j_max)
    center = _center_fraction(x0, Fraction(1, 1 << (j_max + 24)))
    pts, dropped = [], []
    for j, rho in scales:
        try:
            m = oscillation_at(center, rho, 1)
            pts.append((math.log(float(rho)), math.log(2 * float(rho) * m)))
        except (ValueError, OverflowError) as exc:
            dropped.append((j, repr(exc)))
    est = loglog_fit(pts, 1, "modulus_fit", dropped)
    est.detail["max_quotient_in_window"] = max(window) if window else None
    return est


@dataclass(frozen=True)
class PrimitiveEval:
    x: Fraction
    value: float


def primitive_eval(x: Fraction, tol: float) -> PrimitiveEval:
    """Primitive of B from 0: int_0^x B(t) dt (strictly increasing in x)."""
    x = Fraction(x)
    if not (0 < x < 1):
        raise ValueError("x must lie in (0,1)")
    res = integrate_B(Interval(Fraction(0), x), tol)
    return PrimitiveEval(x, res.value)


def second_difference(x: Fraction, h) -> float:
    """Second difference of the primitive: 2F(x + h/2) - F(x + h) - F(x).

    By additivity of the integral this equals
    int_x^{x+h/2} B - int_{x+h/2}^{x+h} B, so it is computed from the two
    adjacent half-interval integrals (at tolerance h * 5e-5 each, i.e.
    within the h * 1e-4 budget of the defining three-evaluation form) with
    no cancellation of bulk terms.  Annihilates affine functions.
    """
    x = Fraction(x)
    h = Fraction(h) if not isinstance(h, Fraction) else h
    if not (0 < x and x + h < 1 and h > 0):
        raise ValueError("need 0 < x < x + h < 1")
    tol = float(h) * 5e-5
    mid = x + h / 2
    left = integrate_B(Interval(x, mid), tol)
    right = integrate_B(Interval(mid, x + h), tol)
    return left.value - right.value


def _probe_for_scale(x0: CFNumber, center: Fraction, h: Fraction,
                     radius: float) -> Optional[Fraction]:
    """Probe rational for the second-difference sup at span h.

    Rational centers probe themselves.  Otherwise: among convergents within
    the window radius, take the one of largest distance (the paper-style
    extremal geometry probes exactly at convergents), subject to the
    near-field eligibility h < 2/(3 q^2).
    """
    if x0.kind == "rational":
        return x0.rational_value
    hf = float(h)
    best = None
    for c in convergents(x0, 80)[2:]:
        r = Fraction(c.p, c.q)
        d = abs(float(center - r))
        if d == 0.0 or d > radius:
            continue
        if hf >= 2.0 / (3.0 * c.q * c.q):
            continue
        if best is None or d > best[0]:
            best = (d, r)
    return best[1] if best else None


def estimate_holder_primitive(x0: CFNumber, j_min: int = DEFAULT_J_MIN,
                              j_max: int = DEFAULT_J_MAX) -> ExponentEstimate:
    """Hoelder exponent of the primitive via second differences.

    At each span h_j = 2^-j the probe net is the Lemma-8 window of radius
    2^-j log^2(2^j) around x0; the fitted log-log slope of
    sup_r |Delta_2 F(r, h_j)| estimates h_F(x0) = 1 + 1/tau(x0).
    """
    scales = _scale_fractions(j_min, j_max)
    center = _center_fraction(x0, Fraction(1, 1 << (j_max + 30)))
    pts, dropped = [], []
    for j, h in scales:
        radius = float(h) * (j * math.log(2.0)) ** PROBE_LOG_EXPONENT
        probe = _probe_for_scale(x0, center, h, radius)
        if probe is None:
            dropped.append((j, "no eligible probe in window"))
            continue
        try:
            d2 = abs(second_difference(probe, h))
            if d2 <= 0:
                raise ValueError("vanishing second difference")
            pts.append((math.log(float(h)), math.log(d2)))
        except (ValueError, OverflowError) as exc:
            dropped.append((j, repr(exc)))
    return loglog_fit(pts, 1, "holder_primitive", dropped)


def local_dimension(x0: CFNumber, j_min: int = DEFAULT_J_MIN,
                    j_max: int = DEFAULT_J_MAX) -> ExponentEstimate:
    """Local dimension of the measure B dx: slope of log mu([x0 +- rho])."""
    scales = _scale_fractions(j_min, j_max)
    center = _center_fraction(x0, Fraction(1, 1 << (j_max + 24)))
    pts, dropped = [], []
    for j, rho in scales:
        try:
            res = integrate_B(Interval(center - rho, center + rho),
                              float(rho) * 2e-3)
            pts.append((math.log(float(rho)), math.log(res.value)))
        except (ValueError, OverflowError) as exc:
            dropped.append((j, repr(exc)))
    return loglog_fit(pts, 1, "local_dimension", dropped)
