"""The Brjuno series and its certified evaluation.

With beta_n = |q_n x - p_n| and A the Gauss map, the series is

    B(x) = sum_{k>=0} gamma_k(x),   gamma_k = beta_{k-1} log(1/A^k(x)),

whose first term is log(1/x).  Everything here works in the log domain via

    beta_n = 1 / (q_{n+1} + A^{n+1}(x) q_n),

so that numbers with astronomically large denominators (Liouville-flavored
rule constructions) never leave the representable range: q_n may have
hundreds of thousands of bits while log beta_n stays an ordinary float.

Truncation control uses the two-sided term bound

    log(q_{k+1})/q_k - log(2 q_k)/q_k  <=  gamma_k  <=  log(q_{k+1})/q_k

for k >= 1, summed against the doubling q_{k+2} >= 2 q_k.  The unexpanded
remainder is closed per source kind; see _tail_remainder.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Optional

from .cf import (CFNumber, ExpansionTerminated, QuotientBudgetError,
                 convergents, expand_rational, shift)
from .precision import get_context

#: future partial quotients of a *random* source are assumed <= exp(700);
#: under Gauss-Kuzmin the chance of ever seeing a violation is ~1e-300 per draw
RANDOM_QUOTIENT_LOG_CAP = 700.0

LN2 = math.log(2.0)


class BrjunoRationalError(ValueError):
    """eval_B is undefined on rationals; callers should use eval_Btilde."""


class BrjunoBudgetError(RuntimeError):
    """Quotient growth exceeded the integer budget before meeting tol.

    ``partial`` carries the best SeriesEval available: its value is the
    committed partial sum and its tail_bound is the honest (too large)
    remainder estimate at the point the source gave out.
    """

    def __init__(self, message, partial):
        super().__init__(message)
        self.partial = partial


@dataclass(frozen=True)
class BrjunoTerm:
    k: int
    gamma: float
    beta_prev: float
    log_inv_A: float


@dataclass
class SeriesEval:
    value: float
    depth: int
    tail_bound: float
    terms: Optional[list] = None


def _q_logs(x: CFNumber, upto: int):
    """(q list, ln q list) for n = 0..min(upto, available)."""
    convs = convergents(x, upto)
    qs = [c.q for c in convs[1:]]          # q_0, q_1, ...
    return qs, [math.log(q) for q in qs]


def _log_beta(x: CFNumber, n: int, qs, lnqs) -> float:
    """ln beta_n from beta_n = 1/(q_{n+1} + A^{n+1} q_n)."""
    from .cf import tail_value_float
    try:
        a_tail = tail_value_float(x, n + 1)
    except (ExpansionTerminated, QuotientBudgetError):
        a_tail = 0.0
    ratio = qs[n] / qs[n + 1]
    return -(lnqs[n + 1] + math.log1p(a_tail * ratio))


def _term_bound(qs, lnqs, k: int) -> float:
    """Eq.(22) upper bound log(q_{k+1})/q_k, safe for huge q_k."""
    lq1 = lnqs[k + 1]
    if qs[k].bit_length() < 512:
        return lq1 / qs[k]
    return math.exp(math.log(lq1) - lnqs[k]) if lq1 > 0 else 0.0


def _tail_remainder(x: CFNumber, qs, lnqs) -> float:
    """Certified bound on sum_{k >= H} log(q_{k+1})/q_k at horizon H = len-1.

    * quadratic kind: all quotients are bounded by the cycle maximum amax,
      and pairing the doubling q_{k+2} >= 2 q_k with the decreasing majorant
      log((amax+1)q)/q gives (4 log((amax+1) q_H) + 4 log 2)/q_H.
    * rule kind with growth exponent tau: iterate upper/lower bounds for
      log q in the log domain far beyond the integer horizon.
    * random kind: the bounded-quotient closure with the documented cap
      exp(700) on any future quotient.
    """
    H = len(qs) - 1
    q_H, lnq_H = qs[H], lnqs[H]

    def bounded(amax_log: float) -> float:
        if q_H.bit_length() < 512:
            return (4.0 * (amax_log + lnq_H) + 4.0 * LN2) / q_H
        num = 4.0 * (amax_log + lnq_H) + 4.0 * LN2
        return math.exp(math.log(num) - lnq_H)

    tau = getattr(x, "rule_tau", None)
    if x.kind == "quadratic":
        amax = max(x.cycle + x.preperiod) if (x.cycle or x.preperiod) else 1
        return bounded(math.log(amax + 1))
    if x.kind == "rule" and tau is not None and tau > 2.001:
        # u_k >= ln q_k >= l_k; rule gives u_{k+1} = (tau-1) u_k + ln 2 and
        # l_{k+1} >= max(l_{k-1} + ln 2, (tau-1) l_k - ln 2) once q_k^(tau-2) >= 2
        u_prev, u = lnqs[H - 1] if H >= 1 else 0.0, lnq_H
        l_prev, l = u_prev, lnq_H
        total = 0.0
        for _ in range(400):
            u_next = (tau - 1.0) * u + LN2
            l_next = max(l_prev + LN2, (tau - 1.0) * l - LN2 if
                         (tau - 2.0) * l >= LN2 else l_prev + LN2)
            term = u_next * math.exp(-min(l, 700.0)) if l < 700.0 else 0.0
            total += term
            if term < 1e-40:
                break
            u_prev, u = u, u_next
            l_prev, l = l, l_next
        return total * 1.001
    return bounded(RANDOM_QUOTIENT_LOG_CAP)


def eval_B(x: CFNumber, tol: float, keep_terms: bool = False) -> SeriesEval:
    """Truncated Brjuno series with a certified tail bound <= tol.

    The expansion horizon is pushed until the per-kind remainder closure
    plus the observed term bounds log(q_{k+1})/q_k certify the requested
    tolerance; the truncation depth N is then the smallest index whose
    certified tail fits.  A rule source that exhausts its integer budget
    first raises BrjunoBudgetError carrying the partial evaluation.
    """
    if x.kind == "rational":
        raise BrjunoRationalError(
            "B diverges at rationals; use eval_Btilde for the finite sum")
    if tol <= 0:
        raise ValueError("tol must be positive")
    ctx = get_context()

    H = 32
    capped = False
    while True:
        qs, lnqs = _q_logs(x, H)
        if len(qs) - 1 < H:
            capped = True          # source ended (budget); work with what we have
            break
        if _tail_remainder(x, qs, lnqs) <= tol / 4 or H >= 1 << 17:
            break
        H *= 2
    horizon = len(qs) - 1
    if horizon < 2:
        raise QuotientBudgetError("source yields too few quotients to evaluate")

    remainder = _tail_remainder(x, qs, lnqs)
    bounds = [_term_bound(qs, lnqs, k) for k in range(1, horizon)]
    # smallest N with sum_{k>N} bounds + remainder <= tol
    suffix = remainder
    cut = horizon - 1
    tails = {horizon - 1: suffix}
    for k in range(horizon - 1, 0, -1):
        suffix += bounds[k - 1]
        tails[k - 1] = suffix
    N = None
    for cand in range(0, horizon):
        if tails[cand] <= tol:
            N = cand
            break
    if N is None:
        partial = _sum_terms(x, horizon - 1, qs, lnqs, ctx, keep_terms)
        partial.tail_bound = tails[horizon - 1]
        raise BrjunoBudgetError(
            f"certified tail {tails[horizon - 1]:.3g} > tol {tol:.3g} "
            f"at source horizon {horizon}", partial)
    out = _sum_terms(x, N, qs, lnqs, ctx, keep_terms)
    out.tail_bound = tails[N]
    if capped and out.tail_bound > tol:
        raise BrjunoBudgetError("integer budget hit before meeting tol", out)
    return out


def _sum_terms(x, N, qs, lnqs, ctx, keep_terms):
    terms = [] if keep_terms else None
    with ctx.workprec():
        total = ctx.zero()
        log_beta_prev = 0.0        # ln beta_{-1} = 0
        for k in range(0, N + 1):
            log_beta = _log_beta(x, k, qs, lnqs)
            log_inv_a = log_beta_prev - log_beta
            beta_prev = math.exp(log_beta_prev) if log_beta_prev > -745 else 0.0
            gamma = beta_prev * log_inv_a
            total = total + gamma
            if terms is not None:
                terms.append(BrjunoTerm(k, gamma, beta_prev, log_inv_a))
            log_beta_prev = log_beta
    return SeriesEval(value=total, depth=N, tail_bound=0.0, terms=terms)


def eval_Btilde(r: Fraction):
    """Finite Brjuno sum at a rational, exactly N terms for an N-term expansion.

    On the Euclid remainders rho_{-1} = den, rho_0 = num, rho_{k+1} =
    rho_{k-1} mod rho_k one has beta_{k-1} = rho_{k-1}/den and A^k =
    rho_k/rho_{k-1}, so each term is exact rational data composed with log.
    For a one-term expansion this reduces to B~(1/k) = log k.
    """
    r = Fraction(r)
    if not (0 < r < 1):
        raise ValueError(f"eval_Btilde requires r in (0,1), got {r}")
    ctx = get_context()
    num, den = r.numerator, r.denominator
    rho_prev, rho = den, num
    with ctx.workprec():
        total = ctx.zero()
        while rho:
            total = total + ctx.from_fraction(Fraction(rho_prev, den)) * (
                ctx.log_int(rho_prev) - ctx.log_int(rho))
            rho_prev, rho = rho, rho_prev % rho
    return total


def check_functional_equation(x: CFNumber, tol: float) -> float:
    """Residual |B(x) - log(1/x) - x B({1/x})|.

    {1/x} is the one-step Gauss shift, i.e. the expansion with its first
    quotient dropped, so both sides are evaluated through the same series
    machinery at tolerance tol/3 each.
    """
    if x.kind == "rational":
        raise BrjunoRationalError("functional equation applies off the rationals")
    left = eval_B(x, tol / 3).value
    right_tail = eval_B(shift(x, 1), tol / 3).value
    lo, hi = x.enclosure(Fraction(1, 1 << 72))
    xf = float((lo + hi) / 2)
    return abs(left - math.log(1.0 / xf) - xf * right_tail)


def gamma_bounds_check(x: CFNumber, k_max: int) -> list:
    """(k, lower, gamma_k, upper) for 1 <= k <= k_max with the Eq.(22) bounds."""
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    qs, lnqs = _q_logs(x, k_max + 1)
    horizon = len(qs) - 1
    out = []
    log_beta_prev = _log_beta(x, 0, qs, lnqs)
    for k in range(1, min(k_max, horizon - 1) + 1):
        log_beta = _log_beta(x, k, qs, lnqs)
        beta_prev = math.exp(log_beta_prev) if log_beta_prev > -745 else 0.0
        gamma = beta_prev * (log_beta_prev - log_beta)
        upper = _term_bound(qs, lnqs, k)
        low_num = lnqs[k + 1] - LN2 - lnqs[k]
        if low_num <= 0:
            lower = 0.0
        elif qs[k].bit_length() < 512:
            lower = low_num / qs[k]
        else:
            lower = math.exp(math.log(low_num) - lnqs[k])
        out.append((k, lower, gamma, upper))
        log_beta_prev = log_beta
    return out


# ---------------------------------------------------------------------------
# node kernel for the quadrature layer


def truncated_node_value(num: int, den: int) -> tuple[float, float]:
    """Depth-limited series at the exact rational num/den.

    Sums gamma_k while the convergent denominator q_k stays <= sqrt(den);
    on that range the node's expansion agrees with every real in its
    cylinder, so the value represents B on a neighborhood.  Returns
    (value, committed) where committed = 4 log(q)/q for the first excluded
    convergent bounds the neighborhood-average of the dropped tail.
    """
    if not 0 < num < den:
        raise ValueError("node must satisfy 0 < num < den")
    L = isqrt(den)
    rho_prev, rho = den, num
    q_prev, q_cur = 0, 1
    val = 0.0
    while True:
        val += (rho_prev / den) * (math.log(rho_prev) - math.log(rho))
        a, r = divmod(rho_prev, rho)
        q_prev, q_cur = q_cur, a * q_cur + q_prev
        rho_prev, rho = rho, r
        if rho == 0:
            return val, 0.0
        if q_cur > L:
            lq = math.log(q_cur)
            if q_cur.bit_length() < 900:
                return val, 4.0 * lq / q_cur
            return val, math.exp(math.log(4.0 * lq) - lq)


def gamma_term_at_node(num: int, den: int, k: int) -> float:
    """gamma_k as a function on (0,1), evaluated at the node num/den.

    Zero when the node's expansion is shorter than k terms (a
    measure-zero boundary effect for quadrature purposes).
    """
    rho_prev, rho = den, num
    for _ in range(k):
        rho_prev, rho = rho, rho_prev % rho
        if rho == 0:
            return 0.0
    return (rho_prev / den) * (math.log(rho_prev) - math.log(rho))
