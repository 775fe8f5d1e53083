"""Singularity-aware quadrature for the Brjuno function.

B has a logarithmic spike of weight 1/q at every rational p/q, so plain
adaptive schemes that sample blindly can miss narrow spikes entirely.  The
scheme here:

  * nodes are exact rationals, offset from cell midpoints by 1/(2M) of the
    cell width with a fixed odd 64-bit multiplier M, so a node never lands
    on a low-denominator rational;
  * node values come from the depth-limited series (q_k <= sqrt(den)),
    whose committed tail error is folded into the error estimate;
  * every rational with q <= 64 inside the interval becomes a cell
    boundary up front, so each known spike sits at a cell endpoint where
    bisection grades into it;
  * refinement is greedy on (two-node vs one-node difference) + committed
    error, with a global running error total, Richardson style.

Subinterval evaluations are independent; the final sum is taken in
interval order, so results are deterministic.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

from .cf import CFNumber, rationals_in
from .series import eval_Btilde, truncated_node_value

#: odd 64-bit node-padding multiplier (2^64 - 59 is prime)
PAD_MULTIPLIER = (1 << 64) - 59

#: spikes at rationals with q up to this bound are isolated a priori
FORCED_SPIKE_QMAX = 64

_OFFSETS = {0: PAD_MULTIPLIER + 1, 1: PAD_MULTIPLIER - 1}

#: offset_variant 1 also pre-splits every seed cell at this interior point
#: (~0.618...), so the two variants share no quadrature nodes at all
_VARIANT_SPLIT = Fraction(2654435769, 1 << 32)


@dataclass(frozen=True)
class Interval:
    left: Fraction
    right: Fraction

    def __post_init__(self):
        if not (0 <= self.left < self.right <= 1):
            raise ValueError("interval must satisfy 0 <= left < right <= 1")

    @property
    def width(self) -> Fraction:
        return self.right - self.left


@dataclass
class QuadratureResult:
    value: float
    error_estimate: float
    evaluations: int
    max_depth: int
    converged: bool


@dataclass
class Partition:
    """Leaves of an adaptive bisection; quadrature nodes with weights.

    Each leaf carries the two child-node values used for its fine estimate;
    ``nodes()`` yields (weight, value) pairs in interval order.
    """
    leaves: list          # (left, right, v1, v2, committed_rate_sum)
    value: float
    error_estimate: float
    evaluations: int
    max_depth: int
    converged: bool

    def nodes(self):
        for left, right, v1, v2, _ in self.leaves:
            hw = 0.5 * float(right - left)
            yield hw, v1
            yield hw, v2


def adaptive_partition(fn: Callable, left: Fraction, right: Fraction,
                       tol: float, seeds=(), max_evals: int = 600_000,
                       max_depth: int = 64, offset_variant: int = 0) -> Partition:
    """Greedy adaptive midpoint partition of [left, right] for integrating fn.

    ``fn(num, den) -> (value, committed)`` is evaluated at padded rational
    nodes.  Cells split at exact midpoints; the worst leaf (by local
    Richardson difference plus committed tail) is refined until the running
    error total is below tol or a budget binds.
    """
    off_num = _OFFSETS[offset_variant]
    two_m = 2 * PAD_MULTIPLIER
    evals = 0

    def node_at(lo, hi):
        # lo + (hi - lo) * off_num/(2M), reduced once; avoids Fraction
        # overhead, and the padded denominator keeps nodes off every
        # low-denominator rational
        nonlocal evals
        a, b = lo.numerator, lo.denominator
        c, d = hi.numerator, hi.denominator
        num = a * d * two_m + (c * b - a * d) * off_num
        den = b * d * two_m
        g = math.gcd(num, den)
        evals += 1
        return fn(num // g, den // g)

    # cell record: (left, right, depth, v1, c1, v2, c2, fine, err)
    def make_cell(lo, hi, depth, v_node):
        mid = (lo + hi) / 2
        v1, c1 = node_at(lo, mid)
        v2, c2 = node_at(mid, hi)
        wf = float(hi - lo)
        fine = 0.5 * wf * (v1 + v2)
        committed = 0.5 * wf * (c1 + c2)
        diff = abs(fine - wf * v_node) if v_node is not None else committed
        return (lo, hi, depth, v1, c1, v2, c2, fine, diff + committed)

    pts = [left] + [p for p in sorted(set(seeds)) if left < p < right] + [right]
    if offset_variant == 1:
        extra = [lo + (hi - lo) * _VARIANT_SPLIT for lo, hi in zip(pts, pts[1:])]
        pts = sorted(pts + extra)
    heap = []
    alive = {}
    counter = 0
    err_active = 0.0
    err_frozen = 0.0
    deepest = 0
    for lo, hi in zip(pts, pts[1:]):
        v0, _ = node_at(lo, hi)
        cell = make_cell(lo, hi, 0, v0)
        alive[counter] = cell
        err_active += cell[8]
        heapq.heappush(heap, (-cell[8], counter))
        counter += 1

    while heap and err_active + err_frozen > tol and evals < max_evals:
        _, idx = heapq.heappop(heap)
        cell = alive.pop(idx, None)
        if cell is None:
            continue
        lo, hi, depth, v1, c1, v2, c2, fine, err = cell
        if depth >= max_depth:
            err_active -= err
            err_frozen += err
            alive[idx] = cell      # keep as leaf, no longer refinable
            continue
        err_active -= err
        mid = (lo + hi) / 2
        for slo, shi, v_node in ((lo, mid, v1), (mid, hi, v2)):
            child = make_cell(slo, shi, depth + 1, v_node)
            alive[counter] = child
            err_active += child[8]
            heapq.heappush(heap, (-child[8], counter))
            counter += 1
            deepest = max(deepest, depth + 1)

    leaves = sorted(alive.values(), key=lambda c: c[0])
    value = 0.0
    for lo, hi, depth, v1, c1, v2, c2, fine, err in leaves:
        value += fine
    total_err = err_active + err_frozen
    return Partition(
        leaves=[(lo, hi, v1, v2, c1 + c2)
                for lo, hi, depth, v1, c1, v2, c2, fine, err in leaves],
        value=value, error_estimate=total_err, evaluations=evals,
        max_depth=deepest, converged=total_err <= tol)


def _spike_seeds(left: Fraction, right: Fraction) -> list:
    return rationals_in(left, right, FORCED_SPIKE_QMAX)


def integrate_B(interval: Interval, tol: float,
                offset_variant: int = 0,
                max_evals: int = 600_000) -> QuadratureResult:
    """Integral of B over the interval with an honest error estimate.

    The error estimate is the sum of per-leaf Richardson differences plus
    the committed node-tail errors; ``converged`` is False when a budget
    stopped refinement first (the estimate stays honest either way).
    """
    if isinstance(interval, tuple):
        interval = Interval(*interval)
    if tol <= 0:
        raise ValueError("tol must be positive")
    if interval.width < Fraction(1, 10**12):
        raise ValueError("interval is below the supported width 1e-12")
    part = adaptive_partition(truncated_node_value, interval.left,
                              interval.right, tol,
                              seeds=_spike_seeds(interval.left, interval.right),
                              max_evals=max_evals,
                              offset_variant=offset_variant)
    return QuadratureResult(part.value, part.error_estimate, part.evaluations,
                            part.max_depth, part.converged)


def average_formula_bm(r: Fraction, h: float):
    """Two-term model of the local average of B beside the rational r = p/q:

        (1/h) int_r^{r+h} B  ~  log(e/(q^2 |h|))/q + B~(r),

    valid for 0 < |h| <= 2/(3 q^2).  Stated for the right-hand average;
    applied with signed h on the symmetric O-term (left/right agreement is
    checked empirically in the test suite).
    """
    r = Fraction(r)
    if not (0 < r < 1):
        raise ValueError("r must lie in (0,1)")
    q = r.denominator
    ah = abs(float(h))
    if ah == 0.0 or ah > 2.0 / (3.0 * q * q):
        raise ValueError(f"|h| must lie in (0, 2/(3 q^2)] = (0, {2/(3*q*q):.3g}]")
    return (1.0 - math.log(q * q * ah)) / q + eval_Btilde(r)


def _weighted_median(pairs) -> float:
    """Exact minimizer of sum w|v - D| over constants D."""
    pairs = sorted(pairs)
    total = sum(w for _, w in pairs)
    acc = 0.0
    for v, w in pairs:
        acc += w
        if acc >= 0.5 * total:
            return v
    return pairs[-1][0]


def oscillation_from_partition(part: Partition, p: float,
                               D: Optional[float] = None) -> float:
    """M_p = (1/(2 rho) int |B - D|^p)^(1/p) on the partition's window."""
    pairs = [(v, w) for w, v in part.nodes()]
    total_w = sum(w for _, w in pairs)
    if p == 1:
        if D is None:
            D = _weighted_median(pairs)
        return sum(w * abs(v - D) for v, w in pairs) / total_w
    if p == 2:
        if D is None:
            D = sum(w * v for v, w in pairs) / total_w
        return math.sqrt(sum(w * (v - D) ** 2 for v, w in pairs) / total_w)
    raise ValueError("p must be 1 or 2")


def oscillation_at(center: Fraction, rho: Fraction, p: float,
                   D: Optional[float] = None, rel_tol: float = 0.02,
                   scale_power: float = 0.6,
                   max_evals: int = 400_000) -> float:
    """Optimal-constant local oscillation around an exact rational center.

    The partition is refined to an absolute tolerance 2*rho^(1+scale_power)
    * rel_tol, which keeps the relative accuracy of M_p roughly uniform
    across scales for exponents in [0, 1/2].
    """
    lo, hi = center - rho, center + rho
    if not (0 < lo and hi < 1):
        raise ValueError("oscillation window must stay inside (0,1)")
    rf = float(rho)
    tol = 2.0 * rf * (rf ** scale_power) * rel_tol
    part = adaptive_partition(truncated_node_value, lo, hi, tol,
                              seeds=_spike_seeds(lo, hi), max_evals=max_evals)
    return oscillation_from_partition(part, p, D)


def _center_fraction(x0: CFNumber, fineness: Fraction) -> Fraction:
    lo, hi = x0.enclosure(fineness)
    return (lo + hi) / 2


def local_oscillation(x0: CFNumber, rho: float, p: float = 1,
                      D: Optional[float] = None) -> float:
    """M_p(rho) centered at x0, minimizing over the constant D when omitted.

    The discrete minimizers are exact for the discretized objective:
    weighted median for p = 1, weighted mean for p = 2.  Degree-0
    subtraction suffices since all exponents of B lie in [0, 1/2].
    """
    if not (1e-7 < rho < 0.1):
        raise ValueError("rho must lie in (1e-7, 0.1)")
    rho_f = Fraction(rho) if not isinstance(rho, Fraction) else rho
    center = _center_fraction(x0, rho_f / (1 << 24))
    return oscillation_at(center, rho_f, p, D)


def haar_cwt(a: float, b: Fraction) -> float:
    """Continuous Haar transform C_B(a, b) = (1/a)(int_b^{b+a/2} B - int_{b+a/2}^{b+a} B).

    Quadrature tolerance scales as a * 1e-3 / den(b) per half so the O-term
    comparison of the wavelet law stays quadrature-limited only far below
    its own size.
    """
    if not (1e-8 < a < 0.1):
        raise ValueError("a must lie in (1e-8, 0.1)")
    b = Fraction(b)
    af = Fraction(a) if not isinstance(a, Fraction) else a
    if not (0 <= b and b + af <= 1):
        raise ValueError("wavelet support must stay inside [0,1]")
    q = b.denominator
    tol_half = float(af) * 1e-3 / q / 2.0
    mid = b + af / 2
    left = adaptive_partition(truncated_node_value, b, mid, tol_half,
                              seeds=_spike_seeds(b, mid))
    right = adaptive_partition(truncated_node_value, mid, b + af, tol_half,
                               seeds=_spike_seeds(mid, b + af))
    return (left.value - right.value) / float(af)


def integrate_gamma_term(interval: Interval, k: int, tol: float) -> float:
    """Integral over the interval of the k-th series term gamma_k(x)."""
    from .series import gamma_term_at_node

    def fn(num, den):
        return gamma_term_at_node(num, den, k), 0.0

    part = adaptive_partition(fn, interval.left, interval.right, tol,
                              seeds=_spike_seeds(interval.left, interval.right),
                              max_evals=100_000)
    return part.value
