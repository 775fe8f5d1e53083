"""Exact continued-fraction arithmetic.

Expansions, convergents, Gauss-map orbits, cylinders, and the Diophantine
quantities attached to a real number x = [0; a_1, a_2, ...]:

    beta_n = |q_n x - p_n|,      tau_n = log(1/|x - p_n/q_n|) / log q_n,

with the convergent conventions (p_-1, q_-1) = (1, 0), (p_0, q_0) = (0, 1).

Numbers are specified by their partial-quotient source (finite list,
eventually periodic list, index rule, or seeded Gauss-Kuzmin stream) and
never by floats; every derived quantity is either exact (big integers,
fractions, quadratic surds) or carries an explicit interval enclosure.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, isqrt
from typing import Callable, Optional

import mpmath

from .rng import SplitMix64, gauss_kuzmin_quotient

BigRational = Fraction

#: default budget for rule-based sources: stop once q_n exceeds this many bits
DEFAULT_MAX_Q_BITS = 1_500_000


class QuotientBudgetError(Exception):
    """A rule-based source would need integers beyond its memory budget."""


class ExpansionTerminated(Exception):
    """A rational's expansion is shorter than the requested depth."""


# ---------------------------------------------------------------------------
# quotient sources


class QuotientStream:
    """Lazy, memoized source of partial quotients a_1, a_2, ...

    ``grow(cache)`` appends at least one quotient to ``cache`` or raises
    StopIteration (finite source) / QuotientBudgetError (budget hit).
    """

    def __init__(self, grow: Callable, finite: bool = False):
        self._grow = grow
        self._cache: list[int] = []
        self.finite = finite
        self.exhausted = False
        self.budget_hit = False

    def get(self, n: int) -> int:
        """a_n, 1-indexed."""
        if n < 1:
            raise IndexError("partial quotients are 1-indexed")
        while len(self._cache) < n:
            try:
                self._grow(self._cache)
            except StopIteration:
                self.exhausted = True
                raise ExpansionTerminated(
                    f"expansion has {len(self._cache)} quotients, requested {n}"
                ) from None
            except QuotientBudgetError:
                self.budget_hit = True
                raise
        return self._cache[n - 1]

    def prefix(self, n: int) -> list[int]:
        """First min(n, available) quotients, without raising."""
        while len(self._cache) < n:
            try:
                self._grow(self._cache)
            except (StopIteration, QuotientBudgetError) as exc:
                if isinstance(exc, StopIteration):
                    self.exhausted = True
                else:
                    self.budget_hit = True
                break
        return self._cache[:n]

    def known(self) -> int:
        return len(self._cache)


def _finite_grow(quotients):
    it = iter(quotients)
    consumed = [0]

    def grow(cache):
        if consumed[0] < len(quotients):
            cache.append(quotients[consumed[0]])
            consumed[0] += 1
        else:
            raise StopIteration
    return grow


def _periodic_grow(preperiod, cycle):
    def grow(cache):
        k = len(cache)
        if k < len(preperiod):
            cache.append(preperiod[k])
        else:
            cache.append(cycle[(k - len(preperiod)) % len(cycle)])
    return grow


def _random_grow(seed):
    rng = SplitMix64(seed)

    def grow(cache):
        cache.append(gauss_kuzmin_quotient(rng.next_unit()))
    return grow


# ---------------------------------------------------------------------------
# quadratic surds (exact values of eventually periodic expansions)


@dataclass(frozen=True)
class QuadraticSurd:
    """(a + b*sqrt(d)) / c with integer a, b, c > 0 and non-square d > 0."""

    a: int
    b: int
    c: int
    d: int

    @staticmethod
    def make(a: int, b: int, c: int, d: int) -> "QuadraticSurd":
        if c == 0:
            raise ZeroDivisionError("surd with zero denominator")
        if c < 0:
            a, b, c = -a, -b, -c
        g = gcd(gcd(abs(a), abs(b)), c)
        return QuadraticSurd(a // g, b // g, c // g, d)

    def mobius(self, A: int, B: int, C: int, D: int) -> "QuadraticSurd":
        """(A*self + B) / (C*self + D), exactly."""
        # numerator   (A a + B c) + A b sqrt(d)   over c
        # denominator (C a + D c) + C b sqrt(d)   over c    -> rationalize
        na, nb = A * self.a + B * self.c, A * self.b
        da, db = C * self.a + D * self.c, C * self.b
        ra = na * da - nb * db * self.d
        rb = nb * da - na * db
        rc = da * da - db * db * self.d
        return QuadraticSurd.make(ra, rb, rc, self.d)

    def minus_rational(self, fr: Fraction) -> "QuadraticSurd":
        p, q = fr.numerator, fr.denominator
        return QuadraticSurd.make(self.a * q - p * self.c, self.b * q,
                                  self.c * q, self.d)

    def sign(self) -> int:
        """Sign of the value (c is kept positive)."""
        sa = (self.a > 0) - (self.a < 0)
        sb = (self.b > 0) - (self.b < 0)
        if sb == 0:
            return sa
        if sa == 0 or sa == sb:
            return sb
        # opposite signs: compare a^2 with b^2 d
        lhs, rhs = self.a * self.a, self.b * self.b * self.d
        if lhs == rhs:
            return 0
        return sa if lhs > rhs else sb

    def __float__(self) -> float:
        return float(self.to_fraction(120))

    def to_fraction(self, bits: int = 120) -> Fraction:
        """Rational approximation with relative error ~2^-bits."""
        root = Fraction(isqrt(self.d << (2 * bits)), 1 << bits)
        return (self.a + self.b * root) / self.c


def _pure_periodic_surd(cycle: list[int]) -> QuadraticSurd:
    """Exact value of [0; cycle, cycle, ...].

    Solves y = (P_m y + P_{m-1}) / (Q_m y + Q_{m-1}) via the cycle's
    convergent matrix; y is the positive root in (0, 1).
    """
    p0, q0, p1, q1 = 1, 0, 0, 1
    for a in cycle:
        p0, q0, p1, q1 = p1, q1, a * p1 + p0, a * q1 + q0
    # q0 y^2 + (q1 - p0) y - p1 = 0
    A, B, C = q0, q1 - p0, -p1
    disc = B * B - 4 * A * C
    if A == 0:
        raise ValueError("degenerate cycle")
    root = isqrt(disc)
    if root * root == disc:
        raise ValueError("cycle value is rational; not a quadratic irrational")
    return QuadraticSurd.make(-B, 1, 2 * A, disc)


# ---------------------------------------------------------------------------
# CFNumber


@dataclass
class CFNumber:
    """A real in (0, 1) given exactly by its partial-quotient source."""

    kind: str                     # rational | quadratic | rule | random
    stream: QuotientStream
    label: str = ""
    rational_value: Optional[Fraction] = None
    preperiod: tuple = ()
    cycle: tuple = ()
    seed: Optional[int] = None
    rule_tau: Optional[float] = None

    # -- constructors -------------------------------------------------------

    @staticmethod
    def from_rational(x: Fraction, label: str = "") -> "CFNumber":
        quots = expand_rational(x)
        num = CFNumber("rational", QuotientStream(_finite_grow(quots), finite=True),
                       label or f"{x.numerator}/{x.denominator}",
                       rational_value=Fraction(x))
        return num

    @staticmethod
    def from_periodic(preperiod, cycle, label: str = "") -> "CFNumber":
        preperiod, cycle = list(preperiod), list(cycle)
        if not cycle:
            raise ValueError("empty cycle")
        if any(a < 1 for a in preperiod + cycle):
            raise ValueError("partial quotients must be >= 1")
        return CFNumber("quadratic",
                        QuotientStream(_periodic_grow(preperiod, cycle)),
                        label or f"per:{preperiod};{cycle}",
                        preperiod=tuple(preperiod), cycle=tuple(cycle))

    @staticmethod
    def from_rule(rule_grow: Callable, label: str) -> "CFNumber":
        return CFNumber("rule", QuotientStream(rule_grow), label)

    @staticmethod
    def from_random(seed: int, label: str = "") -> "CFNumber":
        return CFNumber("random", QuotientStream(_random_grow(seed)),
                        label or f"rand:{seed}", seed=seed)

    @staticmethod
    def golden() -> "CFNumber":
        return CFNumber.from_periodic((), (1,), "golden")

    @staticmethod
    def silver() -> "CFNumber":
        return CFNumber.from_periodic((), (2,), "silver")

    # -- exact/enclosure values --------------------------------------------

    def exact_value(self):
        """Fraction for rational kind, QuadraticSurd for quadratic, else None."""
        if self.kind == "rational":
            return self.rational_value
        if self.kind == "quadratic":
            return self.tail_surd(0)
        return None

    def tail_surd(self, n: int) -> QuadraticSurd:
        """Exact value of the tail [0; a_{n+1}, a_{n+2}, ...] (quadratic kind)."""
        if self.kind != "quadratic":
            raise ValueError("tail_surd is only defined for quadratic kind")
        pre, cyc = list(self.preperiod), list(self.cycle)
        if n >= len(pre):
            k = (n - len(pre)) % len(cyc)
            rotated = cyc[k:] + cyc[:k]
            return _pure_periodic_surd(rotated)
        # remaining preperiod, then the cycle: [0; pre[n:], cycle...] is the
        # Moebius image (p_k + p_{k-1} y)/(q_k + q_{k-1} y) of the cycle value
        y = _pure_periodic_surd(cyc)
        p0, q0, p1, q1 = 1, 0, 0, 1
        for a in pre[n:]:
            p0, q0, p1, q1 = p1, q1, a * p1 + p0, a * q1 + q0
        return y.mobius(p0, p1, q0, q1)

    def enclosure(self, max_width: Fraction,
                  max_terms: int = 20000) -> tuple[Fraction, Fraction]:
        """Exact bracket [lo, hi] containing the value, width <= max_width.

        Consecutive convergents alternate around the value, so two of them
        bracket it with width 1/(q_n q_{n+1}).  A rational returns the exact
        point; a budget-capped rule source returns its best bracket.
        """
        max_width = Fraction(max_width)
        if self.kind == "rational":
            v = self.rational_value
            return v, v
        p0, q0, p1, q1 = 1, 0, 0, 1
        n = 0
        while True:
            n += 1
            if n > max_terms:
                break
            try:
                a = self.stream.get(n)
            except (ExpansionTerminated, QuotientBudgetError):
                break
            p0, q0, p1, q1 = p1, q1, a * p1 + p0, a * q1 + q0
            if q0 and Fraction(1, q0 * q1) <= max_width:
                break
        if q0 == 0:
            raise ValueError("source yielded no quotients")
        lo, hi = Fraction(p1, q1), Fraction(p0, q0)
        if lo > hi:
            lo, hi = hi, lo
        return lo, hi

    def __float__(self) -> float:
        lo, hi = self.enclosure(Fraction(1, 1 << 72))
        return float((lo + hi) / 2)


def construct_tau_number(tau: float, depth: Optional[int] = None, a1: int = 2,
                         max_q_bits: int = DEFAULT_MAX_Q_BITS) -> CFNumber:
    """Number with irrationality exponent tau, via a_{n+1} = max(1, floor(q_n^(tau-2))).

    The rule forces q_{n+1} ~ q_n^(tau-1), hence |x - p_n/q_n| ~ q_n^(-tau)
    at every index.  ``depth`` (if given) pre-validates that this many
    quotients fit within ``max_q_bits``; deeper requests raise
    QuotientBudgetError when the integers would outgrow the budget.
    For integer tau the floor is exact; otherwise it is computed at 128-bit
    precision, which is ample since any nearby integer realizes the same tau.
    """
    if tau < 2:
        raise ValueError("tau must be >= 2 (Dirichlet floor)")
    if a1 < 1:
        raise ValueError("a1 must be >= 1")
    state = {"q_prev": 1, "q_cur": a1}
    tau_int = int(tau) if float(tau).is_integer() else None

    def grow(cache):
        if not cache:
            cache.append(a1)
            return
        q = state["q_cur"]
        if tau_int is not None:
            a = max(1, q ** (tau_int - 2))
        else:
            with mpmath.workprec(128):
                a = max(1, int(mpmath.floor(
                    mpmath.exp((tau - 2) * mpmath.log(q)))))
        new_q = a * q + state["q_prev"]
        if new_q.bit_length() > max_q_bits:
            raise QuotientBudgetError(
                f"q would exceed {max_q_bits} bits at depth {len(cache) + 1}")
        cache.append(a)
        state["q_prev"], state["q_cur"] = q, new_q

    num = CFNumber.from_rule(grow, f"tau:{tau}")
    num.rule_tau = float(tau)
    if depth is not None:
        num.stream.get(depth)  # raises QuotientBudgetError if infeasible
    return num


# ---------------------------------------------------------------------------
# operations


def expand_rational(x: Fraction) -> list[int]:
    """Canonical continued-fraction expansion of x in (0,1).

    Plain Euclidean division on (num, den); the canonical form forbids a
    trailing quotient 1 (except for the single-term expansion of 1/k), so
    a trailing (..., a, 1) is normalized to (..., a+1).
    """
    x = Fraction(x)
    if not (0 < x < 1):
        raise ValueError(f"expand_rational requires x in (0,1), got {x}")
    quots = []
    num, den = x.numerator, x.denominator
    rho_prev, rho = den, num
    while rho:
        a, r = divmod(rho_prev, rho)
        quots.append(a)
        rho_prev, rho = rho, r
    if len(quots) > 1 and quots[-1] == 1:
        quots.pop()
        quots[-1] += 1
    return quots


def value_of_quotients(quots) -> Fraction:
    """Exact value of the finite expansion [0; quots]."""
    p0, q0, p1, q1 = 1, 0, 0, 1
    for a in quots:
        p0, q0, p1, q1 = p1, q1, a * p1 + p0, a * q1 + q0
    return Fraction(p1, q1)


@dataclass(frozen=True)
class Convergent:
    n: int
    p: int
    q: int


def convergents(x: CFNumber, depth: int) -> list[Convergent]:
    """Convergents for n = -1 .. depth (shorter, flagged, if the source ends).

    The list always starts with the conventional (1,0) and (0,1) rows;
    callers detect early termination by len(result) < depth + 2.
    """
    if depth < 0:
        raise ValueError("depth must be >= 0")
    out = [Convergent(-1, 1, 0), Convergent(0, 0, 1)]
    p0, q0, p1, q1 = 1, 0, 0, 1
    for n in range(1, depth + 1):
        try:
            a = x.stream.get(n)
        except (ExpansionTerminated, QuotientBudgetError):
            break
        p0, q0, p1, q1 = p1, q1, a * p1 + p0, a * q1 + q0
        out.append(Convergent(n, p1, q1))
    return out


def gauss_orbit(x: CFNumber, depth: int):
    """Gauss-map iterates A^n(x) for n = 0 .. depth.

    Returns exact Fractions for rational kind (including the terminating 0),
    exact QuadraticSurds for quadratic kind, and exact rational enclosure
    pairs (lo, hi) for rule/random kinds.  In every case A^n(x) is the value
    of the shifted expansion [0; a_{n+1}, a_{n+2}, ...].
    """
    if x.kind == "rational":
        out = []
        num, den = x.rational_value.numerator, x.rational_value.denominator
        rho_prev, rho = den, num
        for _ in range(depth + 1):
            out.append(Fraction(rho, rho_prev))
            if rho == 0:
                break
            rho_prev, rho = rho, rho_prev % rho
        return out
    if x.kind == "quadratic":
        return [x.tail_surd(n) for n in range(depth + 1)]
    out = []
    for n in range(depth + 1):
        shifted = shift(x, n)
        try:
            out.append(shifted.enclosure(Fraction(1, 1 << 70), max_terms=200))
        except (ExpansionTerminated, QuotientBudgetError):
            break
    return out


def shift(x: CFNumber, n: int) -> CFNumber:
    """The number [0; a_{n+1}, a_{n+2}, ...] (drops the first n quotients)."""
    if n == 0:
        return x
    if x.kind == "rational":
        orbit_n = gauss_orbit(x, n)
        if len(orbit_n) <= n or orbit_n[n] == 0:
            raise ExpansionTerminated("shift beyond a rational's expansion")
        return CFNumber.from_rational(orbit_n[n], label=f"{x.label}>>{n}")
    if x.kind == "quadratic":
        pre, cyc = list(x.preperiod), list(x.cycle)
        if n >= len(pre):
            k = (n - len(pre)) % len(cyc)
            return CFNumber.from_periodic((), cyc[k:] + cyc[:k],
                                          label=f"{x.label}>>{n}")
        return CFNumber.from_periodic(pre[n:], cyc, label=f"{x.label}>>{n}")

    parent = x.stream

    def grow(cache):
        cache.append(parent.get(len(cache) + n + 1))

    return CFNumber(x.kind, QuotientStream(grow), f"{x.label}>>{n}")


def tail_value_float(x: CFNumber, n: int, terms: int = 60) -> float:
    """A^n(x) as a double, from up to ``terms`` tail quotients.

    The bracket width 1/(q_m q_{m+1}) shrinks at least at Fibonacci rate, so
    60 terms push the enclosure far below double precision; sources that end
    sooner (rationals, budget-capped rules) give the exact tail instead.
    """
    p0, q0, p1, q1 = 1, 0, 0, 1
    m = 0
    while m < terms:
        m += 1
        try:
            a = x.stream.get(n + m)
        except ExpansionTerminated:
            break
        except QuotientBudgetError:
            break
        p0, q0, p1, q1 = p1, q1, a * p1 + p0, a * q1 + q0
        if q1.bit_length() > 80:
            break
    if q1 == 0:
        raise ExpansionTerminated("no tail quotients available")
    return p1 / q1


@dataclass
class DiophantineProfile:
    """Per-index Diophantine data.

    ``log_betas[i]`` is ln beta_n for n = 0..depth; ``taus`` holds
    (n, tau_n) for indices with q_n >= 2, where

        tau_n = log(1/|x - p_n/q_n|) / log q_n

    (so tau_n relates to beta_n by |x - p_n/q_n| = beta_n / q_n).
    ``tau_estimate`` is the max of tau_n over the window: tau is a limsup,
    so a finite window only ever yields lower evidence.
    """
    depth: int
    log_betas: list[float]
    taus: list[tuple[int, float]]
    tau_estimate: float
    truncated: bool = False

    @property
    def tau_values(self) -> list[float]:
        return [t for _, t in self.taus]


def diophantine_profile(x: CFNumber, depth: int) -> DiophantineProfile:
    """Exact-log Diophantine profile from beta_n = 1/(q_{n+1} + A^{n+1} q_n).

    Rational inputs yield a truncated profile (their expansion ends); the
    identity above keeps everything accurate in the log domain even when
    q_n has hundreds of thousands of bits.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    convs = convergents(x, depth + 1)
    navail = convs[-1].n
    truncated = navail < depth + 1
    log_betas = []
    taus = []
    tau_max = float("-inf")
    for n in range(0, min(depth, navail - 1) + 1):
        q_n = convs[n + 1].q
        q_n1 = convs[n + 2].q
        try:
            a_tail = tail_value_float(x, n + 1)
        except ExpansionTerminated:
            a_tail = 0.0
        log_beta = -(math.log(q_n1) + math.log1p(a_tail * (q_n / q_n1)))
        log_betas.append(log_beta)
        if q_n >= 2:
            # |x - p_n/q_n| = beta_n / q_n
            tau_n = (math.log(q_n) - log_beta) / math.log(q_n)
            taus.append((n, tau_n))
            tau_max = max(tau_max, tau_n)
    return DiophantineProfile(depth=depth, log_betas=log_betas, taus=taus,
                              tau_estimate=tau_max, truncated=truncated)


@dataclass(frozen=True)
class Cylinder:
    order: int
    quotients: tuple
    left: Fraction
    right: Fraction

    @property
    def width(self) -> Fraction:
        return self.right - self.left

    def contains(self, x: Fraction) -> bool:
        return self.left < x < self.right


def cylinder(quotients) -> Cylinder:
    """Open interval of reals whose expansion starts with the given block.

    Endpoints are [0; b_1..b_k] and [0; b_1..b_{k-1}, b_k + 1] in sorted
    order; the width is 1/(q_k (q_k + q_{k-1})).
    """
    quotients = list(quotients)
    if not quotients:
        raise ValueError("cylinder needs at least one quotient")
    if any(a < 1 for a in quotients):
        raise ValueError("partial quotients must be >= 1")
    e1 = value_of_quotients(quotients)
    e2 = value_of_quotients(quotients[:-1] + [quotients[-1] + 1])
    lo, hi = (e1, e2) if e1 < e2 else (e2, e1)
    return Cylinder(len(quotients), tuple(quotients), lo, hi)


def simplest_between(lo: Fraction, hi: Fraction) -> Fraction:
    """Fraction with the smallest denominator strictly inside (lo, hi)."""
    if not lo < hi:
        raise ValueError("empty interval")
    # Stern-Brocot style walk on the continued fractions of the endpoints
    flo = math.floor(lo)
    if flo + 1 < hi:
        return Fraction(flo + 1)
    if lo == flo:
        # (n, n + something<1): descend into the fractional part
        return flo + Fraction(1, math.floor(1 / (hi - flo)) + 1)
    return flo + 1 / simplest_between(1 / (hi - flo), 1 / (lo - flo))


def rationals_in(lo: Fraction, hi: Fraction, qmax: int) -> list[Fraction]:
    """All reduced p/q with q <= qmax strictly inside (lo, hi), sorted."""
    out = set()
    for q in range(1, qmax + 1):
        pmin = math.floor(lo * q) + 1
        pmax = math.ceil(hi * q) - 1
        for p in range(pmin, pmax + 1):
            if gcd(p, q) == 1:
                fr = Fraction(p, q)
                if lo < fr < hi:
                    out.add(fr)
    return sorted(out)


# ---------------------------------------------------------------------------
# exact invariant verification (shared by tests and the acceptance suite)


@dataclass
class InvariantReport:
    depth_checked: int
    determinant_ok: bool
    beta_recursion_ok: Optional[bool]   # None when no exact value exists
    eq20_ok: bool                       # 1/(2 q_{n+1}) <= beta_n <= 1/q_{n+1}
    eq21_ok: bool                       # q_{n+1} <= q_n^(tau_n - 1)
    failures: list = field(default_factory=list)

    @property
    def all_ok(self) -> bool:
        return (self.determinant_ok and self.eq20_ok and self.eq21_ok
                and self.beta_recursion_ok in (True, None))


def verify_cf_invariants(x: CFNumber, depth: int,
                         tol: float = 1e-12) -> InvariantReport:
    """Check the convergent/beta invariants to the requested depth.

    Runs to min(depth, available) quotients; the determinant identity and
    the Eq.(20) sandwich are checked in exact integer arithmetic (the
    sandwich via the exact bracket of the Gauss tail), the beta recursion
    exactly for rational/quadratic kinds, and Eq.(21) in the log domain
    with ``tol`` slack.
    """
    convs = convergents(x, depth)
    ndepth = convs[-1].n
    failures = []
    det_ok = True
    for i in range(len(convs) - 1):
        c_prev, c = convs[i], convs[i + 1]
        if abs(c.p * c_prev.q - c_prev.p * c.q) != 1:
            det_ok = False
            failures.append(("determinant", c.n))

    # Eq.(20): with beta_n = 1/(q_{n+1} + A^{n+1} q_n) and A in (0,1) the
    # upper bound is automatic; the lower bound is A^{n+1} q_n <= q_{n+1},
    # checked against an exact rational upper bracket of the tail.
    eq20_ok = True
    for n in range(0, ndepth):
        q_n, q_n1 = convs[n + 1].q, convs[n + 2].q
        try:
            lo, hi = shift(x, n + 1).enclosure(Fraction(1, 1 << 40),
                                               max_terms=120)
        except (ExpansionTerminated, QuotientBudgetError, ValueError):
            continue
        if hi - lo > Fraction(1, 1 << 34):
            continue  # budget cut the tail; bracket too loose to certify
        if not (0 <= lo and hi * q_n <= q_n1):
            eq20_ok = False
            failures.append(("eq20", n))

    # Eq.(21) <=> log q_{n+1} <= (tau_n - 1) log q_n = -log beta_n
    prof = diophantine_profile(x, max(1, ndepth)) if ndepth >= 1 else None
    eq21_ok = True
    if prof is not None:
        for n, lb in enumerate(prof.log_betas):
            if n + 2 >= len(convs):
                break
            q_n1 = convs[n + 2].q
            if math.log(q_n1) > -lb + tol * max(1.0, abs(lb)):
                eq21_ok = False
                failures.append(("eq21", n))

    beta_ok = None
    exact = x.exact_value()
    if exact is not None and ndepth >= 1:
        beta_ok = True
        # signed errors e_n = q_n x - p_n must alternate and satisfy
        # e_{n+1} = a_{n+1} e_n + e_{n-1}; with the convergent recursion the
        # identity is automatic, so the substance is the sign alternation.
        for n in range(-1, ndepth + 1):
            c = convs[n + 1]
            if x.kind == "rational":
                e = c.q * x.rational_value - c.p
                s = (e > 0) - (e < 0)
            else:
                s = exact.mobius(c.q, -c.p, 0, 1).sign()
            expected = 1 if n % 2 == 0 else -1
            if n == ndepth and x.kind == "rational" and s == 0:
                continue  # last convergent of a rational: e_N = 0
            if s != expected:
                beta_ok = False
                failures.append(("beta_sign", n))
    return InvariantReport(ndepth, det_ok, beta_ok, eq20_ok, eq21_ok, failures)
