"""Exact continued-fraction layer: expansions, convergents, orbits, profiles."""
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from brjunolab import (CFNumber, ExpansionTerminated, QuotientBudgetError,
                       construct_tau_number, convergents, cylinder,
                       diophantine_profile, expand_rational, gauss_orbit,
                       shift, simplest_between, value_of_quotients,
                       verify_cf_invariants)
from brjunolab.rng import SplitMix64, gauss_kuzmin_quotient


def euclid_oracle(num, den):
    """Independent expansion oracle: plain Euclid, then canonicalize."""
    out = []
    a, b = den, num
    while b:
        out.append(a // b)
        a, b = b, a % b
    if len(out) > 1 and out[-1] == 1:
        out.pop()
        out[-1] += 1
    return out


rationals_01 = st.fractions(min_value=Fraction(1, 10**6),
                            max_value=Fraction(999999, 10**6)).filter(
    lambda f: 0 < f < 1)


class TestExpandRational:
    def test_single_step(self):
        assert expand_rational(Fraction(1, 7)) == [7]

    def test_pi_tail(self):
        # 355/113 - 3 = 16/113
        assert expand_rational(Fraction(16, 113)) == [7, 16]

    def test_two_fifths(self):
        assert expand_rational(Fraction(2, 5)) == euclid_oracle(2, 5) == [2, 2]

    def test_rejects_outside_unit_interval(self):
        with pytest.raises(ValueError):
            expand_rational(Fraction(3, 2))
        with pytest.raises(ValueError):
            expand_rational(Fraction(0))

    @given(rationals_01)
    @settings(max_examples=200, deadline=None)
    def test_matches_euclid_oracle_and_round_trips(self, x):
        quots = expand_rational(x)
        assert quots == euclid_oracle(x.numerator, x.denominator)
        assert value_of_quotients(quots) == x
        # canonical form: no trailing 1 except the single-term case
        if len(quots) > 1:
            assert quots[-1] >= 2


class TestConvergents:
    def test_golden_is_fibonacci(self, golden):
        qs = [c.q for c in convergents(golden, 6)]
        # recursion oracle with all a_n = 1: q_n = a q_{n-1} + q_{n-2}
        fib = [0, 1]
        for _ in range(6):
            fib.append(fib[-1] + fib[-2])
        assert qs == fib

    def test_first_convergent_is_one_over_a1(self):
        x = CFNumber.from_rational(Fraction(1, 9))
        c = convergents(x, 1)[-1]
        assert (c.p, c.q) == (1, 9)

    def test_two_fifths_list(self, two_fifths):
        got = [(c.p, c.q) for c in convergents(two_fifths, 5)]
        # recursion oracle on [2, 2]
        assert got == [(1, 0), (0, 1), (1, 2), (2, 5)]

    @given(rationals_01)
    @settings(max_examples=100, deadline=None)
    def test_determinant_identity(self, x):
        convs = convergents(CFNumber.from_rational(x), 30)
        for a, b in zip(convs, convs[1:]):
            assert abs(b.p * a.q - a.p * b.q) == 1

    def test_last_convergent_reproduces_rational(self):
        x = Fraction(355, 452)
        convs = convergents(CFNumber.from_rational(x), 50)
        assert Fraction(convs[-1].p, convs[-1].q) == x


class TestGaussOrbit:
    def test_golden_fixed_point(self, golden):
        for surd in gauss_orbit(golden, 5):
            assert abs(float(surd) - (math.sqrt(5) - 1) / 2) < 1e-15

    def test_silver_fixed_point(self, silver):
        for surd in gauss_orbit(silver, 5):
            assert abs(float(surd) - (math.sqrt(2) - 1)) < 1e-15

    def test_two_fifths_terminates(self, two_fifths):
        # direct iteration oracle: 2/5 -> {5/2} = 1/2 -> {2} = 0
        assert gauss_orbit(two_fifths, 9) == [
            Fraction(2, 5), Fraction(1, 2), Fraction(0)]

    def test_floor_inverse_is_next_quotient(self):
        x = CFNumber.from_periodic([3, 1], [2, 5])
        quots = x.stream.prefix(8)
        orbit = gauss_orbit(x, 6)
        for n, surd in enumerate(orbit):
            assert math.floor(1.0 / float(surd)) == quots[n]

    def test_enclosures_for_random_kind(self):
        x = CFNumber.from_random(99)
        orbit = gauss_orbit(x, 4)
        quots = x.stream.prefix(6)
        for n, (lo, hi) in enumerate(orbit):
            assert 0 <= lo < hi <= 1
            mid = (lo + hi) / 2
            assert math.floor(1 / mid) == quots[n]


class TestDiophantineProfile:
    def test_golden_tau_approaches_two(self, golden):
        prof = diophantine_profile(golden, 40)
        late = prof.tau_values[-5:]
        assert all(abs(t - 2.0) < 0.05 for t in late)

    def test_tau4_construction_hits_target(self, tau4):
        prof = diophantine_profile(tau4, 6)
        assert abs(prof.taus[1][1] - 4.0) <= 0.1      # tau_2 ~ 4.0
        assert abs(prof.tau_estimate - 4.0) <= 0.2

    def test_beta_sandwich_eq20(self, golden, silver, tau4):
        for x in (golden, silver, tau4):
            prof = diophantine_profile(x, 12)
            convs = convergents(x, 13)
            for n, lb in enumerate(prof.log_betas):
                q_next = convs[n + 2].q
                assert lb <= -math.log(q_next) + 1e-12
                assert lb >= -math.log(2 * q_next) - 1e-12

    def test_rational_profile_truncates(self, two_fifths):
        prof = diophantine_profile(two_fifths, 10)
        assert prof.truncated


class TestConstructTau:
    def test_tau2_gives_unit_tail(self):
        x = construct_tau_number(2, a1=5)
        assert x.stream.prefix(6) == [5, 1, 1, 1, 1, 1]

    def test_tau4_recursion_oracle(self):
        x = construct_tau_number(4, a1=2)
        assert x.stream.prefix(3) == [2, 4, 81]
        qs = [c.q for c in convergents(x, 3)][2:]
        assert qs == [2, 9, 731]

    def test_tau2_distance_oracle(self):
        # tau_2 = log(1/|x - p_2/q_2|)/log q_2 ~ 4 for the tau=4 rule
        x = construct_tau_number(4, a1=2)
        lo, hi = x.enclosure(Fraction(1, 10**40))
        p2q2 = Fraction(4, 9)
        dist = abs(float((lo + hi) / 2 - p2q2))
        assert abs(math.log(1 / dist) / math.log(9) - 4.0) < 0.1

    def test_budget_error_is_explicit(self):
        with pytest.raises(QuotientBudgetError):
            construct_tau_number(4, depth=40, a1=2)

    def test_rejects_tau_below_two(self):
        with pytest.raises(ValueError):
            construct_tau_number(1.5)


class TestCylinder:
    @pytest.mark.parametrize("quots,lo,hi", [
        ([1], Fraction(1, 2), Fraction(1)),
        ([2], Fraction(1, 3), Fraction(1, 2)),
        ([1, 1], Fraction(1, 2), Fraction(2, 3)),
    ])
    def test_endpoint_formula(self, quots, lo, hi):
        c = cylinder(quots)
        assert (c.left, c.right) == (lo, hi)

    @given(st.lists(st.integers(1, 9), min_size=1, max_size=7))
    @settings(max_examples=150, deadline=None)
    def test_width_identity_and_nesting(self, quots):
        c = cylinder(quots)
        convs = convergents(CFNumber.from_periodic(quots, [1]), len(quots))
        qk, qk1 = convs[-1].q, convs[-2].q
        assert c.width == Fraction(1, qk * (qk + qk1))
        child = cylinder(quots + [2])
        assert c.left <= child.left and child.right <= c.right
        assert child.width < c.width

    def test_membership_matches_expansion_prefix(self):
        c = cylinder([2, 3])
        inside = Fraction(7, 16)      # [0; 2, 3, 2]
        assert expand_rational(inside)[:2] == [2, 3]
        assert c.contains(inside)

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            cylinder([])


class TestInvariants:
    @pytest.mark.parametrize("label", ["golden", "silver"])
    def test_quadratic_exact_to_depth_40(self, label, golden, silver):
        x = {"golden": golden, "silver": silver}[label]
        rep = verify_cf_invariants(x, 40)
        assert rep.depth_checked == 40
        assert rep.all_ok and rep.beta_recursion_ok is True

    def test_rule_numbers_capped_but_clean(self, tau3, tau4):
        for x in (tau3, tau4):
            rep = verify_cf_invariants(x, 40)
            assert rep.depth_checked >= 10
            assert rep.all_ok

    @given(st.integers(0, 2**64 - 1))
    @settings(max_examples=20, deadline=None)
    def test_random_streams_to_depth_40(self, seed):
        rep = verify_cf_invariants(CFNumber.from_random(seed), 40)
        assert rep.depth_checked == 40
        assert rep.all_ok

    @given(rationals_01)
    @settings(max_examples=60, deadline=None)
    def test_rational_exact(self, x):
        rep = verify_cf_invariants(CFNumber.from_rational(x), 40)
        assert rep.all_ok and rep.beta_recursion_ok is True


class TestShiftAndEnclosure:
    def test_shift_drops_quotients(self):
        x = CFNumber.from_periodic([4, 3], [2, 7])
        assert shift(x, 1).stream.prefix(5) == [3, 2, 7, 2, 7]

    def test_enclosure_brackets_quadratic(self, silver):
        lo, hi = silver.enclosure(Fraction(1, 10**24))
        # sqrt(2) - 1 in [lo, hi]  <=>  (1 + lo)^2 <= 2 <= (1 + hi)^2, exactly
        assert (1 + lo) ** 2 <= 2 <= (1 + hi) ** 2
        assert hi - lo <= Fraction(1, 10**24)

    def test_rational_enclosure_is_exact_point(self, two_fifths):
        lo, hi = two_fifths.enclosure(Fraction(1, 100))
        assert lo == hi == Fraction(2, 5)


class TestSimplestBetween:
    def test_basic(self):
        assert simplest_between(Fraction(1, 3), Fraction(1, 2)) == Fraction(2, 5)
        assert simplest_between(Fraction(4, 10), Fraction(6, 10)) == Fraction(1, 2)

    @given(rationals_01, rationals_01)
    @settings(max_examples=100, deadline=None)
    def test_is_inside_and_minimal(self, a, b):
        if a == b:
            return
        lo, hi = min(a, b), max(a, b)
        s = simplest_between(lo, hi)
        assert lo < s < hi
        for q in range(1, s.denominator):
            p_lo = math.floor(lo * q) + 1
            p_hi = math.ceil(hi * q) - 1
            assert p_lo > p_hi, f"{p_lo}/{q} inside but simpler than {s}"


class TestGaussKuzmin:
    def test_stream_deterministic(self):
        a = CFNumber.from_random(777).stream.prefix(50)
        b = CFNumber.from_random(777).stream.prefix(50)
        assert a == b

    def test_inverse_cdf_boundaries(self):
        # P(a=1) = log2(4/3) ~ 0.415; u just below/above must flip the value
        assert gauss_kuzmin_quotient(0.41) == 1
        assert gauss_kuzmin_quotient(0.42) == 2

    def test_distribution_roughly_gauss_kuzmin(self):
        rng = SplitMix64(2024)
        n = 20000
        ones = sum(1 for _ in range(n)
                   if gauss_kuzmin_quotient(rng.next_unit()) == 1)
        assert abs(ones / n - math.log2(4 / 3)) < 0.01
