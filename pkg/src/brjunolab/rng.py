"""Deterministic 64-bit RNG and Gauss-Kuzmin partial-quotient sampling.

SplitMix64 is used instead of the stdlib Mersenne Twister so that streams
are bit-stable across platforms and Python versions given the same seed.
Partial quotients follow the Gauss-Kuzmin law P(a = k) = log2(1 + 1/(k(k+2))),
sampled by inverse CDF; the CDF telescopes to

    P(a <= k) = 1 + log2((k+1)/(k+2)).
"""
import math

_MASK64 = (1 << 64) - 1


class SplitMix64:
    """SplitMix64 stream; yields uniform u in [0, 1) with 53 random bits."""

    def __init__(self, seed: int):
        self.state = seed & _MASK64

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def next_unit(self) -> float:
        return (self.next_u64() >> 11) * 2.0 ** -53


def _gk_cdf(k: int) -> float:
    return 1.0 + math.log2((k + 1) / (k + 2))


def gauss_kuzmin_quotient(u: float) -> int:
    """Smallest k >= 1 with P(a <= k) >= u (exact inverse-CDF semantics)."""
    t = 2.0 ** (u - 1.0)
    if t >= 1.0:
        t = math.nextafter(1.0, 0.0)
    k = max(1, math.ceil((2.0 * t - 1.0) / (1.0 - t)))
    # guard against float rounding in the closed form
    while k > 1 and _gk_cdf(k - 1) >= u:
        k -= 1
    while _gk_cdf(k) < u:
        k += 1
    return k


def derive_stream_seed(master: int, index: int) -> int:
    """Independent per-sample seed derived from a master seed."""
    mix = SplitMix64((master ^ (index * 0xA24BAED4963EE407)) & _MASK64)
    mix.next_u64()
    return mix.next_u64()
