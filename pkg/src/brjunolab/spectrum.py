"""Multifractal 1-spectrum: the analytic law D(H) = 2H and a coarse check.

The analytic spectrum is exact (Jarnik dimension 2/tau composed with
H = 1/tau).  The empirical spectrum samples Gauss-measure random numbers,
estimates the 1-exponent of each with a cheap two-scale slope, and bins;
its only checkable content at desk scale is the concentration of mass at
H = 1/2 (typical numbers have tau = 2), which it reproduces.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .cf import CFNumber
from .quadrature import (adaptive_partition, oscillation_from_partition,
                         _spike_seeds, _center_fraction)
from .rng import derive_stream_seed
from .series import truncated_node_value

NEG_INF = float("-inf")

BIN_WIDTH = 0.05
BIN_TOP = 0.55

#: two-scale estimator geometry: endpoint clusters of 4 adjacent octaves
#: centered at j -+ span (phase-averaging tames convergent-phase wobble)
DEFAULT_SCALE_J = 15
CLUSTER_SPAN = 10
CLUSTER_SIZE = 4


@dataclass(frozen=True)
class SpectrumPoint:
    H: float
    dim: float


def analytic_spectrum(H: float) -> float:
    """Dimension of the level set of 1-exponent H: 2H on [0, 1/2], else -inf."""
    if 0.0 <= H <= 0.5:
        return 2.0 * H
    return NEG_INF


def jarnik_dim(tau: float) -> float:
    """Dimension 2/tau of the tau-well-approximable set (tau >= 2)."""
    if tau < 2:
        raise ValueError("tau must be >= 2 (every irrational has tau >= 2)")
    if math.isinf(tau):
        return 0.0
    return 2.0 / tau


@dataclass
class EmpiricalSpectrum:
    bins: list                  # (H_center, count, coarse_dim)
    n_samples: int
    scale_j: int
    seed: int
    estimates: list             # raw slope estimates, one per sample
    failures: int
    skipped_boundary: int

    def mass_in(self, lo: float, hi: float) -> float:
        inside = sum(1 for h in self.estimates if lo <= h < hi)
        return inside / self.n_samples


def _cheap_two_scale_h1(center: Fraction, j: int) -> float:
    """Two-scale slope of log M_1 between octave clusters at j -+ span.

    Each endpoint is the geometric mean of M_1 over CLUSTER_SIZE adjacent
    octaves, which averages out the phase of the nearest convergents while
    keeping the estimator a two-point slope.
    """
    def log_m1(jj: int) -> float:
        rho = Fraction(1, 1 << jj)
        rf = float(rho)
        tol = 2.0 * rf * (rf ** 0.5) * 0.05
        part = adaptive_partition(
            truncated_node_value, center - rho, center + rho, tol,
            seeds=_spike_seeds(center - rho, center + rho), max_evals=30_000)
        return math.log(oscillation_from_partition(part, 1))

    coarse = [j - CLUSTER_SPAN + k for k in range(CLUSTER_SIZE)]
    fine = [j + CLUSTER_SPAN - k for k in range(CLUSTER_SIZE)]
    la = sum(log_m1(jj) for jj in coarse) / CLUSTER_SIZE
    lb = sum(log_m1(jj) for jj in fine) / CLUSTER_SIZE
    xa = -sum(coarse) / CLUSTER_SIZE * math.log(2.0)
    xb = -sum(fine) / CLUSTER_SIZE * math.log(2.0)
    return (lb - la) / (xb - xa)


def empirical_spectrum(n: int, depth: int = 60, j: int = DEFAULT_SCALE_J,
                       seed: int = 20260810,
                       interval: tuple = None) -> EmpiricalSpectrum:
    """Coarse-grained spectrum from n Gauss-measure samples.

    Samples whose oscillation window would leave (0,1) are skipped and
    redrawn (counted in ``skipped_boundary``); when ``interval`` is given,
    sampling is further restricted to it by rejection, which is how the
    homogeneity comparison across subintervals is run.  Deterministic:
    sample i uses the stream seed derived from (seed, i-th draw).
    """
    if n > 4096:
        raise ValueError("n is capped at 4096 (desk budget)")
    margin = Fraction(1, 1 << (j - CLUSTER_SPAN))
    estimates = []
    failures = 0
    skipped = 0
    draw = 0
    while len(estimates) + failures < n:
        x = CFNumber.from_random(derive_stream_seed(seed, draw))
        draw += 1
        x.stream.prefix(depth)
        center = _center_fraction(x, Fraction(1, 1 << (j + CLUSTER_SPAN + 20)))
        if not (margin < center < 1 - margin):
            skipped += 1
            continue
        if interval is not None:
            lo, hi = interval
            if not (Fraction(lo) <= center < Fraction(hi)):
                skipped += 1
                continue
        try:
            estimates.append(_cheap_two_scale_h1(center, j))
        except (ValueError, OverflowError):
            failures += 1
    nbins = int(round(BIN_TOP / BIN_WIDTH))
    counts = [0] * nbins
    for h in estimates:
        idx = min(nbins - 1, max(0, int(h / BIN_WIDTH)))
        counts[idx] += 1
    bins = []
    for i, count in enumerate(counts):
        center_h = (i + 0.5) * BIN_WIDTH
        coarse = (min(1.0, max(0.0, math.log(count) / (j * math.log(2.0))))
                  if count > 0 else 0.0)
        bins.append((center_h, count, coarse))
    return EmpiricalSpectrum(bins=bins, n_samples=n, scale_j=j, seed=seed,
                             estimates=estimates, failures=failures,
                             skipped_boundary=skipped)
