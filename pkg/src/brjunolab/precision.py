"""Floating-point context: plain doubles or an extended-precision mode.

The environment variable BRJUNO_PRECISION selects the accumulation
arithmetic used by the series evaluators:

  * ``double``   (default) -- IEEE binary64 via :mod:`math`,
  * ``extended`` -- mpmath with a 128-bit significand.

Everything downstream of the series layer (quadrature, regression) always
runs in doubles; the extended mode exists so that closed-form checks at
1e-12 can be reproduced with extra headroom.
"""
import contextlib
import math
import os

import mpmath

EXTENDED_PREC_BITS = 128


def extended_enabled() -> bool:
    return os.environ.get("BRJUNO_PRECISION", "double").strip().lower() == "extended"


class _DoubleContext:
    name = "double"

    @staticmethod
    def log_int(n):
        # math.log accepts arbitrary-size ints and stays accurate
        return math.log(n)

    @staticmethod
    def log1p(x):
        return math.log1p(x)

    @staticmethod
    def from_fraction(fr):
        return fr.numerator / fr.denominator

    @staticmethod
    def zero():
        return 0.0

    @staticmethod
    def workprec():
        return contextlib.nullcontext()


class _ExtendedContext:
    name = "extended"

    @staticmethod
    def log_int(n):
        with mpmath.workprec(EXTENDED_PREC_BITS):
            return mpmath.log(n)

    @staticmethod
    def log1p(x):
        with mpmath.workprec(EXTENDED_PREC_BITS):
            return mpmath.log1p(x)

    @staticmethod
    def from_fraction(fr):
        with mpmath.workprec(EXTENDED_PREC_BITS):
            return mpmath.mpf(fr.numerator) / fr.denominator

    @staticmethod
    def zero():
        return mpmath.mpf(0)

    @staticmethod
    def workprec():
        return mpmath.workprec(EXTENDED_PREC_BITS)


def get_context():
    return _ExtendedContext if extended_enabled() else _DoubleContext
