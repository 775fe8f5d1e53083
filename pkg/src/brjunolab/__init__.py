"""brjunolab: a computational laboratory for the Brjuno function.

Certified evaluation of the Brjuno series via continued fractions, local
quadrature against its logarithmic singularities, and desk-scale
estimation of its pointwise regularity exponents and multifractal
spectrum.
"""
from .cf import (BigRational, CFNumber, Convergent, Cylinder,
                 DiophantineProfile, ExpansionTerminated, QuadraticSurd,
                 QuotientBudgetError, construct_tau_number, convergents,
                 cylinder, diophantine_profile, expand_rational, gauss_orbit,
                 shift, simplest_between, value_of_quotients,
                 verify_cf_invariants)
from .quadrature import (Interval, QuadratureResult, average_formula_bm,
                         haar_cwt, integrate_B, local_oscillation)
from .regularity import (EstimationError, ExponentEstimate, PrimitiveEval,
                         compare_p_exponents, estimate_holder_primitive,
                         estimate_p_exponent, local_dimension,
                         modulus_fit_badly_approximable, primitive_eval,
                         second_difference)
from .series import (BrjunoBudgetError, BrjunoRationalError, BrjunoTerm,
                     SeriesEval, check_functional_equation, eval_B,
                     eval_Btilde, gamma_bounds_check)
from .spectrum import (EmpiricalSpectrum, SpectrumPoint, analytic_spectrum,
                       empirical_spectrum, jarnik_dim)

__version__ = "0.1.0"

__all__ = [
    "BigRational", "CFNumber", "Convergent", "Cylinder", "DiophantineProfile",
    "ExpansionTerminated", "QuadraticSurd", "QuotientBudgetError",
    "construct_tau_number", "convergents", "cylinder", "diophantine_profile",
    "expand_rational", "gauss_orbit", "shift", "simplest_between",
    "value_of_quotients", "verify_cf_invariants",
    "Interval", "QuadratureResult", "average_formula_bm", "haar_cwt",
    "integrate_B", "local_oscillation",
    "EstimationError", "ExponentEstimate", "PrimitiveEval",
    "compare_p_exponents", "estimate_holder_primitive", "estimate_p_exponent",
    "local_dimension", "modulus_fit_badly_approximable", "primitive_eval",
    "second_difference",
    "BrjunoBudgetError", "BrjunoRationalError", "BrjunoTerm", "SeriesEval",
    "check_functional_equation", "eval_B", "eval_Btilde",
    "gamma_bounds_check",
    "EmpiricalSpectrum", "SpectrumPoint", "analytic_spectrum",
    "empirical_spectrum", "jarnik_dim",
    "__version__",
]
