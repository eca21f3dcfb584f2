"""Exact closed form of the expected polynomials E_N(z;σ)."""
from gauss_randpoly.exact.algebra import (BivariatePoly, ComplexRational, Rational,
                                          odd_double_factorial, parse_complex_rational,
                                          to_rational)
from gauss_randpoly.exact.expected_polynomial import (eval_exact, eval_float,
                                                      exact_to_mpf, expected_polynomial,
                                                      moment_sequence, nth_root_value,
                                                      signed_nth_root)

__all__ = [
    "BivariatePoly", "ComplexRational", "Rational", "odd_double_factorial",
    "parse_complex_rational", "to_rational", "eval_exact", "eval_float",
    "exact_to_mpf", "expected_polynomial", "moment_sequence", "nth_root_value",
    "signed_nth_root",
]
