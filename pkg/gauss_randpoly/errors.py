"""Exception types raised by gauss_randpoly.

All library errors derive from GaussRandpolyError so callers (and the CLI)
can catch the whole family at once, while the mixed-in builtin bases keep
``except ValueError`` style handling working.
"""


class GaussRandpolyError(Exception):
    """Base class for every error raised by this package."""


class DomainError(GaussRandpolyError, ValueError):
    """A precondition on the inputs of an operation is violated."""


class UnsupportedOrderError(DomainError):
    """Pairing enumeration was asked for more squared variables than supported."""

    def __init__(self, n, max_order):
        self.n = n
        self.max_order = max_order
        super().__init__(f"n > {max_order} unsupported (got n={n})")


class PrecisionInsufficientError(GaussRandpolyError, ArithmeticError):
    """Interval evaluation lost all significant digits at the working precision.

    Args:
        N(int): degree of the evaluated polynomial
        z2(complex): the point z² that was evaluated
        sigma2(float): variance parameter σ²
        bits(int): working precision in bits
        rel_radius(float): relative radius reached by the enclosure
    """

    def __init__(self, N, z2, sigma2, bits, rel_radius=None):
        self.N = N
        self.z2 = z2
        self.sigma2 = sigma2
        self.bits = bits
        self.rel_radius = rel_radius
        message = (f"precision insufficient at N={N}, z2={z2}, sigma2={sigma2} "
                   f"with {bits} bits")
        if rel_radius is not None:
            message += f" (relative radius {rel_radius:.3g})"
        super().__init__(message)


class PoleError(GaussRandpolyError, ZeroDivisionError):
    """A denominator in a closed-form expression vanishes."""


class ZeroNormalizationError(PoleError):
    """A critical density or entropy value is singular at the requested point."""


class McVarianceWarning(UserWarning):
    """Monte Carlo estimate requested in a regime with heavy-tailed products."""


class ConvergenceTrendWarning(UserWarning):
    """An empirical convergence trend (monotone error decay) was not observed."""
