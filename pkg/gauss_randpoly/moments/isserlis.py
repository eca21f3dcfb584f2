"""Exact moment oracles for the equicorrelated normal vector.

X ~ 𝒩(0, Σ_N) with Σ_N = I + ((σ²-1)/N)·ones. Two independent routes to
Exp_N[X_1²···X_n²]: Isserlis (Wick) pairing enumeration and the closed
binomial sum.
"""
import logging
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb

import numpy as np

from gauss_randpoly.config import MAX_ISSERLIS_ORDER
from gauss_randpoly.errors import DomainError, UnsupportedOrderError
from gauss_randpoly.exact.algebra import odd_double_factorial, to_rational

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CovarianceSpec:
    """
    Parameters of Σ_N.

    Args:
        N(int): number of variables, >= 1
        sigma2(Fraction): σ² > 0; Σ_N is positive definite with determinant σ²
    """

    N: int
    sigma2: Fraction

    def __post_init__(self):
        if not isinstance(self.N, int) or self.N < 1:
            raise DomainError(f"N must be a positive integer, got {self.N!r}")
        object.__setattr__(self, "sigma2", to_rational(self.sigma2))
        if self.sigma2 <= 0:
            raise DomainError(f"sigma2 must be > 0, got {self.sigma2}")

    @property
    def coupling(self):
        """The off-diagonal entry t = (σ²-1)/N."""
        return (self.sigma2 - 1) / self.N

    @property
    def determinant(self):
        return self.sigma2


def covariance_entry(spec, k, l):
    """
    Exact entry Cov_N(X_k, X_l) of Σ_N, 1-based indices.

    Args:
        spec(CovarianceSpec): the covariance parameters
        k(int): row index, 1 <= k <= N
        l(int): column index, 1 <= l <= N

    Returns:
        Fraction: 1 + t on the diagonal, t off it
    """
    for index in (k, l):
        if not 1 <= index <= spec.N:
            raise DomainError(f"index {index} out of range 1..{spec.N}")
    return spec.coupling + (1 if k == l else 0)


def inverse_entry(spec, k, l):
    """Exact entry of Σ_N⁻¹ = I - ((σ²-1)/(Nσ²))·ones."""
    for index in (k, l):
        if not 1 <= index <= spec.N:
            raise DomainError(f"index {index} out of range 1..{spec.N}")
    return (1 if k == l else 0) - (spec.sigma2 - 1) / (spec.N * spec.sigma2)


def covariance_matrix(spec):
    """Σ_N as a float numpy array (for sampling and empirical comparisons)."""
    t = float(spec.coupling)
    return np.eye(spec.N) + t * np.ones((spec.N, spec.N))


def perfect_matchings(slots):
    """
    Yields every perfect matching of ``slots`` exactly once.

    The smallest unmatched slot is always paired first, so each matching
    is produced in a single canonical order; there are (len-1)!! of them.

    Args:
        slots(list): an even number of slot labels

    Yields:
        list: pairs (a, b) covering all slots
    """
    if not slots:
        yield []
        return
    pivot, rest = slots[0], slots[1:]
    for i, partner in enumerate(rest):
        remaining = rest[:i] + rest[i + 1:]
        for tail in perfect_matchings(remaining):
            yield [(pivot, partner)] + tail


@lru_cache(maxsize=None)
def _pair_pattern_tally(n):
    """
    Perfect matchings of two copies each of n slots, tallied by the multiset
    of slot pairs they join. Keys are sorted tuples of (i, j) pairs, i <= j,
    since the pivot is always the smallest remaining label.
    """
    slots = [v for v in range(n) for _ in range(2)]
    tally = Counter()
    for matching in perfect_matchings(slots):
        tally[tuple(sorted(matching))] += 1
    logger.debug("isserlis n=%d: %d matchings in %d patterns", n, sum(tally.values()),
                 len(tally))
    return dict(tally)


def isserlis_moment(N, n, sigma2, variables=None):
    """
    Exp_N[Π X_m²] by summing over all perfect matchings of the 2n slots.

    Each matching contributes the product of its covariance entries, looked
    up for the listed variables. Matchings joining the same slot pairs are
    tallied once per n and reused for every choice of variables.

    Args:
        N(int): dimension
        n(int): number of squared variables, 0 <= n <= min(N, 8)
        sigma2(rational-like): σ²
        variables(list): which n distinct variables (1-based) are squared;
            defaults to 1..n

    Returns:
        Fraction: the exact moment
    """
    spec = CovarianceSpec(N, to_rational(sigma2))
    if n > MAX_ISSERLIS_ORDER:
        raise UnsupportedOrderError(n, MAX_ISSERLIS_ORDER)
    if not 0 <= n <= N:
        raise DomainError(f"n must satisfy 0 <= n <= N, got n={n}, N={N}")
    if variables is None:
        variables = list(range(1, n + 1))
    variables = list(variables)
    if len(variables) != n or len(set(variables)) != n:
        raise DomainError("variables must list n distinct indices")
    for index in variables:
        if not 1 <= index <= N:
            raise DomainError(f"index {index} out of range 1..{N}")

    total = Fraction(0)
    for pattern, count in _pair_pattern_tally(n).items():
        term = Fraction(count)
        for i, j in pattern:
            term *= covariance_entry(spec, variables[i], variables[j])
        total += term
    return total


def closed_form_moment(N, n, sigma2):
    """
    Exp_N[X_1²···X_n²] = Σ_k C(n,k)(2k-1)!! ((σ²-1)/N)^k.

    Args:
        N(int): dimension
        n(int): 0 <= n <= N
        sigma2(rational-like): σ² > 0

    Returns:
        Fraction: the exact moment
    """
    spec = CovarianceSpec(N, to_rational(sigma2))
    if not 0 <= n <= N:
        raise DomainError(f"n must satisfy 0 <= n <= N, got n={n}, N={N}")
    t = spec.coupling
    return sum((comb(n, k) * odd_double_factorial(k) * t ** k for k in range(n + 1)),
               Fraction(0))


def product_second_moment(N, z2, sigma2):
    """
    Exp_N[Π_n (X_n²+z²)²], the exact second moment of the Monte Carlo integrand.

    Conditional on the shared component, the X_n are independent with mean
    μ and unit variance, and (X²+z²)² has mean q(μ²) with
    q(u) = u² + (6+2z²)u + 3+2z²+z⁴. Averaging q(tG²)^N over a standard
    normal G gives a polynomial in t = (σ²-1)/N, which also holds for σ² < 1.

    Args:
        N(int): dimension, >= 1
        z2(rational-like): real z²
        sigma2(rational-like): σ² > 0

    Returns:
        Fraction: the exact second moment
    """
    spec = CovarianceSpec(N, to_rational(sigma2))
    z2 = to_rational(z2)
    t = spec.coupling
    linear = 6 + 2 * z2
    constant = 3 + 2 * z2 + z2 * z2
    total = Fraction(0)
    # multinomial expansion of (u² + linear·u + constant)^N, u^k averaged to t^k (2k-1)!!
    for a in range(N + 1):
        for b in range(N - a + 1):
            c = N - a - b
            k = 2 * a + b
            weight = comb(N, a) * comb(N - a, b)
            total += (weight * linear ** b * constant ** c
                      * odd_double_factorial(k) * t ** k)
    return total
