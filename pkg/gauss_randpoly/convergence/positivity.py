"""Sum-of-squares series for the even-degree polynomials E_{2K}, σ² >= 1.

With c = 1 - 1/σ², E_{2K} splits as

    E_{2K}(z;σ) = (1/σ)·(2σ²/(σ²+1))·Σ_j (1/j!)(c/(2K))^j J_j²,

where J_j = Exp'[Π_k (z² + X_k²)·(Σ_k X_k)^j] under the K-variate law
X ~ 𝒩(0, I + (β/K)·ones), β = c/(2-c). Every term is a square, so the
partial sums increase towards E_{2K}. J_0 = E_K(z;σ') with σ'² = 1 + β.

The J_j come from one exact generating function. Writing X = Y + √(β/K)·W
with W the common factor, the tilt by e^{tΣX} gives

    Σ_j J_j t^j/j! = e^{λt²}·Exp_W[(z² + 1 + ((1+β)t + √(β/K)·W)²)^K],

λ = K(1+β)/2, and only even powers of W survive the expectation.
"""
import logging
import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from gauss_randpoly.errors import DomainError
from gauss_randpoly.exact.algebra import BivariatePoly, odd_double_factorial, to_rational
from gauss_randpoly.exact.expected_polynomial import eval_exact

logger = logging.getLogger(__name__)

WORKING_BITS = 113


@dataclass(frozen=True)
class PositivitySeries:
    """
    Terms and partial sums of the series, next to the exact E_{2K}.

    Args:
        K(int): half the degree
        z2(Fraction): real z²
        sigma2(Fraction): σ² >= 1
        terms(list): float term j for j = 0..j_max (odd j vanish)
        partial_sums(list): running sums of ``terms``
        j0_lower_bound(float): the j = 0 term, (1/σ)(2σ²/(σ²+1))·E_K(z;σ')²
        j0_product_form(float): (1/σ)[√(2σ²/(σ²+1))·(z² + 2σ²/(σ²+1))]^{2K}, equal
            to the j = 0 term when K = 1 or σ² = 1
        exact_value(float): E_{2K}(z;σ) from eval_exact
    """

    K: int
    z2: Fraction
    sigma2: Fraction
    terms: list
    partial_sums: list
    j0_lower_bound: float
    j0_product_form: float
    exact_value: float

    @property
    def gap(self):
        """E_{2K} minus the last partial sum."""
        return self.exact_value - self.partial_sums[-1]


def tilted_moments(K, z2, beta, j_max):
    """
    Exact J_0..J_{j_max} for the K-variate law with coupling β/K.

    Args:
        K(int): number of variables
        z2(Fraction): real z²
        beta(Fraction): β >= 0
        j_max(int): last index

    Returns:
        list: Fractions J_0..J_{j_max}
    """
    t, w = BivariatePoly.x(), BivariatePoly.y()
    scale = 1 + beta
    base = (z2 + 1) + scale * scale * t * t + 2 * scale * t * w + w * w
    expanded = base ** K

    # Exp[w^k] with w = √(β/K)·W
    w_variance = beta / K
    averaged = {}
    for (i, k), c in expanded.coeffs.items():
        if k % 2 == 0:
            averaged[i] = averaged.get(i, Fraction(0)) + c * w_variance ** (k // 2) \
                * odd_double_factorial(k // 2)

    lam = Fraction(K) * scale / 2
    moments = []
    for j in range(j_max + 1):
        coefficient = sum((p * lam ** ((j - i) // 2) / math.factorial((j - i) // 2)
                           for i, p in averaged.items() if i <= j and (j - i) % 2 == 0),
                          Fraction(0))
        moments.append(coefficient * math.factorial(j))
    return moments


def positivity_series(K, z2, sigma2, j_max):
    """
    Partial sums of the sum-of-squares series for E_{2K}(z;σ).

    Args:
        K(int): K >= 1, the degree is 2K
        z2(rational-like): real z²
        sigma2(rational-like): σ² >= 1
        j_max(int): last term index, >= 0

    Returns:
        PositivitySeries: terms, nondecreasing partial sums and the j = 0 bounds
    """
    if not isinstance(K, int) or K < 1:
        raise DomainError(f"K must be a positive integer, got {K!r}")
    if j_max < 0:
        raise DomainError(f"j_max must be >= 0, got {j_max}")
    z2, sigma2 = to_rational(z2), to_rational(sigma2)
    if sigma2 < 1:
        raise DomainError(f"the sum-of-squares series needs sigma2 >= 1, got {sigma2}")

    c = 1 - 1 / sigma2
    beta = c / (2 - c)
    ratio = 2 * sigma2 / (sigma2 + 1)
    moments = tilted_moments(K, z2, beta, j_max)
    exact_terms = [(c / (2 * K)) ** j / math.factorial(j) * moments[j] ** 2
                   for j in range(j_max + 1)]

    with mpmath.workprec(WORKING_BITS):
        prefactor = mpmath.mpf(ratio.numerator) / ratio.denominator \
            / mpmath.sqrt(mpmath.mpf(sigma2.numerator) / sigma2.denominator)
        terms, partial_sums = [], []
        running = Fraction(0)
        for term in exact_terms:
            running += term
            terms.append(float(prefactor * mpmath.mpf(term.numerator) / term.denominator))
            partial_sums.append(float(prefactor * mpmath.mpf(running.numerator)
                                      / running.denominator))
        product = ratio ** K * (z2 + ratio) ** (2 * K)
        product_form = float(prefactor / ratio * mpmath.mpf(product.numerator)
                             / product.denominator)
    exact_value = float(eval_exact(2 * K, z2, sigma2).re)
    logger.debug("positivity series K=%d z2=%s sigma2=%s: gap %.3g", K, z2, sigma2,
                 exact_value - partial_sums[-1])
    return PositivitySeries(K=K, z2=z2, sigma2=sigma2, terms=terms, partial_sums=partial_sums,
                            j0_lower_bound=terms[0], j0_product_form=product_form,
                            exact_value=exact_value)
