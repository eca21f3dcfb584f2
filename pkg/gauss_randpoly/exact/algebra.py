"""Exact scalars and sparse bivariate polynomials with rational coefficients.

Rational is :class:`fractions.Fraction` (always reduced, denominator > 0,
zero is 0/1). ComplexRational pairs two of them; BivariatePoly is a sparse
map from exponent pairs to Fractions.
"""
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from types import MappingProxyType

from gauss_randpoly.errors import DomainError

Rational = Fraction


def to_rational(value):
    """
    Converts an int, float, Fraction or numeric string to an exact Fraction.

    Floats convert exactly (their binary value), strings such as "3/4" or
    "1.25" convert to the rational they spell.

    Args:
        value(int, float, str or Fraction): the number to convert

    Returns:
        Fraction: the exact value
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise DomainError("booleans are not rational numbers")
    if isinstance(value, (int, float)):
        if isinstance(value, float) and not math.isfinite(value):
            raise DomainError(f"cannot convert {value} to a rational")
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as err:
            raise DomainError(f"not a rational number: {value!r}") from err
    if isinstance(value, ComplexRational):
        if value.im != 0:
            raise DomainError(f"expected a real value, got {value}")
        return value.re
    raise DomainError(f"cannot convert {type(value).__name__} to a rational")


_SPLIT_SIGN = re.compile(r"(?<=[^eE+\-])[+\-]")


def parse_complex_rational(text):
    """
    Parses "a+bi" syntax with decimal or rational components.

    Accepted forms include "2", "-1/3", "1.5-2i", "1/2+3/4i", "i", "-i" and
    "2.5j". Whitespace is ignored.

    Args:
        text(str): the number as written on a command line

    Returns:
        ComplexRational: the exact value
    """
    s = text.replace(" ", "")
    if not s:
        raise DomainError("empty complex number")
    if s[-1] not in "ij":
        return ComplexRational(to_rational(s))
    body = s[:-1]
    splits = list(_SPLIT_SIGN.finditer(body))
    if splits:
        cut = splits[-1].start()
        re_text, im_text = body[:cut], body[cut:]
    else:
        re_text, im_text = "0", body
    if im_text in ("", "+"):
        im_text = "1"
    elif im_text == "-":
        im_text = "-1"
    return ComplexRational(to_rational(re_text), to_rational(im_text))


@dataclass(frozen=True)
class ComplexRational:
    """Exact complex number re + i·im with Fraction parts."""

    re: Fraction
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", to_rational(self.re))
        object.__setattr__(self, "im", to_rational(self.im))

    @classmethod
    def coerce(cls, value):
        """Wraps ints, floats, Fractions, complex numbers and "a+bi" strings."""
        if isinstance(value, cls):
            return value
        if isinstance(value, complex):
            return cls(Fraction(value.real), Fraction(value.imag))
        if isinstance(value, str):
            return parse_complex_rational(value)
        return cls(to_rational(value))

    @property
    def is_real(self):
        return self.im == 0

    def __add__(self, other):
        other = ComplexRational.coerce(other)
        return ComplexRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return ComplexRational(-self.re, -self.im)

    def __sub__(self, other):
        return self + (-ComplexRational.coerce(other))

    def __rsub__(self, other):
        return ComplexRational.coerce(other) - self

    def __mul__(self, other):
        other = ComplexRational.coerce(other)
        return ComplexRational(self.re * other.re - self.im * other.im,
                               self.re * other.im + self.im * other.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = ComplexRational.coerce(other)
        norm = other.re * other.re + other.im * other.im
        if norm == 0:
            raise ZeroDivisionError("division by zero ComplexRational")
        return ComplexRational((self.re * other.re + self.im * other.im) / norm,
                               (self.im * other.re - self.re * other.im) / norm)

    def __pow__(self, exponent):
        if not isinstance(exponent, int) or exponent < 0:
            raise DomainError("only nonnegative integer powers are supported")
        result = ComplexRational(1)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __eq__(self, other):
        try:
            other = ComplexRational.coerce(other)
        except DomainError:
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        sign = "-" if self.im < 0 else "+"
        return f"{self.re}{sign}{abs(self.im)}i"


def odd_double_factorial(k):
    """
    Returns (2k)!/(2^k k!) = (2k-1)!!, the number of perfect matchings of 2k points.

    Args:
        k(int): nonnegative integer

    Returns:
        Fraction: the exact value (integral)
    """
    if k < 0:
        raise DomainError(f"k must be >= 0, got {k}")
    result = 1
    for odd in range(3, 2 * k, 2):
        result *= odd
    return Fraction(result)


class BivariatePoly:
    """
    Sparse polynomial in two variables (x, y) with rational coefficients.

    ``coeffs`` maps exponent pairs (i, k) to the coefficient of x^i y^k; zero
    coefficients are never stored. For the expected polynomials x is z² and
    y is σ²; other callers use it for any pair of variables.
    """

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs=None):
        cleaned = {}
        for (i, k), c in (coeffs or {}).items():
            if i < 0 or k < 0:
                raise DomainError(f"negative exponent in {(i, k)}")
            c = to_rational(c)
            if c != 0:
                cleaned[(int(i), int(k))] = cleaned.get((int(i), int(k)), Fraction(0)) + c
        self._coeffs = {key: c for key, c in cleaned.items() if c != 0}

    @classmethod
    def constant(cls, c):
        return cls({(0, 0): c})

    @classmethod
    def x(cls):
        return cls({(1, 0): 1})

    @classmethod
    def y(cls):
        return cls({(0, 1): 1})

    @property
    def coeffs(self):
        return MappingProxyType(self._coeffs)

    def coefficient(self, i, k=0):
        return self._coeffs.get((i, k), Fraction(0))

    def x_coefficient(self, i):
        """The coefficient of x^i as a polynomial in y (a BivariatePoly with i=0)."""
        return BivariatePoly({(0, k): c for (j, k), c in self._coeffs.items() if j == i})

    @property
    def x_degree(self):
        return max((i for i, _ in self._coeffs), default=0)

    def y_degree(self, i=None):
        """Highest power of y overall, or within the x^i coefficient when i is given."""
        return max((k for j, k in self._coeffs if i is None or j == i), default=0)

    def is_zero(self):
        return not self._coeffs

    def __add__(self, other):
        other = _as_poly(other)
        merged = dict(self._coeffs)
        for key, c in other._coeffs.items():
            merged[key] = merged.get(key, Fraction(0)) + c
        return BivariatePoly(merged)

    __radd__ = __add__

    def __neg__(self):
        return BivariatePoly({key: -c for key, c in self._coeffs.items()})

    def __sub__(self, other):
        return self + (-_as_poly(other))

    def __rsub__(self, other):
        return _as_poly(other) - self

    def __mul__(self, other):
        other = _as_poly(other)
        product = {}
        for (i1, k1), c1 in self._coeffs.items():
            for (i2, k2), c2 in other._coeffs.items():
                key = (i1 + i2, k1 + k2)
                product[key] = product.get(key, Fraction(0)) + c1 * c2
        return BivariatePoly(product)

    __rmul__ = __mul__

    def __pow__(self, exponent):
        if not isinstance(exponent, int) or exponent < 0:
            raise DomainError("only nonnegative integer powers are supported")
        result = BivariatePoly.constant(1)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __eq__(self, other):
        try:
            other = _as_poly(other)
        except DomainError:
            return NotImplemented
        return self._coeffs == other._coeffs

    def __hash__(self):
        return hash(frozenset(self._coeffs.items()))

    def substitute_y(self, y):
        """Fixes y to an exact rational, leaving a polynomial in x alone."""
        y = to_rational(y)
        collapsed = {}
        for (i, k), c in self._coeffs.items():
            collapsed[(i, 0)] = collapsed.get((i, 0), Fraction(0)) + c * y ** k
        return BivariatePoly(collapsed)

    def evaluate(self, x, y):
        """
        Evaluates exactly at (x, y).

        Args:
            x(ComplexRational or rational-like): value of the first variable
            y(rational-like): value of the second variable

        Returns:
            ComplexRational: the value, with im = 0 whenever x is real
        """
        x = ComplexRational.coerce(x)
        in_x = self.substitute_y(y)
        value = ComplexRational(0)
        for i in range(in_x.x_degree, -1, -1):
            value = value * x + in_x.coefficient(i, 0)
        return value

    def __repr__(self):
        if not self._coeffs:
            return "BivariatePoly(0)"
        terms = []
        for (i, k), c in sorted(self._coeffs.items(), reverse=True):
            monomial = "*".join(part for part in (
                f"x^{i}" if i > 1 else ("x" if i == 1 else ""),
                f"y^{k}" if k > 1 else ("y" if k == 1 else ""),
            ) if part)
            terms.append(f"({c})*{monomial}" if monomial else f"({c})")
        return "BivariatePoly(" + " + ".join(terms) + ")"


def _as_poly(value):
    if isinstance(value, BivariatePoly):
        return value
    return BivariatePoly.constant(to_rational(value))
