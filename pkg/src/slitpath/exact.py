"""Exact arithmetic primitives: rationals, dense polynomials, binomials.

Everything in this module is exact.  Rational values are
``fractions.Fraction`` (arbitrary precision, always reduced, positive
denominator), polynomials are dense coefficient tuples over Fraction, and
no operation ever rounds.  All values are immutable after construction, so
they can be shared freely across threads.

Two slightly unusual primitives live here because the coefficient engine
in :mod:`slitpath.genfun` needs them:

* ``binom`` accepts a negative upper index, using the falling-factorial
  convention ``binom(t, b) = t (t-1) ... (t-b+1) / b!``.
* ``cheb_v`` tabulates the integer coefficients of the rescaled Chebyshev
  polynomials V_k defined by V_0 = 1, V_1 = y, V_{k+1} = 2y V_k + V_{k-1},
  which satisfy T_k(i y) = i^k V_k(y) for the classical T_k.  They are what
  turns the cosine-of-arccosine terms of the walk solution into integer
  powers.
"""
from __future__ import annotations

import itertools
import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

Rational = Union[int, str, Fraction]


def to_fraction(value: Rational) -> Fraction:
    """Coerce an int, "p/q" string, or Fraction to an exact Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, str)):
        return Fraction(value)
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def binom(top: int, bottom: int) -> Fraction:
    """Generalized binomial coefficient with integer (possibly negative) top.

    Defined as the falling factorial top (top-1) ... (top-bottom+1) divided
    by bottom!, which agrees with math.comb for top >= 0 and extends it to
    negative upper index.

    >>> binom(5, 3)
    Fraction(10, 1)
    >>> binom(-2, 3)
    Fraction(-4, 1)
    >>> binom(7, 0)
    Fraction(1, 1)
    """
    if bottom < 0:
        raise ValueError("bottom must be nonnegative")
    if top >= 0:
        return Fraction(math.comb(top, bottom))
    # binom(-t, b) = (-1)^b binom(t+b-1, b); equivalent to the falling factorial.
    return Fraction((-1) ** bottom * math.comb(bottom - top - 1, bottom))


@dataclass(frozen=True)
class ChebV:
    """Coefficient table of V_k(y) = sum_j coeffs[j] * y^(k - 2j).

    The coefficients are strictly positive integers; coeffs[0] = 2^(k-1)
    for k >= 1.
    """

    order: int
    coeffs: tuple[int, ...]

    def evaluate(self, y):
        """Evaluate V_k at a numeric argument (float, complex, Fraction...)."""
        return sum(t * y ** (self.order - 2 * j) for j, t in enumerate(self.coeffs))


# Table of V_k coefficient tuples, grown on demand and kept for the session.
_CHEB_ROWS: list[tuple[int, ...]] = [(1,), (1,)]
_CHEB_LOCK = threading.Lock()


def cheb_v(k: int) -> ChebV:
    """Coefficient table of V_k via V_{k+1} = 2y V_k + V_{k-1}.

    >>> cheb_v(3).coeffs   # 4y^3 + 3y
    (4, 3)
    >>> cheb_v(0).coeffs
    (1,)
    >>> cheb_v(4).coeffs   # 8y^4 + 8y^2 + 1
    (8, 8, 1)
    """
    if k < 0:
        raise ValueError("order must be nonnegative")
    with _CHEB_LOCK:
        while len(_CHEB_ROWS) <= k:
            n = len(_CHEB_ROWS) - 1  # have rows 0..n, build n+1
            prev, prev2 = _CHEB_ROWS[n], _CHEB_ROWS[n - 1]
            row = [0] * ((n + 1) // 2 + 1)
            for j, t in enumerate(prev):
                row[j] += 2 * t
            for j, t in enumerate(prev2):
                row[j + 1] += t
            _CHEB_ROWS.append(tuple(row))
        return ChebV(k, _CHEB_ROWS[k])


@dataclass(frozen=True, init=False)
class Poly:
    """Dense univariate polynomial in z over exact rationals.

    coeffs[k] is the coefficient of z^k; trailing zeros are trimmed, and the
    zero polynomial has an empty coefficient tuple.

    >>> Poly([1, 0, -1]) * Poly([1, 1])
    Poly('1 + z - z^2 - z^3')
    """

    coeffs: tuple[Fraction, ...]

    def __init__(self, coeffs: Iterable[Rational] = ()):
        cs = [to_fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @staticmethod
    def zero() -> "Poly":
        return Poly()

    @staticmethod
    def one() -> "Poly":
        return Poly([1])

    @staticmethod
    def monomial(exponent: int, coeff: Rational = 1) -> "Poly":
        if exponent < 0:
            raise ValueError("exponent must be nonnegative")
        return Poly([0] * exponent + [coeff])

    @staticmethod
    def from_terms(terms: dict[int, Fraction]) -> "Poly":
        """Build from an exponent -> coefficient mapping."""
        if not terms:
            return Poly()
        out = [Fraction(0)] * (max(terms) + 1)
        for e, c in terms.items():
            out[e] += c
        return Poly(out)

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def coefficient(self, k: int) -> Fraction:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else Fraction(0)

    def __add__(self, other: "Poly") -> "Poly":
        return Poly(a + b for a, b in itertools.zip_longest(self.coeffs, other.coeffs, fillvalue=Fraction(0)))

    def __sub__(self, other: "Poly") -> "Poly":
        return Poly(a - b for a, b in itertools.zip_longest(self.coeffs, other.coeffs, fillvalue=Fraction(0)))

    def __neg__(self) -> "Poly":
        return Poly(-c for c in self.coeffs)

    def __mul__(self, other):
        if isinstance(other, Poly):
            if self.is_zero() or other.is_zero():
                return Poly()
            out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
            for i, a in enumerate(self.coeffs):
                if a == 0:
                    continue
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
            return Poly(out)
        return Poly(to_fraction(other) * c for c in self.coeffs)

    __rmul__ = __mul__

    def evaluate(self, x):
        """Horner evaluation; x may be Fraction, float, complex, mpmath..."""
        acc = 0 * x
        for c in reversed(self.coeffs):
            acc = acc * x
            if c.denominator == 1:
                acc = acc + c.numerator
            else:
                # Divide in x's arithmetic: mpmath types reject Fraction directly.
                acc = acc + c.numerator / (0 * x + c.denominator)
        return acc

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for e in range(len(self.coeffs)):
            c = self.coeffs[e]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if mag.denominator == 1:
                body = str(mag.numerator)
            else:
                body = f"({mag})"
            if e > 0:
                var = "z" if e == 1 else f"z^{e}"
                body = var if body == "1" else body + var
            parts.append((sign, body))
        first_sign, first_body = parts[0]
        text = ("-" if first_sign == "-" else "") + first_body
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self) -> str:
        return f"Poly('{self}')"


def series_inverse(d: Poly, order: int) -> tuple[Fraction, ...]:
    """First order+1 power-series coefficients of 1/d(z).

    Requires a nonzero constant term.  The result convolved with d gives
    exactly [1, 0, ..., 0].

    >>> series_inverse(Poly([1, -1]), 4)
    (Fraction(1, 1), Fraction(1, 1), Fraction(1, 1), Fraction(1, 1), Fraction(1, 1))
    """
    if order < 0:
        raise ValueError("order must be nonnegative")
    if d.is_zero() or d.coeffs[0] == 0:
        raise ValueError("non-invertible series")
    d0 = d.coeffs[0]
    inv = [Fraction(1) / d0]
    for n in range(1, order + 1):
        acc = Fraction(0)
        for k in range(1, min(n, d.degree) + 1):
            acc += d.coeffs[k] * inv[n - k]
        inv.append(-acc / d0)
    return tuple(inv)
