"""Absorption generating function for +2/+1/-1 walks between two barriers.

A particle walks on the integer sites 0..m+1, taking steps of -1 (weight
a1), +1 (weight a2), or +2 (weight a3).  Sites 0, m, and m+1 absorb.
Starting from site m-1, the generating function

    f(z) = sum_n c_n z^n

collects in c_n the total weight of walks first absorbed at 0 at exactly
step n.  This module computes f exactly as the rational function

    f(z) = z^(m-1) a1^(m-1) / D(z)

where the denominator D has degree at most m-1, constant term 1, and is
assembled from min_terms(m) closed-form contributions D_n(z), one per
depth n (``denominator_term``).  Each D_n starts from a trigonometric
double sum; routing the cosine terms through the V_k tables of
:mod:`slitpath.exact` cancels every imaginary unit and half-integer power,
leaving exact rational coefficients.

When the +1 step is absent (a2 = 0) the whole machinery collapses to one
binomial sum per power of z^3 (``genfun_a2_zero``); the two code paths
agree coefficient-for-coefficient.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exact import Poly, binom, cheb_v, series_inverse, to_fraction


@dataclass(frozen=True)
class Weights:
    """Step weights: a1 backward 1, a2 forward 1, a3 forward 2.

    Arbitrary positive rationals (a2 may be zero); they need not sum to 1,
    so both path counts and probabilities are covered.
    """

    a1: Fraction
    a2: Fraction
    a3: Fraction

    def __post_init__(self):
        for name in ("a1", "a2", "a3"):
            object.__setattr__(self, name, to_fraction(getattr(self, name)))
        if self.a1 <= 0:
            raise ValueError("a1 must be positive")
        if self.a3 <= 0:
            raise ValueError("a3 must be positive")
        if self.a2 < 0:
            raise ValueError("a2 must be nonnegative")

    def __str__(self) -> str:
        return f"(a1={self.a1}, a2={self.a2}, a3={self.a3})"


@dataclass(frozen=True)
class SlitSpec:
    """Barrier layout: absorbing sites 0, m, m+1; interior 1..m-1.

    The closed form fixes the start at site m-1 (the deepest interior site
    next to the right barrier).  m >= 2 keeps the start interior.
    """

    m: int

    def __post_init__(self):
        if not isinstance(self.m, int) or self.m < 2:
            raise ValueError("m must be an integer >= 2")

    @property
    def start(self) -> int:
        return self.m - 1

    @property
    def absorbing(self) -> tuple[int, int, int]:
        return (0, self.m, self.m + 1)


@dataclass(frozen=True)
class GenFun:
    """The rational generating function plus a truncated expansion.

    series[n] is the coefficient of z^n for n = 0..order; indices below
    numerator_shift = m-1 are zero and series[m-1] = a1^(m-1).
    """

    numerator_shift: int
    numerator_scale: Fraction
    denominator: Poly
    series: tuple[Fraction, ...]

    @property
    def order(self) -> int:
        return len(self.series) - 1

    def coefficient(self, n: int) -> Fraction:
        if not 0 <= n <= self.order:
            raise IndexError(f"series computed only through order {self.order}")
        return self.series[n]

    def series_value(self, z):
        """Numeric value of the truncated series at z (float/mpmath/...)."""
        acc = 0 * z
        for n in range(self.order, -1, -1):
            c = self.series[n]
            acc = acc * z
            if c.denominator == 1:
                acc = acc + c.numerator
            else:
                acc = acc + c.numerator / (0 * z + c.denominator)
        return acc


def min_terms(m: int) -> int:
    """Number of denominator contributions needed: floor(2(m-1)/3).

    This is exactly how many D_n summands carry weight at degrees <= m-1;
    the next one is inert there (see the conjecture sweep in the harness).

    >>> min_terms(9)
    5
    >>> min_terms(2)
    0
    """
    if m < 2:
        raise ValueError("m must be an integer >= 2")
    return (2 * (m - 1)) // 3


def denominator_term(n: int, spec: SlitSpec, w: Weights) -> Poly:
    """The depth-n contribution D_n(z) to the denominator.

    D_n is assembled from a head term (even n only) plus a double sum over
    u and the V_(n-2u) coefficient tables; by construction every exponent
    of z is an integer in [ceil(3n/2), 2n] and every coefficient is an
    exact rational.  Valid for 1 <= n <= m-1 (the regime where the binomial
    upper index m-1-n stays nonnegative).
    """
    m = spec.m
    if not 1 <= n <= m - 1:
        raise ValueError("term index out of range")
    a1, a2, a3 = w.a1, w.a2, w.a3
    terms: dict[int, Fraction] = {}
    if n % 2 == 0:
        # cos(n pi / 2) head: vanishes for odd n, alternates sign for even n.
        head = (-1) ** (n // 2) * binom(m - 1 - n, n // 2) ** 2 * a1**n * a3 ** (n // 2)
        if head:
            e = 3 * n // 2
            terms[e] = terms.get(e, Fraction(0)) + head
    half_a2 = a2 / 2
    for u in range((n - 1) // 2 + 1):
        k = n - 2 * u
        base = 2 * (-1) ** (n + u) * binom(m - 1 - n, u) * binom(m - 1 - n, n - u) * a1**n
        if base == 0:
            continue
        for j, t in enumerate(cheb_v(k).coeffs):
            c = base * t * half_a2 ** (k - 2 * j) * a3 ** (u + j)
            if c == 0:
                continue
            e = 2 * n - u - j
            terms[e] = terms.get(e, Fraction(0)) + c
    return Poly.from_terms(terms)


def denominator(spec: SlitSpec, w: Weights) -> Poly:
    """Full denominator D(z) = 1 + sum of D_n for n = 1..min_terms(m).

    The result has constant term 1 and degree at most m-1; the degree bound
    is asserted rather than enforced by truncation.
    """
    acc = Poly.one()
    for n in range(1, min_terms(spec.m) + 1):
        acc = acc + denominator_term(n, spec, w)
    assert acc.degree <= spec.m - 1, f"denominator degree {acc.degree} exceeds m-1 = {spec.m - 1}"
    assert acc.coefficient(0) == 1
    return acc


def _assemble(spec: SlitSpec, w: Weights, order: int, den: Poly) -> GenFun:
    m = spec.m
    if order < m - 1:
        raise ValueError("order must be at least m-1")
    scale = w.a1 ** (m - 1)
    inv = series_inverse(den, order - (m - 1))
    series = (Fraction(0),) * (m - 1) + tuple(scale * c for c in inv)
    assert series[m - 1] == scale
    return GenFun(numerator_shift=m - 1, numerator_scale=scale, denominator=den, series=series)


def genfun(spec: SlitSpec, w: Weights, order: int) -> GenFun:
    """Exact absorption generating function expanded through z^order.

    >>> g = genfun(SlitSpec(3), Weights(1, 1, 1), 6)
    >>> [int(c) for c in g.series]
    [0, 0, 1, 0, 1, 0, 1]
    """
    return _assemble(spec, w, order, denominator(spec, w))


def a2_zero_denominator(spec: SlitSpec, w: Weights) -> Poly:
    """Denominator for the no-(+1)-step walk: 1 + sum binom(3n-m, n) (a1^2 a3)^n z^(3n).

    The sum runs over n >= 1 while 3n - m < 0; past that the generalized
    binomial would inject spurious terms (and at 3n = m it vanishes anyway).
    """
    m = spec.m
    acc: dict[int, Fraction] = {0: Fraction(1)}
    n = 1
    while 3 * n - m < 0:
        c = binom(3 * n - m, n) * (w.a1**2 * w.a3) ** n
        if c:
            acc[3 * n] = c
        n += 1
    den = Poly.from_terms(acc)
    assert den.degree <= m - 1
    return den


def genfun_a2_zero(spec: SlitSpec, w: Weights, order: int) -> GenFun:
    """Specialized generating function for a2 = 0.

    Matches ``genfun`` coefficient-for-coefficient on the same inputs, via
    a single binomial sum instead of the V_k double sum.
    """
    if w.a2 != 0:
        raise ValueError("special case requires a2 = 0")
    return _assemble(spec, w, order, a2_zero_denominator(spec, w))
