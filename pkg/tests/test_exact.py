"""Tests for the exact arithmetic layer."""
import cmath
import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from slitpath.exact import Poly, binom, cheb_v, series_inverse, to_fraction

rationals = st.fractions(min_value=-4, max_value=4, max_denominator=12)
small_polys = st.lists(rationals, max_size=8).map(Poly)


def falling_factorial_binom(top: int, bottom: int) -> Fraction:
    prod = Fraction(1)
    for i in range(bottom):
        prod *= top - i
    return prod / math.factorial(bottom)


class TestBinom:
    def test_standard(self):
        assert binom(5, 3) == 10
        assert binom(7, 0) == 1
        assert binom(3, 5) == 0

    def test_negative_top_matches_falling_factorial(self):
        # Oracle: the literal falling-factorial product.
        for top in range(-12, 13):
            for bottom in range(0, 9):
                assert binom(top, bottom) == falling_factorial_binom(top, bottom), (top, bottom)
        assert binom(-2, 3) == -4

    def test_negative_bottom_rejected(self):
        with pytest.raises(ValueError):
            binom(3, -1)

    def test_pascal_identity(self):
        for top in range(-20, 21):
            for bottom in range(1, 21):
                assert binom(top, bottom) == binom(top - 1, bottom - 1) + binom(top - 1, bottom)

    def test_always_integral(self):
        for top in range(-15, 16):
            for bottom in range(0, 12):
                assert binom(top, bottom).denominator == 1


class TestChebV:
    def test_base_cases(self):
        assert cheb_v(0).coeffs == (1,)
        assert cheb_v(1).coeffs == (1,)

    def test_recurrence_values(self):
        assert cheb_v(2).coeffs == (2, 1)
        assert cheb_v(3).coeffs == (4, 3)
        assert cheb_v(4).coeffs == (8, 8, 1)
        assert cheb_v(5).coeffs == (16, 20, 5)

    def test_replayed_recurrence(self):
        # Oracle: replay V_{k+1} = 2y V_k + V_{k-1} on full coefficient lists
        # (index = exponent of y).
        dense = {0: [1], 1: [0, 1]}
        for k in range(2, 25):
            prev, prev2 = dense[k - 1], dense[k - 2]
            row = [0] * (k + 1)
            for e, c in enumerate(prev):
                row[e + 1] += 2 * c
            for e, c in enumerate(prev2):
                row[e] += c
            dense[k] = row
        for k in range(25):
            table = cheb_v(k)
            expect = [dense[k][k - 2 * j] for j in range(k // 2 + 1)]
            assert list(table.coeffs) == expect

    def test_structure(self):
        for k in range(1, 33):
            coeffs = cheb_v(k).coeffs
            assert len(coeffs) == k // 2 + 1
            assert coeffs[0] == 2 ** (k - 1)
            assert all(t > 0 for t in coeffs)

    def test_matches_chebyshev_at_imaginary_argument(self):
        # T_k(i y) = i^k V_k(y), checked in complex floating point.
        rng = random.Random(20240917)
        for k in range(33):
            table = cheb_v(k)
            for _ in range(100):
                y = Fraction(rng.randint(-400, 400), rng.randint(1, 100))
                if y == 0:
                    y = Fraction(1, 3)
                yf = float(y)
                t_val = cmath.cos(k * cmath.acos(1j * yf))
                v_val = (1j**k) * complex(table.evaluate(yf))
                assert abs(t_val - v_val) <= 1e-10 * max(1.0, abs(t_val)), (k, y)

    def test_negative_order_rejected(self):
        with pytest.raises(ValueError):
            cheb_v(-1)


class TestPoly:
    def test_construction_trims(self):
        assert Poly([1, 2, 0, 0]).coeffs == (1, 2)
        assert Poly([0, 0]).coeffs == ()
        assert Poly().is_zero()
        assert Poly([5]).degree == 0
        assert Poly().degree == -1

    def test_examples(self):
        one_plus = Poly([1, 1])
        one_minus = Poly([1, -1])
        assert one_plus * one_minus == Poly([1, 0, -1])
        assert Poly([1, 2]) * Poly([3, 1]) == Poly([3, 7, 2])
        assert Poly([1, 2]) * Poly() == Poly()

    def test_degree_additivity(self):
        p, q = Poly([1, 0, 2]), Poly([Fraction(1, 2), 3])
        assert (p * q).degree == p.degree + q.degree

    def test_scalar_and_accessors(self):
        p = 3 * Poly([1, 1])
        assert p == Poly([3, 3])
        assert p.coefficient(0) == 3
        assert p.coefficient(7) == 0

    def test_from_terms(self):
        assert Poly.from_terms({3: Fraction(2), 0: Fraction(1)}) == Poly([1, 0, 0, 2])
        assert Poly.from_terms({}) == Poly()

    def test_str(self):
        assert str(Poly([1, 0, -21])) == "1 - 21z^2"
        assert str(Poly([0, 1])) == "z"
        assert str(Poly([Fraction(-1, 2), 0, 1])) == "-(1/2) + z^2"
        assert str(Poly()) == "0"

    def test_evaluate(self):
        p = Poly([1, 0, Fraction(1, 2)])
        assert p.evaluate(Fraction(2)) == 3
        assert p.evaluate(2.0) == pytest.approx(3.0)
        from mpmath import mpf

        assert abs(p.evaluate(mpf("2")) - 3) < 1e-40

    @given(small_polys, small_polys, small_polys)
    @settings(deadline=None)
    def test_ring_axioms(self, p, q, r):
        assert (p + q) + r == p + (q + r)
        assert p + q == q + p
        assert (p * q) * r == p * (q * r)
        assert p * q == q * p
        assert p * (q + r) == p * q + p * r

    @given(small_polys)
    @settings(deadline=None)
    def test_additive_inverse(self, p):
        assert p + (-p) == Poly()
        assert p - p == Poly()


class TestSeriesInverse:
    def test_geometric(self):
        assert series_inverse(Poly([1, -1]), 4) == (1, 1, 1, 1, 1)

    def test_identity(self):
        assert series_inverse(Poly([1]), 2) == (1, 0, 0)

    def test_rejects_zero_constant_term(self):
        with pytest.raises(ValueError, match="non-invertible series"):
            series_inverse(Poly([0, 1]), 3)
        with pytest.raises(ValueError, match="non-invertible series"):
            series_inverse(Poly(), 3)

    def test_known_denominator_expansion(self):
        # 1/(1 - 21z^2 - 12z^3 + 135z^4 + 120z^5 - 246z^6 - 216z^7 + 45z^8),
        # whose shifted coefficients are a frozen golden sequence.
        d = Poly([1, 0, -21, -12, 135, 120, -246, -216, 45])
        inv = series_inverse(d, 12)
        assert inv == (1, 0, 21, 12, 306, 384, 3981, 7812, 50580, 130752, 649332, 1980432, 8487756)

    @given(
        st.fractions(min_value=-4, max_value=4, max_denominator=9).filter(lambda c: c != 0),
        st.lists(rationals, max_size=10),
        st.integers(min_value=0, max_value=40),
    )
    @settings(deadline=None, max_examples=60)
    def test_convolution_recovers_one(self, c0, rest, order):
        d = Poly([c0] + rest)
        inv = series_inverse(d, order)
        for k in range(order + 1):
            conv = sum(d.coefficient(j) * inv[k - j] for j in range(0, min(k, d.degree) + 1))
            assert conv == (1 if k == 0 else 0)


def test_to_fraction():
    assert to_fraction("3/4") == Fraction(3, 4)
    assert to_fraction(2) == 2
    assert to_fraction(Fraction(1, 3)) == Fraction(1, 3)
    with pytest.raises(TypeError):
        to_fraction(0.5)
