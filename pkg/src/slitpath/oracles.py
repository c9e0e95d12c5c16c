"""Independent ground-truth routes for the absorption generating function.

Nothing here reuses the closed-form coefficient engine; each oracle reaches
the same numbers by a different road, so agreement is evidence and
disagreement pinpoints a defect:

* exact transfer-matrix powers of the full (m+2) x (m+2) absorbing walk,
* depth-first enumeration of step sequences (exact, budget-capped),
* the characteristic polynomial det(I - zB) of the interior sub-matrix via
  the Faddeev-LeVerrier recurrence (exact),
* high-precision numeric evaluation of the pre-simplification root
  formulas: the characteristic cubic, the three-root absorption formula,
  the general-start boundary solve, the small-root reciprocal-power series,
  and the root-difference/derivative/discriminant identities.

Exact oracles use Fractions only.  Numeric oracles run on mpmath at a
configurable precision (default 50 digits): the absorbing walk mixes
magnitudes like b^(-m) ~ 1e12 with answers ~ 1e-11, which double precision
cannot survive.
"""
from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from mpmath import mp

from .exact import Poly
from .genfun import SlitSpec, Weights, denominator_term

DEFAULT_DPS = 50

ENUM_BUDGET_ENV = "SLITPATH_MAX_ENUM"
DEFAULT_ENUM_BUDGET = 30


# ---------------------------------------------------------------------------
# exact oracles
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TransitionMatrix:
    """One-step matrix of the absorbing walk on sites 0..m+1.

    Rows 0, m, m+1 are unit self-loops; interior row s carries a1 at column
    s-1, a2 at s+1, a3 at s+2.
    """

    m: int
    entries: tuple[tuple[Fraction, ...], ...]

    @property
    def size(self) -> int:
        return self.m + 2


def build_matrix(spec: SlitSpec, w: Weights) -> TransitionMatrix:
    m = spec.m
    size = m + 2
    rows = []
    for s in range(size):
        row = [Fraction(0)] * size
        if s == 0 or s >= m:
            row[s] = Fraction(1)
        else:
            row[s - 1] = w.a1
            row[s + 1] = w.a2
            row[s + 2] = w.a3
        rows.append(tuple(row))
    return TransitionMatrix(m=m, entries=tuple(rows))


def matrix_series(spec: SlitSpec, w: Weights, order: int) -> tuple[Fraction, ...]:
    """Absorption weights via powers of the transition matrix.

    c_n = a1 * (A^(n-1))[site m-1, site 1]: the walk must sit at site 1
    after n-1 steps and then step down.  Returned as a tuple indexed by n
    (entry 0 is 0), computed in exact rational arithmetic.
    """
    if order < 1:
        raise ValueError("order must be at least 1")
    matrix = build_matrix(spec, w)
    sparse_rows = [
        tuple((j, val) for j, val in enumerate(row) if val != 0)
        for row in matrix.entries
    ]
    size = matrix.size
    # v holds the relevant row of A^(n-1), starting from A^0 = I.
    v = [Fraction(0)] * size
    v[spec.start] = Fraction(1)
    out = [Fraction(0)] * (order + 1)
    for n in range(1, order + 1):
        out[n] = w.a1 * v[1]
        if n < order:
            nxt = [Fraction(0)] * size
            for i, vi in enumerate(v):
                if vi == 0:
                    continue
                for j, aij in sparse_rows[i]:
                    nxt[j] += vi * aij
            v = nxt
    return tuple(out)


def enumeration_budget() -> int:
    return int(os.environ.get(ENUM_BUDGET_ENV, str(DEFAULT_ENUM_BUDGET)))


def enumerate_paths(
    spec: SlitSpec, w: Weights, order: int, start: Optional[int] = None
) -> tuple[Fraction, ...]:
    """Absorption weights by depth-first enumeration of step sequences.

    Walks the tree of step choices {-1: a1, +1: a2, +2: a3} from the start
    site; a branch contributes its weight product at the step where it
    first lands exactly on 0, and dies on m or m+1.  Shared suffixes are
    cached so the traversal stays polynomial while remaining a pure
    recursion over steps (no matrix algebra).  The depth is capped by the
    SLITPATH_MAX_ENUM environment variable (default 30).
    """
    if order < 0:
        raise ValueError("order must be nonnegative")
    if order > enumeration_budget():
        raise ValueError("enumeration budget exceeded")
    m = spec.m
    if start is None:
        start = spec.start
    if not 1 <= start <= m - 1:
        raise ValueError("start must be an interior site")
    steps = ((-1, w.a1), (1, w.a2), (2, w.a3))
    memo: dict[tuple[int, int], tuple[Fraction, ...]] = {}

    def absorbed(site: int, left: int) -> tuple[Fraction, ...]:
        # weights[k] = weight first absorbed at 0 after exactly k+1 more steps
        if left == 0:
            return ()
        key = (site, left)
        cached = memo.get(key)
        if cached is not None:
            return cached
        acc = [Fraction(0)] * left
        for delta, weight in steps:
            if weight == 0:
                continue
            nxt = site + delta
            if nxt == 0:
                acc[0] += weight
            elif nxt >= m:
                continue
            else:
                for k, sub in enumerate(absorbed(nxt, left - 1)):
                    if sub:
                        acc[k + 1] += weight * sub
        result = tuple(acc)
        memo[key] = result
        return result

    return (Fraction(0),) + absorbed(start, order)


def interior_charpoly(spec: SlitSpec, w: Weights) -> Poly:
    """det(I - zB) for the interior sub-matrix B, by Faddeev-LeVerrier.

    B restricts the walk to sites 1..m-1 (absorbing rows and columns
    removed).  The recurrence M_1 = I, c_k = -tr(B M_k)/k,
    M_{k+1} = B M_k + c_k I produces the characteristic coefficients
    exactly; det(I - zB) = 1 + c_1 z + ... + c_{m-1} z^(m-1) is the same
    polynomial the coefficient engine builds term by term.
    """
    m = spec.m
    n = m - 1
    a1, a2, a3 = w.a1, w.a2, w.a3
    zero = Fraction(0)

    def b_mul(mat: list[list[Fraction]]) -> list[list[Fraction]]:
        # Row i of B @ mat: a1*mat[i-1] + a2*mat[i+1] + a3*mat[i+2] where defined.
        out = []
        for i in range(n):
            row = [zero] * n
            if i - 1 >= 0:
                prev = mat[i - 1]
                row = [a1 * x for x in prev]
            if i + 1 < n:
                nxt = mat[i + 1]
                row = [r + a2 * x for r, x in zip(row, nxt)]
            if i + 2 < n:
                nxt2 = mat[i + 2]
                row = [r + a3 * x for r, x in zip(row, nxt2)]
            out.append(row)
        return out

    M = [[Fraction(1) if i == j else zero for j in range(n)] for i in range(n)]
    coeffs = [Fraction(1)]
    for k in range(1, n + 1):
        N = b_mul(M)
        ck = -sum(N[i][i] for i in range(n)) / k
        coeffs.append(ck)
        if k < n:
            for i in range(n):
                N[i][i] += ck
            M = N
    return Poly(coeffs)


# ---------------------------------------------------------------------------
# numeric oracles (mpmath)
# ---------------------------------------------------------------------------

def _to_mp(x):
    """Convert Fraction/int/float/str to an mpmath float."""
    if isinstance(x, Fraction):
        return mp.mpf(x.numerator) / mp.mpf(x.denominator)
    return mp.mpf(x)


@dataclass(frozen=True)
class QuadRoots:
    """Roots of the auxiliary quadratic a3 x^2 + a2 x - 1/z = 0.

    r1 takes the + branch of the square root (the positive root for
    positive weights and z > 0), r2 the - branch.  r1*r2 = -1/(z*a3) and
    r1 + r2 = -a2/a3.
    """

    r1: object
    r2: object


@dataclass(frozen=True)
class CubicRoots:
    """Roots of the characteristic cubic at a sampled (z, q).

    b is the small root (the one vanishing like a1*z*q); a and c are the
    large ones, a being the root that continues the + branch of the
    auxiliary quadratic as q -> 0.
    """

    a: object
    b: object
    c: object

    def as_tuple(self):
        return (self.a, self.b, self.c)


def cubic_coefficients(z, q, w: Weights, dps: int = DEFAULT_DPS):
    """(b0, b1, b2, b3) of the characteristic cubic
    (a3/a1) x^3 + (a2/a1) x^2 - x/(z a1) + q."""
    with mp.workdps(dps):
        a1, a2, a3 = (_to_mp(v) for v in (w.a1, w.a2, w.a3))
        zv, qv = _to_mp(z), _to_mp(q)
        return (a3 / a1, a2 / a1, -1 / (zv * a1), qv)


def _poly_val(coeffs: Sequence, x):
    acc = mp.mpf(0)
    for c in coeffs:
        acc = acc * x + c
    return acc


def _poly_der(coeffs: Sequence, x):
    n = len(coeffs) - 1
    acc = mp.mpf(0)
    for i, c in enumerate(coeffs[:-1]):
        acc = acc * x + (n - i) * c
    return acc


def _polished_roots(coeffs: Sequence, dps: int):
    with mp.workdps(dps):
        try:
            roots = mp.polyroots(list(coeffs), maxsteps=200, extraprec=4 * dps)
        except mp.NoConvergence as exc:
            raise RuntimeError(f"root-finder non-convergence for {coeffs}: {exc}") from exc
        polished = []
        for r in roots:
            for _ in range(3):
                d = _poly_der(coeffs, r)
                if abs(d) == 0:
                    break
                r = r - _poly_val(coeffs, r) / d
            polished.append(r)
        return polished


def quad_roots(z, w: Weights, dps: int = DEFAULT_DPS) -> QuadRoots:
    with mp.workdps(dps):
        a1, a2, a3 = (_to_mp(v) for v in (w.a1, w.a2, w.a3))
        zv = _to_mp(z)
        if zv == 0:
            raise ValueError("z must be nonzero")
        disc = mp.sqrt(a2 * a2 + 4 * a3 / zv)
        return QuadRoots(r1=(-a2 + disc) / (2 * a3), r2=(-a2 - disc) / (2 * a3))


def cubic_roots(z, q, w: Weights, dps: int = DEFAULT_DPS) -> CubicRoots:
    """Solve the characteristic cubic and label the roots.

    The small root b is the one nearest a1*z*q; among the two large roots,
    a is the one nearest the + quadratic root r1 and c the one nearest r2.
    """
    coeffs = cubic_coefficients(z, q, w, dps=dps)
    roots = _polished_roots(coeffs, dps)
    with mp.workdps(dps):
        target = _to_mp(w.a1) * _to_mp(z) * _to_mp(q)
        b = min(roots, key=lambda r: abs(r - target))
        others = [r for r in roots if r is not b]
        quad = quad_roots(z, w, dps=dps)
        a = min(others, key=lambda r: abs(r - quad.r1))
        c = others[0] if a is others[1] else others[1]
        return CubicRoots(a=a, b=b, c=c)


def _require_distinct(roots, what: str = "ill-conditioned root configuration"):
    rs = list(roots)
    scale = max(mp.mpf(1), max(abs(r) for r in rs))
    for i in range(len(rs)):
        for j in range(i + 1, len(rs)):
            if abs(rs[i] - rs[j]) < mp.mpf("1e-8") * scale:
                raise ValueError(what)


def closed_form_numeric(z, q, spec: SlitSpec, w: Weights, dps: int = DEFAULT_DPS) -> float:
    """Three-root absorption value at a numeric (z, q).

    Evaluates (a3/(q a1)) * (a-b)(b-c)(c-a) / ((b-c)a^-m + (a-b)c^-m +
    (c-a)b^-m).  The overall sign is pinned so the value matches the
    combinatorial series (the root-difference product is antisymmetric, so
    orientation conventions can flip it; absorption weight is positive for
    positive weights).
    """
    m = spec.m
    roots = cubic_roots(z, q, w, dps=dps)
    with mp.workdps(dps):
        a, b, c = roots.a, roots.b, roots.c
        _require_distinct((a, b, c))
        numer = (a - b) * (b - c) * (c - a)
        denom = (b - c) * a ** (-m) + (a - b) * c ** (-m) + (c - a) * b ** (-m)
        a1, a3 = _to_mp(w.a1), _to_mp(w.a3)
        value = (a3 / (_to_mp(q) * a1)) * numer / denom
        if abs(value) > 0 and abs(mp.im(value)) > mp.mpf("1e-20") * abs(value):
            raise ValueError("ill-conditioned root configuration")
        return float(mp.re(value))


def general_start_numeric(z, q, s: int, spec: SlitSpec, w: Weights, dps: int = DEFAULT_DPS) -> float:
    """Absorption value for an arbitrary start site s in 0..m+1.

    Solves the boundary system x + y + u = 1, x a^m + y b^m + u c^m = 0,
    x a^(m+1) + y b^(m+1) + u c^(m+1) = 0 and evaluates
    x a^s + y b^s + u c^s.  At s = m-1 this coincides with
    ``closed_form_numeric``; s = 0 gives 1 and s = m or m+1 give 0.
    """
    m = spec.m
    if not 0 <= s <= m + 1:
        raise ValueError("start must lie in 0..m+1")
    roots = cubic_roots(z, q, w, dps=dps)
    with mp.workdps(dps):
        a, b, c = roots.a, roots.b, roots.c
        _require_distinct((a, b, c))
        system = mp.matrix(
            [
                [mp.mpf(1), mp.mpf(1), mp.mpf(1)],
                [a**m, b**m, c**m],
                [a ** (m + 1), b ** (m + 1), c ** (m + 1)],
            ]
        )
        try:
            coef = mp.lu_solve(system, mp.matrix([1, 0, 0]))
        except ZeroDivisionError as exc:
            raise ValueError("singular boundary system (degenerate roots)") from exc
        value = coef[0] * a**s + coef[1] * b**s + coef[2] * c**s
        return float(mp.re(value))


# ---------------------------------------------------------------------------
# identity and series checks
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ReductionReport:
    """Residuals of the root-difference/derivative/discriminant identities.

    For each root r of F(x) = b0 x^3 + b1 x^2 + b2 x + q:
      * derivative_residuals: relative gap between F'(r) and
        b0 * prod(r - other roots),
      * inverse_derivative_residuals: |dr/dq * F'(r) + 1| with dr/dq from
        central differences in q (the inverse-function derivative),
    plus the discriminant relation sqrt(D)/b0^2 = +/- (a-b)(b-c)(c-a),
    with the sign that holds recorded (it is instance-dependent).
    """

    roots: tuple[complex, complex, complex]
    derivative_residuals: tuple[float, float, float]
    inverse_derivative_residuals: tuple[float, float, float]
    discriminant_residual: float
    discriminant_sign: int
    derivative_tol: float = 1e-9
    inverse_tol: float = 1e-6

    @property
    def passed(self) -> bool:
        return (
            max(self.derivative_residuals) <= self.derivative_tol
            and max(self.inverse_derivative_residuals) <= self.inverse_tol
            and self.discriminant_residual <= self.derivative_tol
        )


def reduction_identity_check(
    cubic: Sequence, q, dps: int = DEFAULT_DPS, fd_scale: float = 1e-6
) -> ReductionReport:
    """Check the identities behind the closed-form simplification.

    ``cubic`` supplies (b0, b1, b2) of F(x) = b0 x^3 + b1 x^2 + b2 x + q.
    Raises if the roots are (numerically) repeated, since every identity
    divides by root differences.
    """
    b0, b1, b2 = (_to_mp(v) for v in cubic)
    qv = _to_mp(q)
    coeffs = (b0, b1, b2, qv)
    roots = _polished_roots(coeffs, dps)
    with mp.workdps(dps):
        scale = max(mp.mpf(1), max(abs(r) for r in roots))
        for i in range(3):
            for j in range(i + 1, 3):
                if abs(roots[i] - roots[j]) < mp.mpf("1e-8") * scale:
                    raise ValueError("discriminant vanishes")

        deriv_res = []
        for i, r in enumerate(roots):
            deriv = _poly_der(coeffs, r)
            prod = b0
            for j, other in enumerate(roots):
                if j != i:
                    prod *= r - other
            deriv_res.append(float(abs(deriv - prod) / max(abs(deriv), abs(prod))))

        # dr/dq by central differences; dF/dq = 1, so dr/dq * F'(r) must be -1.
        h = _to_mp(fd_scale) * max(mp.mpf(1), abs(qv))
        up = _polished_roots((b0, b1, b2, qv + h), dps)
        dn = _polished_roots((b0, b1, b2, qv - h), dps)
        inverse_res = []
        for r in roots:
            r_up = min(up, key=lambda t: abs(t - r))
            r_dn = min(dn, key=lambda t: abs(t - r))
            drdq = (r_up - r_dn) / (2 * h)
            inverse_res.append(float(abs(drdq * _poly_der(coeffs, r) + 1)))

        disc = (
            18 * b0 * b1 * b2 * qv
            - 4 * b1**3 * qv
            + b1**2 * b2**2
            - 4 * b0 * b2**3
            - 27 * b0**2 * qv**2
        )
        r1, r2, r3 = roots
        prod = (r1 - r2) * (r2 - r3) * (r3 - r1)
        sqrt_disc = mp.sqrt(disc) / b0**2
        if abs(sqrt_disc - prod) <= abs(sqrt_disc + prod):
            sign, resid = 1, abs(sqrt_disc - prod)
        else:
            sign, resid = -1, abs(sqrt_disc + prod)
        disc_res = float(resid / abs(prod))

        return ReductionReport(
            roots=tuple(complex(r) for r in roots),
            derivative_residuals=tuple(deriv_res),
            inverse_derivative_residuals=tuple(inverse_res),
            discriminant_residual=disc_res,
            discriminant_sign=sign,
        )


@dataclass(frozen=True)
class RootSeriesReport:
    """Convergence evidence for the root power-series expansions.

    residuals[t-1] is the relative error of the t-term truncation of the
    small-root reciprocal power b^(1-m) against its numeric value;
    prefactor_drift measures |b^(1-m) (a1 z q)^(m-1) - 1| at tiny q; the
    large_root_orders are fitted q-exponents of the first-order large-root
    expansions' residuals (about 2 when the expansions are correct through
    order q).
    """

    residuals: tuple[float, ...]
    strictly_decreasing: bool
    prefactor_drift: float
    large_root_orders: tuple[float, float]
    drift_tol: float = 1e-5
    order_floor: float = 1.5

    @property
    def passed(self) -> bool:
        return (
            self.strictly_decreasing
            and self.prefactor_drift <= self.drift_tol
            and all(o >= self.order_floor for o in self.large_root_orders)
        )


def root_series_check(
    spec: SlitSpec, w: Weights, z, terms: int, q=1, dps: int = DEFAULT_DPS
) -> RootSeriesReport:
    """Compare exact series truncations against numeric root powers.

    The small-root series b^(1-m) = (a1 z q)^(1-m) (1 + (1-m) sum_n q^n
    D_n(z) / (n-m+1)) reuses the exact coefficient engine's D_n terms.  The
    large-root first-order expansions in q are

        a^(1-m) ~ r1^(1-m) - (1-m)(a1/a3) r1^(-m-1) q / (r1 - r2)

    and the mirror image for c (swap r1 and r2).  The (-a1/a3) factor is
    what implicit differentiation of the cubic actually produces; with it
    the residual is O(q^2), which the fitted orders certify.
    """
    m = spec.m
    # The weight 1/(n-m+1) has a pole at n = m-1 (where the contribution
    # polynomial is identically zero), so truncations stop at m-2.
    if not 1 <= terms <= m - 2:
        raise ValueError("terms must lie in 1..m-2")
    with mp.workdps(dps):
        zv, qv = _to_mp(z), _to_mp(q)
        a1, a3 = _to_mp(w.a1), _to_mp(w.a3)
        target = cubic_roots(z, q, w, dps=dps).b ** (1 - m)
        prefactor = (a1 * zv * qv) ** (1 - m)
        residuals = []
        acc = mp.mpf(1)
        for n in range(1, terms + 1):
            dn = denominator_term(n, spec, w).evaluate(zv)
            acc = acc + (1 - m) * qv**n * dn / (n - m + 1)
            residuals.append(float(abs(prefactor * acc - target) / abs(target)))
        decreasing = all(residuals[i + 1] < residuals[i] for i in range(len(residuals) - 1))

        q_tiny = mp.mpf("1e-6")
        b_tiny = cubic_roots(z, q_tiny, w, dps=dps).b
        drift = float(abs(b_tiny ** (1 - m) * (a1 * zv * q_tiny) ** (m - 1) - 1))

        quad = quad_roots(z, w, dps=dps)
        orders = []
        for root_name, r_main, r_other in (("a", quad.r1, quad.r2), ("c", quad.r2, quad.r1)):
            res = []
            for qs in (mp.mpf("1e-2"), mp.mpf("1e-3")):
                rts = cubic_roots(z, qs, w, dps=dps)
                numeric = getattr(rts, root_name) ** (1 - m)
                approx = r_main ** (1 - m) - (1 - m) * (a1 / a3) * r_main ** (-m - 1) * qs / (
                    r_main - r_other
                )
                res.append(abs(numeric - approx))
            if res[1] == 0:
                orders.append(float("inf"))
            else:
                orders.append(float(mp.log(res[0] / res[1]) / mp.log(10)))
        return RootSeriesReport(
            residuals=tuple(residuals),
            strictly_decreasing=decreasing,
            prefactor_drift=drift,
            large_root_orders=tuple(orders),
        )
