"""Ramanujan's theta function f(a, b) and its classical specializations."""

from __future__ import annotations

from collections import defaultdict
from functools import lru_cache
from typing import Literal

from qlerch.qproducts import EtaQuotient, Monomial, eta_quotient, pochhammer_inf
from qlerch.ring_series import (
    INTEGER,
    Ring,
    Series,
    eq_to_order,
    mul,
    mul_binomial,
    mul_sparse,
    to_ring,
)

ThetaForm = Literal["sum", "product", "pochhammer"]


def _theta_term(a: Monomial, b: Monomial, k: int) -> tuple[int, int]:
    upper = k * (k + 1) // 2
    lower = k * (k - 1) // 2
    sign = (a.sign ** (upper % 2)) * (b.sign ** (lower % 2))
    return a.exp * upper + b.exp * lower, sign


@lru_cache(maxsize=512)
def f_sum(a: Monomial, b: Monomial, prec: int, ring: Ring = INTEGER) -> Series:
    if a.exp + b.exp < 1:
        raise ValueError("theta_requires_positive_total_exponent")
    terms: defaultdict[int, int] = defaultdict(int)
    for direction in (1, -1):
        k = 0 if direction == 1 else -1
        while True:
            exp, sign = _theta_term(a, b, k)
            if exp >= prec:
                break
            terms[exp] += sign
            k += direction
    return to_ring(Series.polynomial(INTEGER, terms, prec), ring)


@lru_cache(maxsize=512)
def f_prod(a: Monomial, b: Monomial, prec: int, ring: Ring = INTEGER) -> Series:
    if a.exp < 1 or b.exp < 1:
        raise ValueError("unsupported_zero_exponent_factor")
    ab = a.times(b)
    series = Series.one(INTEGER, prec)
    k = 0
    while a.exp + k * ab.exp < prec or b.exp + k * ab.exp < prec:
        step = ab.sign**k
        series = mul_binomial(series, -a.sign * step, a.exp + k * ab.exp)
        series = mul_binomial(series, -b.sign * step, b.exp + k * ab.exp)
        if k >= 1:
            series = mul_binomial(series, step, k * ab.exp)
        k += 1
    while k * ab.exp < prec:
        series = mul_binomial(series, ab.sign**k, k * ab.exp)
        k += 1
    return to_ring(series, ring)


def phi(prec: int, ring: Ring = INTEGER, form: ThetaForm = "sum") -> Series:
    """phi(q) = f(q, q) = sum q^(j^2)."""
    if form == "sum":
        return f_sum(Monomial(1, 1), Monomial(1, 1), prec, ring)
    if form == "product":
        return eta_quotient(EtaQuotient.of([(2, 5), (1, -2), (4, -2)]), prec, ring)
    return mul(
        pochhammer_inf(Monomial(-1, 1), 2, prec, ring, power=2),
        pochhammer_inf(Monomial(1, 2), 2, prec, ring),
    )


def psi(prec: int, ring: Ring = INTEGER, form: ThetaForm = "sum") -> Series:
    """psi(q) = f(q, q^3) = sum_{j>=0} q^(j(j+1)/2)."""
    if form == "sum":
        return f_sum(Monomial(1, 1), Monomial(1, 3), prec, ring)
    if form == "product":
        return eta_quotient(EtaQuotient.of([(2, 2), (1, -1)]), prec, ring)
    return mul(
        pochhammer_inf(Monomial(1, 2), 2, prec, ring),
        pochhammer_inf(Monomial(1, 1), 2, prec, ring, power=-1),
    )


@lru_cache(maxsize=64)
def jacobi_cube(prec: int, ring: Ring = INTEGER) -> Series:
    terms: dict[int, int] = {}
    k = 0
    while k * (k + 1) // 2 < prec:
        terms[k * (k + 1) // 2] = (-1) ** k * (2 * k + 1)
        k += 1
    return to_ring(Series.polynomial(INTEGER, terms, prec), ring)


@lru_cache(maxsize=64)
def cube_analog(prec: int, ring: Ring = INTEGER) -> Series:
    terms: defaultdict[int, int] = defaultdict(int)
    for direction in (1, -1):
        n = 0 if direction == 1 else -1
        while 3 * n * n + 2 * n < prec:
            terms[3 * n * n + 2 * n] += 3 * n + 1
            n += direction
    return to_ring(Series.polynomial(INTEGER, terms, prec), ring)


def f_laurent(x: tuple[int, int], y: tuple[int, int], prec: int, ring: Ring = INTEGER) -> Series:
    """f(x, y) for (sign, exp) arguments where one exponent may be negative.

    Uses f(a, b) = a^(n(n+1)/2) b^(n(n-1)/2) f(a (ab)^n, b (ab)^-n) with the n
    that makes both inner exponents non-negative; the result may be Laurent.
    """
    (sx, ex), (sy, ey) = x, y
    total = ex + ey
    if total < 1:
        raise ValueError("theta_requires_positive_total_exponent")
    if ex >= 0 and ey >= 0:
        return f_sum(Monomial(sx, ex), Monomial(sy, ey), prec, ring)
    n = -(ex // total)
    upper, lower = n * (n + 1) // 2, n * (n - 1) // 2
    lead = ex * upper + ey * lower
    sign = sx ** (upper % 2) * sy ** (lower % 2)
    twist = (sx * sy) ** (n % 2)
    inner = f_sum(Monomial(sx * twist, ex + n * total), Monomial(sy * twist, ey - n * total), prec - lead, ring)
    return mul_sparse(inner, {lead: sign})


def lemma21_sides(
    a: Monomial, b: Monomial, c: Monomial, d: Monomial, prec: int
) -> tuple[tuple[Series, Series], tuple[Series, Series]]:
    """Both sides of f(a,b)f(c,d) +- f(-a,-b)f(-c,-d) for the ab = cd splitting.

    b/c and b/d may carry negative exponents; those factors are Laurent series.
    """
    if a.exp + b.exp != c.exp + d.exp or a.sign * b.sign != c.sign * d.sign:
        raise ValueError("lemma_requires_ab_equals_cd")
    direct = mul(f_sum(a, b, prec), f_sum(c, d, prec))
    negated = mul(f_sum(a.negate(), b.negate(), prec), f_sum(c.negate(), d.negate(), prec))
    plus_rhs = mul(f_sum(a.times(c), b.times(d), prec), f_sum(a.times(d), b.times(c), prec))
    acd = a.times(c).times(d)
    b_over_c = (b.sign * c.sign, b.exp - c.exp)
    b_over_d = (b.sign * d.sign, b.exp - d.exp)
    c_side = acd.times(c)
    d_side = acd.times(d)
    width = prec
    while True:
        left = f_laurent(b_over_c, (c_side.sign, c_side.exp), width)
        right = f_laurent(b_over_d, (d_side.sign, d_side.exp), width)
        minus_rhs = mul_sparse(mul(left, right), {a.exp: 2 * a.sign})
        if minus_rhs.prec >= prec:
            break
        width += prec - minus_rhs.prec
    return (
        (direct + negated, mul_sparse(plus_rhs, {0: 2})),
        (direct - negated, minus_rhs),
    )


def lemma21_check(a: Monomial, b: Monomial, c: Monomial, d: Monomial, prec: int) -> bool:
    (sum_lhs, sum_rhs), (diff_lhs, diff_rhs) = lemma21_sides(a, b, c, d, prec)
    return eq_to_order(sum_lhs, sum_rhs, prec) and eq_to_order(diff_lhs, diff_rhs, prec)
