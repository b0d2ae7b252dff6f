"""Series expansions of the Appell-Lerch objects: phi, rho, mu, lambda, a_{j,p} and A(q).

Bilateral sums are accumulated over the rationals and converted to the target
ring at the end; conversion to the integers doubles as an integrality check.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

from qlerch.qproducts import EtaQuotient, eta_quotient
from qlerch.ring_series import (
    INTEGER,
    RATIONAL,
    Coefficient,
    Ring,
    Series,
    coefficients,
    div_binomial,
    mul,
    mul_binomial,
    shift,
    to_ring,
    truncate,
)

logger = logging.getLogger(__name__)


@dataclass
class CoeffTable:
    label: str
    ring: Ring
    values: list[Coefficient] = field(default_factory=list)

    @property
    def count(self) -> int:
        return len(self.values)

    def __getitem__(self, n: int) -> Coefficient:
        return self.values[n]


def coefficient_table(label: str, series: Series, count: int) -> CoeffTable:
    return CoeffTable(label=label, ring=series.ring, values=coefficients(series, 0, count))


def _advance(term: Series, exp: int, prec: int) -> Series:
    return truncate(shift(term, exp), prec)


@lru_cache(maxsize=32)
def phi_mock(prec: int, ring: Ring = INTEGER) -> Series:
    """sum_{n>=0} (-q;q)_{2n} q^(n+1) / (q;q^2)_{n+1}^2, i.e. sum a(n) q^n."""
    total = Series.zero(ring, prec)
    term = Series.monomial(ring, 1, 1, prec)
    term = div_binomial(div_binomial(term, 1, 1), 1, 1)
    n = 0
    while n + 1 < prec:
        total = total + term
        term = mul_binomial(mul_binomial(term, -1, 2 * n + 1), -1, 2 * n + 2)
        term = _advance(term, 1, prec)
        term = div_binomial(div_binomial(term, 1, 2 * n + 3), 1, 2 * n + 3)
        n += 1
    logger.debug("phi_mock_expanded:%s:%s", prec, ring)
    return total


@lru_cache(maxsize=16)
def rho(prec: int, ring: Ring = INTEGER) -> Series:
    total = Series.zero(ring, prec)
    term = div_binomial(Series.one(ring, prec), 1, 1)
    n = 0
    while n * (n + 1) // 2 < prec:
        total = total + term
        term = mul_binomial(term, -1, n + 1)
        term = _advance(term, n + 1, prec)
        term = div_binomial(term, 1, 2 * n + 3)
        n += 1
    return total


@lru_cache(maxsize=16)
def mu(prec: int, ring: Ring = INTEGER) -> Series:
    total = Series.zero(ring, prec)
    term = div_binomial(Series.monomial(ring, 1, 1, prec), -1, 1)
    n = 0
    while (n + 1) ** 2 < prec:
        total = total + term
        term = -mul_binomial(term, 1, 2 * n + 1)
        term = _advance(term, 2 * n + 3, prec)
        term = div_binomial(div_binomial(term, -1, 2 * n + 2), -1, 2 * n + 3)
        n += 1
    return total


@lru_cache(maxsize=16)
def lambda_fn(prec: int, ring: Ring = INTEGER) -> Series:
    total = Series.zero(ring, prec)
    term = Series.one(ring, prec)
    n = 0
    while n < prec:
        total = total + term
        term = -mul_binomial(term, 1, 2 * n + 1)
        term = _advance(term, 1, prec)
        term = div_binomial(term, -1, n + 1)
        n += 1
    return total


def _ajp_term(j: int, p: int, n: int, prec: int) -> tuple[int, Series]:
    """(-1)^n q^(pn(n+1)/2+jn+j) / (1 - q^(pn+j)) with every exponent non-negative."""
    sign = -1 if n % 2 else 1
    if n >= 0:
        exp = p * n * (n + 1) // 2 + j * n + j
        numerator = Series.monomial(RATIONAL, exp, sign, prec)
        return exp, div_binomial(numerator, 1, p * n + j)
    # 1/(1 - q^-d) = -q^d/(1 - q^d) with d = -(pn + j) > 0
    exp = p * n * (n - 1) // 2 + j * n
    numerator = Series.monomial(RATIONAL, exp, -sign, prec)
    return exp, div_binomial(numerator, 1, -(p * n + j))


def _bilateral(term_at: Callable[[int], tuple[int, Series]], prec: int) -> Series:
    # term valuations grow with |n| in both directions
    total = Series.zero(RATIONAL, prec)
    for direction in (1, -1):
        n = 0 if direction == 1 else -1
        while True:
            exp, term = term_at(n)
            if exp >= prec:
                break
            total = total + term
            n += direction
    return total


@lru_cache(maxsize=64)
def a_jp(j: int, p: int, prec: int, ring: Ring = INTEGER) -> Series:
    """sum a_{j,p}(n) q^n = (q^j, q^(p-j), q^p; q^p)^-1 * sum_n (-1)^n q^(pn(n+1)/2+jn+j)/(1-q^(pn+j))."""
    if p < 2 or not 1 <= j <= p - 1 or math.gcd(j, p) != 1:
        raise ValueError("ajp_requires_coprime_1_le_j_lt_p")
    inner = _bilateral(lambda n: _ajp_term(j, p, n, prec), prec)
    for start in (j, p - j, p):
        exp = start
        while exp < prec:
            inner = div_binomial(inner, 1, exp)
            exp += p
    return to_ring(inner, ring)


def A_term(n: int, prec: int) -> Series:
    """q^(5n(n+1)/2) / (1 + q^(5n)) as a power series; n = 0 gives 1/2."""
    if n == 0:
        return Series.monomial(RATIONAL, 0, RATIONAL.element(1) / 2, prec)
    if n > 0:
        return div_binomial(Series.monomial(RATIONAL, 5 * n * (n + 1) // 2, 1, prec), -1, 5 * n)
    m = -n
    # q^a/(1 + q^-5m) = q^(a+5m)/(1 + q^5m)
    return div_binomial(Series.monomial(RATIONAL, 5 * m * (m - 1) // 2 + 5 * m, 1, prec), -1, 5 * m)


@lru_cache(maxsize=16)
def A_series(prec: int, ring: Ring = RATIONAL) -> Series:
    """(E5/E10^2) * sum_n q^(5n(n+1)/2)/(1+q^(5n)); the n < 0 terms pair with n > 0."""
    inner = A_term(0, prec)
    m = 1
    while 5 * m * (m + 1) // 2 < prec:
        inner = inner + 2 * A_term(m, prec)
        m += 1
    prefix = eta_quotient(EtaQuotient.of([(5, 1), (10, -2)]), prec, RATIONAL)
    return to_ring(mul(prefix, inner), ring)
