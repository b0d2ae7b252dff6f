from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

from qlerch.ring_series import INTEGER, Ring, Series, div_binomial, mul_binomial


@dataclass(frozen=True)
class Monomial:
    """sign * q^exp."""

    sign: int
    exp: int

    def __post_init__(self) -> None:
        if self.sign not in (1, -1):
            raise ValueError("monomial_sign_must_be_unit")
        if self.exp < 0:
            raise ValueError("monomial_exponent_must_be_non_negative")

    def __str__(self) -> str:
        prefix = "-" if self.sign < 0 else ""
        if self.exp == 0:
            return f"{prefix}1"
        if self.exp == 1:
            return f"{prefix}q"
        return f"{prefix}q^{self.exp}"

    def negate(self) -> "Monomial":
        return Monomial(-self.sign, self.exp)

    def times(self, other: "Monomial") -> "Monomial":
        return Monomial(self.sign * other.sign, self.exp + other.exp)


@dataclass(frozen=True)
class EtaQuotient:
    factors: tuple[tuple[int, int], ...]

    @classmethod
    def of(cls, pairs: Iterable[tuple[int, int]]) -> "EtaQuotient":
        merged: dict[int, int] = {}
        for dilation, exponent in pairs:
            if dilation < 1:
                raise ValueError("eta_dilation_must_be_positive")
            merged[dilation] = merged.get(dilation, 0) + exponent
        return cls(tuple(sorted((j, d) for j, d in merged.items() if d != 0)))

    def __str__(self) -> str:
        if not self.factors:
            return "1"
        return " ".join(f"E{j}^{d}" if d != 1 else f"E{j}" for j, d in self.factors)


def pochhammer_finite(a: Monomial, base: int, n: int, prec: int, ring: Ring = INTEGER) -> Series:
    if base < 1:
        raise ValueError("pochhammer_base_must_be_positive")
    if n < 0:
        raise ValueError("pochhammer_length_must_be_non_negative")
    result = Series.one(ring, prec)
    for k in range(n):
        exp = a.exp + k * base
        if exp >= prec and exp > 0:
            break
        result = mul_binomial(result, a.sign, exp)
    return result


def _apply_factors(series: Series, sign: int, start: int, base: int, power: int) -> Series:
    """Multiply series by prod_{k>=0} (1 - sign*q^(start+k*base))^power."""
    exp = start
    while exp < series.prec:
        for _ in range(abs(power)):
            if power > 0:
                series = mul_binomial(series, sign, exp)
            else:
                series = div_binomial(series, sign, exp)
        exp += base
    return series


@lru_cache(maxsize=512)
def pochhammer_inf(a: Monomial, base: int, prec: int, ring: Ring = INTEGER, power: int = 1) -> Series:
    if a.exp < 1:
        raise ValueError("infinite_product_needs_positive_exponent")
    if base < 1:
        raise ValueError("pochhammer_base_must_be_positive")
    return _apply_factors(Series.one(ring, prec), a.sign, a.exp, base, power)


@lru_cache(maxsize=512)
def euler(j: int, prec: int, ring: Ring = INTEGER) -> Series:
    if j < 1:
        raise ValueError("eta_dilation_must_be_positive")
    return pochhammer_inf(Monomial(1, j), j, prec, ring)


@lru_cache(maxsize=512)
def eta_quotient(eq: EtaQuotient, prec: int, ring: Ring = INTEGER) -> Series:
    result = Series.one(ring, prec)
    for dilation, exponent in eq.factors:
        result = _apply_factors(result, 1, dilation, dilation, exponent)
    return result


@lru_cache(maxsize=64)
def rr_T(prec: int, ring: Ring = INTEGER) -> Series:
    """(q^2;q^5)(q^3;q^5) / ((q;q^5)(q^4;q^5)), i.e. q^(1/5) over the Rogers-Ramanujan fraction."""
    series = Series.one(ring, prec)
    series = _apply_factors(series, 1, 2, 5, 1)
    series = _apply_factors(series, 1, 3, 5, 1)
    series = _apply_factors(series, 1, 1, 5, -1)
    return _apply_factors(series, 1, 4, 5, -1)


@lru_cache(maxsize=64)
def rr_K(prec: int, ring: Ring = INTEGER) -> Series:
    return eta_quotient(EtaQuotient.of([(2, 1), (5, 5), (1, -1), (10, -5)]), prec, ring)
