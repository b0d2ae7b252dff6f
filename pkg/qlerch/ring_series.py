"""Truncated Laurent series over a pluggable coefficient ring.

A ``Series`` stores a dense block of coefficients for the exponents
``valuation .. prec - 1``; coefficients at or above ``prec`` are unknown and
never stored. Every operation propagates precision pessimistically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Literal, Mapping, Sequence

import numpy as np

RingKind = Literal["int", "rat", "mod"]
Coefficient = int | Fraction

WORD_MODULUS_LIMIT = 2**31
SPARSE_TERMS = 3
_INT64_SAFE = 2**63 - 1


class PrecisionError(ValueError):
    pass


@dataclass(frozen=True)
class Ring:
    kind: RingKind
    modulus: int | None = None

    def __post_init__(self) -> None:
        if self.kind == "mod":
            if self.modulus is None or self.modulus < 2:
                raise ValueError("modulus_must_be_at_least_2")
        elif self.kind in ("int", "rat"):
            if self.modulus is not None:
                raise ValueError("modulus_only_allowed_for_modular_ring")
        else:
            raise ValueError("unknown_ring_kind")

    @property
    def word(self) -> bool:
        return self.kind == "mod" and self.modulus is not None and self.modulus < WORD_MODULUS_LIMIT

    @property
    def dtype(self) -> type | np.dtype:
        return np.dtype(np.int64) if self.word else object

    @property
    def descriptor(self) -> str:
        if self.kind == "mod":
            return f"mod:{self.modulus}"
        return self.kind

    def __str__(self) -> str:
        return self.descriptor

    def element(self, value: Coefficient | np.integer) -> Coefficient:
        if isinstance(value, np.integer):
            value = int(value)
        if self.kind == "rat":
            return Fraction(value)
        if isinstance(value, Fraction):
            if value.denominator == 1:
                value = value.numerator
            elif self.kind == "int":
                raise ValueError("non_integral_coefficient")
            else:
                assert self.modulus is not None
                if math.gcd(value.denominator, self.modulus) != 1:
                    raise ValueError("denominator_not_invertible")
                return value.numerator * pow(value.denominator, -1, self.modulus) % self.modulus
        if self.kind == "mod":
            assert self.modulus is not None
            return int(value) % self.modulus
        return int(value)

    def is_unit(self, value: Coefficient) -> bool:
        if self.kind == "int":
            return value in (1, -1)
        if self.kind == "rat":
            return value != 0
        assert self.modulus is not None
        return math.gcd(int(value), self.modulus) == 1

    def inverse(self, value: Coefficient) -> Coefficient:
        if not self.is_unit(value):
            raise ValueError("non_unit_leading_coefficient")
        if self.kind == "int":
            return int(value)
        if self.kind == "rat":
            return 1 / Fraction(value)
        assert self.modulus is not None
        return pow(int(value), -1, self.modulus)


INTEGER = Ring("int")
RATIONAL = Ring("rat")


def modular(modulus: int) -> Ring:
    return Ring("mod", modulus)


def parse_ring(text: str) -> Ring:
    value = text.strip().lower()
    if value in ("int", "integer"):
        return INTEGER
    if value in ("rat", "rational"):
        return RATIONAL
    if value.startswith("mod:"):
        try:
            modulus = int(value[4:])
        except ValueError as exc:
            raise ValueError(f"invalid_ring:{text}") from exc
        return modular(modulus)
    raise ValueError(f"invalid_ring:{text}")


def _zeros(ring: Ring, length: int) -> np.ndarray:
    if ring.word:
        return np.zeros(length, dtype=np.int64)
    if ring.kind == "rat":
        return np.array([Fraction(0)] * length, dtype=object)
    return np.array([0] * length, dtype=object)


def _reduce(ring: Ring, values: np.ndarray) -> np.ndarray:
    if ring.kind == "mod":
        return values % ring.modulus
    return values


def _coerce(ring: Ring, values: Iterable[Coefficient]) -> np.ndarray:
    items = [ring.element(value) for value in values]
    if ring.word:
        return np.array(items, dtype=np.int64)
    array = np.empty(len(items), dtype=object)
    array[:] = items
    return array


def _freeze(values: np.ndarray) -> np.ndarray:
    values.flags.writeable = False
    return values


@dataclass(frozen=True, eq=False)
class Series:
    ring: Ring
    valuation: int
    coeffs: np.ndarray
    prec: int

    @classmethod
    def build(
        cls,
        ring: Ring,
        valuation: int,
        values: np.ndarray | Sequence[Coefficient],
        prec: int,
    ) -> "Series":
        # only int64 input is trusted to already hold ring elements
        if ring.word and isinstance(values, np.ndarray) and values.dtype == np.int64:
            array = _reduce(ring, values)
        else:
            array = _coerce(ring, values)
        length = max(prec - valuation, 0)
        if len(array) > length:
            array = array[:length]
        elif len(array) < length:
            padded = _zeros(ring, length)
            padded[: len(array)] = array
            array = padded
        nonzero = np.flatnonzero(array != 0)
        if len(nonzero) == 0:
            return cls.zero(ring, prec)
        start = int(nonzero[0])
        return cls(ring, valuation + start, _freeze(np.array(array[start:], dtype=ring.dtype)), prec)

    @classmethod
    def zero(cls, ring: Ring, prec: int) -> "Series":
        return cls(ring, prec, _freeze(_zeros(ring, 0)), prec)

    @classmethod
    def one(cls, ring: Ring, prec: int) -> "Series":
        return cls.monomial(ring, 0, 1, prec)

    @classmethod
    def monomial(cls, ring: Ring, exp: int, coeff: Coefficient, prec: int) -> "Series":
        if exp >= prec:
            return cls.zero(ring, prec)
        return cls.build(ring, exp, [coeff], prec)

    @classmethod
    def polynomial(cls, ring: Ring, terms: Mapping[int, Coefficient], prec: int) -> "Series":
        kept = {exp: value for exp, value in terms.items() if exp < prec}
        if not kept:
            return cls.zero(ring, prec)
        low = min(kept)
        values: list[Coefficient] = [0] * (prec - low)
        for exp, value in kept.items():
            values[exp - low] += value
        return cls.build(ring, low, values, prec)

    @property
    def is_zero(self) -> bool:
        return len(self.coeffs) == 0

    def __len__(self) -> int:
        return len(self.coeffs)

    def __repr__(self) -> str:
        head = ", ".join(str(value) for value in self.coeffs[:8])
        more = ", ..." if len(self.coeffs) > 8 else ""
        return f"Series(ring={self.ring}, valuation={self.valuation}, prec={self.prec}, [{head}{more}])"

    def __getitem__(self, exp: int) -> Coefficient:
        return coeff(self, exp)

    def _promote(self, other: "Series | int | Fraction") -> "Series":
        if isinstance(other, Series):
            return other
        return Series.monomial(self.ring, 0, other, max(self.prec - min(self.valuation, 0), 1))

    def __add__(self, other: "Series | int | Fraction") -> "Series":
        return add(self, self._promote(other))

    __radd__ = __add__

    def __neg__(self) -> "Series":
        return scale(self, -1)

    def __sub__(self, other: "Series | int | Fraction") -> "Series":
        return add(self, -self._promote(other))

    def __rsub__(self, other: int | Fraction) -> "Series":
        return add(self._promote(other), -self)

    def __mul__(self, other: "Series | int | Fraction") -> "Series":
        if isinstance(other, Series):
            return mul(self, other)
        return scale(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other: "Series | int | Fraction") -> "Series":
        if isinstance(other, Series):
            return mul(self, invert(other))
        return scale(self, self.ring.inverse(self.ring.element(other)))

    def __rtruediv__(self, other: int | Fraction) -> "Series":
        return scale(invert(self), other)

    def __pow__(self, exponent: int) -> "Series":
        return power(self, exponent)


def _check_rings(f: Series, g: Series) -> None:
    if f.ring != g.ring:
        raise ValueError("ring_mismatch")


def _dense(f: Series, low: int, high: int) -> np.ndarray:
    """Coefficients of f for exponents low .. high - 1 (all below f.prec)."""
    out = _zeros(f.ring, max(high - low, 0))
    start = max(f.valuation, low)
    stop = min(high, f.valuation + len(f.coeffs))
    if start < stop:
        out[start - low : stop - low] = f.coeffs[start - f.valuation : stop - f.valuation]
    return out


def add(f: Series, g: Series) -> Series:
    _check_rings(f, g)
    prec = min(f.prec, g.prec)
    low = min(f.valuation, g.valuation)
    if low >= prec:
        return Series.zero(f.ring, prec)
    total = _dense(f, low, prec) + _dense(g, low, prec)
    return Series.build(f.ring, low, total, prec)


def _convolve(ring: Ring, a: np.ndarray, b: np.ndarray, length: int) -> np.ndarray:
    out = _zeros(ring, length)
    if length <= 0 or len(a) == 0 or len(b) == 0:
        return out
    nz_a = np.flatnonzero(a != 0)
    nz_b = np.flatnonzero(b != 0)
    if len(nz_b) < len(nz_a):
        a, b, nz_a = b, a, nz_b
    if len(nz_a) <= SPARSE_TERMS or not ring.word:
        for index in nz_a:
            i = int(index)
            if i >= length:
                break
            span = min(len(b), length - i)
            out[i : i + span] += a[i] * b[:span]
            if ring.word:
                out[i : i + span] %= ring.modulus
        return _reduce(ring, out)
    assert ring.modulus is not None
    chunk = max(1, _INT64_SAFE // ((ring.modulus - 1) ** 2 + 1) - 1)
    a = a[:length]
    b = b[:length]
    for start in range(0, len(a), chunk):
        piece = np.convolve(a[start : start + chunk], b)[: length - start]
        out[start : start + len(piece)] = (out[start : start + len(piece)] + piece % ring.modulus) % ring.modulus
    return out


def mul(f: Series, g: Series) -> Series:
    _check_rings(f, g)
    prec = min(f.prec + g.valuation, g.prec + f.valuation)
    valuation = f.valuation + g.valuation
    length = prec - valuation
    if f.is_zero or g.is_zero or length <= 0:
        return Series.zero(f.ring, prec)
    product = _convolve(f.ring, f.coeffs[:length], g.coeffs[:length], length)
    return Series.build(f.ring, valuation, product, prec)


def scale(f: Series, c: Coefficient) -> Series:
    value = f.ring.element(c)
    if value == 0 or f.is_zero:
        return Series.zero(f.ring, f.prec)
    return Series.build(f.ring, f.valuation, _reduce(f.ring, f.coeffs * value), f.prec)


def mul_sparse(f: Series, terms: Mapping[int, Coefficient]) -> Series:
    """Multiply by an exact Laurent polynomial given as {exponent: coefficient}."""
    kept = {exp: f.ring.element(value) for exp, value in terms.items()}
    kept = {exp: value for exp, value in kept.items() if value != 0}
    if not kept:
        return Series.zero(f.ring, f.prec)
    low = min(kept)
    prec = f.prec + low
    if f.is_zero:
        return Series.zero(f.ring, prec)
    valuation = f.valuation + low
    length = prec - valuation
    out = _zeros(f.ring, length)
    for exp, value in kept.items():
        offset = exp - low
        if offset >= length:
            continue
        out[offset:] += value * f.coeffs[: length - offset]
        if f.ring.word:
            out %= f.ring.modulus
    return Series.build(f.ring, valuation, _reduce(f.ring, out), prec)


def mul_binomial(f: Series, c: Coefficient, k: int) -> Series:
    """f * (1 - c*q^k)."""
    if k == 0:
        return scale(f, 1 - c)
    return mul_sparse(f, {0: 1, k: -c})


def div_binomial(f: Series, c: Coefficient, k: int) -> Series:
    """f / (1 - c*q^k) for k >= 1, by the recurrence g_i = f_i + c*g_{i-k}."""
    if k < 1:
        raise ValueError("binomial_divisor_needs_positive_exponent")
    if f.is_zero:
        return f
    ring = f.ring
    value = ring.element(c)
    length = len(f.coeffs)
    rows = -(-length // k)
    grid = _zeros(ring, rows * k)
    grid[:length] = f.coeffs
    grid = grid.reshape(rows, k)
    if value == 1:
        grid = np.cumsum(grid, axis=0)
    elif value == -1 or (ring.kind == "mod" and value == ring.modulus - 1):
        signs = np.array([1 if row % 2 == 0 else -1 for row in range(rows)], dtype=ring.dtype)[:, None]
        grid = np.cumsum(grid * signs, axis=0) * signs
    else:
        for row in range(1, rows):
            grid[row] = _reduce(ring, grid[row] + value * grid[row - 1])
    flat = _reduce(ring, grid.reshape(-1)[:length])
    return Series.build(ring, f.valuation, flat, f.prec)


def invert(f: Series) -> Series:
    if f.is_zero:
        raise ValueError("zero_series_not_invertible")
    ring = f.ring
    lead = f.coeffs[0]
    if not ring.is_unit(lead):
        raise ValueError("non_unit_leading_coefficient")
    length = len(f.coeffs)
    inverse = _zeros(ring, 1)
    inverse[0] = ring.inverse(lead)
    size = 1
    # Newton iteration g <- g * (2 - f*g) doubles the trusted length each round
    while size < length:
        size = min(2 * size, length)
        correction = _reduce(ring, -_convolve(ring, f.coeffs[:size], inverse, size))
        correction[0] = ring.element(correction[0] + 2)
        inverse = _convolve(ring, inverse, correction, size)
    return Series.build(ring, -f.valuation, inverse, length - f.valuation)


def power(f: Series, k: int) -> Series:
    if k == 0:
        return Series.one(f.ring, f.prec - f.valuation)
    base = invert(f) if k < 0 else f
    remaining = abs(k)
    result: Series | None = None
    while remaining:
        if remaining & 1:
            result = base if result is None else mul(result, base)
        remaining >>= 1
        if remaining:
            base = mul(base, base)
    assert result is not None
    return result


def subst(f: Series, sign: int, k: int) -> Series:
    """Apply q -> sign * q^k."""
    if sign not in (1, -1):
        raise ValueError("subst_sign_must_be_unit")
    if k < 1:
        raise ValueError("subst_exponent_must_be_positive")
    prec = k * f.prec
    if f.is_zero:
        return Series.zero(f.ring, prec)
    values = f.coeffs
    if sign == -1:
        exponents = np.arange(f.valuation, f.valuation + len(values))
        values = _reduce(f.ring, np.where(exponents % 2 == 0, values, -values).astype(f.ring.dtype))
    spread = _zeros(f.ring, k * len(values))
    spread[::k] = values
    return Series.build(f.ring, k * f.valuation, spread, prec)


def shift(f: Series, v: int) -> Series:
    if f.is_zero:
        return Series.zero(f.ring, f.prec + v)
    return Series(f.ring, f.valuation + v, f.coeffs, f.prec + v)


def truncate(f: Series, prec: int) -> Series:
    if prec >= f.prec:
        return f
    if prec <= f.valuation:
        return Series.zero(f.ring, prec)
    return Series(f.ring, f.valuation, f.coeffs[: prec - f.valuation], prec)


def coeff(f: Series, n: int) -> Coefficient:
    if n >= f.prec:
        raise PrecisionError(f"coefficient_beyond_precision:{n}")
    if n < f.valuation:
        return f.ring.element(0)
    value = f.coeffs[n - f.valuation]
    return int(value) if isinstance(value, np.integer) else value


def coefficients(f: Series, start: int, stop: int) -> list[Coefficient]:
    return [coeff(f, n) for n in range(start, stop)]


def first_mismatch(f: Series, g: Series, order: int) -> int | None:
    _check_rings(f, g)
    bound = min(order, f.prec, g.prec)
    low = min(f.valuation, g.valuation)
    if low >= bound:
        return None
    diff = np.flatnonzero(_dense(f, low, bound) != _dense(g, low, bound))
    if len(diff) == 0:
        return None
    return low + int(diff[0])


def eq_to_order(f: Series, g: Series, order: int) -> bool:
    return first_mismatch(f, g, order) is None


def to_ring(f: Series, target: Ring) -> Series:
    if f.ring == target:
        return f
    source = f.ring
    if source.kind == "mod":
        assert source.modulus is not None
        if target.kind != "mod" or source.modulus % (target.modulus or 0) != 0:
            raise ValueError("unsupported_ring_conversion")
    values: list[Coefficient] = []
    for offset, value in enumerate(f.coeffs):
        item = int(value) if isinstance(value, np.integer) else value
        try:
            values.append(target.element(item))
        except ValueError as exc:
            raise ValueError(f"{exc}:{f.valuation + offset}") from exc
    return Series.build(target, f.valuation, values, f.prec)
