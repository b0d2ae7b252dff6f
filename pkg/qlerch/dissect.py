"""m-dissections: residue-class extraction and the 5-dissections of E_1 and 1/E_1."""

from __future__ import annotations

import numpy as np

from qlerch.qproducts import EtaQuotient, eta_quotient, rr_T
from qlerch.ring_series import (
    INTEGER,
    Ring,
    Series,
    add,
    mul,
    mul_sparse,
    power,
    shift,
    subst,
)


def _ceil_div(a: int, b: int) -> int:
    return -(-a // b)


def _progression(f: Series, step: int, offset: int, first: int, prec: int) -> Series:
    """Series whose q^n coefficient is f's q^(step*n + offset) coefficient, for first <= n < prec."""
    count = max(prec - first, 0)
    exps = step * np.arange(first, first + count) + offset
    values = np.zeros(count, dtype=np.int64) if f.ring.word else np.array([f.ring.element(0)] * count, dtype=object)
    inside = exps >= f.valuation
    if inside.any():
        values[inside] = f.coeffs[exps[inside] - f.valuation]
    return Series.build(f.ring, first, values, prec)


def extract(f: Series, m: int, r: int) -> Series:
    """[q^(mn+r)] f: keep class r, divide by q^r, then replace q^m by q."""
    if m < 2:
        raise ValueError("extract_requires_m_at_least_2")
    if not 0 <= r < m:
        raise ValueError("extract_residue_out_of_range")
    if f.valuation < 0:
        for exp in range(f.valuation, min(0, f.prec)):
            if (exp - r) % m and f[exp] != 0:
                raise ValueError(f"extract_laurent_off_class_terms:{exp}")
    first = min(0, _ceil_div(f.valuation - r, m))
    return _progression(f, m, r, first, _ceil_div(f.prec - r, m))


def sift(f: Series, A: int, B: int) -> Series:
    """sum_{n>=0} c(An+B) q^n for any B >= 0."""
    if A < 1:
        raise ValueError("sift_requires_positive_step")
    if B < 0:
        raise ValueError("sift_requires_non_negative_offset")
    return _progression(f, A, B, 0, max(_ceil_div(f.prec - B, A), 0))


def reconstruct(parts: list[Series]) -> Series:
    """sum_r q^r parts[r](q^m) with m = len(parts)."""
    m = len(parts)
    if m < 2:
        raise ValueError("reconstruct_needs_at_least_two_parts")
    total = subst(parts[0], 1, m)
    for r, part in enumerate(parts[1:], start=1):
        total = add(total, shift(subst(part, 1, m), r))
    return total


def euler_five_dissection(prec: int, ring: Ring = INTEGER) -> list[Series]:
    """Parts of E_1 = E_25 (T(q^5) - q - q^2/T(q^5)) after q^5 -> q; reconstruct reaches prec."""
    order = _ceil_div(prec, 5)
    e5 = eta_quotient(EtaQuotient.of([(5, 1)]), order, ring)
    t = rr_T(order, ring)
    return [
        mul(e5, t),
        -e5,
        -mul(e5, power(t, -1)),
        Series.zero(ring, order),
        Series.zero(ring, order),
    ]


def partition_five_dissection(prec: int, ring: Ring = INTEGER) -> list[Series]:
    """Parts of 1/E_1 from the nine-term T(q^5) expansion; parts[4] is 5 E_5^5/E_1^6."""
    order = _ceil_div(prec, 5)
    prefix = eta_quotient(EtaQuotient.of([(5, 5), (1, -6)]), order, ring)
    t = rr_T(order, ring)
    inv = power(t, -1)

    def t_pow(k: int) -> Series:
        return power(t, k) if k > 0 else power(inv, -k)

    shapes = [
        {0: (4, 1), 1: (-1, -3)},
        {0: (3, 1), 1: (-2, 2)},
        {0: (2, 2), 1: (-3, -1)},
        {0: (1, 3), 1: (-4, 1)},
    ]
    parts = []
    for shape in shapes:
        piece = Series.zero(ring, order)
        for q_exp, (t_exp, c) in shape.items():
            piece = add(piece, mul_sparse(t_pow(t_exp), {q_exp: c}))
        parts.append(mul(prefix, piece))
    parts.append(5 * prefix)
    return parts
