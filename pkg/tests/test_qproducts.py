import pytest

from qlerch.qproducts import (
    EtaQuotient,
    Monomial,
    eta_quotient,
    euler,
    pochhammer_finite,
    pochhammer_inf,
    rr_K,
    rr_T,
)
from qlerch.ring_series import (
    INTEGER,
    Series,
    coefficients,
    eq_to_order,
    invert,
    modular,
    mul_binomial,
    power,
    to_ring,
)

PARTITIONS = [1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42, 56, 77, 101, 135, 176, 231, 297, 385, 490]


def test_euler_product_matches_pentagonal_numbers():
    values = coefficients(euler(1, 30, INTEGER), 0, 30)
    expected = [0] * 30
    for k in range(-5, 6):
        exp = k * (3 * k - 1) // 2
        if exp < 30:
            expected[exp] = (-1) ** (k % 2)
    assert values == expected


def test_inverse_euler_product_counts_partitions():
    assert coefficients(invert(euler(1, 20, INTEGER)), 0, 20) == PARTITIONS


def test_euler_cube_follows_jacobi():
    assert coefficients(power(euler(1, 11, INTEGER), 3), 0, 11) == [1, -3, 0, 5, 0, 0, -7, 0, 0, 0, 9]


def test_eta_quotient_gives_triangular_theta():
    psi = eta_quotient(EtaQuotient.of([(2, 2), (1, -1)]), 16, INTEGER)
    assert coefficients(psi, 0, 16) == [1 if n in (0, 1, 3, 6, 10, 15) else 0 for n in range(16)]


def test_eta_quotient_merges_and_drops_cancelled_factors():
    quotient = EtaQuotient.of([(5, 1), (1, 2), (5, -1), (2, 1)])
    assert quotient.factors == ((1, 2), (2, 1))
    assert str(quotient) == "E1^2 E2"
    assert str(EtaQuotient.of([])) == "1"
    with pytest.raises(ValueError, match="eta_dilation_must_be_positive"):
        EtaQuotient.of([(0, 1)])


def test_finite_pochhammer_expands_product():
    series = pochhammer_finite(Monomial(1, 1), 1, 3, 8)
    assert coefficients(series, 0, 8) == [1, -1, -1, 0, 1, 1, -1, 0]
    assert pochhammer_finite(Monomial(1, 0), 1, 2, 8).is_zero
    assert coefficients(pochhammer_finite(Monomial(-1, 2), 3, 0, 4), 0, 4) == [1, 0, 0, 0]


def test_infinite_pochhammer_with_negative_sign():
    # (-q;q)_inf counts partitions into distinct parts
    series = pochhammer_inf(Monomial(-1, 1), 1, 12)
    assert coefficients(series, 0, 12) == [1, 1, 1, 2, 2, 3, 4, 5, 6, 8, 10, 12]


def test_negative_power_divides_out_factors():
    prec = 40
    square = pochhammer_inf(Monomial(1, 1), 5, prec, INTEGER, 2)
    inverse = pochhammer_inf(Monomial(1, 1), 5, prec, INTEGER, -2)
    assert eq_to_order(square * inverse, Series.one(INTEGER, prec), prec)


@pytest.mark.parametrize("a,base", [(Monomial(1, 1), 1), (Monomial(-1, 2), 3), (Monomial(1, 0), 2)])
def test_finite_pochhammer_grows_one_factor_at_a_time(a: Monomial, base: int):
    prec = 30
    for n in range(6):
        step = mul_binomial(pochhammer_finite(a, base, n, prec), a.sign, a.exp + base * n)
        assert eq_to_order(pochhammer_finite(a, base, n + 1, prec), step, prec)


@pytest.mark.parametrize("a,base", [(Monomial(1, 1), 1), (Monomial(-1, 1), 2), (Monomial(1, 2), 5)])
def test_infinite_pochhammer_agrees_with_long_finite_product(a: Monomial, base: int):
    prec = 40
    assert eq_to_order(pochhammer_inf(a, base, prec), pochhammer_finite(a, base, prec, prec), prec)


def test_rogers_ramanujan_quotient_leading_terms():
    assert coefficients(rr_T(10), 0, 4) == [1, 1, 0, -1]
    assert coefficients(invert(rr_T(10)), 0, 3) == [1, -1, 1]


def test_k_quotient_is_consistent_with_euler_products():
    prec = 50
    expected = euler(2, prec) * power(euler(5, prec), 5) * invert(euler(1, prec)) * invert(power(euler(10, prec), 5))
    assert eq_to_order(rr_K(prec), expected, prec)


def test_modular_products_reduce_integer_products():
    prec = 60
    for j in (1, 2, 5):
        assert eq_to_order(euler(j, prec, modular(25)), to_ring(euler(j, prec, INTEGER), modular(25)), prec)


def test_monomial_validation_and_algebra():
    with pytest.raises(ValueError, match="monomial_sign_must_be_unit"):
        Monomial(2, 1)
    with pytest.raises(ValueError, match="monomial_exponent_must_be_non_negative"):
        Monomial(1, -1)
    assert Monomial(-1, 2).times(Monomial(-1, 3)) == Monomial(1, 5)
    assert str(Monomial(-1, 1)) == "-q"
    assert str(Monomial(1, 4)) == "q^4"


def test_fifth_power_of_euler_product_is_frobenius_mod_5():
    ring = modular(5)
    assert eq_to_order(power(euler(1, 200, ring), 5), euler(5, 200, ring), 200)
