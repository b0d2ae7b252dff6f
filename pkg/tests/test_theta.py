import random

import pytest

from qlerch.qproducts import Monomial, euler
from qlerch.ring_series import INTEGER, coefficients, eq_to_order, modular, power, to_ring
from qlerch.theta import (
    cube_analog,
    f_laurent,
    f_prod,
    f_sum,
    jacobi_cube,
    lemma21_check,
    lemma21_sides,
    phi,
    psi,
)

ORDER = 150


def test_triple_product_matches_bilateral_sum():
    rng = random.Random(1729)
    for _ in range(20):
        a = Monomial(rng.choice([1, -1]), rng.randint(1, 7))
        b = Monomial(rng.choice([1, -1]), rng.randint(1, 7))
        assert eq_to_order(f_prod(a, b, ORDER), f_sum(a, b, ORDER), ORDER), (a, b)


def test_theta_is_symmetric_in_its_arguments():
    a, b = Monomial(-1, 2), Monomial(1, 5)
    assert eq_to_order(f_sum(a, b, 80), f_sum(b, a, 80), 80)


def test_euler_product_is_theta_of_minus_q_and_minus_q_squared():
    series = f_sum(Monomial(-1, 1), Monomial(-1, 2), ORDER)
    assert eq_to_order(series, euler(1, ORDER), ORDER)


@pytest.mark.parametrize("form", ["product", "pochhammer"])
def test_phi_forms_agree(form: str):
    assert eq_to_order(phi(ORDER, INTEGER, form), phi(ORDER), ORDER)


@pytest.mark.parametrize("form", ["product", "pochhammer"])
def test_psi_forms_agree(form: str):
    assert eq_to_order(psi(ORDER, INTEGER, form), psi(ORDER), ORDER)


def test_phi_counts_squares():
    assert coefficients(phi(10), 0, 10) == [1, 2, 0, 0, 2, 0, 0, 0, 0, 2]


def test_jacobi_cube_is_euler_cubed():
    assert eq_to_order(jacobi_cube(ORDER), power(euler(1, ORDER), 3), ORDER)


def test_cube_analog_leading_terms():
    assert coefficients(cube_analog(9), 0, 9) == [1, -2, 0, 0, 0, 4, 0, 0, -5]


def test_theta_reduces_into_modular_rings():
    a, b = Monomial(1, 1), Monomial(1, 4)
    assert eq_to_order(f_sum(a, b, 60, modular(5)), to_ring(f_sum(a, b, 60), modular(5)), 60)


def test_theta_rejects_degenerate_arguments():
    with pytest.raises(ValueError, match="theta_requires_positive_total_exponent"):
        f_sum(Monomial(1, 0), Monomial(1, 0), 10)
    with pytest.raises(ValueError, match="unsupported_zero_exponent_factor"):
        f_prod(Monomial(1, 0), Monomial(1, 3), 10)


def test_product_splitting_holds_for_random_quadruples():
    rng = random.Random(42)
    checked = 0
    while checked < 12:
        total = rng.randint(3, 9)
        a_exp = rng.randint(1, total - 1)
        c_exp = rng.randint(1, total - 1)
        b_exp, d_exp = total - a_exp, total - c_exp
        if b_exp < max(c_exp, d_exp):
            continue
        a, b = Monomial(1, a_exp), Monomial(1, b_exp)
        c, d = Monomial(1, c_exp), Monomial(1, d_exp)
        assert lemma21_check(a, b, c, d, 100), (a, b, c, d)
        checked += 1


def test_product_splitting_with_signed_arguments():
    assert lemma21_check(Monomial(-1, 1), Monomial(-1, 5), Monomial(1, 2), Monomial(1, 4), 100)


def test_product_splitting_validates_arguments():
    with pytest.raises(ValueError, match="lemma_requires_ab_equals_cd"):
        lemma21_sides(Monomial(1, 1), Monomial(1, 2), Monomial(1, 1), Monomial(1, 1), 20)
    with pytest.raises(ValueError, match="theta_requires_positive_total_exponent"):
        f_laurent((1, -3), (1, 3), 20)


@pytest.mark.parametrize(
    "sign,expected",
    [
        (1, {-1: 1, 0: 1, 6: 1, 9: 1, 21: 1, 26: 1}),
        (-1, {-1: -1, 0: 1, 6: -1, 9: 1, 21: 1, 26: -1}),
    ],
)
def test_theta_with_negative_exponent_is_laurent(sign: int, expected: dict[int, int]):
    # f(+-q^-1, q^9) sums (+-1)^(k(k+1)/2) q^(4k^2 - 5k)
    series = f_laurent((sign, -1), (1, 9), 30)
    assert series.valuation == -1
    assert series.prec == 30
    assert coefficients(series, -1, 30) == [expected.get(n, 0) for n in range(-1, 30)]


def test_theta_with_non_negative_exponents_matches_sum():
    assert eq_to_order(f_laurent((1, 1), (-1, 4), 40), f_sum(Monomial(1, 1), Monomial(-1, 4), 40), 40)


@pytest.mark.parametrize(
    "a,b,c,d",
    [
        (Monomial(1, 3), Monomial(1, 1), Monomial(1, 2), Monomial(1, 2)),
        (Monomial(1, 4), Monomial(1, 1), Monomial(1, 3), Monomial(1, 2)),
        (Monomial(-1, 5), Monomial(1, 1), Monomial(1, 2), Monomial(-1, 4)),
    ],
)
def test_product_splitting_with_b_smaller_than_c(a: Monomial, b: Monomial, c: Monomial, d: Monomial):
    (_, _), (_, diff_rhs) = lemma21_sides(a, b, c, d, 80)
    assert diff_rhs.prec >= 80
    assert lemma21_check(a, b, c, d, 80)
