"""
Tests for cyclotomic module - exact arithmetic at roots of unity
"""
import cmath
import math
from fractions import Fraction

import pytest
import sympy

from analysis import derivative_at_coset, generation_degree
from cyclotomic import (
    CycloElement,
    cyclotomic_polynomial,
    eval_symbol_at_coset,
    from_root_power,
    is_zero,
)
from errors import DimensionMismatchError, InvalidArgumentError, OrderMismatchError
from laurent import LaurentPoly, falling_power, multi_indices_up_to
from mask import coset_reps
from schemes import SCHEMES, DirectionMatrix, box_spline, get_scheme, sqrt3_iterated, three_directional


def test_from_root_power_folds_exponents():
    assert from_root_power(3, 1).coeffs == (0, 1, 0)
    assert from_root_power(3, 4) == from_root_power(3, 1)
    assert from_root_power(3, -1) == from_root_power(3, 2)
    with pytest.raises(InvalidArgumentError):
        from_root_power(1, 0)


def test_root_times_inverse_is_one():
    for n in (2, 3, 4, 5, 7):
        product = from_root_power(n, 1) * from_root_power(n, n - 1)
        assert product == CycloElement.rational(n, 1)


def test_zeta_plus_zeta_squared_is_minus_one():
    total = from_root_power(3, 1) + from_root_power(3, 2)
    assert is_zero(total + CycloElement.rational(3, 1))


def test_is_zero_examples():
    assert CycloElement.rational(4, 0).is_zero()
    # 1 + zeta^2 = 0 for zeta = i
    assert (CycloElement.rational(4, 1) + from_root_power(4, 2)).is_zero()
    assert not (CycloElement.rational(4, 1) + from_root_power(4, 1)).is_zero()
    assert not CycloElement.rational(5, Fraction(1, 3)).is_zero()


def test_cyclotomic_degrees_match_totient():
    for n in range(1, 13):
        assert cyclotomic_polynomial(n).degree() == sympy.totient(n)


def test_to_complex_negative_dilation():
    value = from_root_power(3, 1).to_complex(-3)
    expected = complex(math.cos(2 * math.pi / 3), math.sin(2 * math.pi / 3))
    assert abs(value - expected) < 1e-12
    with pytest.raises(OrderMismatchError):
        from_root_power(3, 1).to_complex(4)


def test_order_mismatch():
    with pytest.raises(OrderMismatchError):
        from_root_power(3, 1) + from_root_power(4, 1)


def test_str():
    assert str(CycloElement.rational(3, 0)) == "0"
    assert str(from_root_power(3, 2)) == "zeta^2"


# ============================================================================
# SYMBOL AT COSET POINTS
# ============================================================================

def test_trivial_coset_gives_value_at_one():
    bilinear = box_spline(DirectionMatrix.from_rows([[1, 0, 1], [0, 1, 1]]))
    value = eval_symbol_at_coset(bilinear.symbol, 2, (0, 0))
    assert value == CycloElement.rational(2, bilinear.symbol.value_at_one())


def test_box_222_vanishes_at_nontrivial_cosets():
    mask = three_directional(2, 2, 2)
    for e in ((1, 0), (0, 1), (1, 1)):
        assert eval_symbol_at_coset(mask.symbol, 2, e).is_zero()


def test_sqrt3_vanishes_at_nontrivial_coset():
    mask = sqrt3_iterated()
    assert eval_symbol_at_coset(mask.symbol, mask.dilation, (1, 1)).is_zero()
    assert not eval_symbol_at_coset(mask.symbol, mask.dilation, (0, 0)).is_zero()


def test_matches_complex_evaluation(make_laurent, rng):
    for _ in range(20):
        p = make_laurent(2)
        m = rng.choice([2, 3, -3, 4])
        e = (rng.randrange(abs(m)), rng.randrange(abs(m)))
        zeta = cmath.exp(-2j * math.pi / m)
        expected = sum(
            float(value) * zeta ** (e[0] * key[0] + e[1] * key[1])
            for key, value in p.coeffs.items()
        )
        assert abs(eval_symbol_at_coset(p, m, e).to_complex(m) - expected) < 1e-10


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        eval_symbol_at_coset(LaurentPoly.constant(2, 1), 2, (1,))


@pytest.mark.parametrize("name", list(SCHEMES))
def test_exact_zeros_of_scheme_derivatives_are_numerically_zero(name):
    mask = get_scheme(name)
    m = mask.dilation
    zeta = cmath.exp(-2j * math.pi / m)
    degree = generation_degree(mask, 8).degree
    zeros = 0
    for e in coset_reps(mask)[1:]:
        for j in multi_indices_up_to(mask.dimension, degree + 1):
            value = derivative_at_coset(mask, j, e)
            if not value.is_zero():
                continue
            zeros += 1
            terms = [
                float(coefficient * falling_power(j, key))
                * zeta ** sum(c * (k - i) for c, k, i in zip(e, key, j))
                for key, coefficient in mask.symbol.coeffs.items()
            ]
            assert abs(value.to_complex(m)) < 1e-10
            assert abs(sum(terms)) < 1e-10 * max(1.0, sum(abs(t) for t in terms))
    assert zeros > 0
