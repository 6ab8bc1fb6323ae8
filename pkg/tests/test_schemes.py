"""
Tests for schemes module - built-in masks and the scheme registry
"""
from fractions import Fraction

import pytest

from analysis import compute_tau, raw_tau, reproduction_degree
from errors import InvalidArgumentError
from laurent import LaurentPoly
from mask import Mask
from schemes import (
    CUBIC_BSPLINE_DIRECTIONS,
    FOUR_DIRECTIONS,
    SCHEMES,
    DirectionMatrix,
    box_spline,
    box_spline_tau,
    butterfly,
    butterfly_shifted,
    cubic_bspline,
    dubuc_deslauriers_4pt,
    get_scheme,
    is_unimodular,
    scheme_names,
    scheme_notes,
    sqrt3_base,
    sqrt3_base_tau_values,
    sqrt3_iterated,
    three_dim_example,
    three_directional,
    three_directional_directions,
)


def test_identity_box_spline_is_tensor_product_of_linear_factors():
    mask = box_spline(DirectionMatrix.from_rows([[1, 0], [0, 1]]))
    assert mask.symbol == LaurentPoly(2, {(0, 0): 1, (1, 0): 1, (0, 1): 1, (1, 1): 1})
    assert mask.dilation == 2


def test_four_ones_is_cubic_bspline():
    expected = LaurentPoly(1, {(0,): 1, (1,): 4, (2,): 6, (3,): 4, (4,): 1}) * Fraction(1, 8)
    assert box_spline(CUBIC_BSPLINE_DIRECTIONS).symbol == expected
    assert cubic_bspline().symbol == expected


def test_box_222_expanded():
    z1 = LaurentPoly.monomial((1, 0))
    z2 = LaurentPoly.monomial((0, 1))
    one = LaurentPoly.constant(2, 1)
    expected = ((one + z1) * (one + z2) * (one + z1 * z2)) ** 2 * Fraction(1, 16)
    mask = three_directional(2, 2, 2)
    assert mask.symbol == expected
    assert mask.name == "box-222"
    assert mask.symbol.value_at_one() == 4


def test_box_spline_tau():
    assert box_spline_tau(three_directional_directions(2, 2, 2)) == (2, 2)
    assert box_spline_tau(CUBIC_BSPLINE_DIRECTIONS) == (2,)
    assert box_spline_tau(FOUR_DIRECTIONS) == (Fraction(3, 2), Fraction(1, 2))


def test_is_unimodular():
    assert is_unimodular(three_directional_directions(2, 2, 2))
    assert not is_unimodular(FOUR_DIRECTIONS)
    assert is_unimodular(CUBIC_BSPLINE_DIRECTIONS)


def test_direction_matrix_validation():
    with pytest.raises(InvalidArgumentError):
        DirectionMatrix.from_rows([[1, 2], [2, 4]])
    with pytest.raises(InvalidArgumentError):
        DirectionMatrix.from_rows([[1], [0]])
    with pytest.raises(InvalidArgumentError):
        DirectionMatrix.from_rows([[1, 0], [0]])
    with pytest.raises(InvalidArgumentError):
        three_directional(-1, 2, 2)


def random_direction_matrix(rng, s=2, n=4):
    while True:
        rows = [[rng.randint(-2, 2) for _ in range(n)] for _ in range(s)]
        try:
            return DirectionMatrix.from_rows(rows)
        except InvalidArgumentError:
            continue


def test_random_box_spline_tau_is_half_row_sums(rng):
    for _ in range(20):
        theta = random_direction_matrix(rng)
        assert raw_tau(box_spline(theta)) == box_spline_tau(theta)


# ============================================================================
# NAMED SCHEMES
# ============================================================================

def test_butterfly():
    mask = butterfly()
    assert mask.symbol.value_at_one() == 4
    assert mask.symbol.coefficient((0, 0)) == 1
    assert mask.symbol.support_box() == ((-3, -3), (3, 3))
    assert compute_tau(mask) == (0, 0)


def test_butterfly_shifted():
    mask = butterfly_shifted()
    assert mask.symbol.support_box() == ((0, 0), (6, 6))
    assert compute_tau(mask) == (3, 3)
    assert reproduction_degree(mask, 6).degree == 3


def test_dubuc_deslauriers():
    mask = dubuc_deslauriers_4pt()
    assert mask.symbol.value_at_one() == 2
    assert mask.symbol.coefficient((0,)) == 1


def test_three_dim_example():
    mask = three_dim_example()
    assert mask.dimension == 3
    assert mask.symbol.value_at_one() == 8
    assert compute_tau(mask) == (3, 3, 3)


def test_sqrt3():
    base = sqrt3_base()
    assert len(base) == 12
    assert base.value_at_one() == 3
    mask = sqrt3_iterated()
    assert mask.dilation == -3
    assert mask.symbol.value_at_one() == 9
    assert compute_tau(mask) == (0, 0)
    assert len(sqrt3_base_tau_values()) == 2


def test_registry():
    assert scheme_names() == list(SCHEMES)
    assert len(SCHEMES) == 8
    for name in scheme_names():
        mask = get_scheme(name)
        assert isinstance(mask, Mask)
        assert mask.name == name


def test_unknown_scheme():
    with pytest.raises(InvalidArgumentError, match="available"):
        get_scheme("loop")


def test_scheme_notes():
    notes = scheme_notes("box-222")
    assert any("unimodular" in note and "not" not in note for note in notes)
    assert any("(2, 2)" in note for note in notes)
    assert any("not unimodular" in note for note in scheme_notes("box-four-directional"))
    assert any("sqrt(3)" in note for note in scheme_notes("sqrt3-iterated"))
    assert scheme_notes("butterfly") == []
    assert scheme_notes("nope") == []


@pytest.mark.parametrize("name", [name for name, info in SCHEMES.items() if info.directions])
def test_builtin_box_spline_tau_matches_derivatives(name):
    assert raw_tau(get_scheme(name)) == box_spline_tau(SCHEMES[name].directions)
