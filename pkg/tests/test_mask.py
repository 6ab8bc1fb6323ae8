"""
Tests for mask module - cosets, submasks and the mask document
"""
import json
from fractions import Fraction

import pytest

from errors import MaskParseError, MaskValidationError
from laurent import LaurentPoly
from mask import (
    Mask,
    coset_reps,
    dumps_mask,
    is_interpolatory,
    loads_mask,
    mask_from_dict,
    parse_rational,
    read_mask,
    shift_mask,
    subsymbol,
    write_mask,
)
from schemes import SCHEMES, cubic_bspline, get_scheme


def delta_mask(dimension=2, dilation=2):
    return Mask(LaurentPoly.constant(dimension, 1), dilation)


def test_dilation_must_exceed_one():
    with pytest.raises(MaskValidationError):
        Mask(LaurentPoly.constant(1, 2), 1)
    with pytest.raises(MaskValidationError):
        Mask(LaurentPoly.constant(1, 2), -1)
    assert Mask(LaurentPoly.constant(1, 2), -2).modulus == 2


def test_coset_reps_start_at_zero():
    assert coset_reps(delta_mask(2, 2)) == [(0, 0), (0, 1), (1, 0), (1, 1)]
    reps = coset_reps(delta_mask(2, -3))
    assert len(reps) == 9 and reps[0] == (0, 0)
    assert len(coset_reps(delta_mask(3, 2))) == 8


def test_delta_mask_subsymbols():
    mask = delta_mask()
    assert subsymbol(mask, (0, 0)) == LaurentPoly.constant(2, 1)
    for e in ((0, 1), (1, 0), (1, 1)):
        assert subsymbol(mask, e).is_zero()


def test_cubic_subsymbols():
    mask = cubic_bspline()
    eighth = Fraction(1, 8)
    assert subsymbol(mask, (0,)) == LaurentPoly(1, {(0,): eighth, (2,): 6 * eighth, (4,): eighth})
    assert subsymbol(mask, (1,)) == LaurentPoly(1, {(1,): 4 * eighth, (3,): 4 * eighth})


@pytest.mark.parametrize("name", list(SCHEMES))
def test_subsymbols_partition_the_symbol(name):
    mask = get_scheme(name)
    total = LaurentPoly.zero(mask.dimension)
    for e in coset_reps(mask):
        total = total + subsymbol(mask, e)
    assert total == mask.symbol


@pytest.mark.parametrize("name", list(SCHEMES))
def test_builtin_submask_sums_are_one(name):
    mask = get_scheme(name)
    for e in coset_reps(mask):
        assert subsymbol(mask, e).value_at_one() == 1


def test_interpolatory_flags():
    assert is_interpolatory(get_scheme("butterfly"))
    assert is_interpolatory(get_scheme("dubuc-deslauriers-4pt"))
    assert not is_interpolatory(get_scheme("butterfly-shifted"))
    assert not is_interpolatory(get_scheme("box-222"))
    assert is_interpolatory(delta_mask())


def test_shift_mask():
    shifted = shift_mask(cubic_bspline(), (-2,))
    assert shifted.symbol.coefficient((-2,)) == Fraction(1, 8)
    assert shifted.dilation == 2


# ============================================================================
# MASK DOCUMENT
# ============================================================================

def test_parse_rational():
    assert parse_rational("1/6") == Fraction(1, 6)
    assert parse_rational(" -3 ") == -3
    assert parse_rational(4) == 4


@pytest.mark.parametrize("name", list(SCHEMES))
def test_document_round_trip(name, tmp_path):
    mask = get_scheme(name)
    assert loads_mask(dumps_mask(mask)) == mask
    path = tmp_path / f"{name}.json"
    write_mask(mask, path)
    assert read_mask(path) == mask


def test_name_falls_back_to_file_stem(tmp_path):
    path = tmp_path / "my-mask.json"
    path.write_text(json.dumps({
        "dimension": 1,
        "dilation": 2,
        "coefficients": [{"index": [0], "value": "1"}, {"index": [1], "value": "1"}],
    }))
    mask = read_mask(path)
    assert mask.name == "my-mask"
    assert mask.symbol.value_at_one() == 2


def _document(**overrides):
    document = {
        "dimension": 1,
        "dilation": 2,
        "coefficients": [{"index": [0], "value": "1/2"}, {"index": [1], "value": "1/2"}],
    }
    document.update(overrides)
    return document


@pytest.mark.parametrize(
    "overrides",
    [
        {"dilation": 1},
        {"dimension": 0, "coefficients": []},
        {"coefficients": [{"index": [0, 1], "value": "1"}]},
        {"coefficients": [{"index": [0], "value": "1"}, {"index": [0], "value": "2"}]},
        {"coefficients": [{"index": [0], "value": "1/0"}]},
    ],
)
def test_invariant_violations(overrides):
    with pytest.raises(MaskValidationError):
        mask_from_dict(_document(**overrides))


@pytest.mark.parametrize(
    "overrides",
    [
        {"coefficients": [{"index": [0], "value": "abc"}]},
        {"dilation": "two"},
        {"coefficients": [{"index": "zero", "value": "1"}]},
        {"coefficients": [{"value": "1"}]},
    ],
)
def test_malformed_documents(overrides):
    with pytest.raises(MaskParseError):
        mask_from_dict(_document(**overrides))


def test_malformed_json():
    with pytest.raises(MaskParseError):
        loads_mask("{not json")
    with pytest.raises(MaskParseError):
        loads_mask("[1, 2]")
