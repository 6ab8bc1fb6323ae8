"""
Tests for analysis module - zero conditions, tau and reproduction degrees
"""
from fractions import Fraction

import pytest

from analysis import (
    AnalysisReport,
    analyze,
    check_reproduction,
    check_Z,
    compute_tau,
    default_moment_window,
    derivative_at_one,
    generation_degree,
    moment_condition_check,
    q_eval,
    raw_tau,
    reproduction_degree,
    shift_binomial_identity,
    submask_derivative_consistency,
    sum_rule_moment_check,
)
from errors import DimensionMismatchError, InvalidArgumentError
from laurent import LaurentPoly
from mask import Mask, shift_mask
from schemes import SCHEMES, get_scheme

CAP = 8


def test_q_eval():
    assert q_eval((0, 0), (5, 7)) == 1
    assert q_eval((2, 2), (2, 2)) == 4
    assert q_eval((3,), (3,)) == 6
    assert q_eval((1,), (Fraction(1, 2),)) == Fraction(1, 2)
    with pytest.raises(InvalidArgumentError):
        q_eval((-1,), (0,))


def test_derivative_at_one():
    assert derivative_at_one(get_scheme("box-222"), (1, 1)) == 18
    with pytest.raises(DimensionMismatchError):
        derivative_at_one(get_scheme("box-222"), (1,))


# ============================================================================
# ZERO CONDITIONS AND GENERATION DEGREE
# ============================================================================

def test_check_Z_cubic():
    mask = get_scheme("cubic-bspline")
    assert check_Z(mask, 4).passed
    result = check_Z(mask, 5)
    assert not result.passed
    assert result.witness.degree == 4
    assert result.witness.first.point == "eps"
    assert result.witness.first.coset == [1]
    assert result.witness.first.lhs == "3"


def test_check_Z_rejects_order_zero():
    with pytest.raises(InvalidArgumentError):
        check_Z(get_scheme("cubic-bspline"), 0)


def test_check_Z_box_and_butterfly():
    assert check_Z(get_scheme("box-222"), 5).passed
    assert check_Z(get_scheme("butterfly"), 4).passed


@pytest.mark.parametrize(
    "name, degree",
    [("box-222", 4), ("cubic-bspline", 3), ("dubuc-deslauriers-4pt", 3)],
)
def test_generation_degree(name, degree):
    result = generation_degree(get_scheme(name), CAP)
    assert result.degree == degree
    assert result.witness.degree == degree + 1


def test_generation_degree_absent_without_sum_rules():
    constant = Mask(LaurentPoly.constant(1, 2), 2, "constant")
    result = generation_degree(constant, CAP)
    assert result.degree is None
    assert result.witness.degree == 0
    assert result.witness.first.point == "eps"


def test_generation_degree_normalization_failure():
    result = generation_degree(Mask(LaurentPoly.constant(1, 1), 2), CAP)
    assert result.degree is None
    assert result.witness.first.describe() == "D^(0) a(1) = 1, required 2"


def test_generation_degree_reaches_cap():
    result = generation_degree(get_scheme("box-222"), 2)
    assert result.degree == 2
    assert result.witness is None


# ============================================================================
# PARAMETRIZATION AND REPRODUCTION
# ============================================================================

@pytest.mark.parametrize(
    "name, tau",
    [
        ("box-222", (2, 2)),
        ("three-dim-example", (3, 3, 3)),
        ("butterfly", (0, 0)),
        ("butterfly-shifted", (3, 3)),
        ("cubic-bspline", (2,)),
        ("dubuc-deslauriers-4pt", (0,)),
    ],
)
def test_compute_tau(name, tau):
    assert compute_tau(get_scheme(name)) == tau


def test_tau_absent_without_sum_rules():
    constant = Mask(LaurentPoly(1, {(0,): 1, (1,): 1, (2,): 1}), 2)
    assert compute_tau(constant) is None
    assert raw_tau(constant) == (Fraction(3, 2),)


def test_box_222_reproduction_witness():
    result = check_reproduction(get_scheme("box-222"), (2, 2), 2)
    assert not result.passed
    assert result.witness.degree == 2
    assert [f.j for f in result.witness.failures] == [[0, 2], [1, 1], [2, 0]]
    mixed = result.witness.find((1, 1))
    assert (mixed.lhs, mixed.rhs) == ("18", "16")
    assert mixed.describe() == "D^(1,1) a(1) = 18, required 16"
    assert (result.witness.first.lhs, result.witness.first.rhs) == ("12", "8")


def test_three_dim_reproduction_witness():
    result = check_reproduction(get_scheme("three-dim-example"), (3, 3, 3), 2)
    assert not result.passed
    failure = result.witness.find((2, 0, 0))
    assert (failure.lhs, failure.rhs) == ("46", "48")


def test_check_reproduction_tau_length():
    with pytest.raises(DimensionMismatchError):
        check_reproduction(get_scheme("box-222"), (2,), 1)


@pytest.mark.parametrize(
    "name, degree",
    [
        ("butterfly", 3),
        ("box-222", 1),
        ("box-four-directional", 1),
        ("cubic-bspline", 1),
        ("dubuc-deslauriers-4pt", 3),
        ("three-dim-example", 1),
    ],
)
def test_reproduction_degree(name, degree):
    result = reproduction_degree(get_scheme(name), CAP)
    assert result.degree == degree
    assert result.witness.degree == degree + 1


def test_cubic_reproduction_witness():
    result = reproduction_degree(get_scheme("cubic-bspline"), CAP)
    failure = result.witness.find((2,))
    assert (failure.lhs, failure.rhs) == ("6", "4")


def test_sqrt3_reproduces_linears():
    result = reproduction_degree(get_scheme("sqrt3-iterated"), 4)
    assert result.degree is not None and result.degree >= 1


@pytest.mark.parametrize("name", list(SCHEMES))
def test_reproduction_within_generation(name):
    mask = get_scheme(name)
    generation = generation_degree(mask, CAP).degree
    reproduction = reproduction_degree(mask, CAP).degree
    assert reproduction is not None and generation is not None
    assert reproduction <= generation


@pytest.mark.parametrize("name", ["butterfly", "dubuc-deslauriers-4pt"])
def test_interpolatory_schemes_reproduce_what_they_generate(name):
    mask = get_scheme(name)
    assert compute_tau(mask) == (0,) * mask.dimension
    assert reproduction_degree(mask, CAP).degree == generation_degree(mask, CAP).degree


@pytest.mark.parametrize("name", list(SCHEMES))
def test_shift_covariance(name, rng):
    mask = get_scheme(name)
    base = reproduction_degree(mask, 6)
    base_tau = base.tau_values()
    for _ in range(20):
        alpha = tuple(rng.randint(-3, 3) for _ in range(mask.dimension))
        shifted = reproduction_degree(shift_mask(mask, alpha), 6)
        assert shifted.tau_values() == tuple(t + a for t, a in zip(base_tau, alpha))
        assert shifted.degree == base.degree


@pytest.mark.parametrize("name", ["box-222", "cubic-bspline"])
def test_shift_preserves_generation_degree(name, rng):
    mask = get_scheme(name)
    base_generation = generation_degree(mask, 6).degree
    for _ in range(5):
        alpha = tuple(rng.randint(-3, 3) for _ in range(mask.dimension))
        assert generation_degree(shift_mask(mask, alpha), 6).degree == base_generation


def test_shift_binomial_identity(rng):
    for _ in range(30):
        j = (rng.randint(0, 3), rng.randint(0, 3))
        tau = (Fraction(rng.randint(-6, 6), 2), Fraction(rng.randint(-6, 6), 3))
        alpha = (rng.randint(-3, 3), rng.randint(-3, 3))
        assert shift_binomial_identity(j, tau, alpha)


# ============================================================================
# EQUIVALENT FORMULATIONS
# ============================================================================

@pytest.mark.parametrize("name", list(SCHEMES))
def test_submask_derivatives_agree_with_zero_conditions(name):
    mask = get_scheme(name)
    generation = generation_degree(mask, CAP).degree
    for k in range(1, max(generation + 3, 6)):
        assert submask_derivative_consistency(mask, k) == check_Z(mask, k).passed


@pytest.mark.parametrize("name", list(SCHEMES))
def test_sum_rule_moments_agree_with_zero_conditions(name):
    mask = get_scheme(name)
    window = mask.modulus if mask.dimension == 3 else None
    generation = generation_degree(mask, CAP).degree
    for k in (generation + 1, generation + 2):
        assert sum_rule_moment_check(mask, k, window) == check_Z(mask, k).passed


@pytest.mark.parametrize("name", list(SCHEMES))
def test_moment_conditions_agree_with_reproduction(name):
    mask = get_scheme(name)
    result = reproduction_degree(mask, CAP)
    tau = result.tau_values()
    assert moment_condition_check(mask, tau, result.degree).passed
    failed = moment_condition_check(mask, tau, result.degree + 1)
    assert not failed.passed
    assert failed.window == default_moment_window(mask)
    assert failed.max_violation is not None


def test_moment_window_must_be_positive():
    with pytest.raises(InvalidArgumentError):
        moment_condition_check(get_scheme("cubic-bspline"), (2,), 1, window=0)


# ============================================================================
# REPORT
# ============================================================================

def test_analyze_box_222():
    report = analyze(get_scheme("box-222"), CAP)
    assert report.name == "box-222"
    assert report.value_at_one == "4"
    assert report.normalization == 4
    assert [s.value for s in report.submask_sums] == ["1", "1", "1", "1"]
    assert report.sum_rules_order_1
    assert not report.interpolatory
    assert report.generation_degree == 4
    assert report.tau == ["2", "2"]
    assert report.reproduction_degree == 1
    assert report.reproduction_witness.find((1, 1)).lhs == "18"
    assert {check.name for check in report.cross_checks} == {
        "submask-derivatives",
        "moment-conditions",
    }
    assert report.cross_checks_passed
    assert any("approximation order 2" in note for note in report.notes)


def test_analyze_without_sum_rules():
    report = analyze(Mask(LaurentPoly.constant(1, 2), 2, "constant"), CAP)
    assert not report.sum_rules_order_1
    assert report.generation_degree is None
    assert report.tau is None
    assert report.reproduction_degree is None
    assert [check.name for check in report.cross_checks] == ["submask-derivatives"]
    assert report.cross_checks_passed


def test_report_rejects_reproduction_beyond_generation():
    report = analyze(get_scheme("cubic-bspline"), CAP, cross_check=False)
    data = report.model_dump()
    data["reproduction_degree"] = data["generation_degree"] + 1
    with pytest.raises(ValueError):
        AnalysisReport.model_validate(data)
