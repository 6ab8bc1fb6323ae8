"""
Algebraic conditions for polynomial generation and reproduction.

Decides the zero conditions Z_k on the symbol, the generation degree, the
parametrization shift tau, and the exact reproduction degree. Two independent
equivalent formulations (submask derivatives at 1, and moment identities over
a window of grid indices) are provided as cross-checks.

All decisions are exact: values at 1 are Fractions, values at the nontrivial
root-of-unity points are CycloElements tested against the cyclotomic
polynomial.
"""

from __future__ import annotations

import functools
import itertools
import logging
import math
from fractions import Fraction
from typing import Optional, Sequence

from pydantic import BaseModel, Field, model_validator

from cyclotomic import CycloElement, eval_symbol_at_coset
from errors import DimensionMismatchError, InvalidArgumentError
from laurent import (
    LaurentPoly,
    MultiIndex,
    falling_power,
    multi_indices_of_degree,
    multi_indices_up_to,
    partial_derivative,
)
from mask import Mask, coset_reps, format_rational, is_interpolatory, subsymbol

logger = logging.getLogger("subdiv-repro.analysis")

ParamShift = tuple[Fraction, ...]

NON_SINGULARITY_NOTE = (
    "Degrees are algebraic certificates. Limit-level reproduction follows from them for "
    "convergent schemes; the converse (no reproduction beyond the certified degree) "
    "additionally assumes the scheme is non-singular."
)
APPROXIMATION_NOTE = (
    "Reproduction of degree {k} by a convergent scheme is sufficient for approximation "
    "order {k_plus_one} of the associated shift-invariant space (not computed here)."
)


# ============================================================================
# RESULT MODELS
# ============================================================================

class ConditionFailure(BaseModel):
    """One violated condition: D^j a at a point, against its required value"""

    j: list[int]
    point: str = Field(description="'one' for the all-ones point, 'eps' for a zero-set point")
    coset: list[int]
    lhs: str
    rhs: str
    lhs_numeric: Optional[list[float]] = Field(
        default=None, description="[re, im] of the left side at a zero-set point"
    )

    def describe(self) -> str:
        j = ",".join(str(c) for c in self.j)
        if self.point == "one":
            return f"D^({j}) a(1) = {self.lhs}, required {self.rhs}"
        e = ",".join(str(c) for c in self.coset)
        return f"D^({j}) a(eps_e) at e=({e}) = {self.lhs}, required {self.rhs}"


class Witness(BaseModel):
    """All failing conditions at the first failing total degree, graded-lex in j then e"""

    degree: int
    failures: list[ConditionFailure]

    @property
    def first(self) -> ConditionFailure:
        return self.failures[0]

    def find(self, j: Sequence[int], point: str = "one") -> Optional[ConditionFailure]:
        for failure in self.failures:
            if failure.j == list(j) and failure.point == point:
                return failure
        return None


class CheckResult(BaseModel):
    passed: bool
    witness: Optional[Witness] = None


class DegreeResult(BaseModel):
    degree: Optional[int]
    cap: int
    witness: Optional[Witness] = None


class ReproductionResult(BaseModel):
    tau: Optional[list[str]]
    degree: Optional[int]
    cap: int
    witness: Optional[Witness] = None

    def tau_values(self) -> Optional[ParamShift]:
        return None if self.tau is None else tuple(Fraction(t) for t in self.tau)


class MomentViolation(BaseModel):
    alpha: list[int]
    j: list[int]
    lhs: str
    rhs: str
    difference: str


class MomentCheckResult(BaseModel):
    passed: bool
    window: int
    checked: int
    max_violation: Optional[MomentViolation] = None


class SubmaskSum(BaseModel):
    coset: list[int]
    value: str


class CrossCheck(BaseModel):
    name: str
    passed: bool
    detail: str


class AnalysisReport(BaseModel):
    name: str
    dimension: int
    dilation: int
    value_at_one: str
    normalization: int
    submask_sums: list[SubmaskSum]
    sum_rules_order_1: bool
    interpolatory: bool
    cap: int
    generation_degree: Optional[int]
    generation_witness: Optional[Witness] = None
    tau: Optional[list[str]] = None
    reproduction_degree: Optional[int] = None
    reproduction_witness: Optional[Witness] = None
    cross_checks: list[CrossCheck] = []
    notes: list[str] = []

    @model_validator(mode="after")
    def _reproduction_within_generation(self) -> AnalysisReport:
        if (
            self.reproduction_degree is not None
            and self.generation_degree is not None
            and self.reproduction_degree > self.generation_degree
        ):
            raise ValueError(
                f"reproduction degree {self.reproduction_degree} exceeds "
                f"generation degree {self.generation_degree}"
            )
        return self

    @property
    def cross_checks_passed(self) -> bool:
        return all(check.passed for check in self.cross_checks)


# ============================================================================
# DERIVATIVE TABLE
# ============================================================================

def q_eval(j: Sequence[int], x: Sequence) -> Fraction:
    """q_j(x) = prod_i prod_{l=0}^{j_i - 1} (x_i - l), with q_0 = 1"""
    if any(order < 0 for order in j):
        raise InvalidArgumentError(f"negative multi-index {tuple(j)}")
    return falling_power(j, x)


class _DerivativeTable:
    """Memoized D^j a as polynomials, at 1 and at the zero-set points of one mask"""

    def __init__(self, mask: Mask):
        self.mask = mask
        self.cosets = coset_reps(mask)
        self._polys: dict[MultiIndex, LaurentPoly] = {}
        self._at_coset: dict[tuple[MultiIndex, MultiIndex], CycloElement] = {}
        self._zero: dict[tuple[MultiIndex, MultiIndex], bool] = {}

    def poly(self, j: MultiIndex) -> LaurentPoly:
        if j not in self._polys:
            self._polys[j] = partial_derivative(self.mask.symbol, j)
        return self._polys[j]

    def at_one(self, j: MultiIndex) -> Fraction:
        return self.poly(j).value_at_one()

    def at_coset(self, j: MultiIndex, e: MultiIndex) -> CycloElement:
        key = (j, e)
        if key not in self._at_coset:
            self._at_coset[key] = eval_symbol_at_coset(self.poly(j), self.mask.dilation, e)
        return self._at_coset[key]

    def vanishes_at(self, j: MultiIndex, e: MultiIndex) -> bool:
        key = (j, e)
        if key not in self._zero:
            self._zero[key] = self.at_coset(j, e).is_zero()
        return self._zero[key]


@functools.lru_cache(maxsize=64)
def _table(mask: Mask) -> _DerivativeTable:
    return _DerivativeTable(mask)


def derivative_at_one(mask: Mask, j: Sequence[int]) -> Fraction:
    """D^j a(1), exact"""
    _check_index(mask, j)
    return _table(mask).at_one(tuple(j))


def derivative_at_coset(mask: Mask, j: Sequence[int], e: Sequence[int]) -> CycloElement:
    """D^j a(eps_e) as a cyclotomic element of order |m|"""
    _check_index(mask, j)
    return _table(mask).at_coset(tuple(j), tuple(e))


def _check_index(mask: Mask, j: Sequence[int]) -> None:
    if len(j) != mask.dimension:
        raise DimensionMismatchError(f"multi-index of length {len(j)} for dimension {mask.dimension}")
    if any(order < 0 for order in j):
        raise InvalidArgumentError(f"negative multi-index {tuple(j)}")


# ============================================================================
# CONDITION FAMILIES
# ============================================================================

def _normalization_failure(mask: Mask) -> Optional[ConditionFailure]:
    value = mask.symbol.value_at_one()
    if value == mask.normalization:
        return None
    return ConditionFailure(
        j=[0] * mask.dimension,
        point="one",
        coset=[0] * mask.dimension,
        lhs=format_rational(value),
        rhs=str(mask.normalization),
    )


def _zero_set_failures(table: _DerivativeTable, j: MultiIndex) -> list[ConditionFailure]:
    failures = []
    for e in table.cosets[1:]:
        if table.vanishes_at(j, e):
            continue
        value = table.at_coset(j, e)
        numeric = value.to_complex(table.mask.dilation)
        failures.append(
            ConditionFailure(
                j=list(j),
                point="eps",
                coset=list(e),
                lhs=str(value),
                rhs="0",
                lhs_numeric=[numeric.real, numeric.imag],
            )
        )
    return failures


def _one_point_failure(
    table: _DerivativeTable, j: MultiIndex, tau: ParamShift
) -> Optional[ConditionFailure]:
    lhs = table.at_one(j)
    rhs = table.mask.normalization * q_eval(j, tau)
    if lhs == rhs:
        return None
    return ConditionFailure(
        j=list(j),
        point="one",
        coset=[0] * table.mask.dimension,
        lhs=format_rational(lhs),
        rhs=format_rational(rhs),
    )


def _zero_condition_degree(table: _DerivativeTable, degree: int) -> list[ConditionFailure]:
    failures = []
    for j in multi_indices_of_degree(table.mask.dimension, degree):
        failures.extend(_zero_set_failures(table, j))
    return failures


def _reproduction_degree_failures(
    table: _DerivativeTable, degree: int, tau: ParamShift
) -> list[ConditionFailure]:
    failures = []
    for j in multi_indices_of_degree(table.mask.dimension, degree):
        one = _one_point_failure(table, j, tau)
        if one is not None:
            failures.append(one)
        failures.extend(_zero_set_failures(table, j))
    return failures


def check_Z(mask: Mask, k: int) -> CheckResult:  # noqa: N802
    """
    Condition Z_k: a(1) = |m|^s and D^j a(eps) = 0 for eps in the zero set, |j| < k.
    """
    if k < 1:
        raise InvalidArgumentError(f"zero condition order must be >= 1, got {k}")
    normalization = _normalization_failure(mask)
    if normalization is not None:
        return CheckResult(passed=False, witness=Witness(degree=0, failures=[normalization]))
    table = _table(mask)
    for degree in range(k):
        failures = _zero_condition_degree(table, degree)
        if failures:
            return CheckResult(passed=False, witness=Witness(degree=degree, failures=failures))
    return CheckResult(passed=True)


def generation_degree(mask: Mask, cap: int) -> DegreeResult:
    """Largest k <= cap such that Z_{k+1} holds; absent when Z_1 fails"""
    if cap < 0:
        raise InvalidArgumentError(f"cap must be >= 0, got {cap}")
    normalization = _normalization_failure(mask)
    if normalization is not None:
        return DegreeResult(degree=None, cap=cap, witness=Witness(degree=0, failures=[normalization]))
    table = _table(mask)
    for degree in range(cap + 1):
        failures = _zero_condition_degree(table, degree)
        if failures:
            logger.debug(f"{mask.name or 'mask'}: zero conditions fail at degree {degree}")
            return DegreeResult(
                degree=degree - 1 if degree > 0 else None,
                cap=cap,
                witness=Witness(degree=degree, failures=failures),
            )
    return DegreeResult(degree=cap, cap=cap)


def raw_tau(mask: Mask) -> ParamShift:
    """|m|^{-s} (D^{e_1} a(1), ..., D^{e_s} a(1)) regardless of sum rules"""
    table = _table(mask)
    s = mask.dimension
    return tuple(
        table.at_one(tuple(int(i == axis) for i in range(s))) / mask.normalization
        for axis in range(s)
    )


def compute_tau(mask: Mask) -> Optional[ParamShift]:
    """The parametrization shift, reported only when Condition Z_1 holds"""
    if not check_Z(mask, 1).passed:
        return None
    return raw_tau(mask)


def check_reproduction(mask: Mask, tau: Sequence, k: int) -> CheckResult:
    """
    D^j a(1) = |m|^s q_j(tau) and D^j a(eps) = 0 on the zero set, for all |j| <= k.
    """
    if k < 0:
        raise InvalidArgumentError(f"degree must be >= 0, got {k}")
    if len(tau) != mask.dimension:
        raise DimensionMismatchError(f"tau of length {len(tau)} for dimension {mask.dimension}")
    tau = tuple(Fraction(t) for t in tau)
    table = _table(mask)
    for degree in range(k + 1):
        failures = _reproduction_degree_failures(table, degree, tau)
        if failures:
            return CheckResult(passed=False, witness=Witness(degree=degree, failures=failures))
    return CheckResult(passed=True)


def reproduction_degree(mask: Mask, cap: int) -> ReproductionResult:
    """tau from compute_tau and the largest k <= cap passing check_reproduction"""
    if cap < 0:
        raise InvalidArgumentError(f"cap must be >= 0, got {cap}")
    z1 = check_Z(mask, 1)
    if not z1.passed:
        return ReproductionResult(tau=None, degree=None, cap=cap, witness=z1.witness)
    tau = raw_tau(mask)
    tau_text = [format_rational(t) for t in tau]
    table = _table(mask)
    for degree in range(cap + 1):
        failures = _reproduction_degree_failures(table, degree, tau)
        if failures:
            logger.debug(f"{mask.name or 'mask'}: reproduction fails at degree {degree}")
            return ReproductionResult(
                tau=tau_text,
                degree=degree - 1 if degree > 0 else None,
                cap=cap,
                witness=Witness(degree=degree, failures=failures),
            )
    return ReproductionResult(tau=tau_text, degree=cap, cap=cap)


# ============================================================================
# EQUIVALENT FORMULATIONS
# ============================================================================

def submask_derivative_consistency(mask: Mask, k: int) -> bool:
    """
    a(1) = |m|^s and D^j a_e(1) = |m|^{-s} D^j a(1) for every coset e and |j| < k.

    Equivalent to Condition Z_k.
    """
    if k < 1:
        raise InvalidArgumentError(f"order must be >= 1, got {k}")
    if _normalization_failure(mask) is not None:
        return False
    table = _table(mask)
    submasks = [subsymbol(mask, e) for e in table.cosets]
    ones = (1,) * mask.dimension
    for j in multi_indices_up_to(mask.dimension, k - 1):
        target = table.at_one(j) / mask.normalization
        for sub in submasks:
            if partial_derivative(sub, j).eval_rational(ones) != target:
                return False
    return True


def _coset_stencils(mask: Mask) -> tuple[int, dict[MultiIndex, list[tuple[MultiIndex, int]]]]:
    """Mask coefficients as integers over a common denominator, grouped by coset"""
    denominator = math.lcm(*(v.denominator for v in mask.symbol.coeffs.values())) if len(mask.symbol) else 1
    n = mask.modulus
    groups: dict[MultiIndex, list[tuple[MultiIndex, int]]] = {}
    for key, value in mask.symbol.items():
        residue = tuple(c % n for c in key)
        groups.setdefault(residue, []).append((key, int(value * denominator)))
    return denominator, groups


def sum_rule_moment_check(mask: Mask, k: int, window: Optional[int] = None) -> bool:
    """
    a(1) = |m|^s and sum_beta q_j(alpha - m beta) a_{alpha - m beta} = |m|^{-s} D^j a(1)
    for alpha in [-window, window]^s and |j| < k. Equivalent to Condition Z_k.
    """
    if k < 1:
        raise InvalidArgumentError(f"order must be >= 1, got {k}")
    if window is None:
        window = default_moment_window(mask)
    if _normalization_failure(mask) is not None:
        return False
    table = _table(mask)
    n = mask.modulus
    groups: dict[MultiIndex, list[tuple[MultiIndex, Fraction]]] = {}
    for key, value in mask.symbol.items():
        groups.setdefault(tuple(c % n for c in key), []).append((key, value))
    indices = multi_indices_up_to(mask.dimension, k - 1)
    targets = {j: table.at_one(j) / mask.normalization for j in indices}
    for alpha in itertools.product(range(-window, window + 1), repeat=mask.dimension):
        stencil = groups.get(tuple(a % n for a in alpha), [])
        for j in indices:
            total = sum((q_eval(j, key) * value for key, value in stencil), Fraction(0))
            if total != targets[j]:
                return False
    return True


def default_moment_window(mask: Mask) -> int:
    return mask.support_diameter() + 2 * mask.modulus


def moment_condition_check(
    mask: Mask, tau: Sequence, k: int, window: Optional[int] = None
) -> MomentCheckResult:
    """
    sum_beta a_{alpha - m beta} beta^j = ((alpha - tau) / m)^j for alpha in [-window, window]^s
    and |j| <= k, exactly. Reports the largest violation found.
    """
    if window is None:
        window = default_moment_window(mask)
    if window < 1:
        raise InvalidArgumentError(f"window must be >= 1, got {window}")
    if len(tau) != mask.dimension:
        raise DimensionMismatchError(f"tau of length {len(tau)} for dimension {mask.dimension}")
    tau = tuple(Fraction(t) for t in tau)
    m, n, s = mask.dilation, mask.modulus, mask.dimension
    denominator, groups = _coset_stencils(mask)
    indices = multi_indices_up_to(s, k)
    worst: Optional[MomentViolation] = None
    worst_size = Fraction(0)
    checked = 0
    for alpha in itertools.product(range(-window, window + 1), repeat=s):
        stencil = [
            (tuple((a - c) // m for a, c in zip(alpha, key)), numerator)
            for key, numerator in groups.get(tuple(a % n for a in alpha), [])
        ]
        bases = [(Fraction(a) - t) / m for a, t in zip(alpha, tau)]
        for j in indices:
            total = 0
            for beta, numerator in stencil:
                term = numerator
                for b, power in zip(beta, j):
                    term *= b ** power
                total += term
            lhs = Fraction(total, denominator)
            rhs = Fraction(1)
            for base, power in zip(bases, j):
                rhs *= base ** power
            checked += 1
            difference = abs(lhs - rhs)
            if difference > worst_size:
                worst_size = difference
                worst = MomentViolation(
                    alpha=list(alpha),
                    j=list(j),
                    lhs=format_rational(lhs),
                    rhs=format_rational(rhs),
                    difference=format_rational(difference),
                )
    return MomentCheckResult(passed=worst is None, window=window, checked=checked, max_violation=worst)


def shift_binomial_identity(j: Sequence[int], tau: Sequence, alpha: Sequence[int]) -> bool:
    """q_j(tau + alpha) = sum_{l <= j} C(j, l) q_l(alpha) q_{j-l}(tau)"""
    shifted = q_eval(j, [Fraction(t) + a for t, a in zip(tau, alpha)])
    total = Fraction(0)
    for ell in itertools.product(*(range(order + 1) for order in j)):
        weight = math.prod(math.comb(order, part) for order, part in zip(j, ell))
        rest = [order - part for order, part in zip(j, ell)]
        total += weight * q_eval(ell, alpha) * q_eval(rest, tau)
    return shifted == total


# ============================================================================
# REPORT
# ============================================================================

def _cross_checks(
    mask: Mask, generation: DegreeResult, reproduction: ReproductionResult
) -> list[CrossCheck]:
    checks = []
    top = (generation.degree if generation.degree is not None else -1) + 2
    orders = range(1, min(top, generation.cap + 1) + 1)
    mismatched = [
        k for k in orders if check_Z(mask, k).passed != submask_derivative_consistency(mask, k)
    ]
    checks.append(
        CrossCheck(
            name="submask-derivatives",
            passed=not mismatched,
            detail=(
                f"Z_k agrees with submask derivatives for k in 1..{orders.stop - 1}"
                if not mismatched
                else f"disagreement at k = {mismatched}"
            ),
        )
    )
    tau = reproduction.tau_values()
    if tau is not None:
        certified = reproduction.degree if reproduction.degree is not None else -1
        degrees = [d for d in (certified, certified + 1) if 0 <= d <= reproduction.cap]
        window = default_moment_window(mask)
        mismatched = []
        for d in degrees:
            expected = d <= certified
            if moment_condition_check(mask, tau, d, window).passed != expected:
                mismatched.append(d)
        checks.append(
            CrossCheck(
                name="moment-conditions",
                passed=not mismatched,
                detail=(
                    f"moment identities agree at degrees {degrees} (window {window})"
                    if not mismatched
                    else f"disagreement at degrees {mismatched} (window {window})"
                ),
            )
        )
    return checks


def analyze(
    mask: Mask,
    cap: int,
    cross_check: bool = True,
    extra_notes: Sequence[str] = (),
) -> AnalysisReport:
    """Generation degree, tau, reproduction degree and evidence for one mask"""
    logger.debug(f"Analyzing {mask.name or 'mask'} (s={mask.dimension}, m={mask.dilation}, cap={cap})")
    generation = generation_degree(mask, cap)
    reproduction = reproduction_degree(mask, cap)
    ones = (1,) * mask.dimension
    notes = [NON_SINGULARITY_NOTE]
    if reproduction.degree is not None:
        notes.append(APPROXIMATION_NOTE.format(k=reproduction.degree, k_plus_one=reproduction.degree + 1))
    notes.extend(extra_notes)
    return AnalysisReport(
        name=mask.name or "mask",
        dimension=mask.dimension,
        dilation=mask.dilation,
        value_at_one=format_rational(mask.symbol.value_at_one()),
        normalization=mask.normalization,
        submask_sums=[
            SubmaskSum(coset=list(e), value=format_rational(subsymbol(mask, e).eval_rational(ones)))
            for e in coset_reps(mask)
        ],
        sum_rules_order_1=check_Z(mask, 1).passed,
        interpolatory=is_interpolatory(mask),
        cap=cap,
        generation_degree=generation.degree,
        generation_witness=generation.witness,
        tau=reproduction.tau,
        reproduction_degree=reproduction.degree,
        reproduction_witness=reproduction.witness,
        cross_checks=_cross_checks(mask, generation, reproduction) if cross_check else [],
        notes=notes,
    )
