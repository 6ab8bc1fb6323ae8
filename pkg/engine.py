"""
The subdivision operator on finite grids, parametrizations, the step-wise
reproduction oracle and cascade sampling of the basic limit function.

Grid values are exact Fractions. Finite grids truncate the bi-infinite sums of
the subdivision operator, so every grid carries a trusted region: the indices
whose values are stencil-complete.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from pydantic import BaseModel

from config import CASCADE_MAX_STEPS
from errors import DimensionMismatchError, EmptyTrustedRegionError, InvalidArgumentError
from laurent import LaurentPoly, MultiIndex, grlex_key, multi_indices_up_to
from mask import Mask, format_rational

logger = logging.getLogger("subdiv-repro.engine")

Box = tuple[MultiIndex, MultiIndex]
_VARIABLES = ("x", "y", "z")


def box_is_empty(box: Box) -> bool:
    return any(lo > hi for lo, hi in zip(*box))


def box_indices(box: Box) -> list[MultiIndex]:
    """All indices in a box, graded-lex"""
    if box_is_empty(box):
        return []
    ranges = [range(lo, hi + 1) for lo, hi in zip(*box)]
    return sorted(itertools.product(*ranges), key=grlex_key)


def box_contains(box: Box, alpha: Sequence[int]) -> bool:
    return all(lo <= a <= hi for a, lo, hi in zip(alpha, *box))


def box_size(box: Box) -> int:
    if box_is_empty(box):
        return 0
    return math.prod(hi - lo + 1 for lo, hi in zip(*box))


def centered_box(dimension: int, radius: int) -> Box:
    if radius < 1:
        raise InvalidArgumentError(f"box radius must be >= 1, got {radius}")
    return (-radius,) * dimension, (radius,) * dimension


def _empty_box(upper: Sequence[int]) -> Box:
    return tuple(u + 1 for u in upper), tuple(upper)


# ============================================================================
# GRID DATA
# ============================================================================

@dataclass
class GridData:
    """
    Values on an integer box at refinement level `level`.

    Indices inside the box without a stored value are zero. The trusted region
    is the box `trusted`, or exactly `trusted_points` when that set is given
    (it then lies inside `trusted`, which is its bounding box). With
    `finite_support` set the data is taken to vanish outside the box, which
    makes every output of a subdivision step trusted.
    """

    dimension: int
    lower: MultiIndex
    upper: MultiIndex
    values: dict[MultiIndex, Fraction] = field(default_factory=dict)
    trusted: Optional[Box] = None
    trusted_points: Optional[frozenset[MultiIndex]] = None
    level: int = 0
    dilation: Optional[int] = None
    finite_support: bool = False

    def __post_init__(self):
        if len(self.lower) != self.dimension or len(self.upper) != self.dimension:
            raise DimensionMismatchError(f"box bounds do not match dimension {self.dimension}")
        for index in self.values:
            if not box_contains(self.box, index):
                raise InvalidArgumentError(f"index {index} lies outside the box {self.box}")
        if self.trusted is None:
            if self.trusted_points is not None:
                raise InvalidArgumentError("trusted points need their bounding box")
            self.trusted = self.box
        elif not box_is_empty(self.trusted) and not (
            box_contains(self.box, self.trusted[0]) and box_contains(self.box, self.trusted[1])
        ):
            raise InvalidArgumentError(f"trusted box {self.trusted} exceeds the support box {self.box}")
        if self.trusted_points is not None and not all(
            box_contains(self.trusted, index) for index in self.trusted_points
        ):
            raise InvalidArgumentError(f"trusted points leave the trusted box {self.trusted}")

    @property
    def box(self) -> Box:
        return self.lower, self.upper

    def value(self, index: Sequence[int]) -> Fraction:
        return self.values.get(tuple(index), Fraction(0))

    def is_trusted(self, index: Sequence[int]) -> bool:
        if box_is_empty(self.trusted) or not box_contains(self.trusted, index):
            return False
        return self.trusted_points is None or tuple(index) in self.trusted_points

    def trusted_indices(self) -> list[MultiIndex]:
        if self.trusted_points is None:
            return box_indices(self.trusted)
        return sorted(self.trusted_points, key=grlex_key)

    def trusted_count(self) -> int:
        if self.trusted_points is None:
            return box_size(self.trusted)
        return len(self.trusted_points)

    def items(self) -> list[tuple[MultiIndex, Fraction]]:
        return sorted(self.values.items(), key=lambda kv: grlex_key(kv[0]))

    def total(self) -> Fraction:
        return sum(self.values.values(), Fraction(0))

    def point(self, index: Sequence[int]) -> tuple[Fraction, ...]:
        """Standard level-r grid location alpha / m^r"""
        if self.dilation is None or self.level == 0:
            return tuple(Fraction(a) for a in index)
        scale = Fraction(1, self.dilation ** self.level)
        return tuple(a * scale for a in index)


def grid_from_values(
    dimension: int, values: dict[Sequence[int], object], finite_support: bool = False
) -> GridData:
    """GridData on the bounding box of the given indices"""
    if not values:
        raise InvalidArgumentError("grid data needs at least one value")
    canonical = {}
    for key, value in values.items():
        key = tuple(int(k) for k in key)
        if len(key) != dimension:
            raise DimensionMismatchError(f"index {key} has length {len(key)}, expected {dimension}")
        canonical[key] = Fraction(value)
    lower = tuple(min(k[i] for k in canonical) for i in range(dimension))
    upper = tuple(max(k[i] for k in canonical) for i in range(dimension))
    return GridData(dimension, lower, upper, canonical, finite_support=finite_support)


def delta_grid(dimension: int) -> GridData:
    origin = (0,) * dimension
    return GridData(dimension, origin, origin, {origin: Fraction(1)}, finite_support=True)


# ============================================================================
# SUBDIVISION
# ============================================================================

def _common_denominator(values) -> int:
    return math.lcm(*(v.denominator for v in values)) if values else 1


def _signed_span(m: int, lo: int, hi: int) -> tuple[int, int]:
    a, b = m * lo, m * hi
    return min(a, b), max(a, b)


def _coset_stencils(mask: Mask) -> tuple[int, dict[MultiIndex, list[tuple[MultiIndex, int]]]]:
    """
    Common denominator of the mask and, per residue c of an output index mod |m|,
    the pairs (delta, numerator). For alpha = |m| gamma + c the output reads the
    input at sign(m) (gamma + delta).
    """
    n = mask.modulus
    denominator = _common_denominator(list(mask.symbol.coeffs.values()))
    groups: dict[MultiIndex, list[tuple[MultiIndex, int]]] = {}
    for key, value in mask.symbol.items():
        residue = tuple(k % n for k in key)
        delta = tuple((c - k) // n for c, k in zip(residue, key))
        groups.setdefault(residue, []).append((delta, int(value * denominator)))
    return denominator, groups


def _box_product(lower: Sequence[int], upper: Sequence[int]):
    return itertools.product(*(range(lo, hi + 1) for lo, hi in zip(lower, upper)))


def _stencil_complete(
    mask: Mask,
    groups: dict[MultiIndex, list[tuple[MultiIndex, int]]],
    d: GridData,
    lower: MultiIndex,
    upper: MultiIndex,
) -> tuple[Box, Optional[frozenset[MultiIndex]]]:
    """
    Output indices in the support box all of whose inputs d_beta with
    a_{alpha - m beta} != 0 are trusted, as a bounding box plus the exact set
    when it is not the whole box.
    """
    if d.finite_support:
        return (lower, upper), None
    if box_is_empty(d.trusted):
        return _empty_box(upper), None
    n, sign = mask.modulus, (1 if mask.dilation > 0 else -1)
    if sign > 0:
        t_lower, t_upper = d.trusted
    else:
        t_lower = tuple(-hi for hi in d.trusted[1])
        t_upper = tuple(-lo for lo in d.trusted[0])

    points: list[MultiIndex] = []
    for residue in itertools.product(range(n), repeat=mask.dimension):
        deltas = [delta for delta, _ in groups.get(residue, [])]
        if deltas:
            g_lower = [lo - min(delta[i] for delta in deltas) for i, lo in enumerate(t_lower)]
            g_upper = [hi - max(delta[i] for delta in deltas) for i, hi in enumerate(t_upper)]
        else:
            # no stencil: the output is zero whatever the data
            g_lower = [-((c - lo) // n) for c, lo in zip(residue, lower)]
            g_upper = [(hi - c) // n for c, hi in zip(residue, upper)]
        for gamma in _box_product(g_lower, g_upper):
            if d.trusted_points is not None and not all(
                tuple(sign * (g + dl) for g, dl in zip(gamma, delta)) in d.trusted_points
                for delta in deltas
            ):
                continue
            points.append(tuple(n * g + c for g, c in zip(gamma, residue)))

    if not points:
        return _empty_box(upper), None
    s = mask.dimension
    hull = (
        tuple(min(p[i] for p in points) for i in range(s)),
        tuple(max(p[i] for p in points) for i in range(s)),
    )
    if len(points) == box_size(hull):
        return hull, None
    return hull, frozenset(points)


def _scatter(mask: Mask, d: GridData, mask_den: int, data_den: int) -> dict[MultiIndex, int]:
    """Integer numerators of every output, scattered from each stored input"""
    m = mask.dilation
    stencil = [(key, int(value * mask_den)) for key, value in mask.symbol.coeffs.items()]
    totals: dict[MultiIndex, int] = {}
    for beta, value in d.values.items():
        if not value:
            continue
        numerator = int(value * data_den)
        base = tuple(m * b for b in beta)
        for key, weight in stencil:
            alpha = tuple(b + k for b, k in zip(base, key))
            totals[alpha] = totals.get(alpha, 0) + weight * numerator
    return totals


def _gather(
    mask: Mask,
    groups: dict[MultiIndex, list[tuple[MultiIndex, int]]],
    d: GridData,
    data_den: int,
    trusted: Box,
    points: Optional[frozenset[MultiIndex]],
) -> dict[MultiIndex, int]:
    """Integer numerators of the trusted outputs, each read from a dense copy of d"""
    if box_is_empty(trusted):
        return {}
    n, sign = mask.modulus, (1 if mask.dilation > 0 else -1)
    widths = [hi - lo + 1 for lo, hi in zip(d.lower, d.upper)]
    strides = [math.prod(widths[i + 1:]) for i in range(len(widths))]
    dense = [0] * math.prod(widths)
    for beta, value in d.values.items():
        dense[sum((b - lo) * st for b, lo, st in zip(beta, d.lower, strides))] = int(value * data_den)
    offsets = {
        residue: [(sum(sign * dl * st for dl, st in zip(delta, strides)), weight) for delta, weight in stencil]
        for residue, stencil in groups.items()
    }

    outputs = _box_product(*trusted) if points is None else points
    totals: dict[MultiIndex, int] = {}
    for alpha in outputs:
        base = sum((sign * (a // n) - lo) * st for a, lo, st in zip(alpha, d.lower, strides))
        stencil = offsets.get(tuple(a % n for a in alpha), ())
        totals[alpha] = sum(weight * dense[base + offset] for offset, weight in stencil)
    return totals


def subdivide_once(mask: Mask, d: GridData, trusted_only: bool = False) -> GridData:
    """
    (S_a d)_alpha = sum_beta a_{alpha - m beta} d_beta, exact.

    With `trusted_only` only the stencil-complete outputs are computed.
    """
    if mask.dimension != d.dimension:
        raise DimensionMismatchError(f"mask dimension {mask.dimension} vs data dimension {d.dimension}")
    m, s = mask.dilation, mask.dimension
    k_lower, k_upper = mask.symbol.support_box()

    lower, upper = [], []
    for axis in range(s):
        lo, hi = _signed_span(m, d.lower[axis], d.upper[axis])
        lower.append(lo + k_lower[axis])
        upper.append(hi + k_upper[axis])
    lower, upper = tuple(lower), tuple(upper)

    mask_den, groups = _coset_stencils(mask)
    trusted, points = _stencil_complete(mask, groups, d, lower, upper)
    data_den = _common_denominator(list(d.values.values()))
    if trusted_only and not d.finite_support:
        totals = _gather(mask, groups, d, data_den, trusted, points)
    else:
        totals = _scatter(mask, d, mask_den, data_den)

    denominator = mask_den * data_den
    logger.debug(f"subdivide_once: {len(d.values)} inputs -> {len(totals)} outputs")
    return GridData(
        s,
        lower,
        upper,
        {alpha: Fraction(total, denominator) for alpha, total in totals.items() if total},
        trusted=trusted,
        trusted_points=points,
        level=d.level + 1,
        dilation=m,
        finite_support=d.finite_support,
    )


def cascade(mask: Mask, r: int) -> GridData:
    """S_a^r applied to delta data, with the level-r grid geometry attached"""
    if r < 0 or r > CASCADE_MAX_STEPS:
        raise InvalidArgumentError(f"cascade steps must lie in [0, {CASCADE_MAX_STEPS}], got {r}")
    grid = delta_grid(mask.dimension)
    grid.dilation = mask.dilation
    for step in range(r):
        grid = subdivide_once(mask, grid)
        logger.debug(f"cascade step {step + 1}/{r}: box {grid.box}")
    return grid


# ============================================================================
# POLYNOMIALS AND PARAMETRIZATION
# ============================================================================

@dataclass(frozen=True)
class PolyFunc:
    """A polynomial pi(x) with nonnegative exponents"""

    poly: LaurentPoly

    def __post_init__(self):
        if any(e < 0 for key in self.poly.coeffs for e in key):
            raise InvalidArgumentError("polynomial exponents must be nonnegative")

    @classmethod
    def from_terms(cls, dimension: int, terms: dict[Sequence[int], object]) -> PolyFunc:
        return cls(LaurentPoly(dimension, terms))

    @classmethod
    def monomial(cls, j: Sequence[int]) -> PolyFunc:
        return cls(LaurentPoly.monomial(tuple(j)))

    @property
    def dimension(self) -> int:
        return self.poly.dimension

    @property
    def degree(self) -> int:
        return max((sum(key) for key in self.poly.coeffs), default=0)

    def __call__(self, x: Sequence) -> Fraction:
        return self.poly.eval_rational(x)

    def __str__(self) -> str:
        if self.poly.is_zero():
            return "0"
        names = (
            _VARIABLES[: self.dimension]
            if self.dimension <= len(_VARIABLES)
            else [f"x{i}" for i in range(1, self.dimension + 1)]
        )
        parts = []
        for exponent, value in self.poly.items():
            factors = [
                name if e == 1 else f"{name}^{e}" for name, e in zip(names, exponent) if e
            ]
            monomial = "*".join(factors)
            if not monomial:
                parts.append(str(value))
            elif value == 1:
                parts.append(monomial)
            elif value == -1:
                parts.append(f"-{monomial}")
            else:
                parts.append(f"{value}*{monomial}")
        return " + ".join(parts).replace("+ -", "- ")


def monomials_up_to(dimension: int, k: int) -> list[PolyFunc]:
    """x^j for every |j| <= k, graded-lex"""
    return [PolyFunc.monomial(j) for j in multi_indices_up_to(dimension, k)]


def _check_level(m: int, r: int) -> None:
    if abs(m) < 2:
        raise InvalidArgumentError(f"dilation must satisfy |m| >= 2, got {m}")
    if r < 0:
        raise InvalidArgumentError(f"level must be >= 0, got {r}")


def _level_coordinates(t, m: int, r: int, lo: int, hi: int) -> list[Fraction]:
    shift = sum((Fraction(1, m ** i) for i in range(1, r + 1)), Fraction(0))
    step = Fraction(1, m ** r)
    offset = -Fraction(t) * shift
    return [offset + a * step for a in range(lo, hi + 1)]


def param_point(tau: Sequence, m: int, r: int, alpha: Sequence[int]) -> tuple[Fraction, ...]:
    """t^(r)_alpha = -tau * sum_{i=1}^r m^-i + alpha / m^r"""
    _check_level(m, r)
    if len(tau) != len(alpha):
        raise DimensionMismatchError(f"tau of length {len(tau)} vs index of length {len(alpha)}")
    return tuple(_level_coordinates(t, m, r, a, a)[0] for t, a in zip(tau, alpha))


class _LevelSampler:
    """
    pi at the level-r parameter values of the indices in a box.

    Coordinates and their powers are tabulated once per axis, so a sample
    costs a few table lookups per term of pi.
    """

    def __init__(self, poly: PolyFunc, tau: Sequence, m: int, r: int, box: Box):
        _check_level(m, r)
        if len(tau) != poly.dimension or len(box[0]) != poly.dimension:
            raise DimensionMismatchError(f"sampling a {poly.dimension}-variate polynomial")
        self.lower = box[0]
        self.terms = poly.poly.items()
        self.powers: list[list[list[Fraction]]] = []
        for axis, (t, lo, hi) in enumerate(zip(tau, *box)):
            coordinates = _level_coordinates(t, m, r, lo, hi)
            table = [[Fraction(1)] * len(coordinates)]
            for _ in range(max((key[axis] for key, _ in self.terms), default=0)):
                table.append([p * c for p, c in zip(table[-1], coordinates)])
            self.powers.append(table)

    def __call__(self, alpha: Sequence[int]) -> Fraction:
        total = Fraction(0)
        for key, coefficient in self.terms:
            term = coefficient
            for table, e, a, lo in zip(self.powers, key, alpha, self.lower):
                if e:
                    term *= table[e][a - lo]
            total += term
        return total


def sample_polynomial(poly: PolyFunc, tau: Sequence, m: int, r: int, box: Box) -> GridData:
    """pi at the level-r parameter values on a box; the whole box is trusted"""
    sampler = _LevelSampler(poly, tau, m, r, box)
    values = {alpha: sampler(alpha) for alpha in _box_product(*box)}
    return GridData(poly.dimension, box[0], box[1], values, level=r, dilation=m)


# ============================================================================
# STEP-WISE ORACLE
# ============================================================================

class OracleReport(BaseModel):
    polynomial: str
    exponent: Optional[list[int]] = None
    degree: int
    level: int
    passed: bool
    checked: int
    covers_cosets: bool
    worst_residual: str
    worst_index: Optional[list[int]] = None
    trusted_lower: list[int]
    trusted_upper: list[int]


def default_oracle_radius(mask: Mask) -> int:
    return mask.support_radius() + 2 * mask.modulus


def stepwise_oracle(
    mask: Mask, poly: PolyFunc, tau: Sequence, r: int, box: Optional[Box] = None
) -> OracleReport:
    """
    Sample pi at level r, subdivide once and compare with pi at level r + 1 on the
    trusted region. Passing means every residual is exactly zero.

    Only the stencil-complete outputs are computed. `covers_cosets` tells
    whether they meet every residue class of Z^s / mZ^s.
    """
    if poly.dimension != mask.dimension:
        raise DimensionMismatchError(f"polynomial dimension {poly.dimension} vs mask {mask.dimension}")
    if box is None:
        box = centered_box(mask.dimension, default_oracle_radius(mask))
    data = sample_polynomial(poly, tau, mask.dilation, r, box)
    refined = subdivide_once(mask, data, trusted_only=True)
    trusted = refined.trusted_indices()
    if not trusted:
        raise EmptyTrustedRegionError(
            f"box {box} is too small for the stencil of {mask.name or 'the mask'}; "
            f"use a radius of at least {default_oracle_radius(mask)}"
        )
    expected = _LevelSampler(poly, tau, mask.dilation, r + 1, refined.trusted)
    worst, worst_index = Fraction(0), None
    for alpha in trusted:
        residual = refined.value(alpha) - expected(alpha)
        if abs(residual) > abs(worst):
            worst, worst_index = residual, list(alpha)
    n = mask.modulus
    residues = {tuple(a % n for a in alpha) for alpha in trusted}
    exponents = list(poly.poly.coeffs)
    logger.debug(f"oracle {poly} at level {r}: {len(trusted)} trusted outputs")
    return OracleReport(
        polynomial=str(poly),
        exponent=list(exponents[0]) if len(exponents) == 1 else None,
        degree=poly.degree,
        level=r,
        passed=worst_index is None,
        checked=len(trusted),
        covers_cosets=len(residues) == n ** mask.dimension,
        worst_residual=format_rational(worst),
        worst_index=worst_index,
        trusted_lower=list(refined.trusted[0]),
        trusted_upper=list(refined.trusted[1]),
    )
