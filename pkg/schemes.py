"""
Built-in subdivision schemes: box splines, interpolatory schemes, a trivariate
example and the iterated sqrt(3) scheme, plus a registry used by the CLI and
the MCP tools.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence

from sympy import Matrix

from errors import InvalidArgumentError
from laurent import LaurentPoly, mul, product_of_factors
from mask import Mask, shift_mask

logger = logging.getLogger("subdiv-repro.schemes")


# ============================================================================
# BOX SPLINES
# ============================================================================

@dataclass(frozen=True)
class DirectionMatrix:
    """s x n integer matrix whose columns are the box-spline directions"""

    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if not self.rows or not self.rows[0]:
            raise InvalidArgumentError("direction matrix must be non-empty")
        if any(len(row) != len(self.rows[0]) for row in self.rows):
            raise InvalidArgumentError("direction matrix rows must have equal length")
        if self.n < self.s:
            raise InvalidArgumentError(f"need at least s={self.s} directions, got {self.n}")
        if Matrix(self.rows).rank() != self.s:
            raise InvalidArgumentError(f"direction matrix {self.as_lists()} is rank deficient")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> DirectionMatrix:
        return cls(tuple(tuple(int(v) for v in row) for row in rows))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]]) -> DirectionMatrix:
        return cls.from_rows(list(zip(*columns)))

    @property
    def s(self) -> int:
        return len(self.rows)

    @property
    def n(self) -> int:
        return len(self.rows[0])

    def columns(self) -> list[tuple[int, ...]]:
        return [tuple(col) for col in zip(*self.rows)]

    def as_lists(self) -> list[list[int]]:
        return [list(row) for row in self.rows]


def box_spline(theta: DirectionMatrix, name: str = "") -> Mask:
    """a(z) = 2^s prod_theta (1 + z^theta) / 2, dilation 2"""
    symbol = product_of_factors(theta.s, [(col, 1) for col in theta.columns()])
    return Mask(symbol * 2 ** theta.s, 2, name)


def box_spline_tau(theta: DirectionMatrix) -> tuple[Fraction, ...]:
    """Half the row sums of the direction matrix"""
    return tuple(Fraction(sum(row), 2) for row in theta.rows)


def is_unimodular(theta: DirectionMatrix) -> bool:
    """Every nonzero s x s minor is +1 or -1, and at least one minor is nonzero"""
    nonzero = False
    columns = theta.columns()
    for chosen in itertools.combinations(range(theta.n), theta.s):
        det = Matrix([columns[c] for c in chosen]).T.det()
        if det == 0:
            continue
        if abs(det) != 1:
            return False
        nonzero = True
    return nonzero


def three_directional_directions(k: int, l: int, n: int) -> DirectionMatrix:  # noqa: E741
    return DirectionMatrix.from_columns([(1, 0)] * k + [(0, 1)] * l + [(1, 1)] * n)


def three_directional(k: int, l: int, n: int) -> Mask:  # noqa: E741
    """B_{k,l,n}(z) = 4 ((1+z1)/2)^k ((1+z2)/2)^l ((1+z1 z2)/2)^n"""
    if min(k, l, n) < 0:
        raise InvalidArgumentError(f"multiplicities must be nonnegative, got {(k, l, n)}")
    return box_spline(three_directional_directions(k, l, n), f"box-{k}{l}{n}")


FOUR_DIRECTIONS = DirectionMatrix.from_columns([(1, 0), (0, 1), (1, 1), (1, -1)])


def four_directional() -> Mask:
    return box_spline(FOUR_DIRECTIONS, "box-four-directional")


CUBIC_BSPLINE_DIRECTIONS = DirectionMatrix.from_rows([[1, 1, 1, 1]])


def cubic_bspline() -> Mask:
    """(1 + z)^4 / 8"""
    return box_spline(CUBIC_BSPLINE_DIRECTIONS, "cubic-bspline")


# ============================================================================
# INTERPOLATORY SCHEMES
# ============================================================================

def _three_directional_product(k: int, l: int, n: int) -> LaurentPoly:  # noqa: E741
    return product_of_factors(2, [((1, 0), k), ((0, 1), l), ((1, 1), n)])


def butterfly() -> Mask:
    """
    4 z1^-3 z2^-3 [7 z1 z2 P_222 - 2 z1 P_133 - 2 z2 P_313 - 2 z1 z2 P_331]

    with P_kln = ((1+z1)/2)^k ((1+z2)/2)^l ((1+z1 z2)/2)^n.
    """
    bracket = (
        LaurentPoly.monomial((1, 1), 7) * _three_directional_product(2, 2, 2)
        - LaurentPoly.monomial((1, 0), 2) * _three_directional_product(1, 3, 3)
        - LaurentPoly.monomial((0, 1), 2) * _three_directional_product(3, 1, 3)
        - LaurentPoly.monomial((1, 1), 2) * _three_directional_product(3, 3, 1)
    )
    return Mask(bracket.monomial_shift((-3, -3)) * 4, 2, "butterfly")


def butterfly_shifted() -> Mask:
    """The butterfly symbol times z1^3 z2^3, with nonnegative support"""
    return shift_mask(butterfly(), (3, 3)).renamed("butterfly-shifted")


def dubuc_deslauriers_4pt() -> Mask:
    """(-z^-3 + 9 z^-1 + 16 + 9 z - z^3) / 16"""
    symbol = LaurentPoly(
        1,
        {
            (-3,): Fraction(-1, 16),
            (-1,): Fraction(9, 16),
            (0,): 1,
            (1,): Fraction(9, 16),
            (3,): Fraction(-1, 16),
        },
    )
    return Mask(symbol, 2, "dubuc-deslauriers-4pt")


# ============================================================================
# TRIVARIATE EXAMPLE
# ============================================================================

def _trivariate_product(k: int, l: int, n: int, p: int) -> LaurentPoly:  # noqa: E741
    return product_of_factors(3, [((1, 0, 0), k), ((0, 1, 0), l), ((0, 0, 1), n), ((1, 1, 1), p)])


def three_dim_example() -> Mask:
    """
    8 [6 z1 z2 z3 P_2222 - 5/4 (z1 P_1333 + z2 P_3133 + z3 P_3313 + z1 z2 z3 P_3331)]

    with P_klnp = ((1+z1)/2)^k ((1+z2)/2)^l ((1+z3)/2)^n ((1+z1 z2 z3)/2)^p.
    """
    diagonal = LaurentPoly.monomial((1, 1, 1))
    correction = (
        LaurentPoly.monomial((1, 0, 0)) * _trivariate_product(1, 3, 3, 3)
        + LaurentPoly.monomial((0, 1, 0)) * _trivariate_product(3, 1, 3, 3)
        + LaurentPoly.monomial((0, 0, 1)) * _trivariate_product(3, 3, 1, 3)
        + diagonal * _trivariate_product(3, 3, 3, 1)
    )
    bracket = diagonal * _trivariate_product(2, 2, 2, 2) * 6 - correction * Fraction(5, 4)
    return Mask(bracket * 8, 2, "three-dim-example")


# ============================================================================
# SQRT(3) SUBDIVISION
# ============================================================================

# z1 -> z1 z2^-2, z2 -> z1^2 z2^-1; columns are the image exponents, M^2 = -3I
SQRT3_MATRIX = ((1, 2), (-2, -1))


def sqrt3_base() -> LaurentPoly:
    """The twelve-term sqrt(3) symbol for dilation matrix SQRT3_MATRIX, value 3 at (1, 1)"""
    sixth, third = Fraction(1, 6), Fraction(1, 3)
    return LaurentPoly(
        2,
        {
            (1, 1): sixth,
            (-1, -1): sixth,
            (-1, 2): sixth,
            (-2, 1): sixth,
            (1, -2): sixth,
            (2, -1): sixth,
            (-1, 0): third,
            (0, 1): third,
            (1, -1): third,
            (0, -1): third,
            (1, 0): third,
            (-1, 1): third,
        },
    )


def sqrt3_iterated() -> Mask:
    """a(z1 z2^-2, z1^2 z2^-1) a(z1, z2) with dilation -3"""
    base = sqrt3_base()
    return Mask(mul(base.substitute_monomial_map(SQRT3_MATRIX), base), -3, "sqrt3-iterated")


def sqrt3_base_tau_values() -> tuple[Fraction, ...]:
    """First derivatives of the base symbol at (1, 1); informational only"""
    base = sqrt3_base()
    return tuple(base.partial_derivative(j).value_at_one() for j in ((1, 0), (0, 1)))


# ============================================================================
# REGISTRY
# ============================================================================

@dataclass(frozen=True)
class SchemeInfo:
    name: str
    constructor: Callable[[], Mask]
    description: str
    directions: Optional[DirectionMatrix] = None
    interpolatory: bool = False

    def build(self) -> Mask:
        return self.constructor().renamed(self.name)


SCHEMES: dict[str, SchemeInfo] = {
    info.name: info
    for info in [
        SchemeInfo(
            "box-222",
            lambda: three_directional(2, 2, 2),
            "three-directional box spline B_{2,2,2}, m=2",
            three_directional_directions(2, 2, 2),
        ),
        SchemeInfo(
            "box-four-directional",
            four_directional,
            "four-directional box spline (e1, e2, e1+e2, e1-e2), m=2",
            FOUR_DIRECTIONS,
        ),
        SchemeInfo(
            "cubic-bspline",
            cubic_bspline,
            "univariate cubic B-spline (1+z)^4/8, m=2",
            CUBIC_BSPLINE_DIRECTIONS,
        ),
        SchemeInfo(
            "butterfly",
            butterfly,
            "interpolatory butterfly scheme, m=2",
            interpolatory=True,
        ),
        SchemeInfo(
            "butterfly-shifted",
            butterfly_shifted,
            "butterfly symbol shifted by (3,3) to nonnegative support, m=2",
        ),
        SchemeInfo(
            "dubuc-deslauriers-4pt",
            dubuc_deslauriers_4pt,
            "interpolatory four-point scheme, m=2",
            interpolatory=True,
        ),
        SchemeInfo(
            "three-dim-example",
            three_dim_example,
            "trivariate approximating scheme, m=2",
        ),
        SchemeInfo(
            "sqrt3-iterated",
            sqrt3_iterated,
            "sqrt(3) subdivision iterated to dilation -3I",
        ),
    ]
}


def scheme_names() -> list[str]:
    return list(SCHEMES)


def get_scheme(name: str) -> Mask:
    """Build a registered scheme by name"""
    try:
        info = SCHEMES[name]
    except KeyError:
        raise InvalidArgumentError(
            f"unknown scheme {name!r}; available: {', '.join(scheme_names())}"
        ) from None
    logger.debug(f"Building scheme {name}")
    return info.build()


def scheme_notes(name: str) -> list[str]:
    """Report notes for a registered scheme (unimodularity proxy, sqrt(3) base values)"""
    info = SCHEMES.get(name)
    if info is None:
        return []
    notes = []
    if info.directions is not None:
        if is_unimodular(info.directions):
            notes.append(
                "Direction matrix is unimodular (every nonzero s x s minor is +1 or -1), "
                "taken as the non-singularity proxy for box splines."
            )
        else:
            notes.append(
                "Direction matrix is not unimodular; the non-singularity proxy does not apply."
            )
        tau = ", ".join(str(t) for t in box_spline_tau(info.directions))
        notes.append(f"Half row sums of the direction matrix: ({tau}).")
    if name == "sqrt3-iterated":
        values = ", ".join(str(v) for v in sqrt3_base_tau_values())
        notes.append(f"Base sqrt(3) symbol first derivatives at (1,1): ({values}).")
    return notes
