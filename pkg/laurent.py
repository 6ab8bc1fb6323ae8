"""
Sparse multivariate Laurent polynomials over exact rationals.

A LaurentPoly is an immutable map from exponent tuples (multi-indices) to
nonzero Fractions. It carries the mask symbol a(z) and everything derived from
it: subsymbols, shifted symbols, formal partial derivatives and monomial
substitutions.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from fractions import Fraction
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping, Sequence, Union

from errors import DimensionMismatchError, InvalidArgumentError

MultiIndex = tuple[int, ...]
RationalLike = Union[int, Fraction, str]


def grlex_key(index: Sequence[int]) -> tuple:
    """Graded-lexicographic sort key: total degree first, then entries ascending"""
    return (sum(index), tuple(index))


def multi_indices_of_degree(dimension: int, degree: int) -> list[MultiIndex]:
    """All nonnegative multi-indices of length `dimension` with |j| = degree, graded-lex"""
    if degree < 0:
        return []
    if dimension == 1:
        return [(degree,)]
    result = []
    for first in range(degree + 1):
        for rest in multi_indices_of_degree(dimension - 1, degree - first):
            result.append((first,) + rest)
    return sorted(result, key=grlex_key)


def multi_indices_up_to(dimension: int, degree: int) -> list[MultiIndex]:
    """All nonnegative multi-indices with |j| <= degree, graded-lex"""
    return [j for d in range(degree + 1) for j in multi_indices_of_degree(dimension, d)]


def falling_power(j: Sequence[int], x: Sequence[RationalLike]) -> Fraction:
    """Tensor falling factorial q_j(x) = prod_i prod_{l<j_i} (x_i - l); q_0 = 1"""
    if len(j) != len(x):
        raise DimensionMismatchError(f"multi-index of length {len(j)} vs point of length {len(x)}")
    result = Fraction(1)
    for order, value in zip(j, x):
        if order < 0:
            raise InvalidArgumentError(f"negative derivative order {tuple(j)}")
        value = Fraction(value)
        for ell in range(order):
            result *= value - ell
            if not result:
                return result
    return result


def _as_index(key: Iterable[int]) -> MultiIndex:
    return tuple(int(k) for k in key)


class LaurentPoly:
    """
    Finite map MultiIndex -> Fraction with zero coefficients pruned.

    Instances are immutable; every operation returns a new polynomial.
    """

    __slots__ = ("_dimension", "_coeffs")

    def __init__(self, dimension: int, coeffs: Mapping[Iterable[int], RationalLike] = None):
        if dimension < 1:
            raise InvalidArgumentError(f"dimension must be positive, got {dimension}")
        canonical: dict[MultiIndex, Fraction] = {}
        for key, value in (coeffs or {}).items():
            index = _as_index(key)
            if len(index) != dimension:
                raise DimensionMismatchError(
                    f"exponent {index} has length {len(index)}, expected {dimension}"
                )
            value = Fraction(value)
            if value:
                canonical[index] = canonical.get(index, Fraction(0)) + value
        self._dimension = dimension
        self._coeffs = {k: v for k, v in canonical.items() if v}

    # ------------------------------------------------------------------
    # constructors
    # ------------------------------------------------------------------

    @classmethod
    def zero(cls, dimension: int) -> LaurentPoly:
        return cls(dimension)

    @classmethod
    def constant(cls, dimension: int, value: RationalLike) -> LaurentPoly:
        return cls(dimension, {(0,) * dimension: value})

    @classmethod
    def monomial(cls, exponent: Sequence[int], value: RationalLike = 1) -> LaurentPoly:
        return cls(len(exponent), {tuple(exponent): value})

    @classmethod
    def _from_canonical(cls, dimension: int, coeffs: dict[MultiIndex, Fraction]) -> LaurentPoly:
        # Caller guarantees tuple keys of the right length; zeros still pruned here
        poly = cls.__new__(cls)
        poly._dimension = dimension
        poly._coeffs = {k: v for k, v in coeffs.items() if v}
        return poly

    # ------------------------------------------------------------------
    # accessors
    # ------------------------------------------------------------------

    @property
    def dimension(self) -> int:
        return self._dimension

    @property
    def coeffs(self) -> Mapping[MultiIndex, Fraction]:
        return MappingProxyType(self._coeffs)

    def coefficient(self, index: Sequence[int]) -> Fraction:
        return self._coeffs.get(tuple(index), Fraction(0))

    def items(self) -> list[tuple[MultiIndex, Fraction]]:
        """Terms in graded-lex order of the exponents"""
        return sorted(self._coeffs.items(), key=lambda kv: grlex_key(kv[0]))

    def support(self) -> list[MultiIndex]:
        return [k for k, _ in self.items()]

    def support_box(self) -> tuple[MultiIndex, MultiIndex]:
        """Componentwise (min, max) exponents; the zero polynomial has the box at the origin"""
        if not self._coeffs:
            origin = (0,) * self._dimension
            return origin, origin
        keys = list(self._coeffs)
        lower = tuple(min(k[i] for k in keys) for i in range(self._dimension))
        upper = tuple(max(k[i] for k in keys) for i in range(self._dimension))
        return lower, upper

    def is_zero(self) -> bool:
        return not self._coeffs

    def __len__(self) -> int:
        return len(self._coeffs)

    def __iter__(self) -> Iterator[MultiIndex]:
        return iter(self.support())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._dimension == other._dimension and self._coeffs == other._coeffs

    def __hash__(self) -> int:
        return hash((self._dimension, frozenset(self._coeffs.items())))

    def __repr__(self) -> str:
        return f"LaurentPoly({self._dimension}, {{{', '.join(f'{k}: {v}' for k, v in self.items())}}})"

    def __str__(self) -> str:
        if not self._coeffs:
            return "0"
        parts = []
        for exponent, value in self.items():
            factors = []
            for i, e in enumerate(exponent, start=1):
                if e == 1:
                    factors.append(f"z{i}")
                elif e != 0:
                    factors.append(f"z{i}^{e}")
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

    # ------------------------------------------------------------------
    # ring operations
    # ------------------------------------------------------------------

    def __add__(self, other: LaurentPoly) -> LaurentPoly:
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return add(self, other)

    def __sub__(self, other: LaurentPoly) -> LaurentPoly:
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return add(self, other.scale(-1))

    def __neg__(self) -> LaurentPoly:
        return self.scale(-1)

    def __mul__(self, other: Union[LaurentPoly, RationalLike]) -> LaurentPoly:
        if isinstance(other, LaurentPoly):
            return mul(self, other)
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other: RationalLike) -> LaurentPoly:
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, exponent: int) -> LaurentPoly:
        if exponent < 0:
            raise InvalidArgumentError("negative powers of a Laurent polynomial are not supported")
        result = LaurentPoly.constant(self._dimension, 1)
        base = self
        while exponent:
            if exponent & 1:
                result = mul(result, base)
            base = mul(base, base)
            exponent >>= 1
        return result

    def scale(self, factor: RationalLike) -> LaurentPoly:
        factor = Fraction(factor)
        return LaurentPoly._from_canonical(
            self._dimension, {k: v * factor for k, v in self._coeffs.items()}
        )

    # Methods mirroring the module-level operations
    def monomial_shift(self, alpha: Sequence[int]) -> LaurentPoly:
        return monomial_shift(self, alpha)

    def partial_derivative(self, j: Sequence[int]) -> LaurentPoly:
        return partial_derivative(self, j)

    def eval_rational(self, x: Sequence[RationalLike]) -> Fraction:
        return eval_rational(self, x)

    def substitute_monomial_map(self, matrix: Sequence[Sequence[int]]) -> LaurentPoly:
        return substitute_monomial_map(self, matrix)

    def value_at_one(self) -> Fraction:
        return sum(self._coeffs.values(), Fraction(0))


def _check_dimensions(p: LaurentPoly, q: LaurentPoly) -> None:
    if p.dimension != q.dimension:
        raise DimensionMismatchError(f"dimension {p.dimension} vs {q.dimension}")


def add(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    """Coefficient-wise sum"""
    _check_dimensions(p, q)
    result = dict(p._coeffs)
    for key, value in q._coeffs.items():
        result[key] = result.get(key, Fraction(0)) + value
    return LaurentPoly._from_canonical(p.dimension, result)


def mul(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    """Convolution of coefficient maps"""
    _check_dimensions(p, q)
    result: dict[MultiIndex, Fraction] = defaultdict(Fraction)
    for (ka, va), (kb, vb) in itertools.product(p._coeffs.items(), q._coeffs.items()):
        result[tuple(a + b for a, b in zip(ka, kb))] += va * vb
    return LaurentPoly._from_canonical(p.dimension, dict(result))


def monomial_shift(p: LaurentPoly, alpha: Sequence[int]) -> LaurentPoly:
    """Multiply by z^alpha, i.e. translate every exponent by alpha"""
    if len(alpha) != p.dimension:
        raise DimensionMismatchError(f"shift of length {len(alpha)} for dimension {p.dimension}")
    alpha = _as_index(alpha)
    return LaurentPoly._from_canonical(
        p.dimension,
        {tuple(k + a for k, a in zip(key, alpha)): v for key, v in p._coeffs.items()},
    )


def partial_derivative(p: LaurentPoly, j: Sequence[int]) -> LaurentPoly:
    """
    Formal derivative D^j in one pass: D^j z^alpha = q_j(alpha) z^(alpha - j).

    Terms whose falling-factorial weight vanishes are dropped.
    """
    if len(j) != p.dimension:
        raise DimensionMismatchError(f"derivative order of length {len(j)} for dimension {p.dimension}")
    j = _as_index(j)
    if any(order < 0 for order in j):
        raise InvalidArgumentError(f"negative derivative order {j}")
    if not any(j):
        return p
    result = {}
    for key, value in p._coeffs.items():
        weight = falling_power(j, key)
        if weight:
            result[tuple(k - o for k, o in zip(key, j))] = weight * value
    return LaurentPoly._from_canonical(p.dimension, result)


def eval_rational(p: LaurentPoly, x: Sequence[RationalLike]) -> Fraction:
    """Exact value sum_alpha p_alpha x^alpha"""
    if len(x) != p.dimension:
        raise DimensionMismatchError(f"point of length {len(x)} for dimension {p.dimension}")
    point = [Fraction(v) for v in x]
    total = Fraction(0)
    for key, value in p._coeffs.items():
        term = value
        for base, exponent in zip(point, key):
            if exponent < 0 and base == 0:
                raise InvalidArgumentError("zero coordinate raised to a negative exponent")
            term *= base ** exponent
        total += term
    return total


def substitute_monomial_map(p: LaurentPoly, matrix: Sequence[Sequence[int]]) -> LaurentPoly:
    """
    Replace z_i by prod_l z_l^M[l][i]; the exponent alpha maps to M @ alpha.

    Column i of M is the exponent vector of the image of z_i.
    """
    s = p.dimension
    if len(matrix) != s or any(len(row) != s for row in matrix):
        raise InvalidArgumentError(f"substitution matrix must be {s}x{s}")
    result: dict[MultiIndex, Fraction] = defaultdict(Fraction)
    for key, value in p._coeffs.items():
        image = tuple(sum(matrix[row][col] * key[col] for col in range(s)) for row in range(s))
        result[image] += value
    return LaurentPoly._from_canonical(s, dict(result))


def product_of_factors(dimension: int, factors: Iterable[tuple[Sequence[int], int]]) -> LaurentPoly:
    """prod over (theta, power) of ((1 + z^theta) / 2)^power"""
    result = LaurentPoly.constant(dimension, 1)
    for theta, power in factors:
        base = add(
            LaurentPoly.constant(dimension, Fraction(1, 2)),
            LaurentPoly.monomial(theta, Fraction(1, 2)),
        )
        result = mul(result, base ** power)
    return result
