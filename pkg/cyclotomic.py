"""
Exact values of Laurent polynomials at the root-of-unity points of the zero set.

A CycloElement of order n stores c_0..c_{n-1} for sum_t c_t zeta^t, reduced
modulo x^n - 1. Arithmetic stays in that quotient; only is_zero reduces modulo
the n-th cyclotomic polynomial, which is where vanishing is decided.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

import numpy as np
import sympy
from sympy import Poly, QQ

from errors import DimensionMismatchError, InvalidArgumentError, OrderMismatchError
from laurent import LaurentPoly

_X = sympy.Symbol("x")


@functools.lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> Poly:
    """
    Phi_n over QQ, computed as (x^n - 1) / prod_{d | n, d < n} Phi_d.
    """
    if n < 1:
        raise InvalidArgumentError(f"cyclotomic order must be positive, got {n}")
    poly = Poly(_X ** n - 1, _X, domain=QQ)
    for d in (d for d in range(1, n) if n % d == 0):
        poly, remainder = poly.div(cyclotomic_polynomial(d))
        assert remainder.is_zero
    return poly


@dataclass(frozen=True)
class CycloElement:
    """sum_t coeffs[t] * zeta^t in Q[x] / (x^n - 1)"""

    order: int
    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        if self.order < 1:
            raise InvalidArgumentError(f"order must be positive, got {self.order}")
        if len(self.coeffs) != self.order:
            raise InvalidArgumentError(
                f"expected {self.order} coefficients, got {len(self.coeffs)}"
            )

    @classmethod
    def from_terms(cls, order: int, terms: dict[int, Fraction]) -> CycloElement:
        """Fold arbitrary integer exponents into [0, order)"""
        coeffs = [Fraction(0)] * order
        for exponent, value in terms.items():
            coeffs[exponent % order] += Fraction(value)
        return cls(order, tuple(coeffs))

    @classmethod
    def rational(cls, order: int, value: Union[int, Fraction]) -> CycloElement:
        return cls.from_terms(order, {0: Fraction(value)})

    def _check_order(self, other: CycloElement) -> None:
        if self.order != other.order:
            raise OrderMismatchError(f"order {self.order} vs {other.order}")

    def __add__(self, other: CycloElement) -> CycloElement:
        return add(self, other)

    def __mul__(self, other: Union[CycloElement, int, Fraction]) -> CycloElement:
        if isinstance(other, CycloElement):
            return mul(self, other)
        return scale(self, other)

    __rmul__ = __mul__

    def __neg__(self) -> CycloElement:
        return scale(self, -1)

    def is_zero(self) -> bool:
        return is_zero(self)

    def to_complex(self, m: int) -> complex:
        return to_complex(self, m)

    def __str__(self) -> str:
        parts = []
        for t, c in enumerate(self.coeffs):
            if not c:
                continue
            if t == 0:
                parts.append(str(c))
            else:
                power = "zeta" if t == 1 else f"zeta^{t}"
                parts.append(power if c == 1 else f"-{power}" if c == -1 else f"{c}*{power}")
        return " + ".join(parts).replace("+ -", "- ") if parts else "0"


def from_root_power(n: int, k: int) -> CycloElement:
    """The element zeta^(k mod n)"""
    if n < 2:
        raise InvalidArgumentError(f"root-of-unity order must be >= 2, got {n}")
    return CycloElement.from_terms(n, {k: Fraction(1)})


def add(x: CycloElement, y: CycloElement) -> CycloElement:
    x._check_order(y)
    return CycloElement(x.order, tuple(a + b for a, b in zip(x.coeffs, y.coeffs)))


def mul(x: CycloElement, y: CycloElement) -> CycloElement:
    """Cyclic convolution"""
    x._check_order(y)
    n = x.order
    coeffs = [Fraction(0)] * n
    for s, a in enumerate(x.coeffs):
        if not a:
            continue
        for t, b in enumerate(y.coeffs):
            if b:
                coeffs[(s + t) % n] += a * b
    return CycloElement(n, tuple(coeffs))


def scale(x: CycloElement, factor: Union[int, Fraction]) -> CycloElement:
    factor = Fraction(factor)
    return CycloElement(x.order, tuple(c * factor for c in x.coeffs))


def is_zero(x: CycloElement) -> bool:
    """Exact test: the coefficient polynomial is divisible by Phi_n"""
    if not any(x.coeffs):
        return True
    # Poly expects the leading coefficient first
    poly = Poly.from_list(
        [sympy.Rational(c.numerator, c.denominator) for c in reversed(x.coeffs)],
        _X,
        domain=QQ,
    )
    return poly.rem(cyclotomic_polynomial(x.order)).is_zero


def to_complex(x: CycloElement, m: int) -> complex:
    """Numeric value with zeta = exp(-2 pi i / m); for cross-checks and rendering only"""
    if abs(m) != x.order:
        raise OrderMismatchError(f"element of order {x.order} evaluated with dilation {m}")
    powers = np.exp(-2j * np.pi * np.arange(x.order) / m)
    weights = np.array([float(c) for c in x.coeffs])
    return complex(np.dot(weights, powers))


def eval_symbol_at_coset(p: LaurentPoly, m: int, e: Sequence[int]) -> CycloElement:
    """
    Value of p at eps_e = (zeta^e_1, ..., zeta^e_s): sum_alpha p_alpha zeta^(e . alpha).
    """
    n = abs(m)
    if n < 2:
        raise InvalidArgumentError(f"dilation must satisfy |m| >= 2, got {m}")
    if len(e) != p.dimension:
        raise DimensionMismatchError(f"coset of length {len(e)} for dimension {p.dimension}")
    coeffs = [Fraction(0)] * n
    for exponent, value in p.coeffs.items():
        coeffs[sum(a * b for a, b in zip(e, exponent)) % n] += value
    return CycloElement(n, tuple(coeffs))
