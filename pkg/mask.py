"""
Subdivision masks: the symbol together with its dimension and dilation mI.

Also covers coset decomposition into submasks, the interpolatory test, mask
shifts and the JSON mask document used by the CLI and the MCP tools.
"""

from __future__ import annotations

import itertools
import json
import logging
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, Optional, Sequence, Union

from pydantic import BaseModel, Field, ValidationError, field_validator, model_validator
from pydantic_core import PydanticCustomError

from errors import (
    DimensionMismatchError,
    InvalidArgumentError,
    MaskParseError,
    MaskValidationError,
)
from laurent import LaurentPoly, MultiIndex, grlex_key, monomial_shift

logger = logging.getLogger("subdiv-repro.mask")

CosetRep = MultiIndex


@dataclass(frozen=True)
class Mask:
    """A finitely supported mask with dilation m (|m| >= 2), identified with its symbol"""

    symbol: LaurentPoly
    dilation: int
    name: str = ""

    def __post_init__(self):
        if abs(self.dilation) < 2:
            raise MaskValidationError(f"dilation must satisfy |m| >= 2, got {self.dilation}")

    @property
    def dimension(self) -> int:
        return self.symbol.dimension

    @property
    def modulus(self) -> int:
        """|m|, the order of the coset group in each axis"""
        return abs(self.dilation)

    @property
    def normalization(self) -> int:
        """|m|^s, the value a(1) required by sum rules of order 1"""
        return self.modulus ** self.dimension

    def support_radius(self) -> int:
        """Largest |alpha_i| over the support"""
        return max((abs(c) for key in self.symbol.coeffs for c in key), default=0)

    def support_diameter(self) -> int:
        lower, upper = self.symbol.support_box()
        return max((u - l for l, u in zip(lower, upper)), default=0)

    def renamed(self, name: str) -> Mask:
        return Mask(self.symbol, self.dilation, name)


def coset_reps(mask: Mask) -> list[CosetRep]:
    """All |m|^s representatives {0..|m|-1}^s of Z^s / mZ^s, graded-lex, starting at 0"""
    reps = itertools.product(range(mask.modulus), repeat=mask.dimension)
    return sorted(reps, key=grlex_key)


def _check_coset(mask: Mask, e: Sequence[int]) -> CosetRep:
    e = tuple(e)
    if len(e) != mask.dimension or any(not 0 <= c < mask.modulus for c in e):
        raise InvalidArgumentError(f"{e} is not a coset representative for |m|={mask.modulus}, s={mask.dimension}")
    return e


def subsymbol(mask: Mask, e: Sequence[int]) -> LaurentPoly:
    """a_e(z) = sum_alpha a_{e + m alpha} z^{e + m alpha}"""
    e = _check_coset(mask, e)
    n = mask.modulus
    return LaurentPoly(
        mask.dimension,
        {
            key: value
            for key, value in mask.symbol.coeffs.items()
            if all((k - c) % n == 0 for k, c in zip(key, e))
        },
    )


def is_interpolatory(mask: Mask) -> bool:
    """a_0 = 1 and a_{m alpha} = 0 for every alpha != 0"""
    n = mask.modulus
    origin = (0,) * mask.dimension
    if mask.symbol.coefficient(origin) != 1:
        return False
    return not any(
        key != origin and all(k % n == 0 for k in key) for key in mask.symbol.coeffs
    )


def shift_mask(mask: Mask, alpha: Sequence[int]) -> Mask:
    """The mask of z^alpha a(z), same dilation"""
    if len(alpha) != mask.dimension:
        raise DimensionMismatchError(f"shift of length {len(alpha)} for dimension {mask.dimension}")
    return Mask(monomial_shift(mask.symbol, alpha), mask.dilation, mask.name)


# ============================================================================
# MASK DOCUMENT
# ============================================================================

def format_rational(value: Fraction) -> str:
    """Canonical p/q text; integers print without the denominator"""
    return str(Fraction(value))


def _not_rational(text: Any) -> PydanticCustomError:
    return PydanticCustomError("rational_parsing", "not a rational: {text}", {"text": repr(text)})


def parse_rational(text: Union[str, int]) -> Fraction:
    """Parse 'p/q' or an integer; malformed text is a parse error, q = 0 an invariant violation"""
    if isinstance(text, bool):
        raise _not_rational(text)
    if isinstance(text, int):
        return Fraction(text)
    raw = str(text).strip()
    if "/" in raw:
        numerator, _, denominator = raw.partition("/")
        try:
            num, den = int(numerator), int(denominator)
        except ValueError:
            raise _not_rational(text)
        if den == 0:
            raise ValueError(f"zero denominator in {text!r}")
        return Fraction(num, den)
    try:
        return Fraction(int(raw))
    except ValueError:
        raise _not_rational(text)


class CoefficientEntry(BaseModel):
    index: list[int]
    value: str

    @field_validator("value", mode="before")
    @classmethod
    def _value_is_rational(cls, value: Any) -> str:
        if isinstance(value, int) and not isinstance(value, bool):
            value = str(value)
        if not isinstance(value, str):
            # Leave type errors to pydantic so they surface as parse errors
            return value
        parse_rational(value)
        return value.strip()


class MaskDocument(BaseModel):
    """On-disk form of a Mask"""

    dimension: int = Field(description="Ambient dimension s")
    dilation: int = Field(description="Dilation factor m, |m| >= 2")
    name: Optional[str] = None
    coefficients: list[CoefficientEntry]

    @model_validator(mode="after")
    def _check_invariants(self) -> MaskDocument:
        if self.dimension < 1:
            raise ValueError(f"dimension must be >= 1, got {self.dimension}")
        if abs(self.dilation) < 2:
            raise ValueError(f"dilation must satisfy |m| >= 2, got {self.dilation}")
        seen = set()
        for position, entry in enumerate(self.coefficients):
            if len(entry.index) != self.dimension:
                raise ValueError(
                    f"coefficients[{position}].index has length {len(entry.index)}, "
                    f"expected {self.dimension}"
                )
            key = tuple(entry.index)
            if key in seen:
                raise ValueError(f"coefficients[{position}].index {list(key)} is duplicated")
            seen.add(key)
        return self

    def to_mask(self) -> Mask:
        symbol = LaurentPoly(
            self.dimension,
            {tuple(entry.index): parse_rational(entry.value) for entry in self.coefficients},
        )
        return Mask(symbol, self.dilation, self.name or "")

    @classmethod
    def from_mask(cls, mask: Mask) -> MaskDocument:
        return cls(
            dimension=mask.dimension,
            dilation=mask.dilation,
            name=mask.name or None,
            coefficients=[
                CoefficientEntry(index=list(key), value=format_rational(value))
                for key, value in mask.symbol.items()
            ],
        )


def _raise_document_error(exc: ValidationError, source: str) -> None:
    """Split pydantic errors into malformed documents and invariant violations"""
    details = []
    invariant = True
    for error in exc.errors():
        location = ".".join(str(part) for part in error.get("loc", ())) or "document"
        details.append(f"{location}: {error['msg']}")
        if error["type"] != "value_error":
            invariant = False
    message = f"{source}: " + "; ".join(details)
    if invariant:
        raise MaskValidationError(message) from exc
    raise MaskParseError(message) from exc


def mask_from_dict(data: dict[str, Any], source: str = "mask") -> Mask:
    try:
        return MaskDocument.model_validate(data).to_mask()
    except ValidationError as exc:
        _raise_document_error(exc, source)


def loads_mask(text: str, source: str = "mask") -> Mask:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MaskParseError(f"{source}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    if not isinstance(data, dict):
        raise MaskParseError(f"{source}: expected a JSON object at the top level")
    return mask_from_dict(data, source)


def dumps_mask(mask: Mask) -> str:
    return MaskDocument.from_mask(mask).model_dump_json(indent=2, exclude_none=True) + "\n"


def read_mask(path: Union[str, Path]) -> Mask:
    path = Path(path)
    logger.debug(f"Reading mask document {path}")
    mask = loads_mask(path.read_text(encoding="utf-8"), source=str(path))
    if not mask.name:
        mask = mask.renamed(path.stem)
    return mask


def write_mask(mask: Mask, path: Union[str, Path]) -> None:
    Path(path).write_text(dumps_mask(mask), encoding="utf-8")
