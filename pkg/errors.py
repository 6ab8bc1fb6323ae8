"""
Exception hierarchy for subdiv-repro.

Every error raised on purpose by the library derives from SubdivisionError so
entry points (CLI, MCP tools) can map it to an exit code or an error payload.
"""


class SubdivisionError(Exception):
    """Base error for subdivision analysis"""
    pass


class DimensionMismatchError(SubdivisionError, ValueError):
    """Operands live in different ambient dimensions"""
    pass


class OrderMismatchError(SubdivisionError, ValueError):
    """Cyclotomic elements of different orders were combined"""
    pass


class InvalidArgumentError(SubdivisionError, ValueError):
    """An operation precondition does not hold"""
    pass


class MaskParseError(SubdivisionError):
    """Mask document is not well formed (syntax or field types)"""
    pass


class MaskValidationError(SubdivisionError):
    """Mask document is well formed but violates a mask invariant"""
    pass


class EmptyTrustedRegionError(SubdivisionError):
    """Oracle box is too small for the mask stencil"""
    pass


class CrossCheckError(SubdivisionError):
    """Independent checks disagree with the algebraic certificate"""
    pass


class ConfigError(SubdivisionError):
    """Invalid environment configuration"""
    pass


class DataParseError(SubdivisionError):
    """Grid data file is not well formed"""
    pass
