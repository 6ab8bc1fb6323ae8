"""
Subdivision Reproduction MCP Server - Schemes Toolset
Built-in schemes, the subdivision operator and cascade sampling.
"""

from typing import Any, Optional

from fastmcp import FastMCP

from engine import cascade, grid_from_values, subdivide_once
from errors import SubdivisionError
from mask import MaskDocument, format_rational, parse_rational
from response_helpers import DEFAULT_GRID_LIMIT, summarize_grid_response
from schemes import SCHEMES, scheme_notes
from schemes import get_scheme as build_scheme
from toolsets_analysis import error_payload, resolve_mask


# ============================================================================
# TOOLSET: SCHEMES (4 tools)
# ============================================================================

def register_schemes_tools(mcp: FastMCP):
    """Register scheme catalogue, subdivision and cascade tools"""

    @mcp.tool()
    async def list_schemes() -> dict[str, Any]:
        """
        List the built-in subdivision schemes.

        Returns:
            dict: name, description and interpolatory flag per scheme
        """
        items = [
            {
                "name": info.name,
                "description": info.description,
                "interpolatory": info.interpolatory,
                "box_spline": info.directions is not None,
            }
            for info in SCHEMES.values()
        ]
        return {"schemes": items, "count": len(items)}

    @mcp.tool()
    async def get_scheme(name: str) -> dict[str, Any]:
        """
        Get a built-in scheme as a mask document.

        Args:
            name: Scheme name from list_schemes

        Returns:
            dict: Mask document plus report notes for the scheme
        """
        try:
            document = MaskDocument.from_mask(build_scheme(name))
            return {**document.model_dump(exclude_none=True), "notes": scheme_notes(name)}
        except SubdivisionError as exc:
            return error_payload(exc)

    @mcp.tool()
    async def subdivide_data(
        values: list[dict[str, Any]],
        steps: int = 1,
        offset: int = 0,
        limit: int = DEFAULT_GRID_LIMIT,
        mask: Optional[dict[str, Any]] = None,
        scheme: Optional[str] = None,
    ) -> dict[str, Any]:
        """
        Apply the subdivision operator to finite data.

        Args:
            values: Data as [{"index": [i_1, ..., i_s], "value": "p/q"}]
            steps: Number of subdivision steps (default: 1)
            offset: First output value to return (pagination)
            limit: Maximum number of output values to return
            mask: Mask document
            scheme: Name of a built-in scheme (instead of mask)

        Returns:
            dict: Output grid page with trusted region bounds and pagination hints
        """
        try:
            resolved, _ = resolve_mask(mask, scheme)
            data = {
                tuple(entry["index"]): parse_rational(entry["value"]) for entry in values
            }
            grid = grid_from_values(resolved.dimension, data)
            for _ in range(steps):
                grid = subdivide_once(resolved, grid)
            return summarize_grid_response(grid, offset, limit)
        except (SubdivisionError, ValueError, KeyError, TypeError) as exc:
            return error_payload(exc)

    @mcp.tool()
    async def cascade_grid(
        steps: int,
        offset: int = 0,
        limit: int = DEFAULT_GRID_LIMIT,
        mask: Optional[dict[str, Any]] = None,
        scheme: Optional[str] = None,
    ) -> dict[str, Any]:
        """
        Iterate subdivision on delta data (samples of the basic limit function).

        Args:
            steps: Number of steps r (bounded by SUBDIV_CASCADE_MAX_STEPS)
            offset: First value to return (pagination)
            limit: Maximum number of values to return
            mask: Mask document
            scheme: Name of a built-in scheme (instead of mask)

        Returns:
            dict: Grid page plus the exact total and its expected value a(1)^r
        """
        try:
            resolved, _ = resolve_mask(mask, scheme)
            grid = cascade(resolved, steps)
            result = summarize_grid_response(grid, offset, limit)
            result["expected_total"] = format_rational(resolved.symbol.value_at_one() ** steps)
            return result
        except SubdivisionError as exc:
            return error_payload(exc)
