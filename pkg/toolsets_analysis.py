"""
Subdivision Reproduction MCP Server - Analysis Toolset
Zero conditions, parametrization, reproduction conditions and the step-wise oracle.
"""

from typing import Any, Optional

from fastmcp import FastMCP

from analysis import analyze, check_reproduction, check_Z, compute_tau, raw_tau
from config import DEFAULT_CAP
from engine import PolyFunc, centered_box, default_oracle_radius, stepwise_oracle
from errors import SubdivisionError
from mask import Mask, format_rational, mask_from_dict, parse_rational
from schemes import get_scheme, scheme_notes


def resolve_mask(mask: Optional[dict[str, Any]], scheme: Optional[str]) -> tuple[Mask, list[str]]:
    if (mask is None) == (scheme is None):
        raise SubdivisionError("give exactly one of `mask` (a mask document) or `scheme` (a name)")
    if scheme is not None:
        return get_scheme(scheme), scheme_notes(scheme)
    return mask_from_dict(mask, source="mask"), []


def error_payload(exc: Exception) -> dict[str, Any]:
    return {"error": str(exc), "error_type": type(exc).__name__}


# ============================================================================
# TOOLSET: ANALYSIS (5 tools)
# ============================================================================

def register_analysis_tools(mcp: FastMCP):
    """Register mask analysis and oracle tools"""

    @mcp.tool()
    async def analyze_mask(
        mask: Optional[dict[str, Any]] = None,
        scheme: Optional[str] = None,
        cap: int = DEFAULT_CAP,
        cross_check: bool = True,
    ) -> dict[str, Any]:
        """
        Certify the generation degree, tau and the reproduction degree of a mask.

        Args:
            mask: Mask document {"dimension", "dilation", "coefficients": [{"index", "value"}]}
            scheme: Name of a built-in scheme (instead of mask)
            cap: Degree-search cap (default: SUBDIV_CAP or 10)
            cross_check: Also run the equivalent submask and moment formulations

        Returns:
            dict: Full analysis report with failure witnesses and notes
        """
        try:
            resolved, notes = resolve_mask(mask, scheme)
            return analyze(resolved, cap, cross_check=cross_check, extra_notes=notes).model_dump()
        except SubdivisionError as exc:
            return error_payload(exc)

    @mcp.tool()
    async def check_zero_conditions(
        k: int,
        mask: Optional[dict[str, Any]] = None,
        scheme: Optional[str] = None,
    ) -> dict[str, Any]:
        """
        Check Condition Z_k (sum rules of order k) exactly.

        Args:
            k: Order of the zero conditions (k >= 1)
            mask: Mask document
            scheme: Name of a built-in scheme (instead of mask)

        Returns:
            dict: passed flag and the failing conditions at the first failing degree
        """
        try:
            resolved, _ = resolve_mask(mask, scheme)
            return {"k": k, **check_Z(resolved, k).model_dump()}
        except SubdivisionError as exc:
            return error_payload(exc)

    @mcp.tool()
    async def compute_parametrization(
        mask: Optional[dict[str, Any]] = None,
        scheme: Optional[str] = None,
    ) -> dict[str, Any]:
        """
        Compute the parametrization shift tau = |m|^-s (D^e_1 a(1), ..., D^e_s a(1)).

        Returns:
            dict: tau (absent when sum rules of order 1 fail) and the unconditional value
        """
        try:
            resolved, _ = resolve_mask(mask, scheme)
            tau = compute_tau(resolved)
            return {
                "tau": None if tau is None else [format_rational(t) for t in tau],
                "raw_tau": [format_rational(t) for t in raw_tau(resolved)],
                "sum_rules_order_1": tau is not None,
            }
        except SubdivisionError as exc:
            return error_payload(exc)

    @mcp.tool()
    async def check_reproduction_conditions(
        tau: list[str],
        k: int,
        mask: Optional[dict[str, Any]] = None,
        scheme: Optional[str] = None,
    ) -> dict[str, Any]:
        """
        Check D^j a(1) = |m|^s q_j(tau) and D^j a(eps) = 0 for all |j| <= k.

        Args:
            tau: Parametrization shift as rationals, e.g. ["2", "2"] or ["1/2"]
            k: Polynomial degree to check
            mask: Mask document
            scheme: Name of a built-in scheme (instead of mask)

        Returns:
            dict: passed flag and the failing conditions at the first failing degree
        """
        try:
            resolved, _ = resolve_mask(mask, scheme)
            values = [parse_rational(t) for t in tau]
            return {"k": k, "tau": tau, **check_reproduction(resolved, values, k).model_dump()}
        except (SubdivisionError, ValueError) as exc:
            return error_payload(exc)

    @mcp.tool()
    async def run_stepwise_oracle(
        exponent: list[int],
        level: int = 0,
        radius: Optional[int] = None,
        tau: Optional[list[str]] = None,
        mask: Optional[dict[str, Any]] = None,
        scheme: Optional[str] = None,
    ) -> dict[str, Any]:
        """
        Sample x^exponent at level r, subdivide once and compare with level r + 1.

        Args:
            exponent: Monomial exponent j (one entry per dimension)
            level: Refinement level r (default: 0)
            radius: Half-width of the sampling box (default: support radius + 2|m|)
            tau: Parametrization shift (default: computed tau, or 0 without sum rules)
            mask: Mask document
            scheme: Name of a built-in scheme (instead of mask)

        Returns:
            dict: pass flag, exact worst residual and its index, trusted region bounds
                and whether it meets every residue class mod m
        """
        try:
            resolved, _ = resolve_mask(mask, scheme)
            if tau is None:
                shift = compute_tau(resolved) or (0,) * resolved.dimension
            else:
                shift = [parse_rational(t) for t in tau]
            box = centered_box(resolved.dimension, radius or default_oracle_radius(resolved))
            report = stepwise_oracle(resolved, PolyFunc.monomial(exponent), shift, level, box)
            return report.model_dump()
        except (SubdivisionError, ValueError) as exc:
            return error_payload(exc)
