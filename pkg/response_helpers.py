"""
Response helpers for subdiv-repro - report rendering and grid export.

Turns analysis and oracle results into the text reports printed by the CLI,
writes grids as CSV and grayscale PGM, and summarizes large grids for MCP tool
responses with pagination hints.
"""
import csv
import io
from typing import Any, Optional, Sequence

import numpy as np

from analysis import AnalysisReport, Witness
from engine import GridData, OracleReport
from mask import format_rational

# Default page size for grid values returned through the MCP tools
DEFAULT_GRID_LIMIT = 200


def _tuple_text(values: Sequence) -> str:
    return "(" + ", ".join(str(v) for v in values) + ")"


def _render_witness(lines: list[str], witness: Optional[Witness], label: str) -> None:
    if witness is None:
        return
    lines.append(f"    {label} at total degree {witness.degree}:")
    for failure in witness.failures:
        lines.append(f"      {failure.describe()}")


def _degree_text(degree: Optional[int], cap: int) -> str:
    if degree is None:
        return "none"
    return f"{degree} (cap reached)" if degree == cap else str(degree)


def render_analysis_text(report: AnalysisReport) -> str:
    """
    Render an AnalysisReport as the plain-text report printed by `analyze`.

    Args:
        report: Result of analysis.analyze

    Returns:
        Multi-line report ending with a newline
    """
    lines = [
        f"Scheme: {report.name}",
        f"  dimension s = {report.dimension}, dilation m = {report.dilation}, cap = {report.cap}",
        f"  a(1) = {report.value_at_one} (required |m|^s = {report.normalization})",
        "  submask sums a_e(1): "
        + ", ".join(f"{_tuple_text(entry.coset)} {entry.value}" for entry in report.submask_sums),
        f"  sum rules of order 1: {'yes' if report.sum_rules_order_1 else 'no'}",
        f"  interpolatory: {'yes' if report.interpolatory else 'no'}",
        f"  generation degree: {_degree_text(report.generation_degree, report.cap)}",
    ]
    _render_witness(lines, report.generation_witness, "zero conditions fail")
    tau = _tuple_text(report.tau) if report.tau is not None else "none (sum rules of order 1 fail)"
    lines.append(f"  tau: {tau}")
    lines.append(f"  reproduction degree: {_degree_text(report.reproduction_degree, report.cap)}")
    _render_witness(lines, report.reproduction_witness, "reproduction conditions fail")
    if report.cross_checks:
        lines.append("  cross-checks:")
        for check in report.cross_checks:
            lines.append(f"    {check.name}: {'ok' if check.passed else 'FAILED'} ({check.detail})")
    if report.notes:
        lines.append("  notes:")
        lines.extend(f"    - {note}" for note in report.notes)
    return "\n".join(lines) + "\n"


def render_oracle_text(
    name: str,
    tau: Sequence,
    reports: Sequence[OracleReport],
    certified: Optional[int],
) -> str:
    """Per-monomial pass/fail table for the `oracle` command"""
    lines = [
        f"Step-wise oracle: {name}",
        f"  tau = {_tuple_text(format_rational(t) for t in tau)}, "
        f"certified reproduction degree = {certified if certified is not None else 'none'}",
        f"  {'level':>5}  {'degree':>6}  {'result':<6}  {'residual':>12}  polynomial",
    ]
    for report in reports:
        result = "pass" if report.passed else "FAIL"
        where = "" if report.worst_index is None else f" at {_tuple_text(report.worst_index)}"
        lines.append(
            f"  {report.level:>5}  {report.degree:>6}  {result:<6}  "
            f"{report.worst_residual:>12}  {report.polynomial}{where}"
        )
    return "\n".join(lines) + "\n"


# ============================================================================
# GRID EXPORT
# ============================================================================

def grid_rows(grid: GridData) -> list[dict[str, Any]]:
    """Stored grid values in graded-lex order with exact, float and trusted columns"""
    return [
        {
            "index": list(index),
            "exact": format_rational(value),
            "float": float(value),
            "trusted": grid.is_trusted(index),
        }
        for index, value in grid.items()
    ]


def grid_to_csv(grid: GridData, footer: Optional[str] = None) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["index", "exact", "float", "trusted"])
    for row in grid_rows(grid):
        writer.writerow(
            [
                " ".join(str(i) for i in row["index"]),
                row["exact"],
                repr(row["float"]),
                "1" if row["trusted"] else "0",
            ]
        )
    if footer:
        buffer.write(f"# {footer}\n")
    return buffer.getvalue()


def grid_to_array(grid: GridData) -> np.ndarray:
    """Dense float array over the support box (axis 0 is the first index)"""
    shape = tuple(hi - lo + 1 for lo, hi in zip(grid.lower, grid.upper))
    array = np.zeros(shape, dtype=float)
    for index, value in grid.values.items():
        array[tuple(i - lo for i, lo in zip(index, grid.lower))] = float(value)
    return array


def grid_to_pgm(grid: GridData) -> bytes:
    """Binary 8-bit PGM of a bivariate grid, values scaled linearly to 0..255"""
    if grid.dimension != 2:
        raise ValueError(f"raster export needs a bivariate grid, got dimension {grid.dimension}")
    # rows run along the second index, top row is its largest value
    array = np.flipud(grid_to_array(grid).T)
    lo, hi = float(array.min()), float(array.max())
    span = hi - lo if hi > lo else 1.0
    pixels = np.round((array - lo) / span * 255).astype(np.uint8)
    height, width = pixels.shape
    return f"P5\n{width} {height}\n255\n".encode("ascii") + pixels.tobytes()


def summarize_grid_response(
    grid: GridData,
    offset: int = 0,
    limit: int = DEFAULT_GRID_LIMIT,
) -> dict[str, Any]:
    """
    Transform a grid into a paged tool response.

    Args:
        grid: Grid produced by subdivision or cascade
        offset: Index of the first stored value to include
        limit: Maximum number of values to include

    Returns:
        Grid metadata, one page of values, and pagination hints
    """
    rows = grid_rows(grid)
    page = rows[offset:offset + limit]
    result = {
        "dimension": grid.dimension,
        "level": grid.level,
        "lower": list(grid.lower),
        "upper": list(grid.upper),
        "trusted_lower": list(grid.trusted[0]),
        "trusted_upper": list(grid.trusted[1]),
        "trusted_count": grid.trusted_count(),
        "total": format_rational(grid.total()),
        "values": page,
        "count": len(page),
        "stored": len(rows),
        "offset": offset,
    }

    if offset + limit < len(rows):
        result["has_more"] = True
        result["next_offset"] = offset + limit
        result["hint"] = (
            f"Showing {len(page)} of {len(rows)} values. "
            f"Use offset={offset + limit} to fetch more."
        )
    else:
        result["has_more"] = False

    return result
