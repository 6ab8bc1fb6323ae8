"""
Tests for response_helpers module - report rendering, grid export and paging
"""
from fractions import Fraction

import numpy as np
import pytest

from analysis import analyze
from engine import cascade, delta_grid, grid_from_values, subdivide_once
from response_helpers import (
    grid_rows,
    grid_to_array,
    grid_to_csv,
    grid_to_pgm,
    render_analysis_text,
    summarize_grid_response,
)
from schemes import get_scheme


def test_summarize_first_page():
    """Large grids are paged with a hint for the next offset"""
    grid = cascade(get_scheme("box-222"), 2)
    rows = grid_rows(grid)

    result = summarize_grid_response(grid, offset=0, limit=10)

    assert result["count"] == 10
    assert result["stored"] == len(rows)
    assert result["has_more"] is True
    assert result["next_offset"] == 10
    assert "offset=10" in result["hint"]
    assert result["total"] == "16"


def test_summarize_last_page():
    grid = cascade(get_scheme("cubic-bspline"), 1)

    result = summarize_grid_response(grid, offset=3, limit=10)

    assert result["count"] == 2
    assert result["has_more"] is False
    assert "next_offset" not in result
    assert [row["exact"] for row in result["values"]] == ["1/2", "1/8"]


def test_grid_rows_flags_trusted_values():
    data = grid_from_values(1, {(a,): 1 for a in range(4)})
    refined = subdivide_once(get_scheme("cubic-bspline"), data)
    flags = {tuple(row["index"]): row["trusted"] for row in grid_rows(refined)}
    assert flags[(5,)] is True
    assert flags[(0,)] is False


def test_grid_to_csv_with_footer():
    grid = subdivide_once(get_scheme("cubic-bspline"), delta_grid(1))
    text = grid_to_csv(grid, footer="sum=2 expected=2")
    lines = text.splitlines()
    assert lines[0] == "index,exact,float,trusted"
    assert lines[1] == "0,1/8,0.125,1"
    assert lines[-1] == "# sum=2 expected=2"


def test_grid_to_csv_multi_index():
    grid = grid_from_values(2, {(0, -1): Fraction(1, 3)})
    assert grid_to_csv(grid).splitlines()[1].startswith("0 -1,1/3,")


def test_grid_to_array():
    grid = grid_from_values(2, {(0, 0): 1, (1, 2): Fraction(1, 2)})
    array = grid_to_array(grid)
    assert array.shape == (2, 3)
    assert array[1, 2] == 0.5
    assert np.count_nonzero(array) == 2


def test_grid_to_pgm():
    grid = cascade(get_scheme("box-222"), 2)
    data = grid_to_pgm(grid)
    width = grid.upper[0] - grid.lower[0] + 1
    height = grid.upper[1] - grid.lower[1] + 1
    header = f"P5\n{width} {height}\n255\n".encode("ascii")
    assert data.startswith(header)
    assert len(data) == len(header) + width * height


def test_grid_to_pgm_needs_two_dimensions():
    with pytest.raises(ValueError):
        grid_to_pgm(cascade(get_scheme("cubic-bspline"), 1))


def test_render_analysis_text():
    text = render_analysis_text(analyze(get_scheme("cubic-bspline"), 8))
    assert "Scheme: cubic-bspline" in text
    assert "generation degree: 3" in text
    assert "tau: (2)" in text
    assert "reproduction degree: 1" in text
    assert "reproduction conditions fail at total degree 2:" in text
    assert "D^(2) a(1) = 6, required 4" in text
    assert "submask-derivatives: ok" in text
    assert text.endswith("\n")


def test_render_analysis_text_without_sum_rules():
    from laurent import LaurentPoly
    from mask import Mask

    text = render_analysis_text(analyze(Mask(LaurentPoly.constant(1, 2), 2, "constant"), 4))
    assert "generation degree: none" in text
    assert "tau: none (sum rules of order 1 fail)" in text
    assert "reproduction degree: none" in text
