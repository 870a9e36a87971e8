import math

import numpy as np

from tapearm.model import DEFAULT_PARAMS
from tapearm.simulator import builtin_scenarios, run_scenario
from tapearm.svg import marching_squares, overlay_svg, workspace_svg
from tapearm.workspace import compute_grid


def test_marching_squares_circle_level():
    # distance field from the origin: a level set is a circle of that radius;
    # the level avoids exact lattice values, where corner-degenerate cells
    # may legitimately split the chain
    xs = np.linspace(-2.0, 2.0, 81)
    ys = np.linspace(-2.0, 2.0, 81)
    field = np.hypot(*np.meshgrid(xs, ys))
    radius = 0.9753
    chains = marching_squares(xs, ys, field, radius)
    assert chains
    points = [p for chain in chains for p in chain]
    radii = [math.hypot(x, y) for x, y in points]
    assert max(abs(r - radius) for r in radii) < 0.01
    # a single stitched loop that closes on itself
    assert len(chains) == 1
    first, last = chains[0][0], chains[0][-1]
    assert math.hypot(first[0] - last[0], first[1] - last[1]) < 1e-9


def test_marching_squares_skips_nan_cells():
    xs = np.linspace(0.0, 1.0, 11)
    ys = np.linspace(0.0, 1.0, 11)
    field = np.full((11, 11), np.nan)
    assert marching_squares(xs, ys, field, 0.5) == []
    field[:, :5] = 1.0  # no crossing within any all-finite cell
    assert marching_squares(xs, ys, field, 0.5) == []


def test_marching_squares_no_contour_when_level_outside_range():
    xs = ys = np.linspace(0.0, 1.0, 5)
    field = np.ones((5, 5))
    assert marching_squares(xs, ys, field, 2.0) == []


def test_workspace_svg_structure():
    grid = compute_grid(DEFAULT_PARAMS, (-1.0, 1.0, 0.0, 1.0), 0.1)
    text = workspace_svg(grid)
    assert text.startswith("<svg")
    assert text.rstrip().endswith("</svg>")
    assert text.count("<rect") > grid.reachable.sum()  # cells + background
    assert "<polyline" in text


def test_workspace_svg_empty_grid():
    grid = compute_grid(DEFAULT_PARAMS, (0.0, 0.0, 0.0, 1.0), 0.1)
    text = workspace_svg(grid)
    assert text.startswith("<svg")


def test_overlay_svg_structure():
    log = run_scenario(builtin_scenarios()["deploy-and-bend"])
    text = overlay_svg(log, title="deploy-and-bend")
    assert text.startswith("<svg")
    assert "deploy-and-bend" in text
    # one polyline and node/tip circles per drawn configuration
    assert text.count("<polyline") >= 4
    assert text.count("<circle") == 2 * text.count("<polyline")
