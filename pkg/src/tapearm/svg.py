"""Hand-rolled SVG output: workspace heat maps with contour polylines and
schematic configuration overlays. No plotting dependency; output is small,
deterministic text.
"""

from __future__ import annotations

import math

import numpy as np

# Marching-squares case table, corner bits: 1=BL, 2=BR, 4=TR, 8=TL.
# Values are (edge, edge) pairs; edges are "b", "r", "t", "l".
_CASES = {
    1: [("l", "b")],
    2: [("b", "r")],
    3: [("l", "r")],
    4: [("r", "t")],
    6: [("b", "t")],
    7: [("l", "t")],
    8: [("t", "l")],
    9: [("b", "t")],
    11: [("r", "t")],
    12: [("r", "l")],
    13: [("b", "r")],
    14: [("l", "b")],
}


def _interpolate(pa, va, pb, vb, level):
    t = (level - va) / (vb - va)
    return (pa[0] + t * (pb[0] - pa[0]), pa[1] + t * (pb[1] - pa[1]))


def marching_squares(xs, ys, field, level) -> list:
    """Iso-contour polylines of ``field`` (shape (len(ys), len(xs))) at ``level``.

    Cells with a NaN corner are skipped. Segments are stitched into chains
    where they share endpoints; returns polylines as lists of (x, y) tuples.
    """
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    field = np.asarray(field, dtype=float)
    segments = []
    for iy in range(len(ys) - 1):
        for ix in range(len(xs) - 1):
            v_bl = field[iy, ix]
            v_br = field[iy, ix + 1]
            v_tr = field[iy + 1, ix + 1]
            v_tl = field[iy + 1, ix]
            corners = (v_bl, v_br, v_tr, v_tl)
            if any(math.isnan(v) for v in corners):
                continue
            case = ((v_bl > level) | (v_br > level) << 1
                    | (v_tr > level) << 2 | (v_tl > level) << 3)
            if case in (0, 15):
                continue
            x0, x1 = xs[ix], xs[ix + 1]
            y0, y1 = ys[iy], ys[iy + 1]
            p_bl, p_br, p_tr, p_tl = (x0, y0), (x1, y0), (x1, y1), (x0, y1)
            edge_ends = {
                "b": (p_bl, v_bl, p_br, v_br),
                "r": (p_br, v_br, p_tr, v_tr),
                "t": (p_tl, v_tl, p_tr, v_tr),
                "l": (p_bl, v_bl, p_tl, v_tl),
            }
            if case in (5, 10):
                # Saddle cell: use the center value to pick the separation.
                center_above = 0.25 * sum(corners) > level
                if case == 5:
                    pairs = [("b", "r"), ("t", "l")] if center_above else [("l", "b"), ("r", "t")]
                else:
                    pairs = [("l", "b"), ("r", "t")] if center_above else [("b", "r"), ("t", "l")]
            else:
                pairs = _CASES[case]
            for edge_a, edge_b in pairs:
                # Only crossed edges are interpolated; their endpoint values
                # straddle the level, so the denominator is nonzero.
                segments.append((_interpolate(*edge_ends[edge_a], level),
                                 _interpolate(*edge_ends[edge_b], level)))
    return _stitch(segments)


def _key(point):
    return (round(point[0] * 1e9), round(point[1] * 1e9))


def _stitch(segments) -> list:
    """Join segments sharing endpoints into polylines (undirected)."""
    adjacency = {}
    for index, (a, b) in enumerate(segments):
        adjacency.setdefault(_key(a), []).append(index)
        adjacency.setdefault(_key(b), []).append(index)
    used = [False] * len(segments)
    polylines = []
    for start in range(len(segments)):
        if used[start]:
            continue
        used[start] = True
        a, b = segments[start]
        chain = [a, b]
        for grow_end in (True, False):
            while True:
                tip = chain[-1] if grow_end else chain[0]
                candidates = [i for i in adjacency.get(_key(tip), []) if not used[i]]
                if not candidates:
                    break
                index = candidates[0]
                used[index] = True
                pa, pb = segments[index]
                nxt = pb if _key(pa) == _key(tip) else pa
                if grow_end:
                    chain.append(nxt)
                else:
                    chain.insert(0, nxt)
        polylines.append(chain)
    return polylines


# Five-stop colormap for the heat maps (dark blue -> yellow).
_STOPS = [
    (0.00, (13, 8, 135)),
    (0.25, (126, 3, 168)),
    (0.50, (203, 70, 121)),
    (0.75, (248, 149, 64)),
    (1.00, (240, 249, 33)),
]


def _color(t: float) -> str:
    t = min(1.0, max(0.0, t))
    for (t0, c0), (t1, c1) in zip(_STOPS, _STOPS[1:]):
        if t <= t1:
            f = 0.0 if t1 == t0 else (t - t0) / (t1 - t0)
            r, g, b = (round(a + f * (b_ - a)) for a, b_ in zip(c0, c1))
            return f"#{r:02x}{g:02x}{b:02x}"
    return "#ffffff"


class _Canvas:
    """Minimal SVG document with a y-up data coordinate system."""

    def __init__(self, x_min, x_max, y_min, y_max, width=640, pad=20):
        self.scale = (width - 2 * pad) / max(x_max - x_min, 1e-9)
        self.width = width
        self.height = int(round((y_max - y_min) * self.scale)) + 2 * pad
        self.pad = pad
        self.x_min, self.y_max = x_min, y_max
        self.parts = []

    def px(self, x, y):
        return (self.pad + (x - self.x_min) * self.scale,
                self.pad + (self.y_max - y) * self.scale)

    def rect(self, x, y, w, h, fill):
        px, py = self.px(x, y + h)
        self.parts.append(f'<rect x="{px:.2f}" y="{py:.2f}" width="{w * self.scale:.2f}" '
                          f'height="{h * self.scale:.2f}" fill="{fill}"/>')

    def polyline(self, points, stroke, stroke_width=1.5, opacity=1.0):
        text = " ".join(f"{px:.2f},{py:.2f}" for px, py in (self.px(x, y) for x, y in points))
        self.parts.append(f'<polyline points="{text}" fill="none" stroke="{stroke}" '
                          f'stroke-width="{stroke_width}" opacity="{opacity:.3f}"/>')

    def circle(self, x, y, radius_px, fill):
        px, py = self.px(x, y)
        self.parts.append(f'<circle cx="{px:.2f}" cy="{py:.2f}" r="{radius_px}" fill="{fill}"/>')

    def text(self, x, y, message):
        px, py = self.px(x, y)
        self.parts.append(f'<text x="{px:.2f}" y="{py:.2f}" font-size="12" '
                          f'font-family="sans-serif">{message}</text>')

    def render(self) -> str:
        body = "\n".join(self.parts)
        return (f'<svg xmlns="http://www.w3.org/2000/svg" width="{self.width}" '
                f'height="{self.height}">\n<rect width="100%" height="100%" fill="white"/>\n'
                f'{body}\n</svg>\n')


def workspace_svg(grid, levels=None, width=640) -> str:
    """Heat map of |minimum angle| over reachable cells, with contour lines.

    ``levels`` are contour values in radians; defaults to 10..50 deg.
    """
    if levels is None:
        levels = [math.radians(v) for v in (10, 20, 30, 40, 50)]
    x_min, x_max, y_min, y_max = grid.bounds
    canvas = _Canvas(x_min, x_max, y_min, y_max, width=width)
    if grid.reachable.size == 0:
        return canvas.render()
    magnitude = np.abs(grid.min_angle)
    vmax = np.nanmax(magnitude) if grid.reachable.any() else 1.0
    if not (vmax > 0):
        vmax = 1.0
    half = 0.5 * grid.resolution
    for iy in range(grid.ny):
        for ix in range(grid.nx):
            if grid.reachable[iy, ix]:
                fill = _color(float(magnitude[iy, ix]) / vmax)
                canvas.rect(float(grid.xs[ix]) - half, float(grid.ys[iy]) - half,
                            grid.resolution, grid.resolution, fill)
    for level in levels:
        for chain in marching_squares(grid.xs, grid.ys, magnitude, level):
            canvas.polyline(chain, stroke="black", stroke_width=1.0)
    return canvas.render()


def overlay_svg(log, title=None, width=480, max_configs=9) -> str:
    """Schematic overlay of sampled configurations from a trajectory log.

    Links are drawn as segments along the tape midline, the pinching node as
    a circle, the tip as a dot. Samples are the initial row, the segment
    boundaries, and the final row, thinned to ``max_configs``.
    """
    indices = sorted(set([0] + list(log.boundary_indices) + [len(log.rows) - 1]))
    if len(indices) > max_configs:
        picks = np.linspace(0, len(indices) - 1, max_configs)
        indices = [indices[int(round(p))] for p in picks]
    rows = [log.rows[i] for i in indices]
    xs = [0.0] + [r.x for r in rows]
    ys = [0.0] + [r.y for r in rows] + [r.l1 for r in rows]
    margin = 0.05 * max(max(xs) - min(xs), max(ys) - min(ys), 0.1)
    canvas = _Canvas(min(xs) - margin, max(xs) + margin,
                     min(ys) - margin, max(ys) + margin, width=width)
    last = len(rows) - 1
    for order, row in enumerate(rows):
        f = order / max(last, 1)
        color = "#d62728" if order == last else _color(0.2 + 0.6 * f)
        opacity = 0.35 + 0.65 * f
        canvas.polyline([(0.0, 0.0), (0.0, row.l1), (row.x, row.y)],
                        stroke=color, stroke_width=2.5, opacity=opacity)
        canvas.circle(0.0, row.l1, 4, color)
        canvas.circle(row.x, row.y, 2.5, color)
    if title:
        canvas.text(min(xs) - 0.5 * margin, max(ys) + 0.5 * margin, title)
    return canvas.render()
