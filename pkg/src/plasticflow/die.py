"""Extrusion-die geometry: walls from flow lines, plasticity limits from
the feeding ODE, a mean-pressure raster, and SVG/CSV/PNG export.

Figures are reproduced structurally, not pixel-wise: acceptance is the
property suite (flow tangency of walls, feeding-ODE tangency of limits,
raster mask = domain predicate, monotone grayscale), since the published
figures carry no coordinate data.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from xml.sax.saxutils import escape

import numpy as np

from .errors import DomainError
from .flow import (Curve, FeedSpec, boundary_tangency_defect, flowline,
                   plasticity_boundary, tangency_defect)
from .pde import FieldMap

Rect = tuple[float, float, float, float]  # (x0, x1, y0, y1)


FeedEntry = tuple[FeedSpec, list[tuple[float, float]]]


@dataclass
class DieScenario:
    field: FieldMap
    region: Rect
    wall_seeds: list[tuple[float, float]] = field(default_factory=list)
    # Plasticity-limit curves: inlet entries then outlet entries, each a
    # feed velocity with its own seed points (a die mouth may carry
    # several candidate feeds; each gets its own labeled curve).
    inlet: list[FeedEntry] = field(default_factory=list)
    outlet: list[FeedEntry] = field(default_factory=list)
    raster: tuple[int, int] = (80, 80)
    dt: float = 1e-3
    n_max: int = 4000

    def __post_init__(self) -> None:
        x0, x1, y0, y1 = self.region
        if not (x0 < x1 and y0 < y1):
            raise ValueError("region must be a nonempty rectangle (x0<x1, y0<y1)")
        seeds = list(self.wall_seeds)
        for _, entry_seeds in self.inlet + self.outlet:
            seeds.extend(entry_seeds)
        for sx, sy in seeds:
            if not (x0 <= sx <= x1 and y0 <= sy <= y1):
                raise DomainError(f"seed ({sx}, {sy}) outside the region")
            if not self.field.domain(sx, sy):
                raise DomainError(f"seed ({sx}, {sy}) outside the solution domain")


@dataclass
class DieGeometry:
    walls: list[Curve]
    limits: list[Curve]  # labeled C1, C2, ...
    raster_x: np.ndarray  # cell-center x, shape (nx, ny)
    raster_y: np.ndarray
    raster_sigma: np.ndarray  # nan where out of domain
    raster_mask: np.ndarray  # bool, domain predicate at cell centers
    bounds: Rect
    feeds: dict[str, FeedSpec] = field(default_factory=dict)  # per limit label


def _inside_rect(rect: Rect, x: float, y: float) -> bool:
    x0, x1, y0, y1 = rect
    return x0 <= x <= x1 and y0 <= y <= y1


def _crossing(rect: Rect, a: tuple[float, float], b: tuple[float, float]) -> float:
    """Smallest s in (0, 1] at which the segment a->b leaves rect."""
    x0r, x1r, y0r, y1r = rect
    s = 1.0
    dx, dy = b[0] - a[0], b[1] - a[1]
    for lo, hi, p0, d in ((x0r, x1r, a[0], dx), (y0r, y1r, a[1], dy)):
        if d > 0.0 and p0 + d > hi:
            s = min(s, (hi - p0) / d)
        elif d < 0.0 and p0 + d < lo:
            s = min(s, (lo - p0) / d)
    return s


def _clip_around(curve: Curve, rect: Rect, anchor: int) -> Curve:
    """Contiguous in-rect piece containing node `anchor`, with the exit
    segments cut at the rectangle boundary by linear interpolation."""
    out = Curve(label=curve.label, stop_reason=curve.stop_reason)
    if not curve.nodes or not _inside_rect(rect, *curve.nodes[anchor]):
        return out

    def interpolate(i_in: int, i_out: int):
        a, b = curve.nodes[i_in], curve.nodes[i_out]
        s = _crossing(rect, a, b)
        node = (a[0] + s * (b[0] - a[0]), a[1] + s * (b[1] - a[1]))
        meta = tuple(ma + s * (mb - ma)
                     for ma, mb in zip(curve.meta[i_in], curve.meta[i_out]))
        return node, meta

    lo = anchor
    while lo > 0 and _inside_rect(rect, *curve.nodes[lo - 1]):
        lo -= 1
    hi = anchor
    while hi + 1 < len(curve.nodes) and _inside_rect(rect, *curve.nodes[hi + 1]):
        hi += 1
    if lo > 0:
        node, meta = interpolate(lo, lo - 1)
        if node != curve.nodes[lo]:
            out.nodes.append(node)
            out.meta.append(meta)
    out.nodes.extend(curve.nodes[lo:hi + 1])
    out.meta.extend(curve.meta[lo:hi + 1])
    if hi + 1 < len(curve.nodes):
        node, meta = interpolate(hi, hi + 1)
        if node != curve.nodes[hi]:
            out.nodes.append(node)
            out.meta.append(meta)
    return out


def _two_sided(kind: str, F: FieldMap, seed, feed, dt, n_max, rect: Rect) -> Curve:
    """Integrate both time directions from the seed inside a padded box,
    join at the seed, and clip to the exact region."""
    x0, x1, y0, y1 = rect
    pad = 0.05 * max(x1 - x0, y1 - y0)
    padded = (x0 - pad, x1 + pad, y0 - pad, y1 + pad)
    base_domain = F.domain
    boxed = replace(F, domain=lambda px, py: (base_domain(px, py)
                                              and _inside_rect(padded, px, py)))
    if kind == "wall":
        fwd = flowline(boxed, seed, dt, n_max, "forward")
        bwd = flowline(boxed, seed, dt, n_max, "backward")
    else:
        fwd = plasticity_boundary(boxed, feed, seed, dt, n_max, "forward")
        bwd = plasticity_boundary(boxed, feed, seed, dt, n_max, "backward")
    joined = bwd.reversed()
    anchor = len(joined.nodes) - 1
    joined.nodes.extend(fwd.nodes[1:])
    joined.meta.extend(fwd.meta[1:])
    joined.stop_reason = fwd.stop_reason
    return _clip_around(joined, rect, anchor)


def build_die(s: DieScenario) -> DieGeometry:
    F = s.field
    walls = []
    for seed in s.wall_seeds:
        curve = _two_sided("wall", F, seed, None, s.dt, s.n_max, s.region)
        if len(curve) >= 2:
            walls.append(curve)
    limits = []
    feeds: dict[str, FeedSpec] = {}
    label_no = 1
    for feed, seeds in s.inlet + s.outlet:
        for seed in seeds:
            curve = _two_sided("limit", F, seed, feed, s.dt, s.n_max, s.region)
            if len(curve) >= 2:
                curve.label = f"C{label_no}"
                feeds[curve.label] = feed
                limits.append(curve)
                label_no += 1
    nx, ny = s.raster
    x0, x1, y0, y1 = s.region
    xs = x0 + (np.arange(nx) + 0.5) * (x1 - x0) / nx
    ys = y0 + (np.arange(ny) + 0.5) * (y1 - y0) / ny
    rx, ry = np.meshgrid(xs, ys, indexing="ij")
    mask = np.zeros((nx, ny), dtype=bool)
    sigma = np.full((nx, ny), np.nan)
    for i in range(nx):
        for j in range(ny):
            if F.domain(rx[i, j], ry[i, j]):
                mask[i, j] = True
                sigma[i, j] = F.sigma(rx[i, j], ry[i, j])
    return DieGeometry(walls, limits, rx, ry, sigma, mask, s.region, feeds)


def check_geometry(g: DieGeometry, F: FieldMap, tol: float = 1e-4) -> dict:
    """Property suite: tangency bounds and raster-mask consistency."""
    wall_defect = max((tangency_defect(F, c) for c in g.walls), default=0.0)
    limit_defect = 0.0
    for c in g.limits:
        feed = g.feeds[c.label]
        limit_defect = max(limit_defect, boundary_tangency_defect(F, feed, c))
    mask_ok = True
    nx, ny = g.raster_mask.shape
    for i in range(nx):
        for j in range(ny):
            if g.raster_mask[i, j] != F.domain(g.raster_x[i, j], g.raster_y[i, j]):
                mask_ok = False
    return {
        "wall_tangency": wall_defect,
        "limit_tangency": limit_defect,
        "raster_mask_consistent": mask_ok,
        "passed": wall_defect < tol and limit_defect < tol and mask_ok,
    }


# ---------------------------------------------------------------------------
# Exports
# ---------------------------------------------------------------------------

_SVG_W = 800.0
_LIGHT_HI = 90.0  # lightness at min sigma (pale grey)
_LIGHT_LO = 20.0  # lightness at max sigma (dark grey)


def sigma_lightness(sigma: float, smin: float, smax: float) -> float:
    """Linear map min sigma -> 90% lightness, max sigma -> 20%."""
    if smax == smin:
        return 0.5 * (_LIGHT_HI + _LIGHT_LO)
    frac = (sigma - smin) / (smax - smin)
    return _LIGHT_HI - (_LIGHT_HI - _LIGHT_LO) * frac


def export_svg(g: DieGeometry, path: str) -> None:
    """Standalone SVG 1.1: grayscale pressure cells, solid black walls,
    dashed labeled limit curves."""
    if not (g.walls or g.limits or g.raster_mask.any()):
        raise ValueError("geometry is empty; nothing to export")
    x0, x1, y0, y1 = g.bounds
    scale = _SVG_W / (x1 - x0)
    height = (y1 - y0) * scale

    def sx(x: float) -> float:
        return (x - x0) * scale

    def sy(y: float) -> float:
        return height - (y - y0) * scale  # svg y grows downward

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{_SVG_W:.2f}" height="{height:.2f}" '
        f'viewBox="0 0 {_SVG_W:.2f} {height:.2f}">',
    ]
    vals = g.raster_sigma[g.raster_mask]
    if vals.size:
        smin = float(vals.min())
        smax = float(vals.max())
        nx, ny = g.raster_mask.shape
        cw = (x1 - x0) / nx * scale
        ch = (y1 - y0) / ny * scale
        parts.append('<g stroke="none">')
        for i in range(nx):
            for j in range(ny):
                if not g.raster_mask[i, j]:
                    continue
                light = sigma_lightness(float(g.raster_sigma[i, j]), smin, smax)
                cx = sx(float(g.raster_x[i, j]))
                cy = sy(float(g.raster_y[i, j]))
                parts.append(
                    f'<rect x="{cx - 0.5 * cw:.3f}" y="{cy - 0.5 * ch:.3f}" '
                    f'width="{cw:.3f}" height="{ch:.3f}" '
                    f'fill="hsl(0, 0%, {light:.6f}%)"/>')
        parts.append('</g>')

    def polyline(curve: Curve) -> str:
        pts = " ".join(f"{sx(x):.3f},{sy(y):.3f}" for x, y in curve.nodes)
        return pts

    for curve in g.walls:
        parts.append(f'<polyline points="{polyline(curve)}" fill="none" '
                     f'stroke="black" stroke-width="2"/>')
    for curve in g.limits:
        parts.append(f'<polyline points="{polyline(curve)}" fill="none" '
                     f'stroke="black" stroke-width="1.5" stroke-dasharray="8 5"/>')
        lx, ly = curve.nodes[len(curve.nodes) // 2]
        parts.append(f'<text x="{sx(lx) + 4.0:.3f}" y="{sy(ly) - 4.0:.3f}" '
                     f'font-size="14">{escape(curve.label)}</text>')
    parts.append('</svg>')
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(parts) + "\n")


def _fmt(v: float) -> str:
    return repr(float(v))  # shortest round-trip decimal


def export_curves_csv(curves: list[Curve], path: str) -> None:
    lines = ["curve_id,node_index,x,y,u,v,sigma"]
    for idx, curve in enumerate(curves):
        cid = curve.label or f"W{idx + 1}"
        for n, ((x, y), (u, v, sig)) in enumerate(zip(curve.nodes, curve.meta)):
            lines.append(f"{cid},{n},{_fmt(x)},{_fmt(y)},{_fmt(u)},{_fmt(v)},{_fmt(sig)}")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def export_raster_csv(g: DieGeometry, path: str) -> None:
    lines = ["i,j,x,y,sigma,in_domain"]
    nx, ny = g.raster_mask.shape
    for i in range(nx):
        for j in range(ny):
            inside = bool(g.raster_mask[i, j])
            sig = _fmt(g.raster_sigma[i, j]) if inside else ""
            lines.append(f"{i},{j},{_fmt(g.raster_x[i, j])},{_fmt(g.raster_y[i, j])},"
                         f"{sig},{1 if inside else 0}")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def export_csv(g: DieGeometry, out_dir: str) -> list[str]:
    """walls.csv + limits.csv + raster.csv inside out_dir."""
    import os
    paths = []
    for name, curves in (("walls.csv", g.walls), ("limits.csv", g.limits)):
        path = os.path.join(out_dir, name)
        export_curves_csv(curves, path)
        paths.append(path)
    raster_path = os.path.join(out_dir, "raster.csv")
    export_raster_csv(g, raster_path)
    paths.append(raster_path)
    return paths


def export_png(g: DieGeometry, path: str) -> None:
    """Matplotlib overview figure rendered alongside the SVG/CSV outputs."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(7.0, 5.6), dpi=110)
    masked = np.ma.masked_where(~g.raster_mask, g.raster_sigma)
    x0, x1, y0, y1 = g.bounds
    ax.imshow(masked.T, origin="lower", extent=(x0, x1, y0, y1),
              cmap="Greys", aspect="auto", interpolation="nearest")
    for curve in g.walls:
        xs, ys = zip(*curve.nodes)
        ax.plot(xs, ys, "k-", lw=1.8)
    for curve in g.limits:
        xs, ys = zip(*curve.nodes)
        ax.plot(xs, ys, "k--", lw=1.2)
        mx, my = curve.nodes[len(curve.nodes) // 2]
        ax.annotate(curve.label, (mx, my), textcoords="offset points",
                    xytext=(4, 4), fontsize=9)
    ax.set_xlim(x0, x1)
    ax.set_ylim(y0, y1)
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    ax.set_title("extrusion die: walls, plasticity limits, mean pressure")
    fig.tight_layout()
    fig.savefig(path, metadata={"Software": None})
    plt.close(fig)
