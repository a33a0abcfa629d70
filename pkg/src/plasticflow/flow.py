"""Flow-line integration of the velocity field and plasticity-boundary
integration for the constant-feeding ODE dy/dx = (V0 - v)/(U0 - u).

Both curves are integrated in parametric pseudo-time with classical
fixed-step RK4 (dx/dt = u, dy/dt = v, resp. dx/dt = U0 - u,
dy/dt = V0 - v), which stays regular where the slope form blows up.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import DomainError
from .pde import FieldMap

STAGNATION_SPEED = 1e-9


@dataclass(frozen=True)
class FeedSpec:
    """Feeding (or extraction) velocity of the die."""

    U0: float
    V0: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.U0) and math.isfinite(self.V0)):
            raise ValueError("feed velocity must be finite")


@dataclass
class Curve:
    """Ordered polyline with per-node velocity/pressure metadata."""

    nodes: list[tuple[float, float]] = field(default_factory=list)
    meta: list[tuple[float, float, float]] = field(default_factory=list)  # (u, v, sigma)
    stop_reason: str = "steps_exhausted"
    label: str = ""

    def __len__(self) -> int:
        return len(self.nodes)

    def reversed(self) -> "Curve":
        return Curve(list(reversed(self.nodes)), list(reversed(self.meta)),
                     self.stop_reason, self.label)


def _rk4_step(fxy, x: float, y: float, dt: float) -> tuple[float, float]:
    k1x, k1y = fxy(x, y)
    k2x, k2y = fxy(x + 0.5 * dt * k1x, y + 0.5 * dt * k1y)
    k3x, k3y = fxy(x + 0.5 * dt * k2x, y + 0.5 * dt * k2y)
    k4x, k4y = fxy(x + dt * k3x, y + dt * k3y)
    return (x + dt / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x),
            y + dt / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y))


def _integrate(F: FieldMap, vel, p0: tuple[float, float], dt: float,
               n_max: int, direction: str) -> Curve:
    if dt <= 0.0:
        raise ValueError("dt must be positive")
    if direction not in ("forward", "backward"):
        raise ValueError(f"direction must be forward or backward, got {direction!r}")
    x, y = p0
    if not F.domain(x, y):
        raise DomainError(f"seed point ({x}, {y}) outside the field domain")
    step = dt if direction == "forward" else -dt

    def fxy(px: float, py: float) -> tuple[float, float]:
        if not F.domain(px, py):
            raise DomainError("left domain")
        return vel(px, py)

    curve = Curve()

    def push(px: float, py: float) -> None:
        curve.nodes.append((px, py))
        curve.meta.append((*F.velocity(px, py), F.sigma(px, py)))

    push(x, y)
    for _ in range(n_max):
        vx, vy = vel(x, y)
        if math.hypot(vx, vy) < STAGNATION_SPEED:
            curve.stop_reason = "stagnation"
            return curve
        try:
            nx, ny = _rk4_step(fxy, x, y, step)
        except DomainError:
            curve.stop_reason = "left_domain"
            return curve
        if not F.domain(nx, ny):
            curve.stop_reason = "left_domain"
            return curve
        if (nx, ny) == (x, y):
            curve.stop_reason = "stagnation"
            return curve
        x, y = nx, ny
        push(x, y)
    curve.stop_reason = "steps_exhausted"
    return curve


def flowline(F: FieldMap, p0: tuple[float, float], dt: float, n_max: int,
             direction: str = "forward") -> Curve:
    """RK4 streamline of (u, v) from p0."""
    return _integrate(F, F.velocity, p0, dt, n_max, direction)


def plasticity_boundary(F: FieldMap, feed: FeedSpec, p0: tuple[float, float],
                        dt: float, n_max: int, direction: str = "forward") -> Curve:
    """RK4 curve of the relative field (U0 - u, V0 - v) from p0."""

    def rel(x: float, y: float) -> tuple[float, float]:
        u, v = F.velocity(x, y)
        return feed.U0 - u, feed.V0 - v

    return _integrate(F, rel, p0, dt, n_max, direction)


def slip_line(F: FieldMap, p0: tuple[float, float], dt: float, n_max: int,
              family: str = "tan", direction: str = "forward") -> Curve:
    """Optional characteristic-curve mode: dy/dx = tan theta (or -cot theta).

    Off the main die path; the feeding construction only relaxes to it.
    """
    if family not in ("tan", "cot"):
        raise ValueError("slip-line family must be 'tan' or 'cot'")

    def direction_field(x: float, y: float) -> tuple[float, float]:
        th = F.theta(x, y)
        if family == "tan":
            return math.cos(th), math.sin(th)
        return math.sin(th), -math.cos(th)

    return _integrate(F, direction_field, p0, dt, n_max, direction)


def tangency_defect(F: FieldMap, curve: Curve, vel=None,
                    speed_floor: float = 1e-6) -> float:
    """Worst normalized cross product between curve chords and the field.

    The field is evaluated at each chord midpoint (the chord direction
    approximates the trajectory tangent there to second order in the
    step).  Segments whose midpoint speed is below speed_floor are
    skipped.
    """
    sample = vel if vel is not None else F.velocity
    worst = 0.0
    for (x0, y0), (x1, y1) in zip(curve.nodes, curve.nodes[1:]):
        mx, my = 0.5 * (x0 + x1), 0.5 * (y0 + y1)
        if not F.domain(mx, my):
            continue
        vx, vy = sample(mx, my)
        speed = math.hypot(vx, vy)
        chord = math.hypot(x1 - x0, y1 - y0)
        if speed < speed_floor or chord == 0.0:
            continue
        cross = abs((x1 - x0) * vy - (y1 - y0) * vx)
        worst = max(worst, cross / (chord * speed))
    return worst


def boundary_tangency_defect(F: FieldMap, feed: FeedSpec, curve: Curve) -> float:
    def rel(x: float, y: float) -> tuple[float, float]:
        u, v = F.velocity(x, y)
        return feed.U0 - u, feed.V0 - v

    return tangency_defect(F, curve, vel=rel)
