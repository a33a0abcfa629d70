"""Residual oracle for the planar ideal-plasticity system and generic
finite-difference differentiation of evaluable fields.

The governing system, with sigma the mean pressure, theta the stress
angle and (u, v) the velocities:

    (a)  sigma_x - 2k (theta_x cos 2theta + theta_y sin 2theta) = 0
    (b)  sigma_y - 2k (theta_x sin 2theta - theta_y cos 2theta) = 0
    (c)  (u_y + v_x) sin 2theta + (u_x - v_y) cos 2theta       = 0
    (d)  u_x + v_y                                             = 0
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

from .errors import DomainError, MissingGradients

ScalarField = Callable[[float, float], float]

# Gradient tuple order used throughout:
# (theta_x, theta_y, sigma_x, sigma_y, u_x, u_y, v_x, v_y)
GradientFn = Callable[[float, float], tuple[float, float, float, float,
                                            float, float, float, float]]

DEFAULT_FD_H = 1e-5
MIXED_FD_H = 1e-4


@dataclass
class FieldMap:
    """The four evaluable fields of one solution over a planar domain."""

    theta: ScalarField
    sigma: ScalarField
    u: ScalarField
    v: ScalarField
    domain: Callable[[float, float], bool]
    k: float
    analytic_gradients: GradientFn | None = None
    family: str = ""
    notes: list[str] = field(default_factory=list)

    def __post_init__(self) -> None:
        if not self.k > 0.0:
            raise ValueError("volumetric compression coefficient k must be positive")

    def require_inside(self, x: float, y: float) -> None:
        if not self.domain(x, y):
            raise DomainError(f"point ({x}, {y}) outside the {self.family or 'field'} domain")

    def velocity(self, x: float, y: float) -> tuple[float, float]:
        return self.u(x, y), self.v(x, y)


@dataclass(frozen=True)
class Residual4:
    """Left-hand sides of the four governing equations at one point."""

    r_a: float
    r_b: float
    r_c: float
    r_d: float

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.r_a, self.r_b, self.r_c, self.r_d)

    def max_abs(self) -> float:
        return max(abs(v) for v in self.as_tuple())


def fd_step(x: float, y: float, h: float = DEFAULT_FD_H) -> float:
    return h * max(1.0, abs(x), abs(y))


def fd_partial(f: ScalarField, x: float, y: float, axis: str,
               h: float | None = None) -> float:
    """Central difference of f at (x, y) along 'x' or 'y', O(h^2) accurate.

    Any DomainError raised by f at a stencil point propagates; no stencil
    shrinking is attempted.
    """
    if axis not in ("x", "y"):
        raise ValueError(f"axis must be 'x' or 'y', got {axis!r}")
    step = fd_step(x, y) if h is None else h
    if axis == "x":
        return (f(x + step, y) - f(x - step, y)) / (2.0 * step)
    return (f(x, y + step) - f(x, y - step)) / (2.0 * step)


def residual_from_gradients(theta: float, k: float,
                            grads: tuple[float, float, float, float,
                                         float, float, float, float]) -> Residual4:
    """Assemble the four residuals from a theta value and the 8 partials.

    Split out so synthetic gradient injections can probe linearity in the
    derivative inputs while theta is held fixed in the trigonometric
    factors.
    """
    tx, ty, sx, sy, ux, uy, vx, vy = grads
    s2 = math.sin(2.0 * theta)
    c2 = math.cos(2.0 * theta)
    r_a = sx - 2.0 * k * (tx * c2 + ty * s2)
    r_b = sy - 2.0 * k * (tx * s2 - ty * c2)
    r_c = (uy + vx) * s2 + (ux - vy) * c2
    r_d = ux + vy
    return Residual4(r_a, r_b, r_c, r_d)


def _fd_gradients(F: FieldMap, x: float, y: float, h: float):
    step = fd_step(x, y, h)
    for dx, dy in ((step, 0.0), (-step, 0.0), (0.0, step), (0.0, -step)):
        if not F.domain(x + dx, y + dy):
            raise DomainError(
                f"FD stencil point ({x + dx}, {y + dy}) outside the domain"
            )
    return (
        fd_partial(F.theta, x, y, "x", step), fd_partial(F.theta, x, y, "y", step),
        fd_partial(F.sigma, x, y, "x", step), fd_partial(F.sigma, x, y, "y", step),
        fd_partial(F.u, x, y, "x", step), fd_partial(F.u, x, y, "y", step),
        fd_partial(F.v, x, y, "x", step), fd_partial(F.v, x, y, "y", step),
    )


def residual(F: FieldMap, x: float, y: float, scheme: str = "analytic",
             h: float = DEFAULT_FD_H) -> Residual4:
    """Evaluate the four governing-equation residuals at (x, y).

    scheme='analytic' uses the FieldMap's analytic gradients (raising
    MissingGradients when absent); scheme='fd' uses central differences
    with relative step h.
    """
    F.require_inside(x, y)
    if scheme == "analytic":
        if F.analytic_gradients is None:
            raise MissingGradients(f"{F.family or 'field'} has no analytic gradients")
        grads = F.analytic_gradients(x, y)
    elif scheme == "fd":
        grads = _fd_gradients(F, x, y, h)
    else:
        raise ValueError(f"unknown scheme {scheme!r}")
    return residual_from_gradients(F.theta(x, y), F.k, grads)


def compatibility_defect(F: FieldMap, x: float, y: float,
                         h: float = MIXED_FD_H) -> float:
    """|d/dy(sigma_x) - d/dx(sigma_y)| at (x, y).

    When the field ships analytic gradients, sigma_x and sigma_y are taken
    from them and cross-differentiated by an outer central difference:
    this checks integrability of the constructed gradient field, which is
    the compatibility condition the solution families were derived from.
    Without analytic gradients it falls back to nested differences of
    sigma values.
    """
    F.require_inside(x, y)
    step = fd_step(x, y, h)
    for dx in (-step, 0.0, step):
        for dy in (-step, 0.0, step):
            if not F.domain(x + dx, y + dy):
                raise DomainError(
                    f"compatibility stencil point ({x + dx}, {y + dy}) outside the domain"
                )
    if F.analytic_gradients is not None:
        def sig_x(px: float, py: float) -> float:
            return F.analytic_gradients(px, py)[2]

        def sig_y(px: float, py: float) -> float:
            return F.analytic_gradients(px, py)[3]

        d_yx = (sig_x(x, y + step) - sig_x(x, y - step)) / (2.0 * step)
        d_xy = (sig_y(x + step, y) - sig_y(x - step, y)) / (2.0 * step)
        return abs(d_yx - d_xy)

    def sigma_x_at(px: float, py: float) -> float:
        return (F.sigma(px + step, py) - F.sigma(px - step, py)) / (2.0 * step)

    def sigma_y_at(px: float, py: float) -> float:
        return (F.sigma(px, py + step) - F.sigma(px, py - step)) / (2.0 * step)

    d_yx = (sigma_x_at(x, y + step) - sigma_x_at(x, y - step)) / (2.0 * step)
    d_xy = (sigma_y_at(x + step, y) - sigma_y_at(x - step, y)) / (2.0 * step)
    return abs(d_yx - d_xy)
