"""Trivial exact solutions used as test fixtures and CLI smoke targets."""

from __future__ import annotations

from ..errors import ParamError
from ..pde import FieldMap


def _const_builder(params: dict, functions: dict) -> FieldMap:
    theta0 = float(params.pop("theta", 0.0))
    sigma0 = float(params.pop("sigma", 0.0))
    u0 = float(params.pop("u", 0.0))
    v0 = float(params.pop("v", 0.0))
    k = float(params.pop("k", 1.0))
    if params:
        raise ParamError(f"unknown fixture parameters: {sorted(params)}")
    if functions:
        raise ParamError("fixture/const takes no function slots")

    def grads(x: float, y: float):
        return (0.0,) * 8

    return FieldMap(theta=lambda x, y: theta0, sigma=lambda x, y: sigma0,
                    u=lambda x, y: u0, v=lambda x, y: v0,
                    domain=lambda x, y: True, k=k, analytic_gradients=grads,
                    family="fixture/const")


def _rigid_builder(params: dict, functions: dict) -> FieldMap:
    """Rigid rotation u = -omega y, v = omega x with constant theta, sigma."""
    omega = float(params.pop("omega", 1.0))
    theta0 = float(params.pop("theta", 0.0))
    sigma0 = float(params.pop("sigma", 0.0))
    k = float(params.pop("k", 1.0))
    if params:
        raise ParamError(f"unknown fixture parameters: {sorted(params)}")
    if functions:
        raise ParamError("fixture/rigid takes no function slots")

    def grads(x: float, y: float):
        return (0.0, 0.0, 0.0, 0.0, 0.0, -omega, omega, 0.0)

    return FieldMap(theta=lambda x, y: theta0, sigma=lambda x, y: sigma0,
                    u=lambda x, y: -omega * y, v=lambda x, y: omega * x,
                    domain=lambda x, y: True, k=k, analytic_gradients=grads,
                    family="fixture/rigid")


FAMILIES = {
    "fixture/const": (_const_builder, "constant fields (exact trivial solution)"),
    "fixture/rigid": (_rigid_builder, "rigid rotation with constant stress"),
}
