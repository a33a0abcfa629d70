"""Adaptive quadrature, cached antiderivatives and bracketed root finding.

These are the numeric workhorses behind the solution families: every
velocity component expressed "by quadrature" goes through an
:class:`Antiderivative`, and the implicit angle equations are solved with
:func:`find_root`.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from typing import Callable

from .errors import DomainError, NoBracketError, SingularityError

DEFAULT_TOL = 1e-10
ROOT_TOL = 1e-12

_MAX_DEPTH = 40


def _simpson(fa: float, fm: float, fb: float, a: float, b: float) -> float:
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb)


def _adaptive(f, a, b, fa, fm, fb, whole, tol, depth):
    m = 0.5 * (a + b)
    lm = 0.5 * (a + m)
    rm = 0.5 * (m + b)
    flm = f(lm)
    frm = f(rm)
    left = _simpson(fa, flm, fm, a, m)
    right = _simpson(fm, frm, fb, m, b)
    err = left + right - whole
    # Relative floor keeps steep-but-finite integrands from grinding once
    # the requested tolerance underflows below roundoff of the partial sums.
    floor = 1e-14 * (abs(left) + abs(right))
    if abs(err) <= max(15.0 * tol, floor):
        # Richardson correction brings the estimate to O(h^6).
        return left + right + err / 15.0
    if depth >= _MAX_DEPTH:
        raise SingularityError(
            f"adaptive Simpson did not converge on [{a}, {b}] (depth {depth})"
        )
    return _adaptive(f, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) + _adaptive(
        f, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1
    )


def integrate(f: Callable[[float], float], a: float, b: float, tol: float = DEFAULT_TOL) -> float:
    """Adaptive Simpson integral of f over [a, b] with absolute-error target tol.

    Orientation-sensitive: swapping a and b negates the result.  Endpoint
    values are probed up front, so an integrand that is singular at an
    endpoint fails fast instead of recursing forever.
    """
    if a == b:
        return 0.0
    sign = 1.0
    if b < a:
        a, b = b, a
        sign = -1.0
    fa = f(a)
    fb = f(b)
    fm = f(0.5 * (a + b))
    for v, where in ((fa, a), (fb, b), (fm, 0.5 * (a + b))):
        if not math.isfinite(v):
            raise SingularityError(f"integrand not finite at {where}")
    whole = _simpson(fa, fm, fb, a, b)
    return sign * _adaptive(f, a, b, fa, fm, fb, whole, tol, 0)


class Antiderivative:
    """Cumulative integral Phi(xi) = int_{xi0}^{xi} f, cached on a grid.

    The table is built once over `rng`; point queries locate the nearest
    grid node and add a local Simpson correction, so Phi(xi0) = 0 exactly
    and the pointwise error stays within ~10x the build tolerance.  Queries
    outside the built range raise DomainError (no silent truncation).
    """

    BASE_NODES = 2048
    REFINE = 4
    RATIO = 1e3

    def __init__(self, f: Callable[[float], float], xi0: float,
                 rng: tuple[float, float], tol: float = DEFAULT_TOL):
        lo, hi = float(rng[0]), float(rng[1])
        if not lo < hi:
            raise ValueError("antiderivative range must satisfy lo < hi")
        if not lo <= xi0 <= hi:
            raise ValueError("xi0 must lie inside the range")
        self.f = f
        self.xi0 = float(xi0)
        self.lo = lo
        self.hi = hi
        self.tol = tol
        self._build()

    def _build(self) -> None:
        n = self.BASE_NODES
        xs = [self.lo + (self.hi - self.lo) * i / n for i in range(n + 1)]
        fs = [self.f(x) for x in xs]
        # Refine cells where the integrand magnitude jumps by > RATIO
        # (cot 2J style blow-ups near the window ends).
        grid: list[float] = []
        for i in range(n):
            grid.append(xs[i])
            m0 = abs(fs[i]) + 1e-300
            m1 = abs(fs[i + 1]) + 1e-300
            if max(m0, m1) / min(m0, m1) > self.RATIO:
                step = (xs[i + 1] - xs[i]) / self.REFINE
                grid.extend(xs[i] + step * j for j in range(1, self.REFINE))
        grid.append(xs[-1])
        width = self.hi - self.lo
        cum = [0.0]
        for i in range(len(grid) - 1):
            cell_tol = self.tol * (grid[i + 1] - grid[i]) / width
            cum.append(cum[-1] + integrate(self.f, grid[i], grid[i + 1], cell_tol))
        # Rebase so Phi(xi0) = 0 exactly at query time.
        self._grid = grid
        self._cum = cum
        self._offset = self._raw(self.xi0)

    def _raw(self, xi: float) -> float:
        i = bisect_right(self._grid, xi) - 1
        i = min(max(i, 0), len(self._grid) - 2)
        # Correct from the nearer cell edge to keep the local integral short.
        if abs(xi - self._grid[i]) <= abs(self._grid[i + 1] - xi):
            base, basev = self._grid[i], self._cum[i]
        else:
            base, basev = self._grid[i + 1], self._cum[i + 1]
        if xi == base:
            return basev
        return basev + integrate(self.f, base, xi, self.tol)

    def __call__(self, xi: float) -> float:
        if not (self.lo <= xi <= self.hi):
            raise DomainError(
                f"antiderivative query {xi} outside built range [{self.lo}, {self.hi}]"
            )
        if xi == self.xi0:
            return 0.0
        return self._raw(xi) - self._offset


def find_root(g: Callable[[float], float], lo: float, hi: float,
              tol: float = ROOT_TOL, max_iter: int = 200) -> float:
    """Safeguarded bisection/secant hybrid on a bracketing interval.

    Requires g(lo)*g(hi) <= 0; returns x with |g(x)| small and the final
    bracket width below tol*max(1, |x|).  Deterministic for identical
    inputs.
    """
    a, b = float(lo), float(hi)
    fa, fb = g(a), g(b)
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if fa * fb > 0.0:
        raise NoBracketError(f"g({a})={fa} and g({b})={fb} do not bracket a root")
    for _ in range(max_iter):
        # Secant proposal, safeguarded to stay inside the bracket.
        if fb != fa:
            x = b - fb * (b - a) / (fb - fa)
        else:
            x = 0.5 * (a + b)
        mid = 0.5 * (a + b)
        if not (min(a, b) < x < max(a, b)):
            x = mid
        # Force at least a bisection-rate shrink every other step.
        if abs(x - mid) > 0.45 * abs(b - a):
            x = mid
        fx = g(x)
        if fx == 0.0:
            return x
        if fa * fx < 0.0:
            b, fb = x, fx
        else:
            a, fa = x, fx
        if abs(b - a) < tol * max(1.0, abs(x)):
            return x if abs(fx) <= min(abs(fa), abs(fb)) else (a if abs(fa) < abs(fb) else b)
    return a if abs(fa) < abs(fb) else b
