"""Similarity family: theta = J(y/x).

Two regimes, selected by the first-integral constant c1 of

    ((xi^2 - 1) sin 2J + 2 xi cos 2J) J'(xi) = c1,       xi = y/x.

c1 != 0 (requires |c1| > 1): J is implicit.  The printed implicit
relation does not reproduce the first integral; solving the reduction
ODE via xi = tan(W), V = W - J gives the equivalent separable relation

    (c1 tan V - 1)/sqrt(c1^2 - 1) = tan(sqrt(c1^2 - 1) (c2 - J)/c1),

whose smooth residual form is root-tracked along a continued branch.
The pressure needs an extra quadrature term relative to the printed
line (forced by the compatibility system; its c1 -> 0 limit then
reproduces the closed c1 = 0 pressure exactly):

    sigma = k (xi cos 2J - sin 2J - 2 c1 ln x - Int^xi cos 2J ds) + c3.

c1 = 0: theta = arctan(y/x) and sigma = -2 k arctan(y/x) + c2, the
continuous representative of the printed half-angle arctan (identical
where |y| < |x|).
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass, field as dc_field

from ..errors import (BranchJumpError, DomainError, NoRootError, ParamError)
from ..expr import FuncSlot
from ..pde import FieldMap
from ..quad import Antiderivative, find_root

C1_SUBFAMILIES = ("ADD_A", "ADD_B", "MULT_A", "MULT_C")
C0_SUBFAMILIES = ("C0_ADD_A", "C0_ADD_B", "C0_MULT_A", "C0_MULT_B", "C0_MULT_C")

_MAX_STEP = math.pi / 8.0


# ---------------------------------------------------------------------------
# Implicit angle, c1 != 0
# ---------------------------------------------------------------------------

def implicit_residual(xi: float, J: float, c1: float, c2: float) -> float:
    """Smooth residual of the implicit angle relation (zero on the branch)."""
    s = math.sqrt(c1 * c1 - 1.0)
    V = math.atan(xi) - J
    W = s * (c2 - J) / c1
    return (c1 * math.sin(V) - math.cos(V)) * math.cos(W) - s * math.cos(V) * math.sin(W)


def first_integral_denominator(xi: float, J: float) -> float:
    s2 = math.sin(2.0 * J)
    c2v = math.cos(2.0 * J)
    return (xi * xi - 1.0) * s2 + 2.0 * xi * c2v


def sim_J(xi: float, c1: float, c2: float, seed_J: float = 0.0) -> float:
    """Root J in (-pi/2, pi/2) of the implicit relation nearest seed_J.

    Scans the open J-window for sign changes of the smooth residual and
    polishes each bracket; NoRootError when the scan finds none.
    """
    if abs(c1) <= 1.0:
        raise ParamError(f"|c1| = {abs(c1)} <= 1 makes sqrt(c1^2-1) imaginary")
    roots = _scan_roots(xi, c1, c2)
    if not roots:
        raise NoRootError(f"no root of the angle relation at xi={xi}")
    return min(roots, key=lambda r: abs(r - seed_J))


def _scan_roots(xi: float, c1: float, c2: float, n: int = 720) -> list[float]:
    lo = -0.5 * math.pi + 1e-9
    hi = 0.5 * math.pi - 1e-9
    vals = []
    roots = []
    prev_j = lo
    prev_r = implicit_residual(xi, lo, c1, c2)
    for i in range(1, n + 1):
        j = lo + (hi - lo) * i / n
        r = implicit_residual(xi, j, c1, c2)
        if prev_r == 0.0:
            roots.append(prev_j)
        elif prev_r * r < 0.0:
            roots.append(find_root(lambda J: implicit_residual(xi, J, c1, c2),
                                   prev_j, j, tol=1e-14))
        prev_j, prev_r = j, r
        vals.append(r)
    return roots


class SimJBranch:
    """J(xi) continued along a xi window from a seeded starting root.

    Grid-cached with local re-polish at query time, so queries are smooth
    to machine precision (needed by the FD residual oracle).
    """

    GRID = 2048

    def __init__(self, c1: float, c2: float, window: tuple[float, float],
                 xi0: float | None = None, seed_J: float = 0.0):
        if abs(c1) <= 1.0:
            raise ParamError(f"|c1| = {abs(c1)} <= 1 makes sqrt(c1^2-1) imaginary")
        self.c1 = c1
        self.c2 = c2
        self.lo, self.hi = float(window[0]), float(window[1])
        if not self.lo < self.hi:
            raise ParamError("xi window must satisfy lo < hi")
        self.xi0 = 0.5 * (self.lo + self.hi) if xi0 is None else float(xi0)
        if not self.lo <= self.xi0 <= self.hi:
            raise ParamError("xi0 must lie inside the xi window")
        self._xs: list[float] = []
        self._js: list[float] = []
        self._build(seed_J)

    def _build(self, seed_J: float) -> None:
        n = self.GRID
        xs = [self.lo + (self.hi - self.lo) * i / n for i in range(n + 1)]
        i0 = min(range(len(xs)), key=lambda i: abs(xs[i] - self.xi0))
        j0 = sim_J(xs[i0], self.c1, self.c2, seed_J)
        js: list[float | None] = [None] * len(xs)
        js[i0] = j0
        for i in range(i0 + 1, len(xs)):
            js[i] = self._continue(xs[i - 1], js[i - 1], xs[i])
        for i in range(i0 - 1, -1, -1):
            js[i] = self._continue(xs[i + 1], js[i + 1], xs[i])
        self._xs = xs
        self._js = [float(j) for j in js]

    def _continue(self, xi_from: float, j_from: float, xi_to: float) -> float:
        den = first_integral_denominator(xi_from, j_from)
        if den == 0.0:
            raise BranchJumpError(f"branch fold at xi={xi_from} (J'->inf)")
        pred = j_from + self.c1 / den * (xi_to - xi_from)
        j = self._polish(xi_to, pred, j_from)
        if abs(j - j_from) > _MAX_STEP:
            raise BranchJumpError(
                f"continuation step {abs(j - j_from):.3f} rad > pi/8 at xi={xi_to}")
        return j

    def _polish(self, xi: float, pred: float, fallback_center: float) -> float:
        g = lambda J: implicit_residual(xi, J, self.c1, self.c2)
        delta = 1e-4
        while delta <= _MAX_STEP:
            a, b = pred - delta, pred + delta
            if g(a) * g(b) <= 0.0:
                return find_root(g, a, b, tol=1e-14)
            delta *= 4.0
        raise NoRootError(
            f"no sign change within pi/8 of the predicted branch at xi={xi}")

    def __call__(self, xi: float) -> float:
        if not (self.lo <= xi <= self.hi):
            raise DomainError(f"xi={xi} outside the continued branch window "
                              f"[{self.lo}, {self.hi}]")
        i = bisect_right(self._xs, xi) - 1
        i = min(max(i, 0), len(self._xs) - 2)
        x0, x1 = self._xs[i], self._xs[i + 1]
        w = 0.0 if x1 == x0 else (xi - x0) / (x1 - x0)
        pred = (1.0 - w) * self._js[i] + w * self._js[i + 1]
        return self._polish(xi, pred, pred)

    def deriv(self, xi: float) -> float:
        den = first_integral_denominator(xi, self(xi))
        if den == 0.0:
            raise DomainError(f"J' singular (fold) at xi={xi}")
        return self.c1 / den


# ---------------------------------------------------------------------------
# Parameter bundle
# ---------------------------------------------------------------------------

@dataclass
class SimilarityParams:
    c1: float = 0.0
    c2: float = 0.0
    c3: float = 0.0
    k: float = 1.0
    subfamily: str = "C0_ADD_A"
    c4: float = 0.0
    c5: float = 0.0
    c6: float = 0.0
    c7: float = 0.0
    c8: float = 0.0
    omega2: float = 1.0  # exponent of the radial power subcase
    xi_lo: float = 0.15
    xi_hi: float = 3.0
    xi0: float | None = None
    seed_J: float = 0.0
    F: FuncSlot | None = None
    H: FuncSlot | None = None
    K: FuncSlot | None = None
    P: FuncSlot | None = None
    Q: FuncSlot | None = None

    def __post_init__(self) -> None:
        if self.k <= 0.0:
            raise ParamError("k must be positive")
        if self.subfamily in C1_SUBFAMILIES:
            if self.c1 == 0.0:
                raise ParamError(f"{self.subfamily} requires c1 != 0")
            if abs(self.c1) <= 1.0:
                raise ParamError(
                    f"|c1| = {abs(self.c1)} <= 1 makes sqrt(c1^2-1) imaginary")
        elif self.subfamily in C0_SUBFAMILIES:
            if self.c1 != 0.0:
                raise ParamError(f"{self.subfamily} requires c1 = 0")
        else:
            raise ParamError(f"unknown similarity subfamily {self.subfamily!r}")
        if not self.xi_lo < self.xi_hi:
            raise ParamError("xi window must satisfy xi_lo < xi_hi")

    def require_slots(self, *names: str) -> None:
        for name in names:
            if getattr(self, name) is None:
                raise ParamError(f"{self.subfamily} needs function slot {name!r}")


# ---------------------------------------------------------------------------
# c1 != 0 assembly
# ---------------------------------------------------------------------------

def _make_c1(p: SimilarityParams) -> FieldMap:
    branch = SimJBranch(p.c1, p.c2, (p.xi_lo, p.xi_hi), p.xi0, p.seed_J)
    window = (p.xi_lo, p.xi_hi)
    xi_ref = branch.xi0

    def cos2j(s: float) -> float:
        return math.cos(2.0 * branch(s))

    def sin_jp_over_s(s: float) -> float:
        return math.sin(2.0 * branch(s)) * branch.deriv(s) / s

    def s_sin_jp(s: float) -> float:
        return s * math.sin(2.0 * branch(s)) * branch.deriv(s)

    cos_int = Antiderivative(cos2j, xi_ref, window, tol=1e-12)

    def inside(x: float, y: float) -> bool:
        if x <= 1e-9 or y <= 1e-9:
            return False
        xi = y / x
        return window[0] <= xi <= window[1]

    def theta(x: float, y: float) -> float:
        return branch(y / x)

    def sigma(x: float, y: float) -> float:
        xi = y / x
        J = branch(xi)
        return p.k * (xi * math.cos(2.0 * J) - math.sin(2.0 * J)
                      - 2.0 * p.c1 * math.log(x) - cos_int(xi)) + p.c3

    sub = p.subfamily
    if sub == "ADD_A":
        W = Antiderivative(lambda s: sin_jp_over_s(s) / p.c1, xi_ref, window, tol=1e-12)
        V = Antiderivative(lambda s: s_sin_jp(s) / p.c1, xi_ref, window, tol=1e-12)

        def u(x: float, y: float) -> float:
            xi = y / x
            return (-0.5 * p.c5 * math.cos(2.0 * branch(xi)) / p.c1
                    + p.c6 * W(xi) + p.c6 * math.log(y) - p.c4 * y + p.c7)

        def v(x: float, y: float) -> float:
            xi = y / x
            return (p.c5 * math.log(x) + p.c4 * x + p.c5 * V(xi)
                    - 0.5 * p.c6 * math.cos(2.0 * branch(xi)) / p.c1 + p.c8)
    elif sub == "ADD_B":
        q = p.c4 * (p.c1 + 1.0)
        W = Antiderivative(lambda s: sin_jp_over_s(s) / p.c1, xi_ref, window, tol=1e-12)

        def u(x: float, y: float) -> float:
            xi = y / x
            return q * math.log(y) + q * W(xi) + p.c5

        def v(x: float, y: float) -> float:
            # printed denominator c1 corrected to 2c1 (incompressibility)
            return -0.5 * q * math.cos(2.0 * branch(y / x)) / p.c1 + p.c6
    elif sub == "MULT_A":
        W = Antiderivative(sin_jp_over_s, xi_ref, window, tol=1e-12)

        def u(x: float, y: float) -> float:
            xi = y / x
            return (2.0 * p.c4 * W(xi) + p.c5 * y
                    + 2.0 * p.c1 * p.c4 * math.log(y) + p.c6)

        def v(x: float, y: float) -> float:
            return -p.c5 * x - p.c4 * math.cos(2.0 * branch(y / x)) + p.c7
    else:  # MULT_C
        W = Antiderivative(sin_jp_over_s, xi_ref, window, tol=1e-12)

        def u(x: float, y: float) -> float:
            xi = y / x
            return -p.c4 * math.log(y) - p.c4 / p.c1 * W(xi) + p.c5

        def v(x: float, y: float) -> float:
            # omega_1 of the printed line identified with c4
            return 0.5 * p.c4 * math.cos(2.0 * branch(y / x)) / p.c1 + p.c6

    return FieldMap(theta=theta, sigma=sigma, u=u, v=v, domain=inside, k=p.k,
                    analytic_gradients=None, family=f"sim/{sub.lower()}")


# ---------------------------------------------------------------------------
# c1 = 0 assembly
# ---------------------------------------------------------------------------

def _c0_theta_sigma(p: SimilarityParams):
    def theta(x: float, y: float) -> float:
        return math.atan(y / x)

    def sigma(x: float, y: float) -> float:
        return -2.0 * p.k * math.atan(y / x) + p.c2

    def base_grads(x: float, y: float) -> tuple[float, float, float, float]:
        r2 = x * x + y * y
        tx = -y / r2
        ty = x / r2
        return tx, ty, -2.0 * p.k * tx, -2.0 * p.k * ty

    return theta, sigma, base_grads


def _make_c0(p: SimilarityParams) -> FieldMap:
    theta, sigma, base_grads = _c0_theta_sigma(p)
    sub = p.subfamily
    notes: list[str] = []
    needs_window = False

    if sub == "C0_ADD_A":
        p.require_slots("F")
        F = p.F

        def u(x: float, y: float) -> float:
            return -p.c4 * y + F.deriv(y / x)

        def v(x: float, y: float) -> float:
            xi = y / x
            return p.c4 * x + xi * F.deriv(xi) - F(xi)

        symbolic = F.symbolic

        def vel_grads(x: float, y: float):
            xi = y / x
            f2 = F.deriv2(xi)
            return (-xi * f2 / x, -p.c4 + f2 / x,
                    p.c4 - xi * xi * f2 / x, xi * f2 / x)

    elif sub == "C0_ADD_B":
        p.require_slots("K", "H")
        K, H = p.K, p.H

        def u(x: float, y: float) -> float:
            return K.deriv(y / x) - y * H(x * x + y * y) + p.c4

        def v(x: float, y: float) -> float:
            xi = y / x
            return xi * K.deriv(xi) - K(xi) + x * H(x * x + y * y) + p.c5

        symbolic = K.symbolic and H.symbolic

        def vel_grads(x: float, y: float):
            xi = y / x
            eta = x * x + y * y
            k2 = K.deriv2(xi)
            h = H(eta)
            hp = H.deriv(eta)
            ux = -xi * k2 / x - 2.0 * x * y * hp
            uy = k2 / x - h - 2.0 * y * y * hp
            vx = -xi * xi * k2 / x + h + 2.0 * x * x * hp
            vy = xi * k2 / x + 2.0 * x * y * hp
            return ux, uy, vx, vy

    elif sub == "C0_MULT_A":
        p.require_slots("P", "Q")
        P, Q = p.P, p.Q
        needs_window = True
        xi_ref = 0.5 * (p.xi_lo + p.xi_hi) if p.xi0 is None else p.xi0
        qint = Antiderivative(lambda s: Q.deriv(s) / s, xi_ref,
                              (p.xi_lo, p.xi_hi), tol=1e-12)
        notes.append("u Q-term uses the compatible quadrature Int Q'(s)/s ds")

        def u(x: float, y: float) -> float:
            return y * P(x * x + y * y) + qint(y / x) + p.c4

        def v(x: float, y: float) -> float:
            return Q(y / x) - x * P(x * x + y * y)

        symbolic = P.symbolic and Q.symbolic

        def vel_grads(x: float, y: float):
            xi = y / x
            eta = x * x + y * y
            pv = P(eta)
            pp = P.deriv(eta)
            qp = Q.deriv(xi)
            ux = 2.0 * x * y * pp - qp / x
            uy = pv + 2.0 * y * y * pp + qp / y
            vx = -xi * qp / x - pv - 2.0 * x * x * pp
            vy = qp / x - 2.0 * x * y * pp
            return ux, uy, vx, vy

    elif sub == "C0_MULT_B":
        p.require_slots("F")
        F = p.F
        needs_window = True
        xi_ref = 0.5 * (p.xi_lo + p.xi_hi) if p.xi0 is None else p.xi0
        vint = Antiderivative(lambda s: s * F.deriv(s), xi_ref,
                              (p.xi_lo, p.xi_hi), tol=1e-12)

        def u(x: float, y: float) -> float:
            return F(y / x)

        def v(x: float, y: float) -> float:
            return vint(y / x) + p.c3

        symbolic = F.symbolic

        def vel_grads(x: float, y: float):
            xi = y / x
            fp = F.deriv(xi)
            return (-xi * fp / x, fp / x, -xi * xi * fp / x, xi * fp / x)

    elif sub == "C0_MULT_C":
        if p.c4 != 0.0 and p.c4 != p.c3:
            raise ParamError(
                "C0_MULT_C requires c4 = c3 (unequal amplitudes violate "
                "incompressibility)")
        amp = p.c3
        w = 0.5 * p.omega2

        def u(x: float, y: float) -> float:
            return amp * y * (x * x + y * y) ** w

        def v(x: float, y: float) -> float:
            return -amp * x * (x * x + y * y) ** w

        symbolic = True

        def vel_grads(x: float, y: float):
            eta = x * x + y * y
            g = eta ** w
            gp = w * eta ** (w - 1.0)
            ux = amp * y * 2.0 * x * gp
            uy = amp * (g + 2.0 * y * y * gp)
            vx = -amp * (g + 2.0 * x * x * gp)
            vy = -amp * x * 2.0 * y * gp
            return ux, uy, vx, vy
    else:
        raise ParamError(f"unknown similarity subfamily {sub!r}")

    if needs_window:
        lo, hi = p.xi_lo, p.xi_hi

        def inside(x: float, y: float) -> bool:
            return abs(x) > 1e-9 and lo <= y / x <= hi
    else:
        def inside(x: float, y: float) -> bool:
            return abs(x) > 1e-9

    grads = None
    if symbolic:
        def grads(x: float, y: float):
            tx, ty, sx, sy = base_grads(x, y)
            ux, uy, vx, vy = vel_grads(x, y)
            return (tx, ty, sx, sy, ux, uy, vx, vy)

    return FieldMap(theta=theta, sigma=sigma, u=u, v=v, domain=inside, k=p.k,
                    analytic_gradients=grads, family=f"sim/{sub.lower()}",
                    notes=notes)


def make_similarity_solution(p: SimilarityParams) -> FieldMap:
    if p.subfamily in C1_SUBFAMILIES:
        return _make_c1(p)
    return _make_c0(p)


# ---------------------------------------------------------------------------
# Registry plumbing
# ---------------------------------------------------------------------------

_NUMERIC = ("c1", "c2", "c3", "c4", "c5", "c6", "c7", "c8",
            "omega2", "xi_lo", "xi_hi", "xi0", "seed_J", "k")
_SLOTS = ("F", "H", "K", "P", "Q")


def _params_from_dict(sub: str, d: dict, funcs: dict) -> SimilarityParams:
    kw = {}
    for key in _NUMERIC:
        if key in d:
            kw[key] = float(d.pop(key))
    if d:
        raise ParamError(f"unknown similarity parameters: {sorted(d)}")
    for name in _SLOTS:
        if name in funcs:
            kw[name] = FuncSlot(funcs.pop(name))
    if funcs:
        raise ParamError(f"unknown similarity function slots: {sorted(funcs)}")
    return SimilarityParams(subfamily=sub, **kw)


def _builder(sub: str):
    def build(params: dict, functions: dict) -> FieldMap:
        return make_similarity_solution(_params_from_dict(sub, params, functions))
    return build


FAMILIES = {
    "sim/add_a": (_builder("ADD_A"), "additive separation, implicit angle (c1 != 0)"),
    "sim/add_b": (_builder("ADD_B"), "additive separation subcase (c1 != 0)"),
    "sim/mult_a": (_builder("MULT_A"), "multiplicative separation (c1 != 0)"),
    "sim/mult_c": (_builder("MULT_C"), "multiplicative separation subcase (c1 != 0)"),
    "sim/c0_add_a": (_builder("C0_ADD_A"), "c1=0, one arbitrary function F"),
    "sim/c0_add_b": (_builder("C0_ADD_B"), "c1=0, arbitrary K(y/x) and H(x^2+y^2)"),
    "sim/c0_mult_a": (_builder("C0_MULT_A"), "c1=0, radial P and angular Q functions"),
    "sim/c0_mult_b": (_builder("C0_MULT_B"), "c1=0, u=F(y/x) with v by quadrature"),
    "sim/c0_mult_c": (_builder("C0_MULT_C"), "c1=0, radial power subcase"),
}
