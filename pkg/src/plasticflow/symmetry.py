"""Exact Lie-algebra arithmetic for the eight symmetry generators,
numeric vector-field brackets, the discrete automorphisms, and
annihilation checks of the tabulated subalgebra invariants.

Basis order everywhere: (D1, D2, B, P1, P2, P3, P4, P5) with

    D1 = x dx + y dy        D2 = u du + v dv        B = -y du + x dv
    P1 = dx   P2 = dy   P3 = dsigma   P4 = du   P5 = dv

acting on points (x, y, sigma, theta, u, v).  No generator carries a
d/dtheta component: theta is an invariant of the whole algebra.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Sequence

import numpy as np

from .errors import DomainError

BASIS_NAMES = ("D1", "D2", "B", "P1", "P2", "P3", "P4", "P5")
D1, D2, B, P1, P2, P3, P4, P5 = range(8)

# Point coordinate order: (x, y, sigma, theta, u, v)
_X, _Y, _SIG, _TH, _U, _V = range(6)


class Point6(NamedTuple):
    x: float
    y: float
    sigma: float
    theta: float
    u: float
    v: float


# ---------------------------------------------------------------------------
# Algebra elements and their vector fields
# ---------------------------------------------------------------------------

def _basis_matrices() -> tuple[np.ndarray, np.ndarray]:
    """Affine representation c(p) = M p + b for each basis generator."""
    M = np.zeros((8, 6, 6))
    b = np.zeros((8, 6))
    M[D1, _X, _X] = 1.0
    M[D1, _Y, _Y] = 1.0
    M[D2, _U, _U] = 1.0
    M[D2, _V, _V] = 1.0
    M[B, _U, _Y] = -1.0
    M[B, _V, _X] = 1.0
    b[P1, _X] = 1.0
    b[P2, _Y] = 1.0
    b[P3, _SIG] = 1.0
    b[P4, _U] = 1.0
    b[P5, _V] = 1.0
    return M, b


_BASIS_M, _BASIS_B = _basis_matrices()


@dataclass(frozen=True)
class AlgebraElement:
    """Coefficient vector over the eight basis generators."""

    coeffs: tuple[float, ...]

    def __post_init__(self):
        if len(self.coeffs) != 8:
            raise ValueError("AlgebraElement needs exactly 8 coefficients")
        if not all(math.isfinite(c) for c in self.coeffs):
            raise ValueError("AlgebraElement coefficients must be finite")

    @classmethod
    def basis(cls, index: int) -> "AlgebraElement":
        c = [0.0] * 8
        c[index] = 1.0
        return cls(tuple(c))

    @classmethod
    def combo(cls, **named: float) -> "AlgebraElement":
        c = [0.0] * 8
        for name, val in named.items():
            c[BASIS_NAMES.index(name)] = float(val)
        return cls(tuple(c))

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        return AlgebraElement(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        return AlgebraElement(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __rmul__(self, s: float) -> "AlgebraElement":
        return AlgebraElement(tuple(s * a for a in self.coeffs))

    def __neg__(self) -> "AlgebraElement":
        return -1.0 * self

    def is_zero(self, tol: float = 0.0) -> bool:
        return all(abs(c) <= tol for c in self.coeffs)

    def __str__(self) -> str:
        parts = []
        for c, name in zip(self.coeffs, BASIS_NAMES):
            if c == 0.0:
                continue
            if c == 1.0:
                parts.append(f"+{name}")
            elif c == -1.0:
                parts.append(f"-{name}")
            else:
                parts.append(f"{c:+g}*{name}")
        return "".join(parts).lstrip("+") or "0"


class GeneratorField:
    """Evaluable vector field of an algebra element (affine in the point)."""

    def __init__(self, element: AlgebraElement):
        c = np.asarray(element.coeffs)
        self.element = element
        self.M = np.tensordot(c, _BASIS_M, axes=1)
        self.b = np.tensordot(c, _BASIS_B, axes=1)

    def __call__(self, p: Point6) -> np.ndarray:
        return self.M @ np.asarray(p, dtype=float) + self.b


# ---------------------------------------------------------------------------
# Structure constants (commutation table)
# ---------------------------------------------------------------------------

def _build_structure_table() -> np.ndarray:
    """table[i, j, :] = coefficients of [e_i, e_j].

    Upper triangle transcribed from the commutation table; the rest by
    antisymmetry.
    """
    t = np.zeros((8, 8, 8))

    def put(i: int, j: int, target: int, sign: float) -> None:
        t[i, j, target] = sign
        t[j, i, target] = -sign

    put(D1, B, B, 1.0)    # [D1, B] = B
    put(D1, P1, P1, -1.0)
    put(D1, P2, P2, -1.0)
    put(D2, B, B, -1.0)
    put(D2, P4, P4, -1.0)
    put(D2, P5, P5, -1.0)
    put(B, P1, P5, -1.0)  # [B, P1] = -P5
    put(B, P2, P4, 1.0)   # [B, P2] = P4
    return t


STRUCTURE_TABLE = _build_structure_table()


def structure_bracket(a: AlgebraElement, b: AlgebraElement,
                      table: np.ndarray | None = None) -> AlgebraElement:
    """Bilinear antisymmetric extension of the hard-coded table."""
    t = STRUCTURE_TABLE if table is None else table
    ca = np.asarray(a.coeffs)
    cb = np.asarray(b.coeffs)
    out = np.einsum("i,j,ijk->k", ca, cb, t)
    return AlgebraElement(tuple(out))


def numeric_bracket(X: GeneratorField, Y: GeneratorField, p: Point6) -> np.ndarray:
    """[X, Y](p) for affine fields, with derivatives computed exactly.

    For affine coefficient maps c(p) = M p + b the bracket is again
    affine: [X, Y] = (M_Y M_X - M_X M_Y) p + (M_Y b_X - M_X b_Y).
    """
    M = Y.M @ X.M - X.M @ Y.M
    b = Y.M @ X.b - X.M @ Y.b
    return M @ np.asarray(p, dtype=float) + b


def sample_point(rng: random.Random) -> Point6:
    """Random point with every coordinate bounded away from zero.

    Keeps invariants like y/x, ln x, u/v well defined for the
    annihilation suite; the commutator checks are insensitive to it.
    """
    def coord() -> float:
        return rng.choice((-1.0, 1.0)) * rng.uniform(0.3, 2.5)

    return Point6(coord(), coord(), coord(), coord(), coord(), coord())


@dataclass
class TableReport:
    pairs: int
    samples: int
    seed: int
    max_defect: float
    worst_pair: tuple[str, str]
    lines: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.max_defect == 0.0


def verify_commutation_table(sample_count: int, seed: int,
                             table: np.ndarray | None = None) -> TableReport:
    """Check numeric vs structural brackets over all 64 ordered pairs.

    Affine fields give exact brackets, so the defect is 0.0 on the true
    table; a corrupted table (test fixture) produces a positive defect.
    """
    if sample_count < 1:
        raise ValueError("sample_count must be >= 1")
    rng = random.Random(seed)
    points = [sample_point(rng) for _ in range(sample_count)]
    fields = [GeneratorField(AlgebraElement.basis(i)) for i in range(8)]
    max_defect = 0.0
    worst = (BASIS_NAMES[0], BASIS_NAMES[0])
    lines = []
    for i in range(8):
        for j in range(8):
            expected = structure_bracket(AlgebraElement.basis(i),
                                         AlgebraElement.basis(j), table)
            exp_field = GeneratorField(expected)
            defect = 0.0
            for p in points:
                got = numeric_bracket(fields[i], fields[j], p)
                defect = max(defect, float(np.max(np.abs(got - exp_field(p)))))
            lines.append(f"[{BASIS_NAMES[i]},{BASIS_NAMES[j]}] = {expected} "
                         f"defect={defect:.3e}")
            if defect > max_defect:
                max_defect = defect
                worst = (BASIS_NAMES[i], BASIS_NAMES[j])
    return TableReport(64, sample_count, seed, max_defect, worst, lines)


# ---------------------------------------------------------------------------
# Discrete automorphisms
# ---------------------------------------------------------------------------

_AUTOMORPHISM_SIGNS = {
    # point reflection (x,y) -> (-x,-y) flips B, P1, P2
    "R1": (1.0, 1.0, -1.0, -1.0, -1.0, 1.0, 1.0, 1.0),
    # velocity reflection (u,v) -> (-u,-v) flips B, P4, P5
    "R2": (1.0, 1.0, -1.0, 1.0, 1.0, 1.0, -1.0, -1.0),
}


def apply_automorphism(which: str, a: AlgebraElement) -> AlgebraElement:
    try:
        signs = _AUTOMORPHISM_SIGNS[which]
    except KeyError:
        raise ValueError(f"unknown automorphism {which!r}, expected R1 or R2") from None
    return AlgebraElement(tuple(s * c for s, c in zip(signs, a.coeffs)))


# ---------------------------------------------------------------------------
# Annihilation of tabulated invariants
# ---------------------------------------------------------------------------

def annihilation_defect(gen: AlgebraElement, inv: Callable[[Point6], float],
                        p: Point6, h: float = 1e-6) -> float:
    """|directional derivative of inv along gen's vector field at p|.

    Central difference along the field vector with a relative step; a true
    invariant gives ~0.
    """
    vec = GeneratorField(gen)(p)
    scale = h * max(1.0, max(abs(c) for c in p))
    arr = np.asarray(p, dtype=float)
    try:
        hi = inv(Point6(*(arr + scale * vec)))
        lo = inv(Point6(*(arr - scale * vec)))
    except (ValueError, ZeroDivisionError, OverflowError) as exc:
        raise DomainError(f"invariant undefined near {p}: {exc}") from exc
    for val in (hi, lo):
        if not math.isfinite(val):
            raise DomainError(f"invariant not finite near {p}")
    return abs((hi - lo) / (2.0 * scale))


@dataclass(frozen=True)
class SubalgebraRow:
    """One verified row of the subalgebra tables.

    generators/invariants are builders taking the sampled parameter dict;
    domain guards the invariant's definedness.  status is 'ok' for rows
    encoded as printed and 'corrected' where a typo had to be fixed (the
    fix is stated in note and enforced by the annihilation tests).
    """

    name: str
    dim: int
    params: tuple[str, ...]
    generators: Callable[[dict], list[AlgebraElement]]
    invariants: Callable[[dict], list[tuple[str, Callable[[Point6], float]]]]
    domain: Callable[[dict, Point6], bool]
    status: str = "ok"
    note: str = ""

    def sample_params(self, rng: random.Random) -> dict:
        vals = {}
        for name in self.params:
            vals[name] = rng.choice((-1.0, 1.0)) * rng.uniform(0.5, 2.0)
        return vals


def _always(params: dict, p: Point6) -> bool:
    return True


def _xpos(params: dict, p: Point6) -> bool:
    return p.x > 0.1


def _build_rows() -> list[SubalgebraRow]:
    E = AlgebraElement.combo
    rows: list[SubalgebraRow] = []

    # --- codimension 1 -----------------------------------------------------
    rows.append(SubalgebraRow(
        "L1,1", 1, ("alpha", "g", "beta"),
        lambda q: [E(P1=q["alpha"], P2=q["g"], P3=q["beta"])],
        lambda q: [
            ("xi", lambda p: -q["g"] * p.x + q["alpha"] * p.y),
            ("F", lambda p: p.u),
            ("G", lambda p: p.v),
            ("H", lambda p: p.sigma - q["beta"] * (p.x + p.y) / (q["alpha"] + q["g"])),
        ],
        lambda q, p: abs(q["alpha"] + q["g"]) > 0.3,
    ))
    rows.append(SubalgebraRow(
        "L1,1s", 1, ("beta",),
        lambda q: [E(P1=1.0, P2=-1.0, P3=q["beta"])],
        lambda q: [
            ("xi", lambda p: p.x + p.y),
            ("F", lambda p: p.u),
            ("G", lambda p: p.v),
            ("H", lambda p: p.sigma - q["beta"] * p.x),
        ],
        _always,
        status="corrected",
        note="special case a=-alpha: printed xi=y is not annihilated; xi=x+y is",
    ))
    rows.append(SubalgebraRow(
        "L1,2", 1, ("alpha", "g", "beta"),
        lambda q: [E(P1=q["alpha"], P2=q["g"], P3=q["beta"],
                     P4=q["alpha"], P5=1.0 - q["alpha"])],
        lambda q: [
            ("xi", lambda p: q["g"] * p.x - q["alpha"] * p.y),
            ("F", lambda p: p.u - q["alpha"] * (p.x + p.y) / (q["alpha"] + q["g"])),
            ("G", lambda p: p.v - (1.0 - q["alpha"]) * (p.x + p.y) / (q["alpha"] + q["g"])),
            ("H", lambda p: p.sigma - q["beta"] * (p.x + p.y) / (q["alpha"] + q["g"])),
        ],
        lambda q, p: abs(q["alpha"] + q["g"]) > 0.3,
    ))
    rows.append(SubalgebraRow(
        "L1,2s", 1, ("beta",),
        lambda q: [E(P1=1.0, P2=-1.0, P3=q["beta"], P4=1.0)],
        lambda q: [
            ("xi", lambda p: p.x + p.y),
            ("F", lambda p: -p.x + p.u),
            ("G", lambda p: p.v),
            ("H", lambda p: p.sigma - q["beta"] * p.x),
        ],
        _always,
        status="corrected",
        note="special case alpha=1=-a: printed H=sigma-x only annihilates for beta=1",
    ))
    rows.append(SubalgebraRow(
        "L1,3", 1, ("alpha", "g", "beta"),
        lambda q: [E(B=1.0, P1=q["alpha"], P2=q["g"], P3=q["beta"])],
        lambda q: [
            ("xi", lambda p: q["g"] * p.x - q["alpha"] * p.y),
            ("F", lambda p: p.u - (q["g"] * (p.x ** 2 - p.y ** 2) - 2.0 * q["alpha"] * p.x * p.y)
                / (2.0 * (q["g"] ** 2 + q["alpha"] ** 2))),
            ("G", lambda p: p.v - (q["alpha"] * (p.x ** 2 - p.y ** 2) + 2.0 * q["g"] * p.x * p.y)
                / (2.0 * (q["g"] ** 2 + q["alpha"] ** 2))),
            ("H", lambda p: p.sigma - q["beta"] * (p.x + p.y) / (q["alpha"] + q["g"])),
        ],
        lambda q, p: abs(q["alpha"] + q["g"]) > 0.3,
        status="corrected",
        note="printed denominators a^{2a}+alpha corrected to a^{2a}+alpha^2 (x2 in G)",
    ))
    rows.append(SubalgebraRow(
        "L1,3s", 1, ("beta",),
        lambda q: [E(B=1.0, P1=1.0, P2=-1.0, P3=q["beta"])],
        lambda q: [
            ("xi", lambda p: p.x + p.y),
            ("F", lambda p: p.x * (0.5 * p.x + p.y) + p.u),
            ("G", lambda p: p.v - 0.5 * p.x ** 2),
            ("H", lambda p: p.sigma - q["beta"] * p.x),
        ],
        _always,
        status="corrected",
        note="printed G=x^2/2+v has the wrong sign on the quadratic",
    ))
    rows.append(SubalgebraRow(
        "L1,4", 1, ("alpha", "g", "b"),
        lambda q: [E(D2=1.0, P1=q["alpha"], P2=q["g"], P3=q["b"])],
        lambda q: [
            ("xi", lambda p: -q["g"] * p.x + q["alpha"] * p.y),
            ("F", lambda p: p.u * math.exp(-(p.x + p.y) / (q["alpha"] + q["g"]))),
            ("G", lambda p: p.v * math.exp(-(p.x + p.y) / (q["alpha"] + q["g"]))),
            ("H", lambda p: p.sigma - q["b"] * (p.x + p.y) / (q["alpha"] + q["g"])),
        ],
        lambda q, p: abs(q["alpha"] + q["g"]) > 0.3 and abs(p.x + p.y) < 4.0,
    ))
    rows.append(SubalgebraRow(
        "L1,4s", 1, ("b",),
        lambda q: [E(D2=1.0, P1=1.0, P2=-1.0, P3=q["b"])],
        lambda q: [
            ("xi", lambda p: p.x + p.y),
            ("F", lambda p: p.u * math.exp(-p.x)),
            ("G", lambda p: p.v * math.exp(-p.x)),
            ("H", lambda p: p.sigma - q["b"] * p.x),
        ],
        _always,
    ))
    rows.append(SubalgebraRow(
        "L1,5", 1, ("a", "b"),
        lambda q: [E(D1=1.0, D2=q["a"], P3=q["b"])],
        lambda q: [
            ("xi", lambda p: p.y / p.x),
            ("F", lambda p: p.x ** (-q["a"]) * p.u),
            ("G", lambda p: p.x ** (-q["a"]) * p.v),
            ("H", lambda p: p.sigma - q["b"] * math.log(p.x)),
        ],
        _xpos,
    ))
    rows.append(SubalgebraRow(
        "L1,6", 1, ("b",),
        lambda q: [E(D1=1.0, D2=1.0, B=1.0, P3=q["b"])],
        lambda q: [
            ("xi", lambda p: p.y / p.x),
            ("F", lambda p: p.u / p.x + (p.y / p.x) * math.log(p.x)),
            ("G", lambda p: p.v / p.x - math.log(p.x)),
            ("H", lambda p: p.sigma - q["b"] * math.log(p.x)),
        ],
        _xpos,
    ))
    rows.append(SubalgebraRow(
        "L1,7", 1, ("a", "alpha", "g"),
        lambda q: [E(D1=1.0, P3=q["a"], P4=q["alpha"], P5=q["g"])],
        lambda q: [
            ("xi", lambda p: p.y / p.x),
            ("F", lambda p: p.u - q["alpha"] * math.log(p.x)),
            ("G", lambda p: p.v - q["g"] * math.log(p.x)),
            ("H", lambda p: p.sigma - q["a"] * math.log(p.x)),
        ],
        _xpos,
    ))
    rows.append(SubalgebraRow(
        "L1,8", 1, ("alpha", "g", "beta"),
        lambda q: [E(P4=q["alpha"], P5=q["g"], P3=q["beta"])],
        lambda q: [
            ("xi1", lambda p: p.x),
            ("xi2", lambda p: p.y),
            ("F", lambda p: (q["alpha"] + q["g"]) * p.sigma - q["beta"] * (p.u + p.v)),
            ("G", lambda p: q["alpha"] * p.v - q["g"] * p.u),
        ],
        _always,
    ))
    rows.append(SubalgebraRow(
        "L1,9", 1, ("b",),
        lambda q: [E(D2=1.0, P3=q["b"])],
        lambda q: [
            ("xi1", lambda p: p.x),
            ("xi2", lambda p: p.y),
            ("F", lambda p: p.sigma - q["b"] * math.log(p.u)),
            ("G", lambda p: p.u / p.v),
        ],
        lambda q, p: p.u > 0.1 and abs(p.v) > 0.1,
    ))
    rows.append(SubalgebraRow(
        "L1,10", 1, ("alpha",),
        lambda q: [E(B=1.0, P3=q["alpha"])],
        lambda q: [
            ("xi1", lambda p: p.x),
            ("xi2", lambda p: p.y),
            ("F", lambda p: (q["alpha"] / p.y) * p.u + p.sigma),
            ("G", lambda p: (p.x / p.y) * p.u + p.v),
        ],
        lambda q, p: abs(p.y) > 0.1,
    ))

    # --- codimension 2 (rows that verify; see EXCLUDED_ROWS) ---------------
    rows.append(SubalgebraRow(
        "L2,4", 2, ("alpha", "g", "b"),
        lambda q: [E(D2=1.0, P1=q["alpha"], P2=q["g"], P3=q["b"]), E(P5=1.0)],
        lambda q: [
            ("xi", lambda p: -q["g"] * p.x + q["alpha"] * p.y),
            ("F", lambda p: p.u * math.exp(-(p.x + p.y) / (q["alpha"] + q["g"]))),
            ("H", lambda p: p.sigma - q["b"] * (p.x + p.y) / (q["alpha"] + q["g"])),
        ],
        lambda q, p: abs(q["alpha"] + q["g"]) > 0.3 and abs(p.x + p.y) < 4.0,
    ))
    rows.append(SubalgebraRow(
        "L2,16", 2, ("a", "b"),
        lambda q: [E(D1=1.0, D2=q["a"], P3=q["b"]), E(P3=1.0)],
        lambda q: [
            ("xi", lambda p: p.y / p.x),
            ("F", lambda p: p.u * p.x ** (-q["a"])),
            ("G", lambda p: p.v * p.x ** (-q["a"])),
        ],
        _xpos,
    ))
    rows.append(SubalgebraRow(
        "L2,17", 2, ("a", "b"),
        lambda q: [E(D1=1.0, P3=q["a"]), E(D2=1.0, P3=q["b"])],
        lambda q: [
            ("xi", lambda p: p.y / p.x),
            ("F", lambda p: q["b"] * math.log(p.u) + q["a"] * math.log(p.x) - p.sigma),
            ("G", lambda p: p.v / p.u),
        ],
        lambda q, p: p.x > 0.1 and p.u > 0.1 and abs(p.v) > 0.1,
        status="corrected",
        note="printed generator 'D1 a P3' read as D1 + a P3 (missing operator)",
    ))
    rows.append(SubalgebraRow(
        "L2,19", 2, ("a",),
        lambda q: [E(D1=1.0, P3=q["a"]), E(D2=1.0)],
        lambda q: [
            ("xi", lambda p: p.y / p.x),
            ("F", lambda p: p.v / p.u),
            ("H", lambda p: p.sigma - q["a"] * math.log(p.x)),
        ],
        lambda q, p: p.x > 0.1 and abs(p.u) > 0.1,
    ))
    rows.append(SubalgebraRow(
        "L2,20", 2, ("a", "b", "c"),
        lambda q: [E(D1=1.0, D2=q["a"], P3=q["b"]), E(P4=1.0, P5=q["c"])],
        lambda q: [
            ("xi", lambda p: p.y / p.x),
            ("F", lambda p: (q["c"] * p.u - p.v) * p.x ** (-q["a"])),
            ("H", lambda p: p.sigma - q["b"] * math.log(p.x)),
        ],
        _xpos,
    ))
    rows.append(SubalgebraRow(
        "L2,21", 2, ("a", "b"),
        lambda q: [E(D1=1.0, D2=1.0, B=1.0, P3=q["a"]), E(P4=1.0, P5=q["b"])],
        lambda q: [
            ("xi", lambda p: p.y / p.x),
            ("F", lambda p: (q["b"] * p.u - p.v + (p.x + q["b"] * p.y) * math.log(p.x)) / p.x),
            ("H", lambda p: p.sigma - q["a"] * math.log(p.x)),
        ],
        _xpos,
    ))
    rows.append(SubalgebraRow(
        "L2,23", 2, ("alpha", "g", "b"),
        lambda q: [E(D1=1.0, P4=q["alpha"], P5=q["g"], P3=q["b"]), E(B=1.0)],
        lambda q: [
            ("xi", lambda p: p.y / p.x),
            ("F", lambda p: (-(q["alpha"] * p.x + q["g"] * p.y) * math.log(p.x)
                             + p.x * p.u + p.y * p.v) / p.y),
            ("H", lambda p: p.sigma - q["b"] * math.log(p.x)),
        ],
        lambda q, p: p.x > 0.1 and abs(p.y) > 0.1,
    ))
    rows.append(SubalgebraRow(
        "L2,27", 2, ("a",),
        lambda q: [E(D1=1.0, D2=1.0, B=1.0, P3=q["a"]), E(P4=1.0)],
        lambda q: [
            ("xi", lambda p: p.y / p.x),
            ("G", lambda p: p.v / p.x - math.log(p.x)),
            ("H", lambda p: p.sigma - q["a"] * math.log(p.x)),
        ],
        _xpos,
    ))
    rows.append(SubalgebraRow(
        "L2,28", 2, ("a", "b", "c", "alpha"),
        lambda q: [E(P1=1.0, P2=q["a"], P3=q["b"]),
                   E(P2=1.0, P4=1.0, P5=q["c"], P3=q["alpha"])],
        lambda q: [
            ("xi", lambda p: (q["alpha"] * q["a"] - q["b"]) * p.x - q["alpha"] * p.y + p.sigma),
            ("F", lambda p: q["a"] * p.x - p.y + p.u),
            ("G", lambda p: (q["a"] * p.x - p.y) * q["c"] + p.v),
        ],
        _always,
    ))
    rows.append(SubalgebraRow(
        "L2,29", 2, ("a", "b", "c"),
        lambda q: [E(P1=1.0, P2=q["a"], P3=1.0),
                   E(P1=1.0, P2=q["b"], P4=1.0, P5=q["c"])],
        lambda q: [
            ("xi", lambda p: (p.x * q["b"] - p.y) / (q["a"] - q["b"]) + p.sigma),
            ("F", lambda p: p.u + (-q["a"] * p.x + p.y) / (q["a"] - q["b"])),
            ("G", lambda p: p.v + q["c"] * (-q["a"] * p.x + p.y) / (q["a"] - q["b"])),
        ],
        lambda q, p: abs(q["a"] - q["b"]) > 0.3,
    ))
    return rows


SUBALGEBRA_ROWS = _build_rows()

# Rows of the printed tables that are excluded from the annihilation
# suite: their printed generators or invariants do not annihilate and the
# intended reading is not forced (per the spec's open question, no
# guessing of intended generators).
EXCLUDED_ROWS: dict[str, str] = {
    "L2,1": "printed xi = a x + y is not annihilated by P1 + a P2 + alpha P4",
    "L2,2": "printed invariants fail annihilation for generic parameters",
    "L2,3": "printed F mixes a^alpha u + v with (beta+b^beta) sigma; fails annihilation",
    "L2,5": "printed F copies the L1,4 row and is not annihilated by omega P4 + b P5",
    "L2,6": "printed quadratic invariant fails annihilation",
    "L2,7": "printed quadratic invariant fails annihilation",
    "L2,8": "printed quadratic invariant fails annihilation",
    "L2,9": "printed quadratic invariant fails annihilation",
    "L2,10": "printed H fails annihilation for the printed generators",
    "L2,11": "printed exponential invariant fails annihilation",
    "L2,12": "garbled block: same generator set as L2,13-15 with different invariants",
    "L2,13": "garbled block: same generator set as L2,12 with different invariants",
    "L2,14": "garbled block: same generator set as L2,12 with different invariants",
    "L2,15": "garbled block: same generator set as L2,12 with different invariants",
    "L2,18": "printed G = (v + x ln x)/x has the wrong sign on ln x",
    "L2,22": "printed F = (u + (x/y)u) x^-a is not annihilated by B",
    "L2,24": "printed F/H constants swapped relative to the generator",
    "L2,25": "printed H = sigma - a ln x is not annihilated by D1 + P5",
    "L2,26": "printed H = sigma - b ln x but b multiplies P4 in the generator",
    "L2,30": "printed xi mixes alpha and b inconsistently",
    "L2,31": "printed exponential invariants only annihilate for b^(1-alpha) = -2",
    "L2,32": "displays 'D1 alpha P4 + ...' with a missing operator",
    "L2,33": "printed u - alpha ln(...) is not annihilated by the D2 term",
    "L2,34": "generator uses b^beta where the invariants use c^beta",
}


@dataclass
class AnnihilationReport:
    rows: int
    param_samples: int
    points_per_row: int
    seed: int
    max_defect: float
    worst_row: str
    failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures


def run_annihilation_suite(points_per_row: int = 20, param_samples: int = 2,
                           seed: int = 0, tol: float = 1e-6,
                           rows: Sequence[SubalgebraRow] | None = None) -> AnnihilationReport:
    """Annihilation defects for every encoded subalgebra row."""
    rng = random.Random(seed)
    rows = SUBALGEBRA_ROWS if rows is None else rows
    max_defect = 0.0
    worst = ""
    failures = []
    for row in rows:
        for _ in range(param_samples):
            params = row.sample_params(rng)
            gens = row.generators(params)
            invs = row.invariants(params)
            got = 0
            tries = 0
            while got < points_per_row and tries < 200 * points_per_row:
                tries += 1
                p = sample_point(rng)
                if not row.domain(params, p):
                    continue
                got += 1
                for gen in gens:
                    for label, inv in invs:
                        d = annihilation_defect(gen, inv, p)
                        if d > max_defect:
                            max_defect = d
                            worst = f"{row.name}/{label}"
                        if d > tol:
                            failures.append(
                                f"{row.name}/{label} defect {d:.3e} at {p} params {params}")
            if got < points_per_row:
                failures.append(f"{row.name}: could not sample {points_per_row} in-domain points")
    return AnnihilationReport(len(rows), param_samples, points_per_row, seed,
                              max_defect, worst, failures)


def jacobi_defect() -> float:
    """Max |[a,[b,c]] + [b,[c,a]] + [c,[a,b]]| over all basis triples."""
    worst = 0.0
    for i in range(8):
        for j in range(8):
            for k in range(8):
                a, b, c = (AlgebraElement.basis(n) for n in (i, j, k))
                total = (structure_bracket(a, structure_bracket(b, c))
                         + structure_bracket(b, structure_bracket(c, a))
                         + structure_bracket(c, structure_bracket(a, b)))
                worst = max(worst, max(abs(x) for x in total.coeffs))
    return worst


def automorphism_defect() -> float:
    """Max |R([a,b]) - [R(a), R(b)]| over R in {R1, R2} and basis pairs."""
    worst = 0.0
    for which in ("R1", "R2"):
        for i in range(8):
            for j in range(8):
                a = AlgebraElement.basis(i)
                b = AlgebraElement.basis(j)
                lhs = apply_automorphism(which, structure_bracket(a, b))
                rhs = structure_bracket(apply_automorphism(which, a),
                                        apply_automorphism(which, b))
                worst = max(worst, max(abs(x) for x in (lhs - rhs).coeffs))
    return worst
