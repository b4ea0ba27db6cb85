"""Benchmark functions, Genz families and the sin-sum integrand.

Every benchmark is a :class:`TestFunction`: a batch function on its own
box plus the affine map from ``[-1, 1]^d``.  Calling the object evaluates
on the cube.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .cross import as_rng

Oracle = Callable[[np.ndarray], np.ndarray]


class UnknownFunctionError(KeyError):
    """No benchmark registered under the requested name."""


def affine_to_cube(f: Oracle, lo, hi) -> tuple[Oracle, float]:
    """Pull ``f`` on the box ``[lo, hi]`` back to ``[-1, 1]^d``.

    Returns the cube oracle and the volume factor ``prod (hi - lo) / 2^d``
    by which a cube integral must be multiplied to give the box integral.
    """
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    if lo.shape != hi.shape or np.any(lo >= hi):
        raise ValueError("invalid box: need lo < hi in every mode")
    half = (hi - lo) / 2.0

    def g(X):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        return f(lo + (X + 1.0) * half)

    return g, float(np.prod(half))


@dataclass
class TestFunction:
    """Named benchmark on a box, evaluated on ``[-1, 1]^d``.

    ``known_ranks`` is ``(max R, max r)`` of the reference EFTT runs,
    where those are structural.
    """

    __test__ = False  # keep pytest from collecting the class

    name: str
    d: int
    lo: np.ndarray
    hi: np.ndarray
    f_box: Oracle = field(repr=False)
    analytic_integral: float | None = None
    known_ranks: tuple[int, int] | None = None

    def __post_init__(self):
        self.lo = np.broadcast_to(np.asarray(self.lo, dtype=float), (self.d,)).copy()
        self.hi = np.broadcast_to(np.asarray(self.hi, dtype=float), (self.d,)).copy()
        self._cube, self.volume_factor = affine_to_cube(self.f_box, self.lo, self.hi)

    def __call__(self, X) -> np.ndarray:
        """Values at points of ``[-1, 1]^d`` (array ``(N, d)``)."""
        return np.asarray(self._cube(X), dtype=float).reshape(-1)

    def to_box(self, X) -> np.ndarray:
        return self.lo + (np.asarray(X, dtype=float) + 1.0) * (self.hi - self.lo) / 2.0


# ---------------------------------------------------------------- formulas

def ackley(x):
    d = x.shape[1]
    return (
        -20.0 * np.exp(-0.2 * np.sqrt(np.sum(x**2, axis=1) / d))
        - np.exp(np.sum(np.cos(2.0 * np.pi * x), axis=1) / d)
        + 20.0
        + np.e
    )


def alpine(x, shift_first: bool = False):
    """``sum |x_i sin x_i + 0.1 x_i|``; ``shift_first`` uses ``0.1 x_1`` in every term."""
    shift = 0.1 * (x[:, :1] if shift_first else x)
    return np.sum(np.abs(x * np.sin(x) + shift), axis=1)


def dixon(x):
    i = np.arange(2, x.shape[1] + 1)
    return (x[:, 0] - 1.0) ** 2 + np.sum(i * (2.0 * x[:, 1:] ** 2 - x[:, :-1]) ** 2, axis=1)


def exponential(x):
    return -np.exp(-0.5 * np.sum(x**2, axis=1))


def griewank(x):
    i = np.arange(1, x.shape[1] + 1)
    return np.sum(x**2, axis=1) / 4000.0 - np.prod(np.cos(x / np.sqrt(i)), axis=1) + 1.0


def michalewicz(x):
    i = np.arange(1, x.shape[1] + 1)
    return -np.sum(np.sin(x) * np.sin(i * x**2 / np.pi) ** 20, axis=1)


def qing(x):
    i = np.arange(1, x.shape[1] + 1)
    return np.sum((x**2 - i) ** 2, axis=1)


def rastrigin(x):
    return 10.0 * x.shape[1] + np.sum(x**2 - 10.0 * np.cos(2.0 * np.pi * x), axis=1)


def rosenbrock(x):
    return np.sum(100.0 * (x[:, 1:] - x[:, :-1] ** 2) ** 2 + (1.0 - x[:, :-1]) ** 2, axis=1)


def schaffer(x):
    s = x[:, :-1] ** 2 + x[:, 1:] ** 2
    return np.sum(0.5 + (np.sin(np.sqrt(s)) ** 2 - 0.5) / (1.0 + 0.001 * s) ** 2, axis=1)


def schwefel(x):
    return 2932.8803 - np.sum(x * np.sin(np.sqrt(np.abs(x))), axis=1)


def piston(x):
    M, S, V0, k, P0, Ta, T0 = x.T
    A = P0 * S + 19.62 * M - k * V0 / S
    V = S / (2.0 * k) * (np.sqrt(A**2 + 4.0 * k * P0 * V0 / T0 * Ta) - A)
    return 2.0 * np.pi * np.sqrt(M / (k + S**2 * P0 * V0 / T0 * Ta / V**2))


def borehole(x):
    rw, r, Tu, Hu, Tl, Hl, L, Kw = x.T
    lg = np.log(r / rw)
    return 2.0 * np.pi * Tu * (Hu - Hl) / (lg * (1.0 + 2.0 * L * Tu / (lg * rw**2 * Kw) + Tu / Tl))


def otl_circuit(x):
    b1, b2, f, c1, c2, beta = x.T
    vb1 = 12.0 * b2 / (b1 + b2)
    bc = beta * (c2 + 9.0)
    return (vb1 + 0.74) * bc / (bc + f) + 11.35 * f / (bc + f) + 0.74 * f * bc / ((bc + f) * c1)


def robot_arm(x, cumulative: bool = False):
    """End-effector distance.  By default each link angle is ``4 theta_i``;
    ``cumulative`` uses the partial sums ``theta_1 + ... + theta_i``."""
    theta, L = x[:, :4], x[:, 4:]
    ang = np.cumsum(theta, axis=1) if cumulative else 4.0 * theta
    u = np.sum(L * np.cos(ang), axis=1)
    v = np.sum(L * np.sin(ang), axis=1)
    return np.sqrt(u**2 + v**2)


def wing_weight(x):
    Sw, Wf, A, delta, q, lam, tc, Nz, Wd, Wp = x.T
    c = np.cos(np.deg2rad(delta))  # sweep angle given in degrees
    return (
        0.036 * Sw**0.758 * Wf**0.0035 * (A / c**2) ** 0.6 * q**0.006 * lam**0.04
        * (100.0 * tc / c) ** -0.3 * (Nz * Wd) ** 0.49
        + Sw * Wp
    )


def friedman(x):
    return (
        10.0 * np.sin(np.pi * x[:, 0] * x[:, 1])
        + 20.0 * (x[:, 2] - 0.5) ** 2
        + 10.0 * x[:, 3]
        + 5.0 * x[:, 4]
    )


def gramacy_lee(x):
    return np.exp(np.sin((0.9 * (x[:, 0] + 0.48)) ** 10)) + x[:, 1] * x[:, 2] + x[:, 3]


def dette_pepelyshev_8d(x):
    out = (
        4.0 * (x[:, 0] - 2.0 + 8.0 * x[:, 1] - 8.0 * x[:, 1] ** 2) ** 2
        + (3.0 - 4.0 * x[:, 1]) ** 2
        + 16.0 * np.sqrt(x[:, 2] + 1.0) * (2.0 * x[:, 2] - 1.0) ** 2
    )
    partial = np.cumsum(x[:, 2:], axis=1)  # sum_{j=3}^{i} x_j for i = 3..8
    i = np.arange(4, 9)
    return out + np.sum(i * np.log(1.0 + partial[:, 1:]), axis=1)


def dette_pepelyshev_exp(x):
    # exp(-2 / 0^p) = 0, the continuous extension at the boundary
    with np.errstate(divide="ignore"):
        terms = [np.exp(-2.0 / x[:, k] ** p) for k, p in enumerate((1.75, 1.5, 1.25))]
    return 100.0 * sum(terms)


# ----------------------------------------------------------------- registry

def _specs(alpine_shift_first: bool, robot_arm_cumulative: bool):
    pi = np.pi
    return {
        "ackley": (7, -32.768, 32.768, ackley, (14, 10)),
        "alpine": (7, -10.0, 10.0, lambda x: alpine(x, alpine_shift_first), (2, 2)),
        "dixon": (7, -10.0, 10.0, dixon, (3, 5)),
        "exponential": (7, -1.0, 1.0, exponential, (1, 1)),
        "griewank": (7, -600.0, 600.0, griewank, (3, 3)),
        "michalewicz": (7, 0.0, pi, michalewicz, (2, 2)),
        "piston": (
            7,
            [30, 0.005, 0.002, 1000, 90000, 290, 340],
            [60, 0.02, 0.01, 5000, 110000, 296, 360],
            piston,
            (24, 11),
        ),
        "qing": (7, 0.0, 500.0, qing, (2, 3)),
        "rastrigin": (7, -5.12, 5.12, rastrigin, (2, 2)),
        "rosenbrock": (7, -2.048, 2.048, rosenbrock, (3, 4)),
        "schaffer": (7, -100.0, 100.0, schaffer, (39, 40)),
        "schwefel": (7, -500.0, 500.0, schwefel, (2, 2)),
        "borehole": (
            8,
            [0.05, 100, 63070, 990, 63.1, 700, 1120, 9855],
            [0.15, 50000, 115600, 1110, 116, 820, 1680, 12045],
            borehole,
            (2, 4),
        ),
        "otl-circuit": (6, [50, 25, 0.5, 1.2, 0.25, 50], [150, 70, 3, 2.5, 1.2, 300], otl_circuit, (5, 5)),
        "robot-arm": (
            8,
            [0, 0, 0, 0, 0, 0, 0, 0],
            [2 * pi] * 4 + [1, 1, 1, 1],
            lambda x: robot_arm(x, robot_arm_cumulative),
            (33, 33),
        ),
        "wing-weight": (
            10,
            [150, 220, 6, -10, 16, 0.5, 0.08, 2.5, 1700, 0.025],
            [200, 300, 10, 10, 45, 1, 0.18, 6, 2500, 0.08],
            wing_weight,
            (2, 2),
        ),
        "friedman": (5, 0.0, 1.0, friedman, (4, 4)),
        "gramacy-lee": (6, 0.0, 1.0, gramacy_lee, (2, 2)),
        "dette-pepelyshev-8d": (8, 0.0, 1.0, dette_pepelyshev_8d, (7, 7)),
        "dette-pepelyshev-exp": (3, 0.0, 1.0, dette_pepelyshev_exp, (2, 2)),
    }


NAMES = tuple(_specs(False, False))

# rank metadata is only asserted where it follows from the structure
STRUCTURAL_RANKS = ("exponential", "alpine", "michalewicz", "schwefel")


def registry(alpine_shift_first: bool = False, robot_arm_cumulative: bool = False) -> dict[str, TestFunction]:
    """All 20 benchmark functions by CLI name.

    ``alpine_shift_first`` selects the variant with ``0.1 x_1`` in every
    term instead of ``0.1 x_i``; ``robot_arm_cumulative`` selects
    cumulative link angles instead of ``4 theta_i``.
    """
    out = {}
    for name, (d, lo, hi, f, ranks) in _specs(alpine_shift_first, robot_arm_cumulative).items():
        out[name] = TestFunction(name, d, lo, hi, f, known_ranks=ranks)
    return out


def get(name: str, **options) -> TestFunction:
    """Look up a benchmark, Genz family (``genz-<family>``) or ``sin-sum``.

    Genz and sin-sum accept ``d`` (and Genz a ``seed``) as options.
    """
    key = name.lower()
    if key.startswith("genz-"):
        return genz(key[5:], options.get("d", 20), options.get("seed"))
    if key == "sin-sum":
        return sin_sum(options.get("d", 5))
    reg = registry(
        options.get("alpine_shift_first", False), options.get("robot_arm_cumulative", False)
    )
    try:
        return reg[key]
    except KeyError:
        known = ", ".join(sorted(reg) + ["genz-*", "sin-sum"])
        raise UnknownFunctionError(f"unknown function {name!r}; known: {known}") from None


# --------------------------------------------------------------------- Genz

GENZ_CONSTANTS = {
    "oscillatory": (284.6, 1.5),
    "corner-peak": (185.0, 2.0),
    "continuous": (2040.0, 2.0),
}


@dataclass
class GenzFunction(TestFunction):
    family: str = ""
    w: np.ndarray | None = None
    c: np.ndarray | None = None
    b: float = 0.0
    h: float = 0.0


def genz_oracle(family: str, w: np.ndarray, c: np.ndarray) -> Oracle:
    """Genz function on ``[-1, 1]^d`` using ``t = (x + 1) / 2``."""
    d = c.size
    if family == "oscillatory":
        return lambda x: np.cos(2.0 * np.pi * w[0] + ((x + 1.0) / 2.0) @ c)
    if family == "corner-peak":
        return lambda x: (1.0 + ((x + 1.0) / 2.0) @ c) ** (-(d + 1.0))
    if family == "continuous":
        return lambda x: np.exp(-np.abs((x + 1.0) / 2.0 - w) @ c**2)
    raise UnknownFunctionError(f"unknown Genz family {family!r}")


def genz(family: str, d: int, rng=None, w=None, c=None) -> GenzFunction:
    """Genz function with ``w, c ~ U[0, 1]`` and ``sum |c| = b / d^h``.

    ``w`` and ``c`` can be given explicitly; ``c`` is always rescaled.
    """
    if family not in GENZ_CONSTANTS:
        raise UnknownFunctionError(f"unknown Genz family {family!r}")
    if d < 1:
        raise ValueError(f"d must be >= 1, got {d}")
    rng = as_rng(rng)
    b, h = GENZ_CONSTANTS[family]
    w = rng.uniform(0.0, 1.0, d) if w is None else np.asarray(w, dtype=float)
    c = rng.uniform(0.0, 1.0, d) if c is None else np.asarray(c, dtype=float)
    total = np.sum(np.abs(c))
    if total > 0:
        c = c * (b / d**h / total)
    f = genz_oracle(family, w, c)
    return GenzFunction(
        f"genz-{family}", d, -1.0, 1.0, f, family=family, w=w, c=c, b=b, h=h,
        known_ranks=(1, 1) if family == "continuous" else None,
    )


# ------------------------------------------------------------------ sin-sum

def sin_sum_integral(d: int) -> float:
    """``int_{[0,1]^d} sin(x_1 + ... + x_d) dx = Im(((e^i - 1) / i)^d)``."""
    z = (np.cos(1.0) - 1.0 + 1j * np.sin(1.0)) / 1j
    return float((z**d).imag)


def sin_sum(d: int) -> TestFunction:
    """``sin(x_1 + ... + x_d)`` on ``[0, 1]^d`` with its exact integral."""
    if d < 1:
        raise ValueError(f"d must be >= 1, got {d}")
    return TestFunction(
        "sin-sum", d, 0.0, 1.0, lambda x: np.sin(np.sum(x, axis=1)),
        analytic_integral=sin_sum_integral(d), known_ranks=(2, 2) if d > 1 else (1, 1),
    )
