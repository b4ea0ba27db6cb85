"""Tucker approximation of an evaluation tensor by fiber sampling.

Per mode, a randomized cross approximation of the matricization picks
``r`` columns (fibers).  Their orthonormal basis ``Q`` and the DEIM rows
``I`` define the oblique factor ``U = Q Q(I, :)^{-1}``, and the core is the
subtensor ``T(I_1, ..., I_d)``, kept lazy.

:func:`adaptive_sketch` also picks the grid per mode: starting from
degree 16 it doubles (``n <- 2n + 1``) until the coefficients of every
fiber are resolved.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import legendre
from .cheb_basis import cheb_points, chop, dct_matrix
from .cross import CrossSkeleton, aca_random, as_rng, deim
from .tensor import CachedFunction, FuncTensor, matricize, subtensor_oracle

N_INIT = 16
N_MAX = 271
S_CAP = 50

BASES = ("cheb", "legendre")


def default_samples(degrees: Sequence[int]) -> int:
    """``s = min(nbar / 2, 50)`` with ``nbar`` the geometric mean of the mode sizes."""
    sizes = np.asarray(degrees, dtype=float) + 1.0
    nbar = float(np.exp(np.mean(np.log(sizes))))
    return max(1, int(min(nbar / 2.0, S_CAP)))


@dataclass
class ModeBasis:
    """Factor data for one mode."""

    degree: int
    cols: np.ndarray  # column coordinates of the selected fibers
    fibers: np.ndarray  # (n + 1) x r
    Q: np.ndarray
    index: np.ndarray  # DEIM rows
    U: np.ndarray  # Q Q(I, :)^{-1}
    zero: bool = False

    @property
    def rank(self) -> int:
        return self.U.shape[1]


@dataclass
class TuckerSketch:
    """Fiber-based Tucker approximation ``C x_1 U_1 ... x_d U_d``.

    ``tensor`` is the evaluation tensor on the final grids; the core is
    available lazily through :meth:`core`.
    """

    basis: str
    modes: list[ModeBasis]
    tensor: FuncTensor
    unresolved: list[bool] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    @property
    def degrees(self) -> list[int]:
        return [mb.degree for mb in self.modes]

    @property
    def ranks(self) -> list[int]:
        return [mb.rank for mb in self.modes]

    @property
    def factors(self) -> list[np.ndarray]:
        return [mb.U for mb in self.modes]

    @property
    def index_sets(self) -> list[np.ndarray]:
        return [mb.index for mb in self.modes]

    def core(self) -> FuncTensor:
        return core_oracle(self, self.tensor)


def core_oracle(sk: TuckerSketch, t: FuncTensor) -> FuncTensor:
    """Lazy core ``T(I_1, ..., I_d)``; evaluations are billed to ``t``."""
    return subtensor_oracle(t, sk.index_sets)


def mode_basis(t: FuncTensor, mode: int, tol: float, s: int, rng, max_rank=None) -> ModeBasis:
    """Fibers, orthonormal basis, DEIM rows and oblique factor for one mode."""
    M = matricize(t, mode)
    sk: CrossSkeleton = aca_random(M, tol, s, rng, scale=t.max_abs, max_rank=max_rank)
    n1 = t.dims[mode]
    if sk.rank == 0:
        # all-zero mode: keep rank one with the constant fiber
        fibers = np.ones((n1, 1))
        zero = True
    else:
        fibers = M.fibers(sk.cols)
        zero = False
    Q, _ = np.linalg.qr(fibers)
    index = deim(Q)
    U = np.linalg.solve(Q[index].T, Q.T).T
    return ModeBasis(n1 - 1, sk.cols, fibers, Q, index, U, zero)


def tucker_sketch(t: FuncTensor, tol: float, s: int | None = None, rng=None, basis: str = "cheb") -> TuckerSketch:
    """Tucker approximation of ``t`` on its fixed grids."""
    if not tol > 0:
        raise ValueError(f"tol must be positive, got {tol}")
    rng = as_rng(rng)
    if s is None:
        s = default_samples([n - 1 for n in t.dims])
    modes = [mode_basis(t, k, tol, s, rng) for k in range(t.ndim)]
    return TuckerSketch(basis, modes, t, [False] * t.ndim)


def grid_tensor(f: Callable[[np.ndarray], np.ndarray], degrees: Sequence[int]) -> FuncTensor:
    """Evaluation tensor of ``f`` on Chebyshev grids of the given degrees."""
    return FuncTensor.from_grid(f, [cheb_points(n) for n in degrees])


def _cheb_resolved(mb: ModeBasis, tol: float) -> bool:
    coeffs = dct_matrix(mb.degree) @ mb.fibers
    return all(chop(coeffs[:, j], tol) is not None for j in range(coeffs.shape[1]))


def _legendre_resolved(mb: ModeBasis, tol: float) -> bool:
    m = mb.degree // 2
    return legendre.trailing_resolved(legendre.projection_matrix(m, mb.degree) @ mb.fibers, tol)


def adaptive_sketch(
    f: Callable[[np.ndarray], np.ndarray],
    d: int,
    tol: float,
    s: int | None = None,
    rng=None,
    n_init: int = N_INIT,
    n_max: int = N_MAX,
    basis: str = "cheb",
) -> TuckerSketch:
    """Tucker approximation of ``f`` on ``[-1, 1]^d`` with per-mode degrees.

    Modes are processed in order.  A mode's fibers are resolved when chop
    (Chebyshev) or the trailing-coefficient test (Legendre) accepts every
    column of its coefficient matrix; otherwise its degree grows as
    ``n <- min(2n + 1, n_max)`` and the mode is redone on a fresh tensor.
    Finished modes keep their degree.  For the Legendre basis ``n`` is the
    quadrature degree ``2 m``; it starts at ``2 * (n_init // 2)`` and grows
    as ``m <- 2m + 1`` up to ``m = n_max // 2``.

    ``f`` is wrapped in a :class:`CachedFunction` unless it already is one;
    the number of genuine evaluations is ``sketch.function.count``.
    ``s`` defaults to :func:`default_samples` of the current degrees,
    re-derived after every refinement.
    """
    if basis not in BASES:
        raise ValueError(f"unknown basis {basis!r}")
    if n_init < 4:
        raise ValueError(f"n_init must be >= 4, got {n_init}")
    if not tol > 0:
        raise ValueError(f"tol must be positive, got {tol}")
    rng = as_rng(rng)
    cf = f if isinstance(f, CachedFunction) else CachedFunction(f)

    if basis == "cheb":
        degrees = [n_init] * d
        grow = lambda n: min(2 * n + 1, n_max)  # noqa: E731
        resolved = _cheb_resolved
    else:
        m_max = n_max // 2
        degrees = [2 * (n_init // 2)] * d
        grow = lambda n: 2 * legendre.next_degree(n // 2, m_max)  # noqa: E731
        resolved = _legendre_resolved
        n_max = 2 * m_max

    modes: list[ModeBasis] = []
    unresolved: list[bool] = []
    warnings: list[str] = []
    for k in range(d):
        while True:
            t = grid_tensor(cf, degrees)
            s_k = s if s is not None else default_samples(degrees)
            mb = mode_basis(t, k, tol, s_k, rng)
            if resolved(mb, tol):
                unresolved.append(False)
                break
            if degrees[k] >= n_max:
                unresolved.append(True)
                warnings.append(f"mode {k}: unresolved at degree cap {degrees[k]}")
                break
            degrees[k] = grow(degrees[k])
        modes.append(mb)

    final = grid_tensor(cf, degrees)
    sk = TuckerSketch(basis, modes, final, unresolved, warnings)
    sk.function = cf
    return sk
