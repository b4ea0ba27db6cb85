"""EFTT and functional TT models built from function evaluations.

An :class:`EFTTModel` stores, per mode, a coefficient matrix whose columns
are the expansion coefficients of ``r`` univariate basis functions
(``F U`` for Chebyshev, ``E U`` for Legendre), plus a TT over the
``r_1 x ... x r_d`` core.  Evaluating at a point contracts each mode's basis
values with its coefficient matrix and then runs through the TT.

An :class:`FTTModel` is the baseline without the inner factors: a TT whose
cores hold coefficients directly (``G_k x_2 F``).
"""

from __future__ import annotations

import warnings as _warnings
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import legendre
from .cheb_basis import cheb_integral_weights, cheb_vandermonde, dct_matrix
from .cross import as_rng
from .tensor import CachedFunction, mode_mult
from .tucker import BASES, N_MAX, adaptive_sketch, default_samples, grid_tensor, tucker_sketch
from .ttcross import MAX_RANK, TTCores, tt_cross, tt_dofs

_CUBE_SLACK = 1e-12


def basis_values(basis: str, x: np.ndarray, degree: int) -> np.ndarray:
    """``V[p, i]``: basis function ``i`` at ``x[p]``, ``i = 0..degree``."""
    if basis == "cheb":
        return cheb_vandermonde(x, degree)
    if basis == "legendre":
        return legendre.legendre_vandermonde(x, degree)
    raise ValueError(f"unknown basis {basis!r}")


def integral_weights(basis: str, degree: int) -> np.ndarray:
    if basis == "cheb":
        return cheb_integral_weights(degree)
    if basis == "legendre":
        return legendre.legendre_integral_weights(degree)
    raise ValueError(f"unknown basis {basis!r}")


def transform_matrix(basis: str, n: int) -> np.ndarray:
    """Map from values on the degree-``n`` Chebyshev grid to coefficients."""
    if basis == "cheb":
        return dct_matrix(n)
    return legendre.projection_matrix(n // 2, n)


def _points(x, d: int) -> np.ndarray:
    X = np.asarray(x, dtype=float)
    if X.ndim == 1:
        X = X[None, :]
    if X.shape[1] != d:
        raise ValueError(f"expected points with {d} coordinates, got {X.shape[1]}")
    if X.size and np.max(np.abs(X)) > 1.0 + _CUBE_SLACK:
        raise ValueError("evaluation point outside [-1, 1]^d")
    return X


def _contract(cores: Sequence[np.ndarray], mats: Sequence[np.ndarray]) -> np.ndarray:
    # mats[k] is N x size_k; returns the N contracted values
    v = np.einsum("nj,jb->nb", mats[0], cores[0][0])
    for c, A in zip(cores[1:], mats[1:]):
        v = np.einsum("na,nj,ajb->nb", v, A, c, optimize=True)
    return v[:, 0]


@dataclass
class EFTTModel:
    """Compressed surrogate on ``[-1, 1]^d``.

    Attributes
    ----------
    basis : {"cheb", "legendre"}
    degrees : list of int
        Interpolation grid degree ``n_k`` per mode.
    coeff_factors : list of ndarray
        Per mode, ``(m_k + 1) x r_k`` coefficients of the ``r_k`` univariate
        functions, with ``m_k = n_k`` (Chebyshev) or ``n_k / 2`` (Legendre).
    tt : TTCores
        TT over the core tensor, mode sizes ``r_k``.
    n_evals : int
        Function evaluations spent building the model.
    """

    basis: str
    degrees: list[int]
    coeff_factors: list[np.ndarray]
    tt: TTCores
    n_evals: int = 0
    warnings: list[str] = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.basis not in BASES:
            raise ValueError(f"unknown basis {self.basis!r}")
        self.degrees = [int(n) for n in self.degrees]
        self.coeff_factors = [np.ascontiguousarray(c, dtype=float) for c in self.coeff_factors]
        if len(self.coeff_factors) != self.tt.d or len(self.degrees) != self.tt.d:
            raise ValueError("one coefficient matrix and degree per mode required")
        for k, (c, n) in enumerate(zip(self.coeff_factors, self.tt.dims)):
            if c.shape[1] != n:
                raise ValueError(f"mode {k}: {c.shape[1]} factor columns but core size {n}")

    @property
    def d(self) -> int:
        return self.tt.d

    @property
    def coeff_degrees(self) -> list[int]:
        return [c.shape[0] - 1 for c in self.coeff_factors]

    @property
    def tt_ranks(self) -> list[int]:
        """``R_k``."""
        return self.tt.ranks

    @property
    def tucker_ranks(self) -> list[int]:
        """``r_k``."""
        return list(self.tt.dims)

    @property
    def max_R(self) -> int:
        return max(self.tt_ranks, default=1)

    @property
    def max_r(self) -> int:
        return max(self.tucker_ranks)

    def mode_values(self, k: int, x: np.ndarray) -> np.ndarray:
        """The ``r_k`` univariate functions of mode ``k`` at ``x`` (``N x r_k``)."""
        return basis_values(self.basis, x, self.coeff_degrees[k]) @ self.coeff_factors[k]

    def __call__(self, x) -> np.ndarray | float:
        X = _points(x, self.d)
        out = _contract(self.tt.cores, [self.mode_values(k, X[:, k]) for k in range(self.d)])
        return float(out[0]) if np.ndim(x) == 1 else out

    def integrate(self) -> float:
        """Integral of the surrogate over ``[-1, 1]^d``."""
        vecs = [
            integral_weights(self.basis, m) @ c for m, c in zip(self.coeff_degrees, self.coeff_factors)
        ]
        return self.tt.contract(vecs)

    def dofs(self) -> tuple[int, dict]:
        """Stored scalars ``sum R_{k-1} r_k R_k + sum (m_k + 1) r_k``."""
        core = tt_dofs(self.tt)
        factors = int(sum(c.size for c in self.coeff_factors))
        return core + factors, {"tt": core, "factors": factors}


@dataclass
class FTTModel:
    """Functional TT: TT cores of Chebyshev/Legendre coefficients."""

    basis: str
    degrees: list[int]
    tt: TTCores
    n_evals: int = 0
    warnings: list[str] = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    @property
    def d(self) -> int:
        return self.tt.d

    @property
    def coeff_degrees(self) -> list[int]:
        return [n - 1 for n in self.tt.dims]

    @property
    def tt_ranks(self) -> list[int]:
        return self.tt.ranks

    @property
    def max_R(self) -> int:
        return max(self.tt_ranks, default=1)

    def __call__(self, x):
        X = _points(x, self.d)
        mats = [basis_values(self.basis, X[:, k], m) for k, m in enumerate(self.coeff_degrees)]
        out = _contract(self.tt.cores, mats)
        return float(out[0]) if np.ndim(x) == 1 else out

    def integrate(self) -> float:
        return self.tt.contract([integral_weights(self.basis, m) for m in self.coeff_degrees])

    def dofs(self) -> tuple[int, dict]:
        core = tt_dofs(self.tt)
        return core, {"tt": core, "factors": 0}

    def as_eftt(self) -> EFTTModel:
        """Same function as an :class:`EFTTModel` with identity factors."""
        eye = [np.eye(n) for n in self.tt.dims]
        return EFTTModel(self.basis, self.degrees, eye, self.tt, self.n_evals, list(self.warnings), dict(self.meta))


def _grid_degrees(basis: str, degree: int, d: int) -> list[int]:
    # fixed polynomial degree -> grid degree (Legendre projects from 2m)
    return [degree if basis == "cheb" else 2 * degree] * d


def eftt_approximate(
    f: Callable[[np.ndarray], np.ndarray],
    d: int,
    tol: float = 1e-10,
    s: int | None = None,
    rng=None,
    fixed_degree: int | None = None,
    basis: str = "cheb",
    n_max: int | None = None,
    max_rank: int = MAX_RANK,
) -> EFTTModel:
    """Build an EFTT model of ``f`` on ``[-1, 1]^d`` from evaluations.

    ``f`` maps an ``(N, d)`` array of points to ``N`` values.  With
    ``fixed_degree`` every mode uses that polynomial degree (Chebyshev
    grid of the same degree, or of twice it for Legendre); otherwise the
    degrees are chosen adaptively by :func:`eftt.tucker.adaptive_sketch`.
    The core of the Tucker sketch is then compressed by :func:`tt_cross`.
    """
    if basis not in BASES:
        raise ValueError(f"unknown basis {basis!r}")
    if d < 1:
        raise ValueError(f"d must be >= 1, got {d}")
    rng = as_rng(rng)
    cf = CachedFunction(f)
    if fixed_degree is not None:
        t = grid_tensor(cf, _grid_degrees(basis, fixed_degree, d))
        sk = tucker_sketch(t, tol, s, rng, basis=basis)
    else:
        if n_max is None:
            n_max = N_MAX if basis == "cheb" else 2 * legendre.M_MAX
        sk = adaptive_sketch(cf, d, tol, s, rng, n_max=n_max, basis=basis)
    s_tt = s if s is not None else default_samples(sk.degrees)
    res = tt_cross(sk.core(), tol, rng, s=s_tt, max_rank=max_rank)
    factors = [transform_matrix(basis, n) @ U for n, U in zip(sk.degrees, sk.factors)]
    warns = list(sk.warnings) + list(res.warnings)
    meta = {
        "samples": s_tt,
        "sweeps": res.sweeps,
        "unresolved_modes": [k for k, u in enumerate(sk.unresolved) if u],
        "tt_converged": res.converged,
        "deim_index": [ix.tolist() for ix in sk.index_sets],
    }
    return EFTTModel(basis, sk.degrees, factors, res.tt, cf.count, warns, meta)


def direct_tt_approximate(
    f: Callable[[np.ndarray], np.ndarray],
    d: int,
    tol: float = 1e-10,
    rng=None,
    degree: int = 100,
    basis: str = "cheb",
    s: int | None = None,
    max_rank: int = MAX_RANK,
) -> FTTModel:
    """Baseline: TT cross of the full evaluation tensor, then ``G_k x_2 F``."""
    if basis not in BASES:
        raise ValueError(f"unknown basis {basis!r}")
    rng = as_rng(rng)
    cf = CachedFunction(f)
    degrees = _grid_degrees(basis, degree, d)
    if s is None:
        s = default_samples(degrees)
    res = tt_cross(grid_tensor(cf, degrees), tol, rng, s=s, max_rank=max_rank)
    cores = [mode_mult(G, transform_matrix(basis, n), 1) for G, n in zip(res.tt.cores, degrees)]
    meta = {"samples": s, "sweeps": res.sweeps, "tt_converged": res.converged}
    return FTTModel(basis, degrees, TTCores(cores), cf.count, list(res.warnings), meta)


def mc_l2_error(
    model: Callable[[np.ndarray], np.ndarray],
    f: Callable[[np.ndarray], np.ndarray],
    d: int,
    n_samples: int = 10000,
    rng=None,
) -> float:
    """Monte-Carlo relative L2 error ``sqrt(sum (f - m)^2 / sum f^2)``.

    Points are uniform on ``[-1, 1]^d``.  If ``f`` vanishes at every sample
    the root-mean-square absolute error is returned and a ``RuntimeWarning``
    is issued.
    """
    if n_samples < 1:
        raise ValueError(f"n_samples must be >= 1, got {n_samples}")
    X = as_rng(rng).uniform(-1.0, 1.0, size=(n_samples, d))
    fv = np.asarray(f(X), dtype=float).reshape(-1)
    mv = np.asarray(model(X), dtype=float).reshape(-1)
    num = float(np.sum((fv - mv) ** 2))
    den = float(np.sum(fv**2))
    if den == 0.0:
        _warnings.warn("reference values are all zero; returning absolute RMS error", RuntimeWarning, stacklevel=2)
        return float(np.sqrt(num / n_samples))
    return float(np.sqrt(num / den))


def tt_svd(T: np.ndarray, max_rank: int) -> TTCores:
    """Dense TT-SVD truncated to ``max_rank`` (used for small dense tests)."""
    dims = T.shape
    cores = []
    r = 1
    C = T.reshape(1, -1)
    for n in dims[:-1]:
        C = C.reshape(r * n, -1)
        u, sv, vt = np.linalg.svd(C, full_matrices=False)
        k = max(1, min(max_rank, int(np.sum(sv > sv[0] * 1e-15)) if sv[0] > 0 else 1))
        cores.append(u[:, :k].reshape(r, n, k))
        C = sv[:k, None] * vt[:k]
        r = k
    cores.append(C.reshape(r, dims[-1], 1))
    return TTCores(cores)


def lemma1_bound_check(
    f: Callable[[np.ndarray], np.ndarray],
    d: int,
    n: int | Sequence[int],
    rank: int = 1,
    n_points: int = 4000,
    rng=None,
    T_hat: np.ndarray | None = None,
) -> tuple[float, float]:
    """Both sides of the perturbed-interpolant bound.

    With ``T`` the evaluation tensor on Chebyshev grids, ``T_hat`` a
    perturbation of it (by default its TT-SVD truncation to ``rank``),
    ``f~`` and ``f^`` the polynomials interpolating ``T`` and ``T_hat``::

        max|f - f^| <= max|f - f~| + prod_k (2/pi log n_k + 1) max|T - T_hat|

    The function norms are maxima over the same sample (uniform points plus
    the grid corners), so the inequality holds sample-wise.  Returns
    ``(lhs, rhs)``.
    """
    degrees = [int(n)] * d if np.ndim(n) == 0 else [int(v) for v in n]
    if len(degrees) != d:
        raise ValueError("one degree per mode required")
    T = grid_tensor(f, degrees).full()
    if T_hat is None:
        T_hat = tt_svd(T, rank).full()
    A, A_hat = T, T_hat
    for k, nk in enumerate(degrees):
        A = mode_mult(A, dct_matrix(nk), k)
        A_hat = mode_mult(A_hat, dct_matrix(nk), k)
    rng = as_rng(rng)
    X = np.vstack([rng.uniform(-1.0, 1.0, size=(n_points, d)), np.array(np.meshgrid(*[[-1.0, 1.0]] * d)).reshape(d, -1).T])
    mats = [cheb_vandermonde(X[:, k], nk) for k, nk in enumerate(degrees)]

    def poly(C):
        # sum_i C[i] prod_k V_k[p, i_k], contracting the last mode first
        acc = np.broadcast_to(C, (X.shape[0],) + C.shape)
        for V in reversed(mats):
            acc = np.einsum("p...i,pi->p...", acc, V)
        return acc

    fx = np.asarray(f(X), dtype=float)
    lhs = float(np.max(np.abs(fx - poly(A_hat))))
    lam = float(np.prod([2.0 / np.pi * np.log(nk) + 1.0 for nk in degrees]))
    rhs = float(np.max(np.abs(fx - poly(A)))) + lam * float(np.max(np.abs(T - T_hat)))
    return lhs, rhs
