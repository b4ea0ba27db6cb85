"""Legendre basis on Chebyshev nodes with Clenshaw-Curtis projection.

Values at the ``n + 1`` Chebyshev extreme points (``n = 2 m`` by default)
are mapped to the first ``m + 1`` Legendre coefficients through a discrete
L2 projection whose quadrature is Clenshaw-Curtis.
"""

from __future__ import annotations

from typing import Callable

import numpy as np

from .cheb_basis import cheb_points

M_MAX = 105
TRAILING = 4


def legendre_vandermonde(x, m: int) -> np.ndarray:
    """``V[p, k] = P_k(x[p])`` for ``k = 0..m`` via the three-term recurrence."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if x.size and np.max(np.abs(x)) > 1.0 + 1e-12:
        raise ValueError("evaluation point outside [-1, 1]")
    V = np.empty((x.size, m + 1))
    V[:, 0] = 1.0
    if m >= 1:
        V[:, 1] = x
    for k in range(m - 1):
        # (k + 2) P_{k+2} = (2k + 3) x P_{k+1} - (k + 1) P_k
        V[:, k + 2] = ((2 * k + 3) * x * V[:, k + 1] - (k + 1) * V[:, k]) / (k + 2)
    return V


def legendre_eval(k: int, x):
    """``P_k(x)``; scalar in, scalar out."""
    if k < 0:
        raise ValueError(f"degree must be >= 0, got {k}")
    v = legendre_vandermonde(x, k)[:, k]
    return float(v[0]) if np.ndim(x) == 0 else v


def cc_weights(m: int) -> np.ndarray:
    """Clenshaw-Curtis weights for the ``m + 1`` points ``cos(pi i / m)``.

    Waldvogel's closed form::

        w_i = c_i / m * (1 - sum_{j=1}^{floor(m/2)} b_j / (4 j^2 - 1) * cos(2 j i pi / m))

    with ``c_i = 1`` at the two endpoints and ``2`` otherwise, and
    ``b_j = 1`` for ``j = m / 2`` and ``2`` otherwise.
    """
    if m < 2:
        raise ValueError(f"need m >= 2, got {m}")
    i = np.arange(m + 1)
    j = np.arange(1, m // 2 + 1)
    b = np.full(j.size, 2.0)
    if m % 2 == 0:
        b[-1] = 1.0
    c = np.full(m + 1, 2.0)
    c[0] = c[-1] = 1.0
    ang = (2.0 * np.pi / m) * ((np.outer(i, j)) % m)
    s = np.cos(ang) @ (b / (4.0 * j**2 - 1.0))
    return c / m * (1.0 - s)


def projection_matrix(m: int, n: int | None = None) -> np.ndarray:
    """``E[i, j] = (2 i + 1) / 2 * w_j * P_i(x_j)``, shape ``(m + 1, n + 1)``.

    ``x_j`` are the Chebyshev points of degree ``n`` (default ``2 m``) and
    ``w_j`` their Clenshaw-Curtis weights.
    """
    if n is None:
        n = 2 * m
    if n < m:
        raise ValueError(f"quadrature degree {n} below target degree {m}")
    x = cheb_points(n)
    w = cc_weights(n)
    P = legendre_vandermonde(x, m)
    return ((2.0 * np.arange(m + 1) + 1.0) / 2.0)[:, None] * (P * w[:, None]).T


def legendre_integral_weights(m: int) -> np.ndarray:
    """``[2, 0, ..., 0]`` (length ``m + 1``)."""
    w = np.zeros(m + 1)
    w[0] = 2.0
    return w


def trailing_resolved(coeffs: np.ndarray, tol: float, count: int = TRAILING) -> bool:
    """True when the last ``count`` entries of every column are below ``tol``.

    Magnitudes are taken relative to the largest coefficient of the column
    (an identically zero column counts as resolved).
    """
    c = np.abs(np.asarray(coeffs, dtype=float))
    if c.ndim == 1:
        c = c[:, None]
    ref = c.max(axis=0)
    tail = c[-count:].max(axis=0)
    return bool(np.all(tail <= tol * ref))


def next_degree(m: int, m_max: int) -> int:
    return min(2 * m + 1, m_max)


def adapt_fiber_degree(
    g: Callable[[np.ndarray], np.ndarray],
    tol: float,
    m_start: int = 8,
    m_max: int = M_MAX,
) -> tuple[int, np.ndarray, bool]:
    """Grow ``m`` as ``m <- 2 m + 1`` until the univariate ``g`` is resolved.

    Returns ``(m, coefficients, resolved)``; ``resolved`` is ``False`` when
    ``m_max`` was reached with the trailing coefficients still too large.
    """
    if not tol > 0:
        raise ValueError(f"tol must be positive, got {tol}")
    m = m_start
    while True:
        E = projection_matrix(m)
        coeffs = E @ np.asarray(g(cheb_points(2 * m)), dtype=float)
        if trailing_resolved(coeffs, tol):
            return m, coeffs, True
        if m >= m_max:
            return m, coeffs, False
        m = next_degree(m, m_max)
