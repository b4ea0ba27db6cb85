"""Univariate Chebyshev machinery.

Nodes are the Chebyshev extreme points ``cos(pi k / n)``, ordered from
``1`` down to ``-1``.  Coefficient vectors ``c`` of length ``n + 1``
represent ``sum_i c[i] T_i(x)``.
"""

from __future__ import annotations

import numpy as np

# Slack allowed on the interval check so affine round-off does not reject
# points that are mathematically on the boundary.
_DOMAIN_SLACK = 1e-12


def _check_interval(x: np.ndarray) -> None:
    if x.size and np.max(np.abs(x)) > 1.0 + _DOMAIN_SLACK:
        raise ValueError("evaluation point outside [-1, 1]")


def cheb_points(n: int) -> np.ndarray:
    """Chebyshev extreme points ``cos(pi k / n)`` for ``k = 0..n``.

    The sine form ``sin(pi (n - 2k) / (2n))`` is used; it is equal to the
    cosine form but exactly antisymmetric, so ``x[0] = 1``, ``x[n] = -1``
    and the middle node of an even grid is exactly zero.
    """
    if n < 1:
        raise ValueError(f"degree must be >= 1, got {n}")
    k = np.arange(n + 1)
    return np.sin(np.pi * (n - 2 * k) / (2 * n))


def cheb_vandermonde(x, n: int) -> np.ndarray:
    """Matrix ``V[p, i] = T_i(x[p])`` for ``i = 0..n`` (three-term recurrence)."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    _check_interval(x)
    V = np.empty((x.size, n + 1))
    V[:, 0] = 1.0
    if n >= 1:
        V[:, 1] = x
    for i in range(2, n + 1):
        V[:, i] = 2.0 * x * V[:, i - 1] - V[:, i - 2]
    return V


def cheb_eval(coeffs, x):
    """Evaluate ``sum_i coeffs[i] T_i(x)`` with Clenshaw's recurrence.

    ``x`` may be a scalar or an array; values outside ``[-1, 1]`` raise
    ``ValueError``.
    """
    c = np.asarray(coeffs, dtype=float)
    xa = np.asarray(x, dtype=float)
    _check_interval(np.atleast_1d(xa))
    b1 = np.zeros_like(xa)
    b2 = np.zeros_like(xa)
    for ck in c[:0:-1]:
        b1, b2 = 2.0 * xa * b1 - b2 + ck, b1
    out = xa * b1 - b2 + (c[0] if c.size else 0.0)
    return float(out) if np.ndim(out) == 0 else out


def dct_matrix(n: int) -> np.ndarray:
    """Matrix mapping values at ``cheb_points(n)`` to Chebyshev coefficients.

    ``F[i, j] = (2 / n) * w_i * w_j * T_i(x_j)`` with ``w = 1/2`` on the
    first and last index and ``1`` elsewhere, so the four corners carry
    ``1/4`` and the remaining border entries ``1/2``.
    """
    if n < 1:
        raise ValueError(f"degree must be >= 1, got {n}")
    k = np.arange(n + 1)
    # T_i(x_j) = cos(pi i j / n); reduce i*j mod 2n to keep the argument small
    T = np.cos(np.pi * ((np.outer(k, k)) % (2 * n)) / n)
    w = np.ones(n + 1)
    w[0] = w[-1] = 0.5
    return (2.0 / n) * (w[:, None] * T * w[None, :])


def cheb_integral_weights(n: int) -> np.ndarray:
    """Weights ``w`` with ``w @ c = int_{-1}^{1} sum_i c[i] T_i(x) dx``."""
    if n < 1:
        raise ValueError(f"degree must be >= 1, got {n}")
    i = np.arange(n + 1)
    w = np.zeros(n + 1)
    even = i % 2 == 0
    w[even] = 2.0 / (1.0 - i[even] ** 2)
    return w


def chop(coeffs, tol: float) -> int | None:
    """Decide whether a Chebyshev series is resolved to relative accuracy ``tol``.

    The base rule is the plateau detection of Aurentz and Trefethen
    ("Chopping a Chebyshev series", 2017):

    1. Replace ``|c|`` by its monotone non-increasing envelope, normalised
       to start at one.
    2. Scan for a plateau: the first ``j`` such that the envelope at
       ``round(1.25 j + 5)`` is not much smaller than at ``j``, the
       admissible ratio shrinking as the envelope approaches ``tol``.
    3. Pick the cut as the minimiser of the log-envelope tilted by a
       straight line, which prefers the start of the plateau.

    The base rule is not monotone in ``tol``.  This function returns the
    largest cut the base rule produces over the tolerances
    ``10**(-k/8) >= tol`` (``None`` counting as infinite), which is
    monotone: loosening ``tol`` never increases the cut.  For ``tol`` on
    that grid (e.g. ``1e-10``) the base rule at ``tol`` itself is included.

    Parameters
    ----------
    coeffs : array_like
        Chebyshev coefficients, lowest degree first.
    tol : float
        Relative tolerance, ``0 < tol``.

    Returns
    -------
    int or None
        The degree of the last coefficient worth keeping, or ``None`` if the
        series has not plateaued (more coefficients are needed).  Series
        shorter than 17 coefficients are never declared resolved.
    """
    c = np.asarray(coeffs, dtype=float).ravel()
    if c.size == 0:
        raise ValueError("empty coefficient vector")
    if not tol > 0:
        raise ValueError(f"tol must be positive, got {tol}")
    if tol >= 1:
        return 0
    cut = 0
    for t in _tolerance_grid(tol):
        k = _standard_chop(c, t)
        if k is None:
            return None
        cut = max(cut, k)
    return cut


def _tolerance_grid(tol: float) -> np.ndarray:
    # 10**(-k/8) for all k >= 1 with 10**(-k/8) >= tol (up to round-off)
    kmax = int(np.floor(-8.0 * np.log10(tol) + 1e-9))
    return 10.0 ** (-np.arange(1, kmax + 1) / 8.0)


def _standard_chop(c: np.ndarray, tol: float) -> int | None:
    n = c.size
    if n < 17:
        return None
    envelope = np.maximum.accumulate(np.abs(c)[::-1])[::-1]
    if envelope[0] == 0:
        return 0
    envelope = envelope / envelope[0]

    # step 2, 1-based indices as in the reference description
    j = np.arange(2, n + 1)
    j2s = np.floor(1.25 * j + 5.5).astype(int)
    j, j2s = j[j2s <= n], j2s[j2s <= n]
    e1 = envelope[j - 1]
    e2 = envelope[j2s - 1]
    with np.errstate(divide="ignore", invalid="ignore"):
        r = 3.0 * (1.0 - np.log(e1) / np.log(tol))
        plateau = (e1 == 0) | (e2 / e1 > r)
    hits = np.flatnonzero(plateau)
    if hits.size == 0:
        return None
    plateau_point = int(j[hits[0]]) - 1
    j2 = int(j2s[hits[0]])

    # step 3
    if envelope[plateau_point - 1] == 0:
        cutoff = plateau_point
    else:
        floor = tol ** (7.0 / 6.0)
        env = envelope.copy()
        j3 = int(np.sum(env >= floor))
        if j3 < j2:
            j2 = j3 + 1
            env[j2 - 1] = floor
        cc = np.log10(env[:j2]) + np.linspace(0.0, (-1.0 / 3.0) * np.log10(tol), j2)
        cutoff = max(int(np.argmin(cc)), 1)
    return cutoff - 1
