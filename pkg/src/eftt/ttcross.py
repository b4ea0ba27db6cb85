"""Tensor trains and greedy restricted cross interpolation.

Bonds are numbered ``k = 0..d-2``; bond ``k`` sits between modes ``k`` and
``k + 1``.  The left set of bond ``k`` holds ``(k + 1)``-tuples of indices
of modes ``0..k`` and the right set holds tuples of indices of modes
``k + 1..d-1``.  Both have ``R_k`` members and are nested: dropping the last
entry of a left tuple gives a member of the previous left set, dropping
the first entry of a right tuple a member of the next right set.

The cross approximation is::

    T ~ prod_k T(left_{k-1}, i_k, right_k) T(left_k, right_k)^{-1}

and each supercore update runs one step of randomized ACA on the matrix
with rows ``(a, i_k)`` (``a`` over ``left_{k-1}``, fastest) and columns
``(i_{k+1}, b)`` (``i_{k+1}`` fastest, ``b`` over ``right_{k+1}``).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .cross import CrossSkeleton, aca_random, as_rng
from .tensor import FuncTensor, MatrixOracle

MAX_RANK = 64
MAX_SWEEPS = 50
CHECK_SAMPLES = 100
STALL_SWEEPS = 3


@dataclass
class TTCores:
    """Order-3 cores ``G_k`` of shape ``(R_{k-1}, n_k, R_k)``, ``R_{-1} = R_{d-1} = 1``."""

    cores: list[np.ndarray]

    def __post_init__(self):
        # one fixed layout so evaluation rounds the same way after a reload
        self.cores = [np.ascontiguousarray(c, dtype=float) for c in self.cores]
        if not self.cores:
            raise ValueError("a tensor train needs at least one core")
        if self.cores[0].shape[0] != 1 or self.cores[-1].shape[2] != 1:
            raise ValueError("boundary ranks must be 1")
        for a, b in zip(self.cores, self.cores[1:]):
            if a.shape[2] != b.shape[0]:
                raise ValueError(f"rank mismatch between cores: {a.shape} and {b.shape}")

    @property
    def d(self) -> int:
        return len(self.cores)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(c.shape[1] for c in self.cores)

    @property
    def ranks(self) -> list[int]:
        """Inner ranks ``R_0..R_{d-2}``."""
        return [c.shape[2] for c in self.cores[:-1]]

    def entries(self, idx) -> np.ndarray:
        return tt_entries(self, idx)

    def full(self) -> np.ndarray:
        out = self.cores[0][0]
        for c in self.cores[1:]:
            out = np.tensordot(out, c, axes=(-1, 0))
        return out[..., 0]

    def contract(self, vectors: Sequence[np.ndarray]) -> float:
        """``sum_i G(i) prod_k v_k[i_k]`` for one vector per mode."""
        acc = np.ones(1)
        for c, v in zip(self.cores, vectors):
            acc = acc @ np.einsum("anb,n->ab", c, v)
        return float(acc[0])


def tt_entries(tt: TTCores, idx) -> np.ndarray:
    """Entries at a batch of multi-indices ``(N, d)``."""
    idx = np.asarray(idx, dtype=np.int64)
    if idx.ndim == 1:
        idx = idx[None, :]
    if idx.shape[1] != tt.d:
        raise IndexError(f"expected {tt.d} indices, got {idx.shape[1]}")
    if np.any(idx < 0) or np.any(idx >= np.asarray(tt.dims)):
        raise IndexError("multi-index out of range")
    v = tt.cores[0][0, idx[:, 0], :]
    for k in range(1, tt.d):
        v = np.einsum("na,anb->nb", v, tt.cores[k][:, idx[:, k], :])
    return v[:, 0]


def tt_entry(tt: TTCores, idx: Sequence[int]) -> float:
    """Single entry: product of the core slices, left to right."""
    return float(tt_entries(tt, np.asarray(idx)[None, :])[0])


def tt_dofs(tt: TTCores) -> int:
    """Number of stored scalars ``sum_k R_{k-1} n_k R_k``."""
    return int(sum(c.size for c in tt.cores))


@dataclass
class NestedIndexSets:
    """Left and right index sets for the ``d - 1`` bonds (lists of tuples)."""

    left: list[list[tuple]]
    right: list[list[tuple]]

    @property
    def ranks(self) -> list[int]:
        return [len(s) for s in self.left]

    def is_nested(self) -> bool:
        d = len(self.left) + 1
        for k in range(d - 1):
            if len(self.left[k]) != len(self.right[k]):
                return False
            if len(set(self.left[k])) != len(self.left[k]) or len(set(self.right[k])) != len(self.right[k]):
                return False
            if k > 0 and not all(t[:-1] in self.left[k - 1] for t in self.left[k]):
                return False
            if k < d - 2 and not all(t[1:] in self.right[k + 1] for t in self.right[k]):
                return False
        return True

    def left_of(self, k: int) -> list[tuple]:
        """Left set of bond ``k``, with ``[()]`` for ``k = -1``."""
        return [()] if k < 0 else self.left[k]

    def right_of(self, k: int) -> list[tuple]:
        """Right set of bond ``k``, with ``[()]`` for ``k = d - 1``."""
        return [()] if k >= len(self.right) else self.right[k]


class Supercore(MatrixOracle):
    """Bond-``k`` supercore of ``t`` as a matrix oracle (see module docstring)."""

    def __init__(self, t: FuncTensor, sets: NestedIndexSets, k: int):
        self.t = t
        self.k = k
        left, right = sets.left_of(k - 1), sets.right_of(k + 1)
        self.L = np.asarray(left, dtype=np.int64).reshape(len(left), k)
        self.Rt = np.asarray(right, dtype=np.int64).reshape(len(right), t.ndim - k - 2)
        self.row_dims = (self.L.shape[0], t.dims[k])
        self.col_dims = (t.dims[k + 1], self.Rt.shape[0])

    def multi_index(self, rows, cols):
        return np.hstack([self.L[rows[:, 0]], rows[:, 1:2], cols[:, 0:1], self.Rt[cols[:, 1]]])

    def _values(self, rows, cols):
        return self.t.entries(self.multi_index(rows, cols))


def _fiber(t: FuncTensor, left: list[tuple], k: int, right: list[tuple]) -> np.ndarray:
    """``T(left, :, right)`` as an array ``(len(left), n_k, len(right))``."""
    L = np.asarray(left, dtype=np.int64).reshape(len(left), k)
    R = np.asarray(right, dtype=np.int64).reshape(len(right), t.ndim - k - 1)
    n = t.dims[k]
    a, i, b = np.meshgrid(np.arange(L.shape[0]), np.arange(n), np.arange(R.shape[0]), indexing="ij")
    a, i, b = a.ravel(), i.ravel(), b.ravel()
    idx = np.hstack([L[a], i[:, None], R[b]])
    return t.entries(idx).reshape(L.shape[0], n, R.shape[0])


def tt_cores_from_cross(t: FuncTensor, sets: NestedIndexSets) -> TTCores:
    """TT cores of the cross approximation defined by nested sets.

    Core ``k < d-1`` is ``T(left_{k-1}, :, right_k) T(left_k, right_k)^{-1}``
    with the inverse applied through a QR factorisation of the unfolded
    fiber; the last core is the plain fiber.
    """
    d = t.ndim
    cores = []
    for k in range(d):
        left, right = sets.left_of(k - 1), sets.right_of(k)
        C = _fiber(t, left, k, right)
        if k == d - 1:
            cores.append(C)
            continue
        Rl, n, Rr = C.shape
        A = C.transpose(1, 0, 2).reshape(n * Rl, Rr, order="C")
        # row of A for (a, i): i * Rl + a; locate the pivot rows left_k
        pos = {tup: a for a, tup in enumerate(left)}
        rows = [t_[-1] * Rl + pos[t_[:-1]] for t_ in sets.left[k]]
        Q, _ = np.linalg.qr(A)
        P = Q[rows]
        if np.linalg.cond(P) > 1e14:
            raise np.linalg.LinAlgError(f"cross block at bond {k} is singular")
        G = np.linalg.solve(P.T, Q.T).T
        cores.append(G.reshape(n, Rl, Rr).transpose(1, 0, 2))
    return TTCores(cores)


@dataclass
class TTCrossResult:
    tt: TTCores
    sets: NestedIndexSets | None
    sweeps: int = 0
    converged: bool = True
    check_error: float = 0.0
    warnings: list[str] = field(default_factory=list)

    @property
    def ranks(self) -> list[int]:
        return self.tt.ranks


def _random_index(rng, dims, count):
    return np.column_stack([rng.integers(0, n, size=count) for n in dims])


def _sets_from(idx: Sequence[int]) -> NestedIndexSets:
    d = len(idx)
    idx = tuple(int(i) for i in idx)
    return NestedIndexSets(
        [[idx[: k + 1]] for k in range(d - 1)],
        [[idx[k + 1 :]] for k in range(d - 1)],
    )


def tt_cross(
    t: FuncTensor,
    tol: float,
    rng=None,
    check_samples: int = CHECK_SAMPLES,
    max_rank: int = MAX_RANK,
    max_sweeps: int = MAX_SWEEPS,
    s: int = 50,
) -> TTCrossResult:
    """Greedy restricted cross interpolation of ``t``.

    Starts from one random nonzero multi-index.  Until the current cross
    matches ``t`` to ``tol * max|t seen|`` at ``check_samples`` fresh
    uniform multi-indices, sweeps the bonds left to right and grows each by
    at most one pivot chosen by randomized ACA on the supercore
    (``s`` sampled pairs).  Sweeping also stops at ``max_sweeps``, when no
    pivot has been added for three sweeps, or when every bond is at
    ``max_rank``; these outcomes set ``converged = False`` and add a warning.
    """
    if not tol > 0:
        raise ValueError(f"tol must be positive, got {tol}")
    rng = as_rng(rng)
    d = t.ndim
    if d == 1:
        tt = TTCores([t.full().reshape(1, -1, 1)])
        return TTCrossResult(tt, None)

    start = None
    for _ in range(100):
        cand = _random_index(rng, t.dims, 1)[0]
        if t.entry(cand) != 0.0:
            start = cand
            break
    if start is None:
        tt = TTCores([np.zeros((1, n, 1)) for n in t.dims])
        return TTCrossResult(tt, None, warnings=["no nonzero entry found; returning the zero tensor"])

    sets = _sets_from(start)
    warnings: list[str] = []
    converged = False
    stall = 0
    err = np.inf
    sweeps = 0
    while True:
        tt = tt_cores_from_cross(t, sets)
        probe = _random_index(rng, t.dims, check_samples)
        exact = t.entries(probe)
        err = float(np.max(np.abs(exact - tt_entries(tt, probe))))
        if err <= tol * t.max_abs:
            converged = True
            break
        if sweeps >= max_sweeps:
            warnings.append(f"sweep cap {max_sweeps} reached, check error {err:.3e}")
            break
        if stall >= STALL_SWEEPS:
            warnings.append(f"no pivots added for {STALL_SWEEPS} sweeps, check error {err:.3e}")
            break
        if all(r >= max_rank for r in sets.ranks):
            warnings.append(f"rank cap {max_rank} reached, check error {err:.3e}")
            break
        added = sum(_update_bond(t, sets, k, tol, s, rng, max_rank) for k in range(d - 1))
        stall = 0 if added else stall + 1
        sweeps += 1
    return TTCrossResult(tt, sets, sweeps, converged, err, warnings)


def _update_bond(t, sets: NestedIndexSets, k: int, tol, s, rng, max_rank) -> int:
    if len(sets.left[k]) >= max_rank:
        return 0
    M = Supercore(t, sets, k)
    lpos = {tup: a for a, tup in enumerate(sets.left_of(k - 1))}
    rpos = {tup: b for b, tup in enumerate(sets.right_of(k + 1))}
    rows = np.array([[lpos[tp[:-1]], tp[-1]] for tp in sets.left[k]], dtype=np.int64)
    cols = np.array([[tp[0], rpos[tp[1:]]] for tp in sets.right[k]], dtype=np.int64)
    init = CrossSkeleton(rows, cols, M.block(rows, cols))
    sk = aca_random(M, tol, s, rng, init=init, max_new=1, max_rank=max_rank, scale=t.max_abs)
    if sk.rank == init.rank:
        return 0
    r, c = sk.rows[-1], sk.cols[-1]
    sets.left[k].append(tuple(int(v) for v in M.L[r[0]]) + (int(r[1]),))
    sets.right[k].append((int(c[0]),) + tuple(int(v) for v in M.Rt[c[1]]))
    return 1
