"""Dense and lazily evaluated d-way tensors.

Dense tensors are plain ``numpy`` arrays; modes are 0-based.  Lazily
evaluated tensors (:class:`FuncTensor`) wrap an entry oracle that maps a
batch of multi-indices to values, and count every oracle invocation.

Matrix oracles address rows and columns through *coordinates*: a row is a
tuple of integers ranging over ``row_dims`` and a column a tuple ranging
over ``col_dims``.  The flat row (column) number of a coordinate tuple uses
the first coordinate as the fastest varying one.  Keeping coordinates
instead of flat numbers lets matricizations of tensors with astronomically
many columns be sampled and indexed without overflow.
"""

from __future__ import annotations

import threading
from typing import Callable, Sequence

import numpy as np


class CacheFullError(RuntimeError):
    """Raised when a :class:`FuncTensor` cache would exceed its entry cap."""


def mode_mult(t: np.ndarray, M: np.ndarray, mode: int) -> np.ndarray:
    """Mode product ``t x_mode M``.

    ``result[..., i, ...] = sum_j t[..., j, ...] * M[i, j]`` with ``i, j`` at
    position ``mode``.
    """
    t = np.asarray(t)
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[1] != t.shape[mode]:
        raise ValueError(
            f"matrix with {M.shape[-1]} columns cannot act on mode {mode} of size {t.shape[mode]}"
        )
    out = np.tensordot(M, t, axes=(1, mode))
    return np.moveaxis(out, 0, mode)


def unfold(t: np.ndarray, mode: int) -> np.ndarray:
    """Mode-``mode`` matricization of a dense tensor.

    Columns follow the module convention: remaining modes in ascending
    order, the lowest one varying fastest.
    """
    t = np.asarray(t)
    return np.reshape(np.moveaxis(t, mode, 0), (t.shape[mode], -1), order="F")


def encode(coords: Sequence[int], dims: Sequence[int]) -> int:
    """Flat number of a coordinate tuple, first coordinate fastest."""
    flat, stride = 0, 1
    for c, n in zip(coords, dims):
        if not 0 <= c < n:
            raise IndexError(f"coordinate {c} out of range for size {n}")
        flat += int(c) * stride
        stride *= int(n)
    return flat


def decode(flat: int, dims: Sequence[int]) -> tuple[int, ...]:
    """Inverse of :func:`encode`."""
    total = 1
    for n in dims:
        total *= int(n)
    if not 0 <= flat < total:
        raise IndexError(f"flat index {flat} out of range for {total} entries")
    out = []
    for n in dims:
        flat, c = divmod(flat, int(n))
        out.append(c)
    return tuple(out)


class FuncTensor:
    """A d-way tensor whose entries come from a deterministic oracle.

    Parameters
    ----------
    dims : sequence of int
        Mode sizes.
    oracle : callable
        Maps an integer array of shape ``(N, d)`` to ``N`` values.
    cache : bool
        Memoise entries.  Cache hits do not count as evaluations.
    max_cache_entries : int, optional
        Raise :class:`CacheFullError` instead of growing past this size.

    Attributes
    ----------
    eval_count : int
        Number of entries the oracle has actually been asked for.
    max_abs : float
        Largest magnitude returned so far; used as a scale for relative
        stopping tests.
    """

    def __init__(
        self,
        dims: Sequence[int],
        oracle: Callable[[np.ndarray], np.ndarray],
        cache: bool = True,
        max_cache_entries: int | None = None,
    ):
        self.dims = tuple(int(n) for n in dims)
        if not self.dims or min(self.dims) < 1:
            raise ValueError(f"invalid tensor dimensions {dims}")
        self.oracle = oracle
        self.cache_enabled = cache
        self.max_cache_entries = max_cache_entries
        self.eval_count = 0
        self.max_abs = 0.0
        self._cache: dict[bytes, float] = {}
        self._lock = threading.Lock()

    @property
    def ndim(self) -> int:
        return len(self.dims)

    @classmethod
    def from_grid(cls, f: Callable[[np.ndarray], np.ndarray], grids: Sequence[np.ndarray], **kw):
        """Evaluation tensor ``T[i] = f(grids[0][i0], ..., grids[d-1][i_{d-1}])``.

        ``f`` takes an array of points of shape ``(N, d)``.
        """
        grids = [np.asarray(g, dtype=float) for g in grids]

        def oracle(idx: np.ndarray) -> np.ndarray:
            pts = np.column_stack([g[idx[:, k]] for k, g in enumerate(grids)])
            return np.asarray(f(pts), dtype=float).reshape(-1)

        t = cls([g.size for g in grids], oracle, **kw)
        t.grids = grids
        return t

    def _check(self, idx: np.ndarray) -> np.ndarray:
        idx = np.asarray(idx)
        if idx.ndim == 1:
            idx = idx[None, :]
        if idx.shape[1] != self.ndim:
            raise IndexError(f"expected {self.ndim} indices per entry, got {idx.shape[1]}")
        if idx.size and (np.any(idx < 0) or np.any(idx >= np.asarray(self.dims))):
            raise IndexError("multi-index out of range")
        return np.ascontiguousarray(idx, dtype=np.int64)

    def entries(self, idx) -> np.ndarray:
        """Values at a batch of multi-indices, array of shape ``(N, d)``."""
        idx = self._check(idx)
        n = idx.shape[0]
        if n == 0:
            return np.zeros(0)
        if not self.cache_enabled:
            vals = np.asarray(self.oracle(idx), dtype=float).reshape(n)
            with self._lock:
                self.eval_count += n
                self._update_scale(vals)
            return vals

        keys = [row.tobytes() for row in idx]
        out = np.empty(n)
        with self._lock:
            miss_pos: dict[bytes, list[int]] = {}
            cache = self._cache
            for p, key in enumerate(keys):
                v = cache.get(key)
                if v is None:
                    miss_pos.setdefault(key, []).append(p)
                else:
                    out[p] = v
            if miss_pos:
                first = [pos[0] for pos in miss_pos.values()]
                if (
                    self.max_cache_entries is not None
                    and len(cache) + len(first) > self.max_cache_entries
                ):
                    raise CacheFullError(
                        f"cache cap of {self.max_cache_entries} entries exceeded"
                    )
                vals = np.asarray(self.oracle(idx[first]), dtype=float).reshape(len(first))
                self.eval_count += len(first)
                self._update_scale(vals)
                for (key, pos), v in zip(miss_pos.items(), vals.tolist()):
                    cache[key] = v
                    out[pos] = v
        return out

    def entry(self, idx: Sequence[int]) -> float:
        """Single entry."""
        return float(self.entries(np.asarray(idx)[None, :])[0])

    def _update_scale(self, vals: np.ndarray) -> None:
        if not np.all(np.isfinite(vals)):
            raise ValueError("oracle returned a non-finite value")
        if vals.size:
            m = float(np.max(np.abs(vals)))
            if m > self.max_abs:
                self.max_abs = m

    def full(self) -> np.ndarray:
        """Materialise every entry (small tensors only)."""
        idx = np.indices(self.dims).reshape(self.ndim, -1).T
        return self.entries(idx).reshape(self.dims)

    def subtensor(self, index_lists: Sequence[Sequence[int]]) -> FuncTensor:
        """Lazy view ``T[I_0, ..., I_{d-1}]``; see :func:`subtensor_oracle`."""
        return subtensor_oracle(self, index_lists)


def subtensor_oracle(t: FuncTensor, index_lists: Sequence[Sequence[int]]) -> FuncTensor:
    """Lazy view of ``t`` restricted to the per-mode index lists.

    The view does not cache; each of its entries is read through ``t`` and
    counts against (and is cached by) ``t``.
    """
    if len(index_lists) != t.ndim:
        raise ValueError(f"need {t.ndim} index lists, got {len(index_lists)}")
    maps = []
    for k, lst in enumerate(index_lists):
        arr = np.asarray(lst, dtype=np.int64).reshape(-1)
        if arr.size == 0:
            raise ValueError(f"empty index list for mode {k}")
        if np.any(arr < 0) or np.any(arr >= t.dims[k]):
            raise IndexError(f"index list for mode {k} out of range")
        maps.append(arr)

    def oracle(idx: np.ndarray) -> np.ndarray:
        parent = np.column_stack([m[idx[:, k]] for k, m in enumerate(maps)])
        return t.entries(parent)

    view = FuncTensor([m.size for m in maps], oracle, cache=False)
    view.parent = t
    view.index_lists = maps
    return view


class MatrixOracle:
    """Base class for matrices accessed entry-wise through coordinates.

    Subclasses set ``row_dims`` and ``col_dims`` and implement
    ``_values(rows, cols)`` for integer coordinate arrays of shapes
    ``(N, len(row_dims))`` and ``(N, len(col_dims))``.
    """

    row_dims: tuple[int, ...]
    col_dims: tuple[int, ...]

    @property
    def shape(self) -> tuple[int, int]:
        return int(np.prod(self.row_dims, dtype=object)), int(np.prod(self.col_dims, dtype=object))

    def entries(self, rows, cols) -> np.ndarray:
        rows = np.asarray(rows, dtype=np.int64).reshape(-1, len(self.row_dims))
        cols = np.asarray(cols, dtype=np.int64).reshape(-1, len(self.col_dims))
        if rows.shape[0] != cols.shape[0]:
            raise ValueError("row and column batches differ in length")
        if rows.shape[0] == 0:
            return np.zeros(0)
        return self._values(rows, cols)

    def block(self, rows, cols) -> np.ndarray:
        """Submatrix ``M(rows, cols)`` for coordinate lists."""
        rows = np.asarray(rows, dtype=np.int64).reshape(-1, len(self.row_dims))
        cols = np.asarray(cols, dtype=np.int64).reshape(-1, len(self.col_dims))
        nr, nc = rows.shape[0], cols.shape[0]
        if nr == 0 or nc == 0:
            return np.zeros((nr, nc))
        vals = self.entries(np.repeat(rows, nc, axis=0), np.tile(cols, (nr, 1)))
        return vals.reshape(nr, nc)

    def entry(self, i: int, j: int) -> float:
        """Entry at flat row ``i`` and flat column ``j``."""
        r = decode(i, self.row_dims)
        c = decode(j, self.col_dims)
        return float(self.entries(np.array([r]), np.array([c]))[0])

    def _values(self, rows: np.ndarray, cols: np.ndarray) -> np.ndarray:  # pragma: no cover
        raise NotImplementedError


class DenseMatrixOracle(MatrixOracle):
    """Matrix oracle over an explicit array; counts entry reads."""

    def __init__(self, A: np.ndarray):
        self.A = np.asarray(A, dtype=float)
        if self.A.ndim != 2:
            raise ValueError("expected a matrix")
        self.row_dims = (self.A.shape[0],)
        self.col_dims = (self.A.shape[1],)
        self.eval_count = 0

    def _values(self, rows, cols):
        self.eval_count += rows.shape[0]
        return self.A[rows[:, 0], cols[:, 0]]


class Matricization(MatrixOracle):
    """Mode-``mode`` matricization of a :class:`FuncTensor`.

    Row coordinate: the index in mode ``mode``.  Column coordinates: the
    indices of the remaining modes in ascending order, so flat column
    numbers have the lowest remaining mode varying fastest.
    """

    def __init__(self, t: FuncTensor, mode: int):
        if not 0 <= mode < t.ndim:
            raise ValueError(f"mode {mode} out of range for a {t.ndim}-way tensor")
        self.tensor = t
        self.mode = mode
        self.others = [k for k in range(t.ndim) if k != mode]
        self.row_dims = (t.dims[mode],)
        self.col_dims = tuple(t.dims[k] for k in self.others) or (1,)

    def multi_index(self, rows: np.ndarray, cols: np.ndarray) -> np.ndarray:
        idx = np.empty((rows.shape[0], self.tensor.ndim), dtype=np.int64)
        idx[:, self.mode] = rows[:, 0]
        if self.others:
            idx[:, self.others] = cols
        return idx

    def _values(self, rows, cols):
        return self.tensor.entries(self.multi_index(rows, cols))

    def fibers(self, cols) -> np.ndarray:
        """Columns ``M(:, cols)`` as a ``(dims[mode], len(cols))`` array."""
        cols = np.asarray(cols, dtype=np.int64).reshape(-1, len(self.col_dims))
        rows = np.arange(self.row_dims[0])[:, None]
        return self.block(rows, cols)


def matricize(t: FuncTensor, mode: int) -> Matricization:
    """Lazy mode-``mode`` matricization; see :class:`Matricization`."""
    return Matricization(t, mode)


class CachedFunction:
    """Point-level memo and counter around a batch function ``f(points)``.

    Evaluation tensors rebuilt on refined grids share this layer, so a point
    that reappears on a new grid is not paid for twice and ``count`` is the
    number of genuine calls of ``f`` per point.
    """

    def __init__(self, f: Callable[[np.ndarray], np.ndarray]):
        self.f = f
        self.count = 0
        self._memo: dict[bytes, float] = {}

    def __call__(self, pts: np.ndarray) -> np.ndarray:
        pts = np.ascontiguousarray(pts, dtype=float)
        keys = [p.tobytes() for p in pts]
        out = np.empty(len(keys))
        miss: dict[bytes, list[int]] = {}
        for q, key in enumerate(keys):
            v = self._memo.get(key)
            if v is None:
                miss.setdefault(key, []).append(q)
            else:
                out[q] = v
        if miss:
            first = [pos[0] for pos in miss.values()]
            vals = np.asarray(self.f(pts[first]), dtype=float).reshape(len(first))
            self.count += len(first)
            for (key, pos), v in zip(miss.items(), vals.tolist()):
                self._memo[key] = v
                out[pos] = v
        return out
