"""Adaptive cross approximation with randomized pivoting, and DEIM.

Both routines work on matrix oracles (see :mod:`eftt.tensor`); rows and
columns are addressed by coordinate tuples.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla

from .tensor import MatrixOracle

# relative magnitude below which a new pivot is treated as singular
PIVOT_GUARD = 1e-14
# pools of candidate pairs up to this multiple of s are enumerated
_ENUMERATE_FACTOR = 8


class PivotError(RuntimeError):
    """A cross approximation could not find a numerically safe pivot."""


def as_rng(rng) -> np.random.Generator:
    """Coerce a seed (or ``None``) into a ``numpy`` PCG64 generator."""
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


@dataclass
class CrossSkeleton:
    """Cross ``M ~ M(:, J) M(I, J)^{-1} M(I, :)``.

    ``rows`` and ``cols`` are integer coordinate arrays of shapes
    ``(k, len(row_dims))`` and ``(k, len(col_dims))``; ``block`` is
    ``M(I, J)``.
    """

    rows: np.ndarray
    cols: np.ndarray
    block: np.ndarray
    converged: bool = True
    residual: float = 0.0
    rounds: int = 0
    lu: tuple | None = field(default=None, repr=False)

    @property
    def rank(self) -> int:
        return self.rows.shape[0]

    def solve(self, rhs: np.ndarray) -> np.ndarray:
        """``M(I, J)^{-1} rhs``."""
        if self.rank == 0:
            return np.zeros((0,) + rhs.shape[1:])
        if self.lu is None:
            self.lu = sla.lu_factor(self.block)
        return sla.lu_solve(self.lu, rhs)

    @classmethod
    def empty(cls, row_ndim: int, col_ndim: int) -> CrossSkeleton:
        return cls(
            np.zeros((0, row_ndim), dtype=np.int64),
            np.zeros((0, col_ndim), dtype=np.int64),
            np.zeros((0, 0)),
        )


def skeleton_entries(M: MatrixOracle, sk: CrossSkeleton, rows, cols) -> np.ndarray:
    """Values of the cross approximation at paired coordinates."""
    rows = np.asarray(rows, dtype=np.int64).reshape(-1, len(M.row_dims))
    cols = np.asarray(cols, dtype=np.int64).reshape(-1, len(M.col_dims))
    if sk.rank == 0:
        return np.zeros(rows.shape[0])
    left = M.block(rows, sk.cols)  # M(i, J)
    right = M.block(sk.rows, cols)  # M(I, j)
    return np.einsum("pk,kp->p", left, sk.solve(right))


def skeleton_entry(M: MatrixOracle, sk: CrossSkeleton, i, j) -> float:
    """``M(i, J) M(I, J)^{-1} M(I, j)`` for one row and one column coordinate."""
    return float(skeleton_entries(M, sk, np.atleast_1d(i), np.atleast_1d(j))[0])


def _flat(coords: np.ndarray, dims) -> list[int]:
    # Python ints: flat sizes may exceed int64
    out = [0] * coords.shape[0]
    stride = 1
    for k, n in enumerate(dims):
        col = coords[:, k].tolist()
        out = [o + c * stride for o, c in zip(out, col)]
        stride *= int(n)
    return out


def _decode_many(flat: np.ndarray, dims) -> np.ndarray:
    out = np.empty((flat.size, len(dims)), dtype=np.int64)
    rest = flat.astype(np.int64)
    for k, n in enumerate(dims):
        rest, out[:, k] = np.divmod(rest, n)
    return out


def _available(dims, taken: set[tuple]) -> int:
    total = 1
    for n in dims:
        total *= int(n)
    return total - len(taken)


def _enumerate_free(dims, taken: set[tuple]) -> np.ndarray:
    total = int(np.prod(dims))
    coords = _decode_many(np.arange(total), dims)
    keep = [tuple(c) not in taken for c in coords.tolist()]
    return coords[np.asarray(keep, dtype=bool)]


def _random_free(rng, dims, taken: set[tuple], count: int) -> np.ndarray:
    """``count`` uniform coordinates (with repeats) avoiding ``taken``."""
    out: list[np.ndarray] = []
    need = count
    while need > 0:
        batch = np.column_stack([rng.integers(0, n, size=2 * need + 4) for n in dims])
        if taken:
            keep = [tuple(c) not in taken for c in batch.tolist()]
            batch = batch[np.asarray(keep, dtype=bool)]
        out.append(batch[:need])
        need -= out[-1].shape[0]
    return np.concatenate(out, axis=0)


def sample_pairs(
    rng: np.random.Generator,
    row_dims,
    col_dims,
    taken_rows: set[tuple],
    taken_cols: set[tuple],
    s: int,
) -> tuple[np.ndarray, np.ndarray]:
    """Up to ``s`` distinct uniform (row, column) pairs off the pivot cross.

    Pairs on a pivot row or column are excluded since their residual is
    zero.  When at most ``8 s`` pairs remain they are enumerated and drawn
    without replacement; otherwise rows and columns are drawn independently
    and duplicate pairs are redrawn.
    """
    n_rows = _available(row_dims, taken_rows)
    n_cols = _available(col_dims, taken_cols)
    pool = n_rows * n_cols
    if pool == 0:
        return (
            np.zeros((0, len(row_dims)), dtype=np.int64),
            np.zeros((0, len(col_dims)), dtype=np.int64),
        )
    if pool <= _ENUMERATE_FACTOR * s:
        free_r = _enumerate_free(row_dims, taken_rows)
        free_c = _enumerate_free(col_dims, taken_cols)
        pick = np.arange(pool) if pool <= s else np.sort(rng.choice(pool, size=s, replace=False))
        ri, ci = np.divmod(pick, free_c.shape[0])
        return free_r[ri], free_c[ci]

    rows_out: list[np.ndarray] = []
    cols_out: list[np.ndarray] = []
    seen: set[tuple] = set()
    while len(seen) < s:
        need = s - len(seen)
        r = _random_free(rng, row_dims, taken_rows, need)
        c = _random_free(rng, col_dims, taken_cols, need)
        for a, b in zip(r.tolist(), c.tolist()):
            key = (tuple(a), tuple(b))
            if key not in seen:
                seen.add(key)
                rows_out.append(a)
                cols_out.append(b)
    return np.asarray(rows_out, dtype=np.int64), np.asarray(cols_out, dtype=np.int64)


def aca_random(
    M: MatrixOracle,
    tol: float,
    s: int,
    rng=None,
    init: CrossSkeleton | None = None,
    max_new: int | None = None,
    max_rank: int | None = None,
    scale: float = 0.0,
    max_retries: int = 10,
) -> CrossSkeleton:
    """Adaptive cross approximation with randomized pivoting.

    Each round draws ``s`` index pairs, evaluates the residual
    ``M - M(:, J) M(I, J)^{-1} M(I, :)`` at those pairs only, stops if the
    largest sampled magnitude is at most ``tol * scale``, and otherwise
    adds the maximising pair to the cross.

    Parameters
    ----------
    M : MatrixOracle
    tol : float
        Relative tolerance.  The reference magnitude is the larger of
        ``scale`` and the largest ``|M|`` entry seen during the run, so a
        zero matrix gives an empty cross.
    s : int
        Pairs sampled per round.
    rng : seed or numpy Generator
    init : CrossSkeleton, optional
        Starting cross; its pivots are kept as a prefix of the result.
    max_new : int, optional
        Stop after adding this many pivots.
    max_rank : int, optional
        Never exceed this many pivots (``converged`` is then ``False``).
    max_retries : int
        Rejected near-singular pivots tolerated before :class:`PivotError`.
    """
    if not tol > 0:
        raise ValueError(f"tol must be positive, got {tol}")
    if s < 1:
        raise ValueError(f"s must be >= 1, got {s}")
    rng = as_rng(rng)
    nrd, ncd = len(M.row_dims), len(M.col_dims)
    if init is None:
        sk = CrossSkeleton.empty(nrd, ncd)
    else:
        sk = CrossSkeleton(init.rows.copy(), init.cols.copy(), init.block.copy())
    n_rows, n_cols = M.shape
    cap = min(n_rows, n_cols)
    if max_rank is not None:
        cap = min(cap, max_rank)

    taken_r = {tuple(r) for r in sk.rows.tolist()}
    taken_c = {tuple(c) for c in sk.cols.tolist()}
    seen_max = float(np.max(np.abs(sk.block))) if sk.rank else 0.0
    max_pivot = seen_max
    added = retries = rounds = 0
    banned: set[tuple] = set()

    while True:
        rows, cols = sample_pairs(rng, M.row_dims, M.col_dims, taken_r, taken_c, s)
        rounds += 1
        if rows.shape[0] == 0:
            sk.residual, sk.converged = 0.0, True
            break
        vals = M.entries(rows, cols)
        seen_max = max(seen_max, float(np.max(np.abs(vals))))
        if sk.rank:
            left = M.block(rows, sk.cols)
            right = M.block(sk.rows, cols)
            seen_max = max(seen_max, float(np.max(np.abs(left))), float(np.max(np.abs(right))))
            resid = vals - np.einsum("pk,kp->p", left, sk.solve(right))
        else:
            resid = vals
        mag = np.abs(resid)
        if banned:
            for p, key in enumerate(zip(map(tuple, rows.tolist()), map(tuple, cols.tolist()))):
                if key in banned:
                    mag[p] = 0.0
        top = float(mag.max())
        sk.residual = top
        if top <= tol * max(scale, seen_max):
            sk.converged = True
            break
        if sk.rank >= cap:
            sk.converged = False
            break

        p = _argmax_lowest(mag, rows, cols, M.row_dims, M.col_dims)
        if top < PIVOT_GUARD * max_pivot:
            banned.add((tuple(rows[p]), tuple(cols[p])))
            retries += 1
            if retries > max_retries:
                raise PivotError(
                    f"no safe pivot after {max_retries} retries (rank {sk.rank}, residual {top:.3e})"
                )
            continue
        new_row = M.block(rows[p : p + 1], sk.cols)  # M(i*, J)
        new_col = M.block(sk.rows, cols[p : p + 1])  # M(I, j*)
        k = sk.rank
        block = np.empty((k + 1, k + 1))
        block[:k, :k] = sk.block
        block[k, :k] = new_row[0]
        block[:k, k] = new_col[:, 0]
        block[k, k] = vals[p]
        sk = CrossSkeleton(
            np.vstack([sk.rows, rows[p : p + 1]]),
            np.vstack([sk.cols, cols[p : p + 1]]),
            block,
            residual=top,
        )
        taken_r.add(tuple(rows[p].tolist()))
        taken_c.add(tuple(cols[p].tolist()))
        max_pivot = max(max_pivot, top)
        added += 1
        if max_new is not None and added >= max_new:
            sk.converged = False
            break

    sk.rounds = rounds
    return sk


def _argmax_lowest(mag, rows, cols, row_dims, col_dims) -> int:
    top = mag.max()
    hits = np.flatnonzero(mag == top)
    if hits.size == 1:
        return int(hits[0])
    # tie: smallest flattened position, row number fastest
    n_rows = 1
    for n in row_dims:
        n_rows *= int(n)
    rf = _flat(rows[hits], row_dims)
    cf = _flat(cols[hits], col_dims)
    keys = [r + n_rows * c for r, c in zip(rf, cf)]
    return int(hits[int(np.argmin(np.array(keys, dtype=object)))])


def deim(Q: np.ndarray, rank_tol: float = 1e-13) -> np.ndarray:
    """Discrete empirical interpolation indices for the columns of ``Q``.

    The first index maximises ``|Q[:, 0]|``; index ``k`` maximises the
    residual of column ``k`` after interpolating it at the earlier indices
    with the earlier columns.  Ties go to the lowest row.

    Raises
    ------
    numpy.linalg.LinAlgError
        If the columns are (numerically) linearly dependent.
    """
    Q = np.asarray(Q, dtype=float)
    n, m = Q.shape
    if m > n:
        raise ValueError(f"need at least as many rows as columns, got {Q.shape}")
    idx: list[int] = []
    for k in range(m):
        r = Q[:, k]
        if idx:
            c = np.linalg.solve(Q[idx, :k], Q[idx, k])
            r = r - Q[:, :k] @ c
        a = np.abs(r)
        j = int(np.argmax(a))
        if a[j] <= rank_tol * max(1.0, np.abs(Q[:, k]).max()):
            raise np.linalg.LinAlgError(f"rank-deficient basis: column {k} is dependent")
        idx.append(j)
    return np.asarray(idx, dtype=np.int64)
