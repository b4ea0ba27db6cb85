import threading

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from eftt.tensor import (
    CachedFunction,
    CacheFullError,
    FuncTensor,
    decode,
    encode,
    matricize,
    mode_mult,
    subtensor_oracle,
    unfold,
)


def sum_oracle(idx):
    return idx.sum(axis=1).astype(float)


def linear_oracle(dims):
    def f(idx):
        # lowest mode fastest
        return np.array([encode(row, dims) for row in idx], dtype=float)
    return f


def test_entry_counts_cache_hits_once():
    t = FuncTensor((3, 3), lambda idx: np.full(idx.shape[0], 3.0))
    assert t.entry((1, 2)) == 3.0 and t.eval_count == 1
    assert t.entry((1, 2)) == 3.0 and t.eval_count == 1


def test_entry_value_and_distinct_counting():
    t = FuncTensor((4, 4, 4), sum_oracle)
    assert t.entry((1, 2, 3)) == 6.0
    t2 = FuncTensor((10, 10), sum_oracle)
    idx = np.column_stack([np.arange(10), np.arange(10)[::-1]])
    t2.entries(idx)
    t2.entries(idx)
    assert t2.eval_count == 10


def test_duplicates_within_one_batch_count_once():
    t = FuncTensor((5,), sum_oracle)
    t.entries(np.array([[1], [1], [2], [1]]))
    assert t.eval_count == 2


def test_no_cache_counts_every_call():
    t = FuncTensor((4,), sum_oracle, cache=False)
    for _ in range(3):
        t.entry((2,))
    assert t.eval_count == 3


def test_out_of_range_rejected():
    t = FuncTensor((2, 2), sum_oracle)
    with pytest.raises(IndexError):
        t.entry((2, 0))
    with pytest.raises(IndexError):
        t.entry((0, -1))


def test_cache_cap_fails_fast():
    t = FuncTensor((10,), sum_oracle, max_cache_entries=3)
    t.entries(np.arange(3)[:, None])
    with pytest.raises(CacheFullError):
        t.entry((5,))


def test_concurrent_counting_is_consistent():
    t = FuncTensor((200,), sum_oracle)
    def work():
        for i in range(200):
            t.entry((i,))
    threads = [threading.Thread(target=work) for _ in range(4)]
    for th in threads:
        th.start()
    for th in threads:
        th.join()
    assert t.eval_count == 200


def test_mode_mult_examples(rng):
    T = rng.standard_normal((3, 4, 2))
    assert np.array_equal(mode_mult(T, np.eye(4), 1), T)
    ones = mode_mult(np.ones((2, 2, 2)), np.array([[1.0, 1.0]]), 1)
    assert ones.shape == (2, 1, 2) and np.all(ones == 2.0)
    M = rng.standard_normal((5, 4))
    ref = np.zeros((3, 5, 2))
    for a in range(3):
        for i in range(5):
            for c in range(2):
                ref[a, i, c] = sum(T[a, j, c] * M[i, j] for j in range(4))
    assert np.max(np.abs(mode_mult(T, M, 1) - ref)) <= 1e-14


def test_mode_mult_dimension_mismatch():
    with pytest.raises(ValueError):
        mode_mult(np.ones((2, 3)), np.ones((2, 2)), 1)


@given(st.integers(0, 2**31))
def test_mode_mult_commutes_across_modes(seed):
    rng = np.random.default_rng(seed)
    T = rng.standard_normal((3, 4, 2))
    A, B = rng.standard_normal((2, 3)), rng.standard_normal((5, 4))
    lhs = mode_mult(mode_mult(T, A, 0), B, 1)
    rhs = mode_mult(mode_mult(T, B, 1), A, 0)
    assert np.max(np.abs(lhs - rhs)) <= 1e-14 * max(1.0, np.abs(lhs).max())


def test_matricize_one_mode():
    t = FuncTensor((5,), sum_oracle)
    M = matricize(t, 0)
    assert M.shape == (5, 1)
    assert M.entry(3, 0) == 3.0


def test_matricize_two_by_three_is_transpose():
    A = np.arange(6.0).reshape(2, 3)
    t = FuncTensor((2, 3), lambda idx: A[idx[:, 0], idx[:, 1]])
    M = matricize(t, 1)
    got = np.array([[M.entry(i, j) for j in range(2)] for i in range(3)])
    assert np.array_equal(got, A.T)


def test_matricize_documented_order():
    dims = (2, 3, 4)
    t = FuncTensor(dims, linear_oracle(dims))
    M = matricize(t, 1)
    assert M.entry(1, 0) == t.entry((0, 1, 0))
    # column 1 -> first remaining mode (mode 0) advances first
    assert M.entry(0, 1) == t.entry((1, 0, 0))
    assert M.entry(0, 2) == t.entry((0, 0, 1))


@given(st.integers(0, 2**31), st.integers(0, 2))
def test_matricize_column_is_fiber(seed, mode):
    rng = np.random.default_rng(seed)
    T = rng.standard_normal((3, 4, 5))
    t = FuncTensor(T.shape, lambda idx: T[tuple(idx.T)])
    M = matricize(t, mode)
    j = int(rng.integers(M.shape[1]))
    col = M.fibers(np.array([decode(j, M.col_dims)]))[:, 0]
    np.testing.assert_array_equal(col, unfold(T, mode)[:, j])


def test_subtensor_views(rng):
    T = rng.standard_normal((4, 3))
    t = FuncTensor(T.shape, lambda idx: T[tuple(idx.T)])
    full = subtensor_oracle(t, [range(4), range(3)])
    assert np.array_equal(full.full(), T)
    single = subtensor_oracle(t, [[2], [1]])
    assert single.dims == (1, 1) and single.entry((0, 0)) == T[2, 1]
    view = subtensor_oracle(t, [[0, 2], [0, 1, 2]])
    assert view.entry((1, 0)) == T[2, 0]


def test_subtensor_bills_parent():
    t = FuncTensor((4, 4), sum_oracle)
    view = subtensor_oracle(t, [[0, 2], [1]])
    view.full()
    assert t.eval_count == 2 and view.parent is t


def test_subtensor_rejects_empty():
    t = FuncTensor((4, 4), sum_oracle)
    with pytest.raises(ValueError):
        subtensor_oracle(t, [[], [0]])


def test_encode_decode_round_trip():
    dims = (3, 5, 2)
    for flat in range(30):
        assert encode(decode(flat, dims), dims) == flat
    assert decode(1, dims) == (1, 0, 0)


def test_cached_function_counts_genuine_calls():
    calls = []
    cf = CachedFunction(lambda X: (calls.append(len(X)), X.sum(axis=1))[1])
    X = np.array([[0.1, 0.2], [0.3, 0.4]])
    cf(X)
    cf(X[::-1])
    assert cf.count == 2 and sum(calls) == 2


def test_eval_count_never_decreases(rng):
    t = FuncTensor((6, 6), sum_oracle)
    last = 0
    for _ in range(30):
        t.entries(rng.integers(0, 6, size=(3, 2)))
        assert t.eval_count >= last
        last = t.eval_count
