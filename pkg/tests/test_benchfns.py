import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from eftt import benchfns
from eftt.benchfns import (
    NAMES,
    STRUCTURAL_RANKS,
    UnknownFunctionError,
    affine_to_cube,
    genz,
    registry,
    sin_sum,
    sin_sum_integral,
)


def box_point(tf, x_box):
    return 2.0 * (np.asarray(x_box, dtype=float) - tf.lo) / (tf.hi - tf.lo) - 1.0


def test_affine_map():
    g, vol = affine_to_cube(lambda X: X.sum(axis=1), [-1, -1], [1, 1])
    assert g(np.array([[0.3, -0.2]]))[0] == pytest.approx(0.1) and vol == 1.0
    g, _ = affine_to_cube(lambda X: X[:, 0], [0.0], [1.0])
    assert g(np.array([[-1.0]]))[0] == 0.0 and g(np.array([[1.0]]))[0] == 1.0
    _, vol = affine_to_cube(lambda X: X[:, 0], [0, 0], [2, 2])
    assert 4.0 * vol == 4.0  # cube integral of 1 is 4, times factor 1
    _, vol = affine_to_cube(lambda X: X[:, 0], [0, 0], [4, 4])
    assert 4.0 * vol == 16.0


def test_affine_rejects_bad_box():
    with pytest.raises(ValueError):
        affine_to_cube(lambda X: X, [1.0], [0.0])


def test_registry_complete():
    reg = registry()
    assert len(reg) == 20 and tuple(reg) == NAMES
    for name in STRUCTURAL_RANKS:
        assert reg[name].known_ranks == ((1, 1) if name == "exponential" else (2, 2))


def test_unknown_name():
    with pytest.raises(UnknownFunctionError):
        benchfns.get("nope")


def test_known_values():
    reg = registry()
    ack = reg["ackley"]
    assert abs(ack(box_point(ack, np.zeros(7))[None])[0]) <= 1e-12
    ex = reg["exponential"]
    assert ex(np.zeros((1, 7)))[0] == -1.0
    fr = reg["friedman"]
    got = fr(box_point(fr, [0.5, 0.5, 0.5, 1.0, 1.0])[None])[0]
    assert got == pytest.approx(10 / np.sqrt(2) + 15, abs=1e-12)


def test_schwefel_and_rastrigin_constants():
    reg = registry()
    sw = reg["schwefel"]
    # minimum near x_i = 420.9687 is ~0 with the 418.9829 d offset
    assert abs(sw(box_point(sw, np.full(7, 420.968746))[None])[0]) <= 1e-3
    ra = reg["rastrigin"]
    assert abs(ra(box_point(ra, np.zeros(7))[None])[0]) <= 1e-12
    assert ra(box_point(ra, np.full(7, 0.5))[None])[0] == pytest.approx(70 + 7 * (0.25 + 10))


@pytest.mark.parametrize("name", NAMES)
def test_finite_on_cube(name):
    tf = benchfns.get(name)
    X = np.random.default_rng(0).uniform(-1, 1, (10000, tf.d))
    vals = tf(X)
    assert vals.shape == (10000,) and np.all(np.isfinite(vals))


def test_variants_differ():
    base = registry()["alpine"]
    shifted = registry(alpine_shift_first=True)["alpine"]
    X = np.random.default_rng(0).uniform(-1, 1, (5, 7))
    assert not np.allclose(base(X), shifted(X))
    a = registry()["robot-arm"]
    b = registry(robot_arm_cumulative=True)["robot-arm"]
    X = np.random.default_rng(1).uniform(-1, 1, (5, 8))
    assert not np.allclose(a(X), b(X))


@pytest.mark.parametrize("family", ["oscillatory", "corner-peak", "continuous"])
@pytest.mark.parametrize("d", [20, 50, 100])
def test_genz_normalization(family, d):
    g = genz(family, d, np.random.default_rng(d))
    b, h = benchfns.GENZ_CONSTANTS[family]
    assert abs(np.abs(g.c).sum() - b / d**h) <= 1e-12
    assert np.all((g.w >= 0) & (g.w <= 1))


def test_genz_examples():
    g = genz("oscillatory", 4, 0, c=np.zeros(4))
    X = np.random.default_rng(0).uniform(-1, 1, (6, 4))
    np.testing.assert_allclose(g(X), np.cos(2 * np.pi * g.w[0]))
    b = benchfns.GENZ_CONSTANTS["corner-peak"][0]
    cp = genz("corner-peak", 1, 0, c=[1.0])
    assert cp.c[0] == pytest.approx(b)
    assert cp(np.array([[1.0]]))[0] == pytest.approx((1 + b) ** -2.0)


def test_genz_unknown_family():
    with pytest.raises(UnknownFunctionError):
        genz("gaussian", 3)


def test_sin_sum_integrals():
    assert sin_sum_integral(1) == pytest.approx(1 - np.cos(1), abs=1e-15)
    assert sin_sum_integral(2) == pytest.approx(2 * np.sin(1) * (1 - np.cos(1)), abs=1e-15)
    x, w = np.polynomial.legendre.leggauss(20)
    X, Y = np.meshgrid((x + 1) / 2, (x + 1) / 2)
    quad2 = np.sum(np.outer(w, w) / 4 * np.sin(X + Y))
    assert abs(quad2 - sin_sum_integral(2)) <= 1e-12


def test_sin_sum_d10_against_tensor_quadrature():
    # sin(sum) = Im(prod exp(i x_k)); the tensorized rule factorises
    x, w = np.polynomial.legendre.leggauss(21)
    one = np.sum(w / 2 * np.exp(1j * (x + 1) / 2))
    assert abs((one**10).imag - sin_sum_integral(10)) <= 1e-10
    tf = sin_sum(10)
    assert tf.analytic_integral == sin_sum_integral(10)
    assert tf.volume_factor == pytest.approx(2.0**-10)


@given(st.integers(1, 6), st.integers(0, 2**31))
def test_to_box_inverts_map(d, seed):
    tf = sin_sum(d)
    X = np.random.default_rng(seed).uniform(-1, 1, (5, d))
    np.testing.assert_allclose(tf(X), np.sin(tf.to_box(X).sum(axis=1)))
