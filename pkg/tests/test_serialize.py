import json
import struct
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from eftt.eftt import direct_tt_approximate, eftt_approximate
from eftt.serialize import MAGIC, FormatError, deserialize, from_json, load, save, serialize, to_json

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="module")
def model():
    f = lambda X: np.sin(X[:, 0] + 2 * X[:, 1]) * (1 + X[:, 2] ** 2)  # noqa: E731
    return eftt_approximate(f, 3, 1e-10, rng=0)


def assert_same(a, b):
    assert a.basis == b.basis and a.degrees == b.degrees and a.n_evals == b.n_evals
    assert a.warnings == b.warnings
    for x, y in zip(a.coeff_factors + a.tt.cores, b.coeff_factors + b.tt.cores):
        assert x.shape == y.shape and x.tobytes() == y.tobytes()


def test_round_trip_bitwise(model):
    back = deserialize(serialize(model))
    assert_same(model, back)
    assert back.meta == json.loads(json.dumps(model.meta))


def test_round_trip_legendre_and_ftt():
    f = lambda X: np.exp(X.sum(axis=1))  # noqa: E731
    leg = eftt_approximate(f, 2, 1e-10, rng=0, basis="legendre")
    assert_same(leg, deserialize(serialize(leg)))
    ftt = direct_tt_approximate(f, 2, 1e-10, 0, degree=12)
    X = np.random.default_rng(0).uniform(-1, 1, (20, 2))
    np.testing.assert_allclose(deserialize(serialize(ftt))(X), ftt(X), atol=1e-14)


def test_header_is_little_endian(model):
    raw = serialize(model)
    assert raw[:4] == MAGIC
    version, tag, d = struct.unpack("<HBI", raw[4:11])
    assert (version, tag, d) == (1, 0, 3)


@given(st.integers(0, 10**6))
def test_truncation_is_a_format_error(cut):
    f = lambda X: X[:, 0] * X[:, 1]  # noqa: E731
    raw = serialize(eftt_approximate(f, 2, 1e-10, rng=0, fixed_degree=4))
    with pytest.raises(FormatError):
        deserialize(raw[: cut % len(raw)])


def test_bad_inputs(model):
    raw = bytearray(serialize(model))
    with pytest.raises(FormatError, match="magic"):
        deserialize(b"NOPE" + bytes(raw[4:]))
    bad = bytearray(raw)
    bad[4:6] = struct.pack("<H", 99)
    with pytest.raises(FormatError, match="version"):
        deserialize(bytes(bad))
    bad = bytearray(raw)
    bad[6] = 7
    with pytest.raises(FormatError, match="basis"):
        deserialize(bytes(bad))
    with pytest.raises(FormatError, match="trailing"):
        deserialize(bytes(raw) + b"\0")


def test_file_round_trip(tmp_path, model):
    path = tmp_path / "m.eftt"
    save(model, path)
    assert_same(model, load(path))


def test_json_export(model):
    text = to_json(model)
    doc = json.loads(text)
    assert doc["tucker_ranks"] == model.tucker_ranks and doc["dofs"] == model.dofs()[0]
    assert_same(model, from_json(text))
    with pytest.raises(FormatError):
        from_json(json.dumps({"format": "other"}))


def test_committed_fixture_loads():
    m = load(FIXTURES / "model_v1.eftt")
    ref = json.loads((FIXTURES / "model_v1_values.json").read_text())
    X = np.array(ref["points"])
    assert X.shape == (10, 3)
    # bitwise on the generating platform; other BLAS builds may round differently
    np.testing.assert_allclose(m(X), ref["values"], rtol=1e-15, atol=1e-15)
    assert m.integrate() == pytest.approx(ref["integral"], rel=1e-15, abs=1e-15)
