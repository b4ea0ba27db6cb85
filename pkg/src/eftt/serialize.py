"""Binary and JSON containers for :class:`~eftt.eftt.EFTTModel`.

Binary layout (all integers unsigned, little-endian)::

    magic     4 bytes  b"EFTT"
    version   u16      currently 1
    basis     u8       0 = Chebyshev, 1 = Legendre
    d         u32
    per mode  u32 n, u32 m, u32 r      grid degree, coefficient degree, Tucker rank
    ranks     u32 x (d - 1)            TT ranks R_0..R_{d-2}
    n_evals   u64
    factors   float64, mode by mode, each (m + 1) x r in row-major order
    cores     float64, core by core, each R_{k-1} x r_k x R_k in row-major order
    extra     u32 length + UTF-8 JSON {"warnings": [...], "meta": {...}}

Doubles are IEEE-754 little-endian regardless of the host.
"""

from __future__ import annotations

import base64
import json
import struct

import numpy as np

from .eftt import EFTTModel, FTTModel
from .ttcross import TTCores

MAGIC = b"EFTT"
VERSION = 1
_BASIS_TAGS = {"cheb": 0, "legendre": 1}
_TAG_BASIS = {v: k for k, v in _BASIS_TAGS.items()}
_F8 = np.dtype("<f8")


class FormatError(ValueError):
    """Malformed, truncated or unsupported model container."""


def serialize(model: EFTTModel | FTTModel) -> bytes:
    """Encode a model; an :class:`FTTModel` is stored with identity factors."""
    if isinstance(model, FTTModel):
        model = model.as_eftt()
    d = model.d
    out = [MAGIC, struct.pack("<HBI", VERSION, _BASIS_TAGS[model.basis], d)]
    for n, c in zip(model.degrees, model.coeff_factors):
        out.append(struct.pack("<III", n, c.shape[0] - 1, c.shape[1]))
    out.append(struct.pack(f"<{d - 1}I", *model.tt.ranks))
    out.append(struct.pack("<Q", int(model.n_evals)))
    for c in model.coeff_factors:
        out.append(np.ascontiguousarray(c, dtype=_F8).tobytes())
    for g in model.tt.cores:
        out.append(np.ascontiguousarray(g, dtype=_F8).tobytes())
    extra = json.dumps({"warnings": list(model.warnings), "meta": model.meta}, default=_plain).encode()
    out.append(struct.pack("<I", len(extra)))
    out.append(extra)
    return b"".join(out)


def _plain(obj):
    # numpy scalars and arrays inside metadata
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, np.generic):
        return obj.item()
    raise TypeError(f"cannot store {type(obj).__name__} in model metadata")


class _Reader:
    def __init__(self, data: bytes):
        self.data = memoryview(data)
        self.pos = 0

    def take(self, n: int) -> memoryview:
        if self.pos + n > len(self.data):
            raise FormatError(f"truncated stream: need {n} bytes at offset {self.pos}, have {len(self.data) - self.pos}")
        out = self.data[self.pos : self.pos + n]
        self.pos += n
        return out

    def unpack(self, fmt: str):
        return struct.unpack(fmt, self.take(struct.calcsize(fmt)))

    def doubles(self, shape) -> np.ndarray:
        count = int(np.prod(shape))
        arr = np.frombuffer(self.take(8 * count), dtype=_F8).reshape(shape)
        return arr.astype(float)


def deserialize(data: bytes) -> EFTTModel:
    """Decode :func:`serialize` output; raises :class:`FormatError` on bad input."""
    rd = _Reader(bytes(data))
    if bytes(rd.take(4)) != MAGIC:
        raise FormatError("bad magic: not an EFTT container")
    version, tag, d = rd.unpack("<HBI")
    if version != VERSION:
        raise FormatError(f"unsupported format version {version}")
    if tag not in _TAG_BASIS:
        raise FormatError(f"unknown basis tag {tag}")
    if d < 1:
        raise FormatError("dimension must be at least 1")
    modes = [rd.unpack("<III") for _ in range(d)]
    ranks = list(rd.unpack(f"<{d - 1}I")) if d > 1 else []
    (n_evals,) = rd.unpack("<Q")
    if any(r < 1 for _, _, r in modes) or any(R < 1 for R in ranks):
        raise FormatError("ranks must be positive")
    factors = [rd.doubles((m + 1, r)) for _, m, r in modes]
    bonds = [1] + ranks + [1]
    cores = [rd.doubles((bonds[k], modes[k][2], bonds[k + 1])) for k in range(d)]
    (n_extra,) = rd.unpack("<I")
    try:
        extra = json.loads(bytes(rd.take(n_extra)).decode())
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise FormatError(f"corrupt metadata block: {exc}") from None
    if rd.pos != len(rd.data):
        raise FormatError(f"{len(rd.data) - rd.pos} trailing bytes after model")
    try:
        return EFTTModel(
            _TAG_BASIS[tag], [n for n, _, _ in modes], factors, TTCores(cores), n_evals,
            list(extra.get("warnings", [])), dict(extra.get("meta", {})),
        )
    except ValueError as exc:
        raise FormatError(f"inconsistent model: {exc}") from None


def save(model, path) -> None:
    with open(path, "wb") as fh:
        fh.write(serialize(model))


def load(path) -> EFTTModel:
    with open(path, "rb") as fh:
        return deserialize(fh.read())


def _b64(a: np.ndarray) -> dict:
    return {"shape": list(a.shape), "data": base64.b64encode(np.ascontiguousarray(a, dtype=_F8).tobytes()).decode()}


def _unb64(obj: dict) -> np.ndarray:
    return np.frombuffer(base64.b64decode(obj["data"]), dtype=_F8).reshape(obj["shape"]).astype(float)


def to_json(model: EFTTModel | FTTModel) -> str:
    """Readable export: shapes and ranks in clear, arrays as base64 doubles."""
    if isinstance(model, FTTModel):
        model = model.as_eftt()
    doc = {
        "format": "eftt-json",
        "version": VERSION,
        "basis": model.basis,
        "degrees": model.degrees,
        "coeff_degrees": model.coeff_degrees,
        "tucker_ranks": model.tucker_ranks,
        "tt_ranks": model.tt_ranks,
        "n_evals": model.n_evals,
        "dofs": model.dofs()[0],
        "warnings": model.warnings,
        "factors": [_b64(c) for c in model.coeff_factors],
        "cores": [_b64(g) for g in model.tt.cores],
    }
    return json.dumps(doc, indent=1)


def from_json(text: str) -> EFTTModel:
    doc = json.loads(text)
    if doc.get("format") != "eftt-json":
        raise FormatError("not an eftt-json document")
    return EFTTModel(
        doc["basis"], doc["degrees"], [_unb64(c) for c in doc["factors"]],
        TTCores([_unb64(g) for g in doc["cores"]]), doc.get("n_evals", 0), list(doc.get("warnings", [])),
    )
