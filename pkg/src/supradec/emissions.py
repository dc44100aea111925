"""Per-frame log-probability matrices and their file formats.

Values are natural-log scores stored as float32 (the binary format's
precision); numeric consumers upcast to float64. A row may contain -inf
for hard masking, never NaN or +inf.

Formats:

* SCE binary: magic ``SCE1`` | u8 flags (bit0 = normalized) |
  u32-LE frame count T | u32-LE vocab size V | T*V little-endian
  IEEE-754 float32, row-major.
* TSV text: one frame per line, V tab-separated decimals, the literal
  ``-inf`` allowed.
"""

import struct

import numpy as np

from dataclasses import dataclass

from .errors import (
    EmptyMatrix,
    FormatError,
    InvalidValue,
    TruncatedPayload,
)

_MAGIC = b"SCE1"
_HEADER = struct.Struct("<4sBII")

#: |logsumexp(row)| at or below this counts as a normalized row
NORMALIZED_TOL = 1e-6


def logsumexp_rows(values: np.ndarray) -> np.ndarray:
    """Row-wise logsumexp in float64; all -inf rows give -inf, no warnings."""
    v = np.asarray(values, dtype=np.float64)
    m = np.max(v, axis=1)
    out = np.full(v.shape[0], -np.inf)
    ok = np.isfinite(m)
    if np.any(ok):
        shifted = v[ok] - m[ok, None]
        with np.errstate(invalid="ignore"):
            out[ok] = m[ok] + np.log(np.sum(np.exp(shifted), axis=1))
    return out


@dataclass(frozen=True)
class EmissionMatrix:
    values: np.ndarray  # float32, shape (T, V), C-contiguous
    normalized: bool

    @classmethod
    def from_array(cls, values) -> "EmissionMatrix":
        arr = np.ascontiguousarray(values, dtype=np.float32)
        if arr.ndim != 2:
            raise InvalidValue("emission values must be a 2-d array")
        if arr.shape[0] == 0 or arr.shape[1] == 0:
            raise EmptyMatrix(f"degenerate emission shape {arr.shape}")
        if np.isnan(arr).any():
            raise InvalidValue("emission values contain NaN")
        if np.isposinf(arr).any():
            raise InvalidValue("emission values contain +inf")
        lse = logsumexp_rows(arr)
        normalized = bool(np.all(np.abs(lse) <= NORMALIZED_TOL))
        return cls(values=arr, normalized=normalized)

    @property
    def frames(self) -> int:
        return self.values.shape[0]

    @property
    def vocab_size(self) -> int:
        return self.values.shape[1]

    def log_probs(self) -> np.ndarray:
        """Float64 view of the scores for numeric work."""
        return self.values.astype(np.float64)

    def __eq__(self, other):
        if not isinstance(other, EmissionMatrix):
            return NotImplemented
        return (
            self.values.shape == other.values.shape
            and np.array_equal(
                self.values.view(np.uint32), other.values.view(np.uint32)
            )
            and self.normalized == other.normalized
        )


def read_emissions(data: bytes, source: str = "<emissions>") -> EmissionMatrix:
    """Parse SCE binary (sniffed by magic) or TSV text bytes."""
    if isinstance(data, str):
        data = data.encode("utf-8")
    if data[:4] == _MAGIC:
        return _read_binary(data, source)
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise FormatError(f"{source}: neither SCE binary nor UTF-8 TSV") from exc
    return _read_tsv(text, source)


def _read_binary(data: bytes, source: str) -> EmissionMatrix:
    if len(data) < _HEADER.size:
        raise TruncatedPayload(f"{source}: header truncated")
    magic, _flags, frames, vocab = _HEADER.unpack_from(data)
    if magic != _MAGIC:
        raise FormatError(f"{source}: bad magic {magic!r}")
    want = frames * vocab * 4
    got = len(data) - _HEADER.size
    if got < want:
        raise TruncatedPayload(f"{source}: payload has {got} bytes, header needs {want}")
    if got > want:
        raise FormatError(f"{source}: {got - want} trailing bytes after payload")
    if frames == 0 or vocab == 0:
        raise EmptyMatrix(f"{source}: header declares empty {frames}x{vocab} matrix")
    arr = np.frombuffer(data, dtype="<f4", offset=_HEADER.size).reshape(frames, vocab)
    # the stored flags bit is informational; normalized is recomputed from data
    return EmissionMatrix.from_array(arr)


def _read_tsv(text: str, source: str) -> EmissionMatrix:
    rows: list[list[float]] = []
    width = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        fields = line.split("\t") if "\t" in line else line.split()
        try:
            row = [float(f) for f in fields]
        except ValueError as exc:
            raise FormatError(f"{source}:{lineno}: non-numeric value") from exc
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise FormatError(
                f"{source}:{lineno}: expected {width} values, got {len(row)}"
            )
        for v in row:
            if v != v:
                raise InvalidValue(f"{source}:{lineno}: NaN value")
            if v == float("inf"):
                raise InvalidValue(f"{source}:{lineno}: +inf value")
        rows.append(row)
    if not rows:
        raise EmptyMatrix(f"{source}: no frames")
    return EmissionMatrix.from_array(np.array(rows, dtype=np.float64))


def write_emissions(matrix: EmissionMatrix, format: str = "binary") -> bytes:
    """Serialize a matrix; binary round-trips bit-exactly."""
    if matrix.frames == 0 or matrix.vocab_size == 0:
        raise EmptyMatrix("cannot serialize an empty matrix")
    if format == "binary":
        header = _HEADER.pack(
            _MAGIC, 1 if matrix.normalized else 0, matrix.frames, matrix.vocab_size
        )
        payload = np.ascontiguousarray(matrix.values, dtype="<f4").tobytes()
        return header + payload
    if format == "tsv":
        lines = []
        for row in matrix.values:
            # str() of a float32 is the shortest digits that round-trip
            lines.append("\t".join(str(v) for v in row))
        return ("\n".join(lines) + "\n").encode("utf-8")
    raise ValueError(f"unknown emission format {format!r}")
