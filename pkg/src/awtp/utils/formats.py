"""On-disk formats for parameter sets, codewords, messages and transcripts.

Field elements are written as decimal strings. Binary codewords are row-major
little-endian 8-byte words.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Union

import numpy as np

from ..channel.adversary import ChannelTranscript
from ..codes.codec import AwtpParams
from ..codes.field import FieldArray, as_ints
from ..config import ParamsSpec
from ..errors import ConfigError, LengthMismatch

PathLike = Union[str, Path]
BINARY_DTYPE = np.dtype("<u8")


def _read_json(path: PathLike) -> Any:
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path} is not valid JSON: {exc}") from exc


def _decimal_strings(values) -> list:
    return np.vectorize(str, otypes=[object])(as_ints(values)).tolist()


def _parse_decimals(values: Any, what: str) -> np.ndarray:
    try:
        return np.array([[int(x) for x in row] for row in values], dtype=np.int64)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{what} must contain decimal strings: {exc}") from exc


def dump_params(P: AwtpParams, path: PathLike) -> None:
    Path(path).write_text(ParamsSpec.from_params(P).model_dump_json(indent=2) + "\n")


def load_params(path: PathLike, strict: bool = False) -> AwtpParams:
    data = _read_json(path)
    try:
        spec = ParamsSpec.model_validate(data)
    except ValueError as exc:
        raise ConfigError(f"invalid parameter file {path}: {exc}") from exc
    return spec.resolve(strict=strict)


def codeword_to_json(c: FieldArray) -> list[list[str]]:
    return _decimal_strings(c)


def dump_codeword(c: FieldArray, path: PathLike) -> None:
    path = Path(path)
    if path.suffix == ".bin":
        path.write_bytes(as_ints(c).astype(BINARY_DTYPE).tobytes())
    else:
        path.write_text(json.dumps(codeword_to_json(c)) + "\n")


def load_codeword(path: PathLike, P: AwtpParams) -> FieldArray:
    """Read a codeword or received word in JSON or binary form; shape is (N, u)."""
    path = Path(path)
    if path.suffix == ".bin":
        try:
            raw = np.frombuffer(path.read_bytes(), dtype=BINARY_DTYPE)
        except (OSError, ValueError) as exc:
            raise ConfigError(f"cannot read binary codeword {path}: {exc}") from exc
        if raw.size != P.N * P.u:
            raise LengthMismatch(f"binary codeword has {raw.size} words, expected {P.N * P.u}")
        values = raw.astype(np.int64).reshape(P.N, P.u)
    else:
        values = _parse_decimals(_read_json(path), "codeword")
    if values.shape != (P.N, P.u):
        raise LengthMismatch(f"codeword has shape {values.shape}, expected ({P.N}, {P.u})")
    if np.any(values >= P.q) or np.any(values < 0):
        raise ConfigError(f"codeword entries must lie in [0, {P.q})")
    return P.F.GF(values)


def dump_message(m: FieldArray, path: PathLike) -> None:
    Path(path).write_text(json.dumps(_decimal_strings(m)) + "\n")


def load_message(path: PathLike, P: AwtpParams) -> FieldArray:
    values = _parse_decimals([_read_json(path)], "message").reshape(-1)
    if values.size != P.message_length:
        raise LengthMismatch(f"message has length {values.size}, expected {P.message_length}")
    if np.any(values >= P.q) or np.any(values < 0):
        raise ConfigError(f"message entries must lie in [0, {P.q})")
    return P.F.GF(values)


def dump_transcript(transcript: ChannelTranscript, path: PathLike) -> None:
    Path(path).write_text(transcript.model_dump_json(indent=2) + "\n")


def load_transcript(path: PathLike) -> ChannelTranscript:
    try:
        return ChannelTranscript.model_validate(_read_json(path))
    except ValueError as exc:
        raise ConfigError(f"invalid transcript {path}: {exc}") from exc
