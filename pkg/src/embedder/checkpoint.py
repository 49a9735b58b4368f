"""
MLP 체크포인트 바이너리 포맷 (little-endian)

    magic "DCAM" | version u16 | layer count u32
    | layer 마다 (in u32, out u32)
    | layer 마다 weight in·out float64 (row-major), bias out float64
"""

import struct
from pathlib import Path
from typing import Union

import numpy as np

from exceptions import create_truncation_error
from src.data.formats import check_header, read_bytes, write_bytes

from .model import MlpModel

CHECKPOINT_MAGIC = b"DCAM"
CHECKPOINT_VERSION = 1
_HEADER = struct.Struct("<4sHI")


def write_checkpoint(model: MlpModel, path: Union[str, Path]) -> None:
    """모델 파라미터 저장"""
    dims = np.array([w.shape for w in model.weights], dtype="<u4")
    chunks = [
        _HEADER.pack(CHECKPOINT_MAGIC, CHECKPOINT_VERSION, len(model.weights)),
        dims.tobytes(order="C"),
    ]
    for w, b in zip(model.weights, model.biases):
        chunks.append(w.astype("<f8").tobytes(order="C"))
        chunks.append(b.astype("<f8").tobytes())
    write_bytes(path, b"".join(chunks))


def read_checkpoint(
    path: Union[str, Path], normalize_output: bool = False
) -> MlpModel:
    """체크포인트에서 모델 복원"""
    data = read_bytes(path)
    _, _, layers = check_header(
        data, path, "checkpoint", CHECKPOINT_MAGIC, CHECKPOINT_VERSION, _HEADER
    )
    dims_end = _HEADER.size + layers * 8
    if len(data) < dims_end:
        raise create_truncation_error(str(path), "checkpoint", dims_end, len(data))
    dims = np.frombuffer(data, dtype="<u4", count=layers * 2, offset=_HEADER.size)
    dims = dims.astype(np.int64).reshape(layers, 2)

    expected = dims_end + int(sum(i * o + o for i, o in dims)) * 8
    if len(data) != expected:
        raise create_truncation_error(str(path), "checkpoint", expected, len(data))

    weights, biases = [], []
    offset = dims_end
    for fan_in, fan_out in dims:
        w = np.frombuffer(data, dtype="<f8", count=fan_in * fan_out, offset=offset)
        offset += fan_in * fan_out * 8
        b = np.frombuffer(data, dtype="<f8", count=fan_out, offset=offset)
        offset += fan_out * 8
        weights.append(w.astype(np.float64).reshape(fan_in, fan_out))
        biases.append(b.astype(np.float64))
    return MlpModel(weights=weights, biases=biases, normalize_output=normalize_output)
