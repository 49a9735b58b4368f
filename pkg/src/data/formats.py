"""
임베딩/라벨 파일 포맷

바이너리 (little-endian):
    magic "DCAE" | version u16 | N u64 | D u32 | N·D float64 (row-major) | N u32 labels

CSV:
    헤더 `label,f0,f1,...`, 앞쪽 `#` 줄은 주석(설정 기록)으로 무시
"""

import json
import logging
import struct
from pathlib import Path
from typing import Any, Dict, Optional, Tuple, Union

import numpy as np
import pandas as pd

from exceptions import (
    create_bad_magic_error,
    create_resource_error,
    create_truncation_error,
    create_validation_error,
    create_version_error,
)
from src.metric.types import integer_labels

from .dataset import LabeledDataset

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

EMBEDDING_MAGIC = b"DCAE"
EMBEDDING_VERSION = 1
_EMBEDDING_HEADER = struct.Struct("<4sHQI")
METADATA_SUFFIX = ".meta.json"


def read_bytes(path: PathLike) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as e:
        raise create_resource_error(
            f"cannot read {path}: {e}", resource_type="file", resource_path=str(path), cause=e
        )


def write_bytes(path: PathLike, payload: bytes) -> None:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_bytes(payload)
    except OSError as e:
        raise create_resource_error(
            f"cannot write {path}: {e}", resource_type="file", resource_path=str(path), cause=e
        )


def check_header(
    data: bytes,
    path: PathLike,
    kind: str,
    magic: bytes,
    version: int,
    header: struct.Struct,
) -> Tuple[Any, ...]:
    """매직 → 헤더 길이 → 버전 순서로 검사하고 헤더 필드를 반환"""
    if data[: len(magic)] != magic:
        raise create_bad_magic_error(str(path), kind, magic, data[: len(magic)])
    if len(data) < header.size:
        raise create_truncation_error(str(path), kind, header.size, len(data))
    fields = header.unpack_from(data, 0)
    if fields[1] != version:
        raise create_version_error(str(path), kind, version, fields[1])
    return fields


def write_embeddings(
    features: np.ndarray, labels: np.ndarray, path: PathLike
) -> None:
    """임베딩과 라벨을 바이너리 포맷으로 저장"""
    features = np.asarray(features, dtype=np.float64)
    labels = np.asarray(labels)
    if features.ndim != 2 or labels.shape != (features.shape[0],):
        raise create_validation_error(
            f"features {features.shape} and labels {labels.shape} do not line up",
            field_name="features",
        )
    if not np.isfinite(features).all():
        raise create_validation_error(
            "cannot write non-finite features", field_name="features"
        )
    if labels.size and (labels.min() < 0 or labels.max() > np.iinfo(np.uint32).max):
        raise create_validation_error(
            "labels must fit in an unsigned 32-bit integer", field_name="labels"
        )

    n, d = features.shape
    payload = b"".join(
        [
            _EMBEDDING_HEADER.pack(EMBEDDING_MAGIC, EMBEDDING_VERSION, n, d),
            features.astype("<f8").tobytes(order="C"),
            labels.astype("<u4").tobytes(),
        ]
    )
    write_bytes(path, payload)
    logger.debug(f"wrote {n}×{d} embeddings to {path}")


def read_embeddings(path: PathLike) -> LabeledDataset:
    """바이너리 임베딩 파일 읽기"""
    data = read_bytes(path)
    _, _, n, d = check_header(
        data, path, "embeddings", EMBEDDING_MAGIC, EMBEDDING_VERSION, _EMBEDDING_HEADER
    )
    expected = _EMBEDDING_HEADER.size + n * d * 8 + n * 4
    if len(data) != expected:
        raise create_truncation_error(str(path), "embeddings", expected, len(data))

    offset = _EMBEDDING_HEADER.size
    features = np.frombuffer(data, dtype="<f8", count=n * d, offset=offset)
    labels = np.frombuffer(data, dtype="<u4", count=n, offset=offset + n * d * 8)
    return LabeledDataset(
        features=features.astype(np.float64).reshape(n, d),
        labels=labels.astype(np.int64),
    )


def write_embeddings_csv(
    features: np.ndarray,
    labels: np.ndarray,
    path: PathLike,
    metadata: Optional[Dict[str, Any]] = None,
) -> None:
    """`label,f0,f1,...` CSV 로 저장 (metadata 는 앞쪽 `#` 주석 줄)"""
    features = np.asarray(features, dtype=np.float64)
    frame = pd.DataFrame(features, columns=[f"f{i}" for i in range(features.shape[1])])
    frame.insert(0, "label", np.asarray(labels, dtype=np.int64))
    write_text(path, comment_header(metadata) + frame.to_csv(index=False))


def read_embeddings_csv(path: PathLike) -> LabeledDataset:
    """`label,f0,f1,...` CSV 읽기"""
    try:
        frame = pd.read_csv(path, comment="#", float_precision="round_trip")
    except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise create_resource_error(
            f"cannot parse CSV {path}: {e}", resource_type="csv", resource_path=str(path), cause=e
        )
    feature_columns = [c for c in frame.columns if c != "label"]
    if "label" not in frame.columns or not feature_columns:
        raise create_validation_error(
            f"{path}: CSV header must be label,f0,f1,...", field_name="header"
        )
    try:
        features = frame[feature_columns].to_numpy(dtype=np.float64)
    except (TypeError, ValueError) as e:
        raise create_validation_error(
            f"{path}: feature columns must be numeric ({e})",
            field_name="features",
            expected="real-valued feature columns",
        )
    return LabeledDataset(
        features=features,
        labels=integer_labels(frame["label"].to_numpy(), field_name="label"),
    )


def comment_header(metadata: Optional[Dict[str, Any]]) -> str:
    """설정 기록용 `# key = value` 줄 (키 정렬)"""
    if not metadata:
        return ""
    return "".join(f"# {key} = {metadata[key]}\n" for key in sorted(metadata))


def write_text(path: PathLike, text: str) -> None:
    write_bytes(path, text.encode("utf-8"))


def write_metadata(path: PathLike, metadata: Dict[str, Any]) -> Path:
    """바이너리 아티팩트 옆에 `<path>.meta.json` 사이드카 저장"""
    sidecar = Path(f"{path}{METADATA_SUFFIX}")
    write_text(sidecar, json.dumps(metadata, sort_keys=True, indent=2) + "\n")
    return sidecar


def load_dataset(path: PathLike) -> LabeledDataset:
    """확장자에 따라 CSV 또는 바이너리로 읽기"""
    if str(path).lower().endswith(".csv"):
        return read_embeddings_csv(path)
    return read_embeddings(path)
