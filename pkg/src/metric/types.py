"""
metric 패키지 공통 데이터 타입

EmbeddingBatch 는 모든 거리 계산의 입력 단위이고,
DcaDistances 는 forward 중간값을 backward 에서 재사용하기 위해 묶어 둔 번들입니다.
"""

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from exceptions import create_validation_error


def integer_labels(labels, field_name: str = "labels") -> np.ndarray:
    """identity 라벨을 int64 로 변환 (정수가 아닌 값이면 검증 오류)"""
    array = np.asarray(labels)
    if array.size == 0 or array.dtype.kind in "iu":
        return array.astype(np.int64)
    if array.dtype.kind == "f" and np.isfinite(array).all() and (array == np.round(array)).all():
        return array.astype(np.int64)
    raise create_validation_error(
        f"identity labels must be integers, got dtype {array.dtype}",
        field_name=field_name,
        expected="integer identity labels",
    )


@dataclass(frozen=True)
class EmbeddingBatch:
    """N×D 임베딩 행렬과 행별 identity 라벨"""

    features: np.ndarray
    labels: np.ndarray

    def __post_init__(self):
        features = np.asarray(self.features, dtype=np.float64)
        if features.ndim != 2:
            raise create_validation_error(
                f"features must be a 2-D matrix, got shape {features.shape}",
                field_name="features",
            )
        n, d = features.shape
        if n < 2 or d < 1:
            raise create_validation_error(
                f"batch needs N >= 2 and D >= 1, got N={n}, D={d}",
                field_name="features",
                field_value=features.shape,
            )
        finite_rows = np.isfinite(features).all(axis=1)
        if not finite_rows.all():
            row = int(np.flatnonzero(~finite_rows)[0])
            raise create_validation_error(
                f"non-finite feature entry in row {row}",
                field_name="features",
                field_value=row,
                expected="finite reals",
            )

        labels = integer_labels(self.labels)
        if labels.ndim != 1 or labels.shape[0] != n:
            raise create_validation_error(
                f"labels length {labels.size} does not match N={n}",
                field_name="labels",
            )
        if labels.size and (labels < 0).any():
            raise create_validation_error(
                "identity labels must be non-negative integers", field_name="labels"
            )

        object.__setattr__(self, "features", features)
        object.__setattr__(self, "labels", labels)

    @property
    def size(self) -> int:
        return self.features.shape[0]

    @property
    def dim(self) -> int:
        return self.features.shape[1]

    @classmethod
    def from_arrays(
        cls, features: Sequence[Sequence[float]], labels: Optional[Sequence[int]] = None
    ) -> "EmbeddingBatch":
        """라벨이 없으면 0..N-1 로 채워서 생성"""
        features = np.asarray(features, dtype=np.float64)
        if labels is None:
            labels = np.arange(features.shape[0])
        return cls(features=features, labels=np.asarray(labels))


@dataclass(frozen=True)
class DcaDistances:
    """
    forward 계산 결과 번들

    dist: Euclidean 거리 d
    sim: Gaussian kernel V = exp(-d)
    jaccard: soft Jaccard 거리
    weighted: jaccard ⊙ dist
    dca: (1-λ)·dist + λ·jaccard + weighted
    """

    dist: np.ndarray
    sim: np.ndarray
    jaccard: np.ndarray
    weighted: np.ndarray
    dca: np.ndarray
    lam: float
    # backward 에서 재사용하는 Jaccard 분자/분모 (행별 min 합, max 합)
    min_sums: np.ndarray = field(repr=False, default=None)
    max_sums: np.ndarray = field(repr=False, default=None)

    @property
    def size(self) -> int:
        return self.dist.shape[0]
