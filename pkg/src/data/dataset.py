"""
라벨이 붙은 feature 데이터셋과 분할 유틸리티
"""

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from exceptions import create_validation_error
from src.metric.types import EmbeddingBatch, integer_labels


@dataclass(frozen=True)
class LabeledDataset:
    """N×D feature 와 identity 라벨 (합성 데이터면 centroid 포함)"""

    features: np.ndarray
    labels: np.ndarray
    centroids: Optional[np.ndarray] = None

    def __post_init__(self):
        features = np.asarray(self.features, dtype=np.float64)
        labels = integer_labels(self.labels)
        if features.ndim != 2 or labels.shape != (features.shape[0],):
            raise create_validation_error(
                f"features {features.shape} and labels {labels.shape} do not line up",
                field_name="dataset",
            )
        object.__setattr__(self, "features", features)
        object.__setattr__(self, "labels", labels)

    @property
    def size(self) -> int:
        return self.features.shape[0]

    @property
    def dim(self) -> int:
        return self.features.shape[1]

    @property
    def identities(self) -> np.ndarray:
        return np.unique(self.labels)

    def subset(self, indices: Sequence[int]) -> "LabeledDataset":
        indices = np.asarray(indices, dtype=np.int64)
        return LabeledDataset(
            features=self.features[indices],
            labels=self.labels[indices],
            centroids=self.centroids,
        )

    def to_batch(self) -> EmbeddingBatch:
        return EmbeddingBatch(features=self.features, labels=self.labels)


def _per_identity_positions(labels: np.ndarray) -> np.ndarray:
    """각 샘플이 자기 identity 안에서 몇 번째인지 (등장 순서 기준)"""
    positions = np.empty(labels.shape[0], dtype=np.int64)
    for identity in np.unique(labels):
        members = np.flatnonzero(labels == identity)
        positions[members] = np.arange(members.size)
    return positions


def split_by_identity(
    dataset: LabeledDataset, holdout_per_identity: int
) -> Tuple[LabeledDataset, LabeledDataset]:
    """
    identity 마다 마지막 holdout_per_identity 개 샘플을 평가용으로 분리

    Returns:
        (학습용, 평가용)
    """
    labels = dataset.labels
    counts = np.bincount(np.searchsorted(dataset.identities, labels))
    if holdout_per_identity < 1 or (counts <= holdout_per_identity).any():
        raise create_validation_error(
            f"cannot hold out {holdout_per_identity} samples per identity "
            f"(smallest identity has {int(counts.min())})",
            field_name="holdout_per_identity",
            field_value=holdout_per_identity,
        )
    positions = _per_identity_positions(labels)
    sizes = counts[np.searchsorted(dataset.identities, labels)]
    held = positions >= sizes - holdout_per_identity
    return dataset.subset(np.flatnonzero(~held)), dataset.subset(np.flatnonzero(held))


def split_query_gallery(
    dataset: LabeledDataset, queries_per_identity: int = 1
) -> Tuple[LabeledDataset, LabeledDataset]:
    """
    identity 마다 앞쪽 queries_per_identity 개는 query, 나머지는 gallery

    Returns:
        (query, gallery)
    """
    positions = _per_identity_positions(dataset.labels)
    is_query = positions < queries_per_identity
    if queries_per_identity < 1 or not (~is_query).any():
        raise create_validation_error(
            "query/gallery split leaves an empty side",
            field_name="queries_per_identity",
            field_value=queries_per_identity,
        )
    return dataset.subset(np.flatnonzero(is_query)), dataset.subset(
        np.flatnonzero(~is_query)
    )
