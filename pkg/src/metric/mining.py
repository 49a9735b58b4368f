"""
PK 배치 구성과 triplet 선택

- pk_sample: P 개 identity × K 개 샘플로 배치 인덱스 생성
- mine_batch_hard: anchor 마다 가장 먼 positive / 가장 가까운 negative
- enumerate_batch_all: 배치 안의 모든 유효 triplet
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, Field

from exceptions import create_validation_error

logger = logging.getLogger(__name__)


class MiningVariant(str, Enum):
    """triplet 선택 방식"""

    BATCH_HARD = "batch_hard"
    BATCH_ALL = "batch_all"


class PkSpec(BaseModel):
    """PK 샘플링 설정"""

    P: int = Field(8, ge=2, description="배치당 identity 수")
    K: int = Field(4, ge=2, description="identity 당 샘플 수")
    seed: int = Field(0, ge=0, lt=2**64, description="샘플링 시드 (u64)")

    @property
    def batch_size(self) -> int:
        return self.P * self.K


@dataclass(frozen=True)
class TripletSet:
    """(anchor, positive, negative) 인덱스 묶음"""

    triplets: np.ndarray  # shape (M, 3)
    variant: MiningVariant

    def __len__(self) -> int:
        return int(self.triplets.shape[0])

    @property
    def anchors(self) -> np.ndarray:
        return self.triplets[:, 0]

    @property
    def positives(self) -> np.ndarray:
        return self.triplets[:, 1]

    @property
    def negatives(self) -> np.ndarray:
        return self.triplets[:, 2]

    def as_tuples(self) -> List[Tuple[int, int, int]]:
        return [tuple(int(v) for v in row) for row in self.triplets]


def expected_batch_all_count(P: int, K: int) -> int:
    """PK(PK-K)(K-1)"""
    return P * K * (P * K - K) * (K - 1)


def pk_shape(labels: Sequence[int]) -> Optional[Tuple[int, int]]:
    """모든 identity 가 같은 샘플 수를 가지면 (P, K), 아니면 None"""
    _, counts = np.unique(np.asarray(labels), return_counts=True)
    if counts.size == 0 or (counts != counts[0]).any():
        return None
    return int(counts.size), int(counts[0])


def validate_triplet_structure(labels: Sequence[int]) -> np.ndarray:
    """
    모든 라벨이 2 개 이상의 샘플을 가지고 라벨 종류가 2 개 이상인지 확인

    Returns:
        int64 라벨 배열
    """
    labels = np.asarray(labels, dtype=np.int64)
    ids, counts = np.unique(labels, return_counts=True)
    if ids.size < 2:
        raise create_validation_error(
            f"batch needs at least 2 identities, got {ids.size}",
            field_name="labels",
        )
    lonely = ids[counts < 2]
    if lonely.size:
        raise create_validation_error(
            f"identity {int(lonely[0])} has a single sample; every identity needs >= 2",
            field_name="labels",
            field_value=int(lonely[0]),
        )
    return labels


def pk_sample(
    dataset_labels: Sequence[int],
    spec: PkSpec,
    rng: Optional[np.random.Generator] = None,
) -> np.ndarray:
    """
    P 개 identity 를 비복원 추출한 뒤 identity 마다 K 개 인덱스를 추출합니다.

    identity 의 샘플이 K 개보다 적으면 복원 추출로 채웁니다.
    rng 를 넘기지 않으면 spec.seed 로 새 generator 를 만듭니다.

    Returns:
        길이 P·K 의 데이터셋 인덱스 배열 (identity 순으로 K 개씩)
    """
    labels = np.asarray(dataset_labels, dtype=np.int64)
    identities = np.unique(labels)
    if identities.size < spec.P:
        raise create_validation_error(
            f"pk_sample needs {spec.P} identities, dataset has {identities.size}",
            field_name="dataset_labels",
            field_value=identities.size,
            expected=f">= {spec.P}",
        )
    rng = rng if rng is not None else np.random.default_rng(spec.seed)

    chosen = rng.choice(identities, size=spec.P, replace=False)
    batch = []
    for identity in chosen:
        members = np.flatnonzero(labels == identity)
        replace = members.size < spec.K
        batch.append(rng.choice(members, size=spec.K, replace=replace))
    return np.concatenate(batch)


def mine_batch_hard(dist: np.ndarray, labels: Sequence[int]) -> TripletSet:
    """
    anchor 마다 hardest positive(argmax)와 hardest negative(argmin) 선택

    동률은 더 작은 인덱스로 결정합니다 (np.argmax/argmin 은 첫 번째 값을 반환).
    """
    dist = np.asarray(dist, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.int64)
    n = labels.shape[0]
    same = labels[:, None] == labels[None, :]
    positive_mask = same & ~np.eye(n, dtype=bool)
    negative_mask = ~same

    missing_pos = ~positive_mask.any(axis=1)
    missing_neg = ~negative_mask.any(axis=1)
    if missing_pos.any() or missing_neg.any():
        anchor = int(np.flatnonzero(missing_pos | missing_neg)[0])
        role = "positive" if missing_pos[anchor] else "negative"
        raise create_validation_error(
            f"anchor {anchor} has no {role} in the batch",
            field_name="labels",
            field_value=anchor,
        )

    positives = np.argmax(np.where(positive_mask, dist, -np.inf), axis=1)
    negatives = np.argmin(np.where(negative_mask, dist, np.inf), axis=1)
    triplets = np.stack([np.arange(n), positives, negatives], axis=1).astype(np.int64)
    return TripletSet(triplets=triplets, variant=MiningVariant.BATCH_HARD)


def enumerate_batch_all(labels: Sequence[int]) -> TripletSet:
    """모든 유효 (a, p, n) 를 사전식 순서로 한 번씩 나열"""
    labels = np.asarray(labels, dtype=np.int64)
    n = labels.shape[0]
    same = labels[:, None] == labels[None, :]
    positive_mask = same & ~np.eye(n, dtype=bool)
    negative_mask = ~same

    valid = positive_mask[:, :, None] & negative_mask[:, None, :]
    triplets = np.argwhere(valid).astype(np.int64).reshape(-1, 3)

    shape = pk_shape(labels)
    if shape is not None:
        logger.debug(
            f"batch_all: P={shape[0]}, K={shape[1]}, {len(triplets)} triplets"
        )
    return TripletSet(triplets=triplets, variant=MiningVariant.BATCH_ALL)
