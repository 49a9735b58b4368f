"""
Triplet 계열 손실 forward

TRI_BH / TRI_BA 는 Euclidean 거리, DCA_BH / DCA_BA 는 DCA 거리로
hinge [d(a,p) - d(a,n) + α]+ 를 계산해 평균을 냅니다.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple

import numpy as np
from pydantic import BaseModel, Field, model_validator

from .core import dca_distances, pairwise_distances
from .mining import (
    MiningVariant,
    TripletSet,
    enumerate_batch_all,
    mine_batch_hard,
    validate_triplet_structure,
)
from .types import DcaDistances, EmbeddingBatch

logger = logging.getLogger(__name__)

DEFAULT_MARGIN = 1.2
DEFAULT_LAMBDA = 0.5
ABLATION_MARGINS = (0.5, 0.8, 1.2)
ABLATION_LAMBDAS = (0.5, 0.8)


class LossVariant(str, Enum):
    """손실 종류 (거리 × triplet 선택)"""

    TRI_BH = "tri_bh"
    TRI_BA = "tri_ba"
    DCA_BH = "dca_bh"
    DCA_BA = "dca_ba"

    @property
    def uses_dca(self) -> bool:
        return self in (LossVariant.DCA_BH, LossVariant.DCA_BA)

    @property
    def mining(self) -> MiningVariant:
        if self in (LossVariant.TRI_BH, LossVariant.DCA_BH):
            return MiningVariant.BATCH_HARD
        return MiningVariant.BATCH_ALL

    @property
    def display_name(self) -> str:
        """표 출력용 이름 (예: DCA-BH)"""
        return self.value.upper().replace("_", "-")


class LossConfig(BaseModel):
    """손실 설정"""

    variant: LossVariant = Field(LossVariant.DCA_BH, description="손실 종류")
    margin: float = Field(DEFAULT_MARGIN, ge=0.0, description="margin α")
    lam: float = Field(DEFAULT_LAMBDA, ge=0.0, le=1.0, description="λ (TRI 계열은 무시)")
    nonzero_average: Optional[bool] = Field(
        None, description="0 이 아닌 hinge 만 평균 (기본: BA 는 True, BH 는 False)"
    )
    detach_context: bool = Field(
        False, description="backward 에서 Jaccard 행렬을 상수로 취급"
    )

    @model_validator(mode="after")
    def _default_nonzero_average(self) -> "LossConfig":
        if self.nonzero_average is None:
            self.nonzero_average = self.variant.mining is MiningVariant.BATCH_ALL
        return self


@dataclass(frozen=True)
class LossOutput:
    """손실 값과 triplet 통계"""

    value: float
    active_count: int
    total_count: int
    triplets: Optional[TripletSet] = None

    @property
    def active_fraction(self) -> float:
        return self.active_count / self.total_count if self.total_count else 0.0


def hinge(x: float) -> float:
    """[x]+ = max(0, x)"""
    return max(0.0, float(x))


def select_distances(
    batch: EmbeddingBatch, cfg: LossConfig
) -> Tuple[np.ndarray, Optional[DcaDistances]]:
    """변형에 맞는 거리 행렬 (TRI: d, DCA: d_DCA) 과 DCA 번들"""
    if cfg.variant.uses_dca:
        bundle = dca_distances(batch, cfg.lam)
        return bundle.dca, bundle
    return pairwise_distances(batch), None


def mine(distances: np.ndarray, labels: np.ndarray, cfg: LossConfig) -> TripletSet:
    if cfg.variant.mining is MiningVariant.BATCH_HARD:
        return mine_batch_hard(distances, labels)
    return enumerate_batch_all(labels)


def evaluate_triplets(
    distances: np.ndarray,
    labels: np.ndarray,
    cfg: LossConfig,
    with_coefficients: bool = False,
) -> Tuple[LossOutput, Optional[np.ndarray]]:
    """
    거리 행렬 위에서 손실 값을 계산합니다.

    Args:
        with_coefficients: True 면 ∂L/∂distances (N×N) 도 함께 반환

    Returns:
        (LossOutput, 계수 행렬 또는 None)
    """
    triplets = mine(distances, labels, cfg)
    a, p, n = triplets.anchors, triplets.positives, triplets.negatives
    arguments = distances[a, p] - distances[a, n] + cfg.margin
    active = arguments > 0.0
    active_count = int(active.sum())
    total_count = len(triplets)

    denominator = active_count if cfg.nonzero_average else total_count
    if active_count == 0 or denominator == 0:
        value = 0.0
    else:
        value = float(np.maximum(arguments, 0.0).sum() / denominator)

    output = LossOutput(
        value=value,
        active_count=active_count,
        total_count=total_count,
        triplets=triplets,
    )
    if not with_coefficients:
        return output, None

    coefficients = np.zeros_like(distances)
    if active_count:
        weight = 1.0 / denominator
        np.add.at(coefficients, (a[active], p[active]), weight)
        np.add.at(coefficients, (a[active], n[active]), -weight)
    return output, coefficients


def loss_forward(batch: EmbeddingBatch, cfg: LossConfig) -> LossOutput:
    """배치에 대한 손실 forward"""
    labels = validate_triplet_structure(batch.labels)
    distances, _ = select_distances(batch, cfg)
    output, _ = evaluate_triplets(distances, labels, cfg)
    logger.debug(
        f"{cfg.variant.display_name}: value={output.value:.6f}, "
        f"active={output.active_count}/{output.total_count}"
    )
    return output
