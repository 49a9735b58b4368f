"""
query/gallery 검색 평가 (mAP, CMC)

- EUCLIDEAN: query 와 gallery 사이의 Euclidean 거리로 순위
- DCA_RERANK: query + gallery 를 하나의 집합으로 보고 DCA 거리를 계산한 뒤
  query 행의 gallery 열로 순위

거리가 같으면 gallery 인덱스가 작은 쪽이 앞에 옵니다.
"""

import logging
from enum import Enum
from typing import List, Optional

import numpy as np
from pydantic import BaseModel, Field
from scipy.spatial.distance import cdist

from exceptions import create_invariant_error, create_validation_error
from src.metric.core import dca_distances, validate_lambda
from src.metric.types import EmbeddingBatch

logger = logging.getLogger(__name__)


class EvalMode(str, Enum):
    EUCLIDEAN = "euclidean"
    DCA_RERANK = "dca_rerank"


class RetrievalReport(BaseModel):
    """검색 평가 결과"""

    map: float = Field(..., ge=0.0, le=1.0, description="per_query_ap 의 평균")
    cmc: List[float] = Field(..., description="cmc[k-1] = top-k 안에 정답이 있는 query 비율")
    per_query_ap: List[float] = Field(..., description="query 별 average precision")
    mode: EvalMode
    lam: Optional[float] = Field(None, description="DCA_RERANK 일 때의 λ")

    def rank(self, k: int) -> float:
        """CMC rank-k (gallery 크기를 넘으면 마지막 값)"""
        if k < 1:
            raise create_validation_error(f"rank must be >= 1, got {k}", field_name="k")
        return self.cmc[min(k, len(self.cmc)) - 1]


def _check_inputs(queries: EmbeddingBatch, gallery: EmbeddingBatch) -> None:
    if queries.dim != gallery.dim:
        raise create_validation_error(
            f"query dim {queries.dim} does not match gallery dim {gallery.dim}",
            field_name="dim",
            field_value=queries.dim,
            expected=str(gallery.dim),
        )
    missing = np.setdiff1d(queries.labels, gallery.labels)
    if missing.size:
        raise create_validation_error(
            f"query identity {int(missing[0])} has no match in the gallery",
            field_name="identity",
            field_value=int(missing[0]),
        )


def query_gallery_distances(
    queries: EmbeddingBatch,
    gallery: EmbeddingBatch,
    mode: EvalMode,
    lam: float = 0.5,
) -> np.ndarray:
    """순위 매기기에 쓰는 query×gallery 거리 행렬"""
    if mode is EvalMode.EUCLIDEAN:
        return cdist(queries.features, gallery.features, metric="euclidean")

    joint = EmbeddingBatch(
        features=np.vstack([queries.features, gallery.features]),
        labels=np.concatenate([queries.labels, gallery.labels]),
    )
    nq = queries.size
    return dca_distances(joint, lam).dca[:nq, nq:]


def average_precisions(distances: np.ndarray, query_labels, gallery_labels):
    """
    query 별 AP 와 CMC 곡선

    Returns:
        (per_query_ap, cmc)
    """
    order = np.argsort(distances, axis=1, kind="stable")
    matches = np.asarray(gallery_labels)[order] == np.asarray(query_labels)[:, None]

    hits = np.cumsum(matches, axis=1)
    ranks = np.arange(1, matches.shape[1] + 1)
    precision = np.where(matches, hits / ranks, 0.0)
    per_query_ap = precision.sum(axis=1) / matches.sum(axis=1)

    first = matches.argmax(axis=1)
    cmc = np.zeros(matches.shape[1])
    np.add.at(cmc, first, 1.0)
    cmc = np.cumsum(cmc) / matches.shape[0]
    return per_query_ap, cmc


def evaluate(
    queries: EmbeddingBatch,
    gallery: EmbeddingBatch,
    mode: EvalMode = EvalMode.EUCLIDEAN,
    lam: float = 0.5,
) -> RetrievalReport:
    """
    query/gallery 검색 평가

    Args:
        queries: query 임베딩과 identity
        gallery: gallery 임베딩과 identity (모든 query identity 포함)
        mode: 거리 종류
        lam: DCA_RERANK 의 λ

    Returns:
        RetrievalReport
    """
    mode = EvalMode(mode)
    _check_inputs(queries, gallery)
    if mode is EvalMode.DCA_RERANK:
        lam = validate_lambda(lam)

    distances = query_gallery_distances(queries, gallery, mode, lam)
    per_query_ap, cmc = average_precisions(distances, queries.labels, gallery.labels)

    if np.any(np.diff(cmc) < 0) or not np.isclose(cmc[-1], 1.0):
        raise create_invariant_error(
            "CMC curve must be non-decreasing and reach 1", invariant="cmc"
        )

    report = RetrievalReport(
        map=float(per_query_ap.mean()),
        cmc=cmc.tolist(),
        per_query_ap=per_query_ap.tolist(),
        mode=mode,
        lam=lam if mode is EvalMode.DCA_RERANK else None,
    )
    logger.info(
        f"📊 {mode.value}: mAP={report.map:.4f}, rank1={report.rank(1):.4f} "
        f"({queries.size} queries / {gallery.size} gallery)"
    )
    return report
