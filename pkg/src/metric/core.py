"""
DCA 거리 계열 forward 계산

pairwise Euclidean 거리 d, Gaussian kernel V, soft Jaccard 거리,
재가중 거리, 그리고 λ 로 섞은 최종 DCA 거리를 계산합니다.
모든 함수는 입력만으로 결과가 결정되는 순수 함수입니다.
"""

import logging
from typing import Iterator, Tuple

import numpy as np
from scipy.spatial.distance import pdist, squareform

from exceptions import create_validation_error

from .types import DcaDistances, EmbeddingBatch

logger = logging.getLogger(__name__)

EXPONENT_CLAMP = 80.0
DENOMINATOR_FLOOR = 1e-12
SYMMETRY_TOLERANCE = 1e-12

# 3차원 min/max 텐서를 블록 단위로 만들 때 한 블록의 최대 원소 수
_BLOCK_ELEMENTS = 1 << 22


def pairwise_distances(batch: EmbeddingBatch) -> np.ndarray:
    """
    모든 쌍의 Euclidean 거리 행렬

    제곱 거리를 0 에서 clamp 한 뒤 제곱근을 취하므로 대각은 정확히 0,
    행렬은 정확히 대칭입니다.
    """
    return euclidean_matrix(batch.features)


def euclidean_matrix(features: np.ndarray) -> np.ndarray:
    squared = pdist(features, metric="sqeuclidean")
    np.maximum(squared, 0.0, out=squared)
    return squareform(np.sqrt(squared))


def _check_square(matrix: np.ndarray, name: str) -> np.ndarray:
    matrix = np.asarray(matrix, dtype=np.float64)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise create_validation_error(
            f"{name} must be a square matrix, got shape {matrix.shape}",
            field_name=name,
        )
    if not np.isfinite(matrix).all():
        raise create_validation_error(f"{name} has non-finite entries", field_name=name)
    if np.abs(matrix - matrix.T).max(initial=0.0) > SYMMETRY_TOLERANCE:
        raise create_validation_error(f"{name} must be symmetric", field_name=name)
    return matrix


def _kernel(dist: np.ndarray) -> np.ndarray:
    sim = np.exp(-np.minimum(dist, EXPONENT_CLAMP))
    np.fill_diagonal(sim, 1.0)
    return sim


def gaussian_similarity(dist: np.ndarray) -> np.ndarray:
    """
    Gaussian kernel V = exp(-min(d, 80))

    대각은 정확히 1 입니다. 지수 clamp 는 subnormal 로의 underflow 를 막습니다.
    """
    dist = _check_square(dist, "dist")
    if (dist < 0).any() or np.any(np.diag(dist) != 0.0):
        raise create_validation_error(
            "dist must be nonnegative with a zero diagonal", field_name="dist"
        )
    return _kernel(dist)


def iter_row_blocks(n: int) -> Iterator[Tuple[int, int]]:
    """N×N×N 텐서를 행 블록으로 나눌 때의 (start, stop) 범위"""
    step = max(1, _BLOCK_ELEMENTS // max(n * n, 1))
    for start in range(0, n, step):
        yield start, min(n, start + step)


def context_sums(sim: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    모든 (i, j) 에 대해 Σ_k min(V_ik, V_jk) 와 Σ_k max(V_ik, V_jk)

    k 는 i, j 자신을 포함한 배치 전체를 순회합니다.
    """
    n = sim.shape[0]
    min_sums = np.empty((n, n))
    max_sums = np.empty((n, n))
    for start, stop in iter_row_blocks(n):
        rows = sim[start:stop, None, :]
        min_sums[start:stop] = np.minimum(rows, sim[None, :, :]).sum(axis=-1)
        max_sums[start:stop] = np.maximum(rows, sim[None, :, :]).sum(axis=-1)
    return min_sums, max_sums


def _jaccard_from_sums(min_sums: np.ndarray, max_sums: np.ndarray) -> np.ndarray:
    jaccard = 1.0 - min_sums / np.maximum(max_sums, DENOMINATOR_FLOOR)
    np.fill_diagonal(jaccard, 0.0)
    return jaccard


def jaccard_distances(sim: np.ndarray) -> np.ndarray:
    """
    유사도 행(distribution context) 사이의 soft Jaccard 거리

    out[i][j] = 1 - Σ_k min(V_ik, V_jk) / max(Σ_k max(V_ik, V_jk), ε)
    """
    sim = _check_square(sim, "sim")
    if sim.shape[0] < 2:
        raise create_validation_error(
            f"jaccard distance needs at least 2 samples, got {sim.shape[0]}",
            field_name="sim",
        )
    if (sim <= 0).any() or (sim > 1).any():
        raise create_validation_error("sim entries must lie in (0, 1]", field_name="sim")
    return _jaccard_from_sums(*context_sums(sim))


def blend_distances(dist: np.ndarray, jaccard: np.ndarray, lam: float) -> np.ndarray:
    """d_DCA = (1-λ)·d + λ·d_Jaccard + d_Jaccard·d"""
    return (1.0 - lam) * dist + lam * jaccard + jaccard * dist


def validate_lambda(lam: float) -> float:
    lam = float(lam)
    if not 0.0 <= lam <= 1.0:
        raise create_validation_error(
            f"lambda must lie in [0, 1], got {lam}",
            field_name="lambda",
            field_value=lam,
            expected="[0, 1]",
        )
    return lam


def dca_distances(batch: EmbeddingBatch, lam: float) -> DcaDistances:
    """배치에 대한 DCA 거리 번들 계산 (중간값 포함)"""
    lam = validate_lambda(lam)

    dist = pairwise_distances(batch)
    sim = _kernel(dist)
    min_sums, max_sums = context_sums(sim)
    jaccard = _jaccard_from_sums(min_sums, max_sums)
    weighted = jaccard * dist
    dca = blend_distances(dist, jaccard, lam)

    logger.debug(
        f"dca_distances: N={batch.size}, λ={lam}, mean d={dist.mean():.4f}, "
        f"mean d_J={jaccard.mean():.4f}"
    )

    return DcaDistances(
        dist=dist,
        sim=sim,
        jaccard=jaccard,
        weighted=weighted,
        dca=dca,
        lam=lam,
        min_sums=min_sums,
        max_sums=max_sums,
    )
