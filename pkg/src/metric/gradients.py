"""
손실의 해석적 backward 와 중앙 차분 gradient 검사

연쇄: hinge → d_DCA → {d, d_Jaccard → V → d} → features

subgradient 규약
- hinge 의 0 에서의 미분은 0
- Jaccard 의 min/max 는 달성한 쪽으로만 gradient 를 보내고, 동률이면 i 쪽 피연산자
- batch-hard 의 argmax/argmin 선택은 고정된 것으로 취급
- 일치하는 두 점 (d = 0) 의 거리 gradient 는 0
"""

import logging
from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np
from joblib import Parallel, delayed

from exceptions import create_validation_error

from .core import (
    DENOMINATOR_FLOOR,
    EXPONENT_CLAMP,
    blend_distances,
    euclidean_matrix,
    iter_row_blocks,
)
from .losses import LossConfig, LossOutput, evaluate_triplets, select_distances
from .mining import MiningVariant, validate_triplet_structure
from .types import DcaDistances, EmbeddingBatch

logger = logging.getLogger(__name__)

RELATIVE_ERROR_FLOOR = 1e-8
WEAK_GRADIENT_FLOOR = 1e-4
# 손실 한 번 평가의 반올림 오차 상한 (eps·|L| 의 배수)
ROUNDING_MULTIPLIER = 256.0


@dataclass(frozen=True)
class GradientBuffer:
    """∂L/∂features 와 같은 입력에서의 손실 값"""

    grad: np.ndarray
    loss_value: float
    output: Optional[LossOutput] = None


@dataclass(frozen=True)
class FiniteDifferenceReport:
    """중앙 차분 검사 결과"""

    max_relative_error: float
    touched_kink: bool
    weak_coordinates: int
    coordinates: int
    loss_value: float

    @property
    def smooth(self) -> bool:
        """차분 구간이 kink 를 넘지 않는 지점인지 (weak 성분 수는 참고용)"""
        return not self.touched_kink


def distance_backward(
    features: np.ndarray, dist: np.ndarray, grad_dist: np.ndarray
) -> np.ndarray:
    """
    거리 행렬 gradient 를 feature gradient 로 변환

    d_ij 와 d_ji 는 같은 변수이므로 (G + Gᵀ) 로 대칭화한 뒤
    ∂d_ij/∂x_i = (x_i - x_j)/d_ij 를 적용합니다.
    """
    weights = grad_dist + grad_dist.T
    with np.errstate(divide="ignore", invalid="ignore"):
        weights = np.where(dist > 0.0, weights / dist, 0.0)
    return features * weights.sum(axis=1)[:, None] - weights @ features


def jaccard_backward(grad_jaccard: np.ndarray, bundle: DcaDistances) -> np.ndarray:
    """
    ∂L/∂d_Jaccard → ∂L/∂V

    A_ij = Σ_k min(V_ik, V_jk), B_ij = Σ_k max(V_ik, V_jk), J = 1 - A / max(B, ε)
    """
    sim = bundle.sim
    grad_jaccard = grad_jaccard.copy()
    np.fill_diagonal(grad_jaccard, 0.0)

    floored = np.maximum(bundle.max_sums, DENOMINATOR_FLOOR)
    grad_min = -grad_jaccard / floored
    grad_max = np.where(
        bundle.max_sums > DENOMINATOR_FLOOR,
        grad_jaccard * bundle.min_sums / floored**2,
        0.0,
    )
    grad_min_t = grad_min.T
    grad_max_t = grad_max.T

    grad_sim = np.zeros_like(sim)
    for start, stop in iter_row_blocks(sim.shape[0]):
        rows = sim[start:stop, None, :]
        others = sim[None, :, :]
        le = (rows <= others).astype(np.float64)
        lt = (rows < others).astype(np.float64)
        # rows >= others == 1 - lt, rows > others == 1 - le
        grad_sim[start:stop] = (
            np.einsum("ab,abk->ak", grad_min[start:stop], le)
            + np.einsum("ab,abk->ak", grad_min_t[start:stop], lt)
            + np.einsum("ab,abk->ak", grad_max[start:stop], 1.0 - lt)
            + np.einsum("ab,abk->ak", grad_max_t[start:stop], 1.0 - le)
        )
    return grad_sim


def dca_backward(
    grad_dca: np.ndarray, bundle: DcaDistances, detach_context: bool
) -> np.ndarray:
    """∂L/∂d_DCA → ∂L/∂d (Jaccard 경로 포함, detach 면 Jaccard 는 상수)"""
    lam = bundle.lam
    grad_dist = grad_dca * ((1.0 - lam) + bundle.jaccard)
    if detach_context:
        return grad_dist

    grad_jaccard = grad_dca * (lam + bundle.dist)
    grad_sim = jaccard_backward(grad_jaccard, bundle)
    kernel_slope = np.where(bundle.dist < EXPONENT_CLAMP, -bundle.sim, 0.0)
    return grad_dist + grad_sim * kernel_slope


def backward_with_intermediates(
    batch: EmbeddingBatch, cfg: LossConfig
) -> Tuple[GradientBuffer, np.ndarray, Optional[DcaDistances], np.ndarray]:
    labels = validate_triplet_structure(batch.labels)
    distances, bundle = select_distances(batch, cfg)
    output, coefficients = evaluate_triplets(
        distances, labels, cfg, with_coefficients=True
    )

    if output.active_count == 0:
        grad = np.zeros_like(batch.features)
    elif bundle is None:
        grad = distance_backward(batch.features, distances, coefficients)
    else:
        grad_dist = dca_backward(coefficients, bundle, cfg.detach_context)
        grad = distance_backward(batch.features, bundle.dist, grad_dist)

    buffer = GradientBuffer(grad=grad, loss_value=output.value, output=output)
    return buffer, distances, bundle, coefficients


def loss_backward(batch: EmbeddingBatch, cfg: LossConfig) -> GradientBuffer:
    """손실의 해석적 gradient ∂L/∂features"""
    buffer, _, _, _ = backward_with_intermediates(batch, cfg)
    if not np.isfinite(buffer.grad).all():
        raise create_validation_error(
            "gradient has non-finite entries", field_name="grad"
        )
    return buffer


def make_loss_function(
    batch: EmbeddingBatch, cfg: LossConfig
) -> Callable[[np.ndarray], float]:
    """
    features → 손실 값 함수

    detach_context 인 DCA 변형은 기준 배치의 Jaccard 행렬을 고정합니다.
    """
    labels = validate_triplet_structure(batch.labels)

    if cfg.variant.uses_dca and cfg.detach_context:
        _, bundle = select_distances(batch, cfg)
        frozen = bundle.jaccard

        def detached(features: np.ndarray) -> float:
            distances = blend_distances(euclidean_matrix(features), frozen, cfg.lam)
            output, _ = evaluate_triplets(distances, labels, cfg)
            return output.value

        return detached

    def full(features: np.ndarray) -> float:
        distances, _ = select_distances(EmbeddingBatch(features, labels), cfg)
        output, _ = evaluate_triplets(distances, labels, cfg)
        return output.value

    return full


def central_differences(
    loss_fn: Callable[[np.ndarray], float],
    point: np.ndarray,
    h: float,
    n_jobs: int = 1,
) -> np.ndarray:
    """모든 좌표에 대해 (L(x+h) - L(x-h)) / 2h"""

    def _one(index: int) -> float:
        plus = point.copy()
        minus = point.copy()
        plus.flat[index] += h
        minus.flat[index] -= h
        return (loss_fn(plus) - loss_fn(minus)) / (2.0 * h)

    if n_jobs == 1:
        values = [_one(i) for i in range(point.size)]
    else:
        values = Parallel(n_jobs=n_jobs, prefer="threads")(
            delayed(_one)(i) for i in range(point.size)
        )
    return np.asarray(values, dtype=np.float64).reshape(point.shape)


def relative_errors(analytic: np.ndarray, numeric: np.ndarray) -> np.ndarray:
    """|a - n| / max(|a|, |n|, 1e-8)"""
    scale = np.maximum(
        np.maximum(np.abs(analytic), np.abs(numeric)), RELATIVE_ERROR_FLOOR
    )
    return np.abs(analytic - numeric) / scale


def rounding_floor(loss_value: float, h: float) -> float:
    """
    중앙 차분이 반올림만으로 낼 수 있는 차이의 상한

    L(x±h) 의 반올림 오차는 eps·max(|L|, 1) 규모이고, 2h 로 나누면
    numeric gradient 에 그만큼의 잡음이 생깁니다.
    """
    eps = float(np.finfo(np.float64).eps)
    return ROUNDING_MULTIPLIER * eps * max(abs(loss_value), 1.0) / h


def agreement_errors(
    analytic: np.ndarray, numeric: np.ndarray, floor: float
) -> np.ndarray:
    """차이가 floor 이하인 좌표는 0, 나머지는 relative_errors"""
    errors = relative_errors(analytic, numeric)
    return np.where(np.abs(analytic - numeric) <= floor, 0.0, errors)


def _second_gap(values: np.ndarray, mask: np.ndarray, largest: bool) -> np.ndarray:
    """마스크 내부에서 1등과 2등의 차이 (후보가 하나면 inf)"""
    fill = -np.inf if largest else np.inf
    masked = np.where(mask, values, fill)
    ordered = np.sort(masked, axis=1)
    if largest:
        first, second = ordered[:, -1], ordered[:, -2]
    else:
        first, second = ordered[:, 0], ordered[:, 1]
    gap = np.abs(first - second)
    return np.where(np.isfinite(gap), gap, np.inf)


def detect_kinks(
    batch: EmbeddingBatch,
    cfg: LossConfig,
    h: float,
    distances: np.ndarray,
    bundle: Optional[DcaDistances],
    coefficients: np.ndarray,
) -> bool:
    """
    좌표를 ±h 움직였을 때 비미분 지점을 넘을 수 있는지 판정

    한 좌표를 h 만큼 움직이면 Euclidean 거리는 최대 h, Jaccard 거리는 최대 N·h
    변하므로 그 상한으로 허용 폭을 잡습니다.
    """
    n = batch.size
    labels = batch.labels
    if bundle is None:
        slope = 1.0
    elif cfg.detach_context:
        slope = (1.0 - cfg.lam) + float(bundle.jaccard.max())
    else:
        slope = (2.0 - cfg.lam) + (cfg.lam + float(bundle.dist.max())) * n
    tolerance = 2.0 * h * slope

    triplets = evaluate_triplets(distances, labels, cfg)[0].triplets
    arguments = (
        distances[triplets.anchors, triplets.positives]
        - distances[triplets.anchors, triplets.negatives]
        + cfg.margin
    )
    if (np.abs(arguments) < tolerance).any():
        return True

    if cfg.variant.mining is MiningVariant.BATCH_HARD:
        same = labels[:, None] == labels[None, :]
        positive_mask = same & ~np.eye(n, dtype=bool)
        if (_second_gap(distances, positive_mask, largest=True) < 2 * tolerance).any():
            return True
        if (_second_gap(distances, ~same, largest=False) < 2 * tolerance).any():
            return True

    if bundle is not None and not cfg.detach_context:
        involved = (coefficients != 0.0) | (coefficients.T != 0.0)
        np.fill_diagonal(involved, False)
        rows, cols = np.nonzero(involved)
        if rows.size:
            gaps = np.abs(bundle.sim[rows] - bundle.sim[cols])
            # k = i, k = j 항은 V=1 과 비교하므로 제외
            gaps[np.arange(rows.size), rows] = np.inf
            gaps[np.arange(rows.size), cols] = np.inf
            if (gaps < 2.0 * h).any():
                return True
    return False


def finite_difference_check(
    batch: EmbeddingBatch,
    cfg: LossConfig,
    h: float = 1e-5,
    n_jobs: int = 1,
) -> FiniteDifferenceReport:
    """
    해석적 gradient 를 중앙 차분과 비교

    Args:
        h: 차분 간격, [1e-8, 1e-3]
        n_jobs: 좌표별 평가 병렬 수 (joblib)

    Returns:
        FiniteDifferenceReport (최대 상대 오차, kink 접촉 여부 등)
    """
    if not 1e-8 <= h <= 1e-3:
        raise create_validation_error(
            f"finite-difference step must lie in [1e-8, 1e-3], got {h}",
            field_name="h",
            field_value=h,
        )

    buffer, distances, bundle, coefficients = backward_with_intermediates(batch, cfg)
    loss_fn = make_loss_function(batch, cfg)
    numeric = central_differences(loss_fn, batch.features, h, n_jobs=n_jobs)
    errors = agreement_errors(
        buffer.grad, numeric, rounding_floor(buffer.loss_value, h)
    )

    magnitude = np.abs(buffer.grad)
    weak = int(((magnitude > 0.0) & (magnitude < WEAK_GRADIENT_FLOOR)).sum())
    kink = detect_kinks(batch, cfg, h, distances, bundle, coefficients)

    report = FiniteDifferenceReport(
        max_relative_error=float(errors.max(initial=0.0)),
        touched_kink=kink,
        weak_coordinates=weak,
        coordinates=int(batch.features.size),
        loss_value=buffer.loss_value,
    )
    logger.debug(
        f"gradcheck {cfg.variant.display_name}: max rel err={report.max_relative_error:.3e}, "
        f"kink={kink}, weak={weak}"
    )
    return report
