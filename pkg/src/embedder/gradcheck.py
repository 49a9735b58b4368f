"""
MLP 파라미터까지 이어지는 end-to-end gradient 검사
"""

from typing import List

import numpy as np

from src.metric.gradients import (
    WEAK_GRADIENT_FLOOR,
    FiniteDifferenceReport,
    agreement_errors,
    backward_with_intermediates,
    detect_kinks,
    make_loss_function,
    rounding_floor,
)
from src.metric.losses import LossConfig
from src.metric.types import EmbeddingBatch

from .model import MlpModel


def _loss_of_parameters(
    model: MlpModel, params: List[np.ndarray], inputs: np.ndarray, loss_fn
) -> float:
    return loss_fn(model.with_parameters(params).embed(inputs))


def _propagation_scale(model: MlpModel, inputs: np.ndarray) -> float:
    """파라미터 한 개를 h 움직였을 때 임베딩이 움직이는 폭의 대략적 상한 계수"""
    scale = 1.0 + float(np.abs(inputs).max())
    for w in model.weights:
        scale *= max(1.0, float(np.linalg.norm(w, 2)))
    return scale


def check_parameter_gradients(
    model: MlpModel,
    inputs: np.ndarray,
    labels: np.ndarray,
    cfg: LossConfig,
    h: float = 1e-5,
) -> FiniteDifferenceReport:
    """손실 → MLP 파라미터 gradient 를 중앙 차분과 비교"""
    working = model.copy()
    embeddings = working.forward(inputs)
    batch = EmbeddingBatch(embeddings, labels)
    buffer, distances, bundle, coefficients = backward_with_intermediates(batch, cfg)
    analytic = working.backward(buffer.grad).parameters()
    # detach 변형이면 기준 임베딩의 Jaccard 가 고정됨
    loss_fn = make_loss_function(batch, cfg)

    params = [p.copy() for p in working.parameters()]
    # 출력층 bias 처럼 참값이 0 인 성분은 반올림 잡음만 남음
    floor = rounding_floor(buffer.loss_value, h)
    errors, magnitudes = [], []
    for index, param in enumerate(params):
        numeric = np.zeros_like(param)
        for flat in range(param.size):
            original = param.flat[flat]
            param.flat[flat] = original + h
            plus = _loss_of_parameters(working, params, inputs, loss_fn)
            param.flat[flat] = original - h
            minus = _loss_of_parameters(working, params, inputs, loss_fn)
            param.flat[flat] = original
            numeric.flat[flat] = (plus - minus) / (2.0 * h)
        errors.append(agreement_errors(analytic[index], numeric, floor).ravel())
        magnitudes.append(np.abs(analytic[index]).ravel())

    errors = np.concatenate(errors)
    magnitudes = np.concatenate(magnitudes)

    scale = _propagation_scale(working, inputs)
    relu_kink = any(
        (np.abs(z) < 2.0 * h * scale).any() for z in working.pre_activations()[:-1]
    )
    loss_kink = detect_kinks(batch, cfg, h * scale, distances, bundle, coefficients)

    return FiniteDifferenceReport(
        max_relative_error=float(errors.max(initial=0.0)),
        touched_kink=relu_kink or loss_kink,
        weak_coordinates=int(
            ((magnitudes > 0.0) & (magnitudes < WEAK_GRADIENT_FLOOR)).sum()
        ),
        coordinates=int(errors.size),
        loss_value=buffer.loss_value,
    )
