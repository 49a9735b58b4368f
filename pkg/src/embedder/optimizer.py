# Adam adaptive moment estimation
#   m(t) = b1 * m(t-1) + (1 - b1) * g
#   v(t) = b2 * v(t-1) + (1 - b2) * g**2
#   theta(t) = theta(t-1) - lr * m_hat / (sqrt(v_hat) + eps)
# with bias-corrected m_hat = m / (1 - b1**t), v_hat = v / (1 - b2**t)

from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from exceptions import create_validation_error

ADAM_BETAS = (0.9, 0.999)
ADAM_EPS = 1e-8


@dataclass
class AdamState:
    m: List[np.ndarray]
    v: List[np.ndarray]
    t: int = 0

    @classmethod
    def fresh(cls, params: Sequence[np.ndarray]) -> "AdamState":
        return cls(
            m=[np.zeros_like(p) for p in params],
            v=[np.zeros_like(p) for p in params],
            t=0,
        )

    def copy(self) -> "AdamState":
        return AdamState(
            m=[m.copy() for m in self.m], v=[v.copy() for v in self.v], t=self.t
        )


def adam_step(
    params: Sequence[np.ndarray],
    grads: Sequence[np.ndarray],
    state: AdamState,
    lr: float,
    betas: Tuple[float, float] = ADAM_BETAS,
    eps: float = ADAM_EPS,
) -> Tuple[List[np.ndarray], AdamState]:
    """
    한 번의 Adam 업데이트. 입력은 수정하지 않고 새 파라미터와 상태를 반환합니다.
    """
    if len(params) != len(grads) or len(params) != len(state.m):
        raise create_validation_error(
            f"adam_step got {len(params)} params, {len(grads)} grads, "
            f"{len(state.m)} state slots",
            field_name="params",
        )
    b1, b2 = betas
    t = state.t + 1
    new_params, new_m, new_v = [], [], []
    for p, g, m, v in zip(params, grads, state.m, state.v):
        if p.shape != g.shape or p.shape != m.shape:
            raise create_validation_error(
                f"shape mismatch: param {p.shape}, grad {g.shape}, state {m.shape}",
                field_name="params",
            )
        m = b1 * m + (1.0 - b1) * g
        v = b2 * v + (1.0 - b2) * g**2
        m_hat = m / (1.0 - b1**t)
        v_hat = v / (1.0 - b2**t)
        new_params.append(p - lr * m_hat / (np.sqrt(v_hat) + eps))
        new_m.append(m)
        new_v.append(v)
    return new_params, AdamState(m=new_m, v=new_v, t=t)


def default_milestones(steps: int) -> List[Tuple[int, float]]:
    """전체 step 의 55%, 80% 지점에서 ×0.1 (같은 step 이면 하나로 합침)"""
    milestones: List[Tuple[int, float]] = []
    for fraction in (0.55, 0.80):
        step = int(round(fraction * steps))
        if milestones and milestones[-1][0] == step:
            milestones[-1] = (step, milestones[-1][1] * 0.1)
        else:
            milestones.append((step, 0.1))
    return milestones


def lr_at(step: int, base_lr: float, milestones: Sequence[Tuple[int, float]]) -> float:
    """step 시점의 학습률 (milestone step 이상이면 factor 누적 적용)"""
    lr = base_lr
    for milestone, factor in milestones:
        if step >= milestone:
            lr *= factor
    return lr
