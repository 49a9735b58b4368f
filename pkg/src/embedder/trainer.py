"""
MLP 임베더 학습 루프

step 마다: PK 샘플링 → forward → loss_backward → MLP backward → Adam 업데이트
같은 시드면 손실 기록이 비트 단위로 동일합니다.
"""

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, Field, field_validator, model_validator

from src.data.dataset import LabeledDataset
from src.metric.gradients import loss_backward
from src.metric.losses import LossConfig
from src.metric.mining import PkSpec, pk_sample
from src.metric.types import EmbeddingBatch

from .model import MlpModel
from .optimizer import ADAM_BETAS, AdamState, adam_step, default_milestones, lr_at

logger = logging.getLogger(__name__)


class TrainConfig(BaseModel):
    """학습 설정"""

    steps: int = Field(300, ge=0, description="학습 step 수")
    lr: float = Field(1e-3, gt=0.0, description="초기 학습률")
    decay_milestones: Optional[List[Tuple[int, float]]] = Field(
        None, description="(step, factor) 목록. 없으면 55%, 80% 지점 ×0.1"
    )
    betas: Tuple[float, float] = Field(ADAM_BETAS, description="Adam (β1, β2)")
    seed: int = Field(42, ge=0, description="학습 시드")
    log_every: int = Field(50, ge=1, description="손실 로그 간격")
    loss: LossConfig = Field(default_factory=LossConfig)
    pk: PkSpec = Field(default_factory=PkSpec)

    @field_validator("decay_milestones")
    @classmethod
    def _strictly_increasing(cls, value):
        if value is not None:
            steps = [step for step, _ in value]
            if any(b <= a for a, b in zip(steps, steps[1:])):
                raise ValueError(f"milestones must be strictly increasing, got {steps}")
        return value

    @model_validator(mode="after")
    def _fill_milestones(self) -> "TrainConfig":
        if self.decay_milestones is None:
            self.decay_milestones = default_milestones(self.steps)
        return self


@dataclass(frozen=True)
class StepRecord:
    step: int
    loss: float
    active_fraction: float
    lr: float


@dataclass
class TrainResult:
    model: MlpModel
    history: List[StepRecord] = field(default_factory=list)

    @property
    def losses(self) -> List[float]:
        return [record.loss for record in self.history]


def train(dataset: LabeledDataset, model: MlpModel, cfg: TrainConfig) -> TrainResult:
    """
    PK 배치로 임베더 학습

    Args:
        dataset: pk_sample 에 쓸 수 있는 라벨 데이터셋
        model: 초기 모델 (수정하지 않고 복사본을 학습)
        cfg: 학습 설정

    Returns:
        TrainResult (학습된 모델, step 별 기록)
    """
    rng = np.random.default_rng(cfg.seed)
    model = model.copy()
    state = AdamState.fresh(model.parameters())
    history: List[StepRecord] = []

    logger.info(
        f"🚀 학습 시작: {cfg.loss.variant.display_name}, α={cfg.loss.margin}, "
        f"λ={cfg.loss.lam}, P={cfg.pk.P}, K={cfg.pk.K}, steps={cfg.steps}, lr={cfg.lr}"
    )

    current_lr = cfg.lr
    for step in range(cfg.steps):
        lr = lr_at(step, cfg.lr, cfg.decay_milestones)
        if lr != current_lr:
            logger.info(f"📉 step {step}: 학습률 {current_lr:.2e} → {lr:.2e}")
            current_lr = lr

        indices = pk_sample(dataset.labels, cfg.pk, rng)
        embeddings = model.forward(dataset.features[indices])
        buffer = loss_backward(
            EmbeddingBatch(embeddings, dataset.labels[indices]), cfg.loss
        )
        grads = model.backward(buffer.grad)
        params, state = adam_step(
            model.parameters(), grads.parameters(), state, lr, betas=cfg.betas
        )
        model = model.with_parameters(params)

        history.append(
            StepRecord(
                step=step,
                loss=buffer.loss_value,
                active_fraction=buffer.output.active_fraction,
                lr=lr,
            )
        )
        if (step + 1) % cfg.log_every == 0 or step + 1 == cfg.steps:
            logger.info(
                f"step {step + 1}/{cfg.steps}: loss={buffer.loss_value:.5f}, "
                f"active={buffer.output.active_count}/{buffer.output.total_count}"
            )

    logger.info("✅ 학습 완료")
    return TrainResult(model=model, history=history)
