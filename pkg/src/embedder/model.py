"""
임베딩 함수 φ 를 대신하는 다층 퍼셉트론

hidden 층은 ReLU, 출력층은 identity 입니다.
가중치는 (in, out) 형태로 저장하고 out = x @ W + b 로 계산합니다.
"""

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np

from exceptions import create_validation_error

logger = logging.getLogger(__name__)

DEFAULT_OUTPUT_DIM = 128
_NORM_FLOOR = 1e-12


@dataclass
class ModelGradients:
    """파라미터별 gradient 와 입력 gradient"""

    weights: List[np.ndarray]
    biases: List[np.ndarray]
    inputs: np.ndarray

    def parameters(self) -> List[np.ndarray]:
        """MlpModel.parameters() 와 같은 순서 (W0, b0, W1, b1, ...)"""
        flat = []
        for w, b in zip(self.weights, self.biases):
            flat.extend([w, b])
        return flat


@dataclass
class _ForwardCache:
    activations: List[np.ndarray]  # 각 층의 입력 (activations[0] == inputs)
    pre_activations: List[np.ndarray]
    raw_output: np.ndarray
    output: np.ndarray


@dataclass
class MlpModel:
    """affine + ReLU 로 구성된 MLP"""

    weights: List[np.ndarray]
    biases: List[np.ndarray]
    normalize_output: bool = False
    _cache: Optional[_ForwardCache] = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if not self.weights or len(self.weights) != len(self.biases):
            raise create_validation_error(
                "model needs one bias vector per weight matrix", field_name="layers"
            )
        self.weights = [np.asarray(w, dtype=np.float64) for w in self.weights]
        self.biases = [np.asarray(b, dtype=np.float64) for b in self.biases]
        for index, (w, b) in enumerate(zip(self.weights, self.biases)):
            if w.ndim != 2 or b.shape != (w.shape[1],) or min(w.shape) < 1:
                raise create_validation_error(
                    f"layer {index}: weight {w.shape} and bias {b.shape} do not match",
                    field_name="layers",
                )
            if index and w.shape[0] != self.weights[index - 1].shape[1]:
                raise create_validation_error(
                    f"layer {index} expects width {w.shape[0]}, previous layer emits "
                    f"{self.weights[index - 1].shape[1]}",
                    field_name="layers",
                )
            if not (np.isfinite(w).all() and np.isfinite(b).all()):
                raise create_validation_error(
                    f"layer {index} has non-finite parameters", field_name="layers"
                )

    @classmethod
    def initialize(
        cls,
        input_dim: int,
        hidden: Sequence[int] = (64,),
        output_dim: int = DEFAULT_OUTPUT_DIM,
        seed: int = 0,
        normalize_output: bool = False,
    ) -> "MlpModel":
        """He 스케일 정규분포 가중치, 0 bias 로 초기화"""
        widths = [input_dim, *hidden, output_dim]
        if min(widths) < 1:
            raise create_validation_error(
                f"layer widths must be >= 1, got {widths}", field_name="widths"
            )
        rng = np.random.default_rng(seed)
        weights = [
            rng.standard_normal((fan_in, fan_out)) * np.sqrt(2.0 / fan_in)
            for fan_in, fan_out in zip(widths[:-1], widths[1:])
        ]
        biases = [np.zeros(fan_out) for fan_out in widths[1:]]
        return cls(weights=weights, biases=biases, normalize_output=normalize_output)

    @property
    def widths(self) -> List[int]:
        return [self.weights[0].shape[0]] + [w.shape[1] for w in self.weights]

    @property
    def input_dim(self) -> int:
        return self.weights[0].shape[0]

    @property
    def output_dim(self) -> int:
        return self.weights[-1].shape[1]

    def parameters(self) -> List[np.ndarray]:
        """(W0, b0, W1, b1, ...) 순서의 파라미터 목록"""
        flat = []
        for w, b in zip(self.weights, self.biases):
            flat.extend([w, b])
        return flat

    def with_parameters(self, parameters: Sequence[np.ndarray]) -> "MlpModel":
        """같은 구조에 새 파라미터를 넣은 모델 (캐시는 비움)"""
        return MlpModel(
            weights=[np.array(p) for p in parameters[0::2]],
            biases=[np.array(p) for p in parameters[1::2]],
            normalize_output=self.normalize_output,
        )

    def copy(self) -> "MlpModel":
        return self.with_parameters(self.parameters())

    def forward(self, inputs: np.ndarray, keep_cache: bool = True) -> np.ndarray:
        """
        B×D_in 입력을 B×D_emb 임베딩으로 변환

        keep_cache=True 면 backward 에 필요한 활성값을 모델에 저장합니다.
        """
        inputs = np.asarray(inputs, dtype=np.float64)
        if inputs.ndim != 2 or inputs.shape[1] != self.input_dim:
            raise create_validation_error(
                f"inputs of shape {inputs.shape} do not match input width {self.input_dim}",
                field_name="inputs",
            )

        activations = [inputs]
        pre_activations = []
        hidden = inputs
        last = len(self.weights) - 1
        for index, (w, b) in enumerate(zip(self.weights, self.biases)):
            z = hidden @ w + b
            pre_activations.append(z)
            hidden = np.maximum(z, 0.0) if index < last else z
            if index < last:
                activations.append(hidden)

        raw_output = hidden
        output = raw_output
        if self.normalize_output:
            norms = np.maximum(np.linalg.norm(raw_output, axis=1, keepdims=True), _NORM_FLOOR)
            output = raw_output / norms

        if keep_cache:
            self._cache = _ForwardCache(activations, pre_activations, raw_output, output)
        return output

    def embed(self, inputs: np.ndarray) -> np.ndarray:
        """캐시를 남기지 않는 추론 전용 forward"""
        return self.forward(inputs, keep_cache=False)

    def backward(self, upstream_grad: np.ndarray) -> ModelGradients:
        """
        마지막 forward 기준 reverse-mode 미분

        ReLU 의 0 에서의 subgradient 는 0 입니다.
        """
        cache = self._cache
        if cache is None:
            raise create_validation_error(
                "backward called without a cached forward pass", field_name="cache"
            )
        grad = np.asarray(upstream_grad, dtype=np.float64)
        if grad.shape != cache.output.shape:
            raise create_validation_error(
                f"upstream gradient {grad.shape} does not match output {cache.output.shape}",
                field_name="upstream_grad",
            )

        if self.normalize_output:
            norms = np.maximum(
                np.linalg.norm(cache.raw_output, axis=1, keepdims=True), _NORM_FLOOR
            )
            unit = cache.output
            grad = (grad - unit * (unit * grad).sum(axis=1, keepdims=True)) / norms

        last = len(self.weights) - 1
        weight_grads: List[np.ndarray] = [None] * len(self.weights)
        bias_grads: List[np.ndarray] = [None] * len(self.weights)
        for index in range(last, -1, -1):
            if index < last:
                grad = grad * (cache.pre_activations[index] > 0.0)
            weight_grads[index] = cache.activations[index].T @ grad
            bias_grads[index] = grad.sum(axis=0)
            grad = grad @ self.weights[index].T

        return ModelGradients(weights=weight_grads, biases=bias_grads, inputs=grad)

    def pre_activations(self) -> List[np.ndarray]:
        """마지막 forward 의 층별 pre-activation (gradient 검사용)"""
        if self._cache is None:
            return []
        return list(self._cache.pre_activations)
