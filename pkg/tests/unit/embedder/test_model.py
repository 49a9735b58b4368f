"""
tests/unit/embedder/test_model.py

MLP forward/backward 테스트
"""

import numpy as np
import pytest

from exceptions import DCAValidationError
from src.embedder.model import DEFAULT_OUTPUT_DIM, MlpModel


def _loop_forward(model: MlpModel, inputs: np.ndarray) -> np.ndarray:
    """층/원소 단위 반복문으로 계산한 forward"""
    out = []
    last = len(model.weights) - 1
    for row in inputs:
        hidden = list(row)
        for index, (w, b) in enumerate(zip(model.weights, model.biases)):
            nxt = []
            for j in range(w.shape[1]):
                z = b[j] + sum(hidden[i] * w[i, j] for i in range(w.shape[0]))
                nxt.append(max(z, 0.0) if index < last else z)
            hidden = nxt
        if model.normalize_output:
            norm = max(np.sqrt(sum(v * v for v in hidden)), 1e-12)
            hidden = [v / norm for v in hidden]
        out.append(hidden)
    return np.array(out)


def _numeric_parameter_grads(model, inputs, upstream, h=1e-6):
    params = [p.copy() for p in model.parameters()]
    grads = []
    for param in params:
        numeric = np.zeros_like(param)
        for flat in range(param.size):
            original = param.flat[flat]
            param.flat[flat] = original + h
            plus = (model.with_parameters(params).embed(inputs) * upstream).sum()
            param.flat[flat] = original - h
            minus = (model.with_parameters(params).embed(inputs) * upstream).sum()
            param.flat[flat] = original
            numeric.flat[flat] = (plus - minus) / (2 * h)
        grads.append(numeric)
    return grads


@pytest.mark.unit
class TestMlpForward:
    """forward 테스트"""

    def test_zero_weights_give_zero_output(self):
        """가중치와 bias 가 모두 0 이면 출력도 0"""
        model = MlpModel(
            weights=[np.zeros((3, 5)), np.zeros((5, 2))],
            biases=[np.zeros(5), np.zeros(2)],
        )
        out = model.embed(np.random.default_rng(0).standard_normal((4, 3)))
        assert out.shape == (4, 2)
        assert np.all(out == 0.0)

    def test_single_identity_layer(self):
        """출력층 하나짜리 항등 모델은 입력을 그대로 돌려줌"""
        model = MlpModel(weights=[np.eye(3)], biases=[np.zeros(3)])
        inputs = np.random.default_rng(1).standard_normal((5, 3))
        np.testing.assert_array_equal(model.embed(inputs), inputs)

    @pytest.mark.parametrize("normalize", [False, True])
    def test_matches_loop_oracle(self, normalize):
        model = MlpModel.initialize(4, hidden=[6, 5], output_dim=3, seed=7, normalize_output=normalize)
        inputs = np.random.default_rng(2).standard_normal((6, 4))
        np.testing.assert_allclose(model.embed(inputs), _loop_forward(model, inputs), rtol=1e-12, atol=1e-14)

    def test_normalized_rows_have_unit_norm(self):
        model = MlpModel.initialize(4, hidden=[8], output_dim=5, seed=3, normalize_output=True)
        out = model.embed(np.random.default_rng(3).standard_normal((10, 4)))
        np.testing.assert_allclose(np.linalg.norm(out, axis=1), 1.0, rtol=1e-12)

    def test_initialize_shapes(self):
        model = MlpModel.initialize(8, hidden=[64])
        assert model.widths == [8, 64, DEFAULT_OUTPUT_DIM]
        assert all(np.all(b == 0.0) for b in model.biases)

    def test_initialize_is_deterministic(self):
        a = MlpModel.initialize(5, hidden=[7], output_dim=3, seed=11)
        b = MlpModel.initialize(5, hidden=[7], output_dim=3, seed=11)
        for pa, pb in zip(a.parameters(), b.parameters()):
            np.testing.assert_array_equal(pa, pb)

    def test_rejects_wrong_input_width(self):
        model = MlpModel.initialize(4, hidden=[3], output_dim=2)
        with pytest.raises(DCAValidationError):
            model.embed(np.zeros((2, 5)))

    def test_rejects_mismatched_layers(self):
        with pytest.raises(DCAValidationError):
            MlpModel(weights=[np.zeros((3, 4)), np.zeros((5, 2))], biases=[np.zeros(4), np.zeros(2)])

    def test_rejects_non_finite_parameters(self):
        with pytest.raises(DCAValidationError):
            MlpModel(weights=[np.array([[np.nan]])], biases=[np.zeros(1)])


@pytest.mark.unit
class TestMlpBackward:
    """backward 테스트"""

    def test_zero_upstream_gives_zero_gradients(self):
        model = MlpModel.initialize(3, hidden=[4], output_dim=2, seed=0)
        out = model.forward(np.random.default_rng(0).standard_normal((5, 3)))
        grads = model.backward(np.zeros_like(out))
        assert all(np.all(g == 0.0) for g in grads.parameters())
        assert np.all(grads.inputs == 0.0)

    def test_linear_layer_closed_form(self):
        """출력층 하나면 dW = Xᵀ G, db = Σ G, dX = G Wᵀ"""
        rng = np.random.default_rng(4)
        w, b = rng.standard_normal((3, 2)), rng.standard_normal(2)
        model = MlpModel(weights=[w], biases=[b])
        inputs = rng.standard_normal((5, 3))
        upstream = rng.standard_normal((5, 2))
        model.forward(inputs)
        grads = model.backward(upstream)
        np.testing.assert_allclose(grads.weights[0], inputs.T @ upstream, rtol=1e-12)
        np.testing.assert_allclose(grads.biases[0], upstream.sum(axis=0), rtol=1e-12)
        np.testing.assert_allclose(grads.inputs, upstream @ w.T, rtol=1e-12)

    @pytest.mark.parametrize("normalize", [False, True])
    def test_matches_central_differences(self, normalize):
        """랜덤 upstream 에 대한 Σ(out·G) 의 파라미터 gradient"""
        rng = np.random.default_rng(5)
        model = MlpModel.initialize(3, hidden=[5], output_dim=4, seed=9, normalize_output=normalize)
        inputs = rng.standard_normal((6, 3))
        upstream = rng.standard_normal((6, 4))

        model.forward(inputs)
        assert all(np.abs(z).min() > 1e-4 for z in model.pre_activations()[:-1])
        analytic = model.backward(upstream).parameters()
        numeric = _numeric_parameter_grads(model, inputs, upstream)
        for a, n in zip(analytic, numeric):
            np.testing.assert_allclose(a, n, rtol=1e-6, atol=1e-8)

    def test_backward_without_forward_raises(self):
        model = MlpModel.initialize(3, hidden=[4], output_dim=2)
        model.embed(np.zeros((2, 3)))
        with pytest.raises(DCAValidationError):
            model.backward(np.zeros((2, 2)))

    def test_upstream_shape_is_checked(self):
        model = MlpModel.initialize(3, hidden=[4], output_dim=2)
        model.forward(np.zeros((2, 3)))
        with pytest.raises(DCAValidationError):
            model.backward(np.zeros((3, 2)))

    def test_with_parameters_does_not_alias(self):
        model = MlpModel.initialize(3, hidden=[4], output_dim=2, seed=1)
        clone = model.copy()
        clone.weights[0][0, 0] += 1.0
        assert model.weights[0][0, 0] != clone.weights[0][0, 0]
