"""
tests/unit/embedder/test_gradcheck.py

MLP 파라미터까지의 end-to-end gradient 검사
"""

import numpy as np
import pytest

from src.embedder.gradcheck import check_parameter_gradients
from src.embedder.model import MlpModel
from src.metric.losses import LossConfig, LossVariant

SMOOTH_CONFIGS = 20


def _smooth_parameter_reports(variant, seed, count=SMOOTH_CONFIGS, max_attempts=400):
    rng = np.random.default_rng(seed)
    reports = []
    for _ in range(max_attempts):
        if len(reports) == count:
            break
        P, K, D = int(rng.integers(2, 4)), int(rng.integers(2, 4)), int(rng.integers(2, 5))
        labels = np.repeat(np.arange(P), K)
        inputs = rng.standard_normal((labels.size, D))
        model = MlpModel.initialize(D, hidden=[D + 1], output_dim=D, seed=int(rng.integers(2**32)))
        cfg = LossConfig(variant=variant, margin=float(rng.choice([0.5, 0.8, 1.2])))
        report = check_parameter_gradients(model, inputs, labels, cfg, h=1e-5)
        if report.smooth:
            reports.append(report)
    return reports


@pytest.mark.unit
class TestParameterGradients:
    @pytest.mark.parametrize("variant", list(LossVariant))
    def test_small_mlps_agree_with_central_differences(self, variant):
        reports = _smooth_parameter_reports(variant, seed=list(LossVariant).index(variant) + 77)
        assert len(reports) == SMOOTH_CONFIGS
        assert max(r.max_relative_error for r in reports) < 1e-5

    def test_reports_parameter_count(self):
        model = MlpModel.initialize(3, hidden=[4], output_dim=2, seed=0)
        inputs = np.random.default_rng(0).standard_normal((4, 3))
        report = check_parameter_gradients(model, inputs, np.array([0, 0, 1, 1]), LossConfig())
        assert report.coordinates == 3 * 4 + 4 + 4 * 2 + 2

    def test_model_is_not_modified(self):
        model = MlpModel.initialize(3, hidden=[4], output_dim=2, seed=0)
        before = [p.copy() for p in model.parameters()]
        inputs = np.random.default_rng(1).standard_normal((4, 3))
        check_parameter_gradients(model, inputs, np.array([0, 0, 1, 1]), LossConfig())
        for a, b in zip(before, model.parameters()):
            np.testing.assert_array_equal(a, b)

    def test_most_random_points_are_usable(self):
        """weak 성분이 있다고 배치를 버리지 않으므로 대부분의 지점이 검사 대상"""
        usable = _smooth_parameter_reports(LossVariant.TRI_BH, seed=77, count=40, max_attempts=40)
        assert len(usable) >= 20
        assert max(r.max_relative_error for r in usable) < 1e-5

    def test_output_bias_noise_is_not_an_error(self):
        """출력층 bias 의 참 gradient 는 0 (평행이동 불변), 차분 잡음만 남음"""
        model = MlpModel.initialize(3, hidden=[4], output_dim=3, seed=3)
        inputs = np.random.default_rng(3).standard_normal((6, 3))
        labels = np.array([0, 0, 0, 1, 1, 1])
        cfg = LossConfig(variant=LossVariant.TRI_BA, margin=50.0)
        report = check_parameter_gradients(model, inputs, labels, cfg)
        assert report.loss_value > 0.0
        assert report.max_relative_error < 1e-5
