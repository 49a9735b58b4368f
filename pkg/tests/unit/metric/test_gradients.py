"""
tests/unit/metric/test_gradients.py

해석적 backward 와 중앙 차분 검사 테스트
"""

import numpy as np
import pytest

from exceptions import DCAValidationError
from src.metric.gradients import (
    FiniteDifferenceReport,
    agreement_errors,
    central_differences,
    finite_difference_check,
    loss_backward,
    make_loss_function,
    relative_errors,
    rounding_floor,
)
from src.metric.losses import LossConfig, LossVariant, loss_forward
from src.metric.types import EmbeddingBatch

ALL_VARIANTS = list(LossVariant)
SMOOTH_CONFIGS = 100


def _random_case(rng):
    P, K, D = int(rng.integers(2, 4)), int(rng.integers(2, 4)), int(rng.integers(2, 5))
    labels = np.repeat(np.arange(P), K)
    return EmbeddingBatch(rng.standard_normal((labels.size, D)), labels)


def _smooth_reports(variant, count, seed, detach=False, max_attempts=None):
    """kink 에서 떨어진 배치만 골라 count 개의 리포트 수집"""
    rng = np.random.default_rng(seed)
    reports = []
    attempts = 0
    max_attempts = max_attempts or count * 5
    while len(reports) < count and attempts < max_attempts:
        attempts += 1
        cfg = LossConfig(
            variant=variant,
            lam=float(rng.choice([0.5, 0.8])),
            margin=float(rng.choice([0.5, 0.8, 1.2])),
            detach_context=detach,
        )
        report = finite_difference_check(_random_case(rng), cfg, h=1e-5)
        if report.smooth:
            reports.append(report)
    return reports


@pytest.mark.unit
class TestLossBackward:
    def test_inactive_hinges_give_zero_gradient(self):
        features = np.array([[0.0], [0.1], [50.0], [50.1]])
        batch = EmbeddingBatch(features, [0, 0, 1, 1])
        for variant in ALL_VARIANTS:
            buffer = loss_backward(batch, LossConfig(variant=variant))
            assert buffer.loss_value == 0.0
            assert np.all(buffer.grad == 0.0)

    @pytest.mark.parametrize("variant", ALL_VARIANTS)
    def test_loss_value_matches_forward_exactly(self, random_batch, variant):
        batch = random_batch(P=3, K=3, D=3, seed=2)
        cfg = LossConfig(variant=variant)
        assert loss_backward(batch, cfg).loss_value == loss_forward(batch, cfg).value

    @pytest.mark.parametrize("variant", ALL_VARIANTS)
    def test_column_sums_vanish(self, random_batch, variant):
        for seed in range(10):
            batch = random_batch(P=3, K=3, D=4, seed=seed)
            grad = loss_backward(batch, LossConfig(variant=variant)).grad
            assert grad.shape == batch.features.shape
            np.testing.assert_allclose(grad.sum(axis=0), 0.0, atol=1e-10)

    @pytest.mark.parametrize("variant", ALL_VARIANTS)
    def test_rotation_generator_is_flat(self, random_batch, rng, variant):
        batch = random_batch(P=3, K=3, D=3, seed=5)
        grad = loss_backward(batch, LossConfig(variant=variant)).grad
        for _ in range(5):
            a = rng.standard_normal((3, 3))
            skew = a - a.T
            directional = float((grad * (batch.features @ skew)).sum())
            assert abs(directional) < 1e-8

    def test_coincident_points_have_finite_gradient(self):
        features = np.array([[0.0, 0.0], [0.0, 0.0], [0.5, 0.0], [0.6, 0.1]])
        batch = EmbeddingBatch(features, [0, 0, 1, 1])
        for variant in ALL_VARIANTS:
            grad = loss_backward(batch, LossConfig(variant=variant)).grad
            assert np.isfinite(grad).all()

    def test_detached_gradient_differs_from_full(self, random_batch):
        batch = random_batch(P=3, K=3, D=3, seed=12)
        full = loss_backward(batch, LossConfig(variant=LossVariant.DCA_BA)).grad
        detached = loss_backward(
            batch, LossConfig(variant=LossVariant.DCA_BA, detach_context=True)
        ).grad
        assert np.abs(full - detached).max() > 1e-6

    def test_detach_has_no_effect_on_tri(self, random_batch):
        batch = random_batch(P=2, K=3, D=2, seed=1)
        plain = loss_backward(batch, LossConfig(variant=LossVariant.TRI_BA)).grad
        detached = loss_backward(
            batch, LossConfig(variant=LossVariant.TRI_BA, detach_context=True)
        ).grad
        np.testing.assert_array_equal(plain, detached)


@pytest.mark.unit
class TestFiniteDifferenceHelpers:
    def test_central_differences_of_quadratic(self):
        point = np.array([[1.0, -2.0], [0.5, 3.0]])
        numeric = central_differences(lambda x: float((x**2).sum()), point, 1e-5)
        np.testing.assert_allclose(numeric, 2.0 * point, rtol=1e-9)

    def test_threaded_differences_match_serial(self):
        point = np.random.default_rng(0).standard_normal((4, 3))
        fn = lambda x: float(np.sin(x).sum())  # noqa: E731
        np.testing.assert_array_equal(
            central_differences(fn, point, 1e-5, n_jobs=1),
            central_differences(fn, point, 1e-5, n_jobs=2),
        )

    def test_relative_error_floor(self):
        errors = relative_errors(np.array([0.0, 1.0, 1e-12]), np.array([0.0, 1.0 + 1e-6, 0.0]))
        assert errors[0] == 0.0
        assert errors[1] == pytest.approx(1e-6 / (1.0 + 1e-6))
        assert errors[2] == pytest.approx(1e-4)

    def test_rounding_noise_on_zero_gradient_is_ignored(self):
        """참값 0 인 성분의 차분 잡음 (~1e-11) 은 오차로 세지 않음"""
        analytic = np.array([0.0, 1.0, 1e-3])
        numeric = np.array([4e-11, 1.0 + 1e-6, 1e-3 + 3e-11])
        assert relative_errors(analytic, numeric)[0] > 1e-3
        errors = agreement_errors(analytic, numeric, rounding_floor(1.0, 1e-5))
        assert errors[0] == 0.0
        assert errors[1] == pytest.approx(1e-6 / (1.0 + 1e-6))
        assert errors[2] == 0.0

    def test_rounding_floor_scales_with_loss_and_step(self):
        base = rounding_floor(1.0, 1e-5)
        assert 1e-10 < base < 1e-7
        assert rounding_floor(0.01, 1e-5) == base
        assert rounding_floor(10.0, 1e-5) == pytest.approx(10.0 * base)
        assert rounding_floor(1.0, 1e-6) == pytest.approx(10.0 * base)

    def test_weak_coordinates_do_not_block_smoothness(self):
        report = FiniteDifferenceReport(
            max_relative_error=0.0,
            touched_kink=False,
            weak_coordinates=3,
            coordinates=10,
            loss_value=1.0,
        )
        assert report.smooth
        kinked = FiniteDifferenceReport(0.0, True, 0, 10, 1.0)
        assert not kinked.smooth

    @pytest.mark.parametrize("h", [1e-9, 1e-2])
    def test_step_outside_range_rejected(self, random_batch, h):
        with pytest.raises(DCAValidationError):
            finite_difference_check(random_batch(), LossConfig(), h=h)

    def test_detached_loss_function_freezes_context(self, random_batch):
        batch = random_batch(P=2, K=2, D=2, seed=3)
        cfg = LossConfig(variant=LossVariant.DCA_BA, detach_context=True)
        frozen = make_loss_function(batch, cfg)
        assert frozen(batch.features) == loss_forward(batch, cfg).value


@pytest.mark.unit
class TestFiniteDifferenceCheck:
    def test_zero_loss_batch(self):
        features = np.array([[0.0, 0.0], [0.1, 0.0], [40.0, 0.0], [40.1, 0.0]])
        batch = EmbeddingBatch(features, [0, 0, 1, 1])
        for variant in ALL_VARIANTS:
            report = finite_difference_check(batch, LossConfig(variant=variant))
            assert report.max_relative_error == 0.0
            assert report.loss_value == 0.0

    @pytest.mark.parametrize("variant", [LossVariant.TRI_BH, LossVariant.TRI_BA])
    def test_tri_chain_is_tight(self, variant):
        reports = _smooth_reports(variant, 20, seed=100, detach=True)
        assert len(reports) == 20
        assert max(r.max_relative_error for r in reports) < 1e-6

    @pytest.mark.parametrize("variant", ALL_VARIANTS)
    def test_smooth_configurations(self, variant):
        reports = _smooth_reports(variant, SMOOTH_CONFIGS, seed=ALL_VARIANTS.index(variant) + 1000)
        assert len(reports) == SMOOTH_CONFIGS
        assert max(r.max_relative_error for r in reports) < 1e-5

    @pytest.mark.parametrize("variant", [LossVariant.DCA_BH, LossVariant.DCA_BA])
    def test_detached_chain(self, variant):
        reports = _smooth_reports(variant, 30, seed=7, detach=True)
        assert len(reports) == 30
        assert max(r.max_relative_error for r in reports) < 1e-5
