"""
벡터화 구현의 속도 테스트 (반복문 oracle 과의 일치 포함)
"""

import time

import numpy as np
import pytest

from src.metric.core import dca_distances, gaussian_similarity, jaccard_distances, pairwise_distances
from src.metric.gradients import finite_difference_check
from src.metric.losses import LossConfig, LossVariant, loss_forward
from src.metric.types import EmbeddingBatch
from tests.oracles import loop_dca, loop_jaccard, loop_loss

BATCHES = 1000


def _random_batches(seed: int):
    rng = np.random.default_rng(seed)
    batches = []
    for _ in range(BATCHES):
        P, K, D = int(rng.integers(2, 5)), int(rng.integers(2, 5)), int(rng.integers(1, 9))
        labels = np.repeat(np.arange(P), K)
        batches.append(EmbeddingBatch(rng.standard_normal((labels.size, D)), labels))
    return batches


@pytest.mark.performance
class TestMetricPerformance:
    def test_thousand_batches_match_oracle(self):
        """N ≤ 16, D ≤ 8 배치 1000 개: 10초 이내, oracle 과 1e-10 이내로 일치"""
        batches = _random_batches(1000)

        start = time.perf_counter()
        results = []
        for batch in batches:
            jaccard = jaccard_distances(gaussian_similarity(pairwise_distances(batch)))
            dca = dca_distances(batch, 0.5).dca
            losses = [loss_forward(batch, LossConfig(variant=v)).value for v in LossVariant]
            results.append((jaccard, dca, losses))
        assert time.perf_counter() - start < 10.0

        for batch, (jaccard, dca, losses) in zip(batches, results):
            np.testing.assert_allclose(jaccard, loop_jaccard(batch.features), rtol=0, atol=1e-10)
            np.testing.assert_allclose(dca, loop_dca(batch.features, 0.5), rtol=0, atol=1e-10)
            for variant, value in zip(LossVariant, losses):
                expected = loop_loss(batch.features, batch.labels, variant.value, 1.2, 0.5)
                assert value == pytest.approx(expected, rel=0, abs=1e-10)

    def test_finite_difference_runtime(self):
        """P=8, K=4, D=16 배치의 중앙 차분 검사가 60초 이내"""
        rng = np.random.default_rng(7)
        labels = np.repeat(np.arange(8), 4)
        batch = EmbeddingBatch(rng.standard_normal((32, 16)), labels)
        start = time.perf_counter()
        report = finite_difference_check(batch, LossConfig(variant=LossVariant.DCA_BA))
        assert time.perf_counter() - start < 60.0
        assert report.coordinates == 32 * 16
