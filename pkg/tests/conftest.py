"""
pytest 공통 fixture
"""

import sys
from pathlib import Path

import numpy as np
import pytest

project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from src.data.synthetic import SynthSpec, generate  # noqa: E402
from src.metric.types import EmbeddingBatch  # noqa: E402


@pytest.fixture
def rng():
    """테스트마다 같은 시드의 generator"""
    return np.random.default_rng(20240607)


@pytest.fixture
def pk_labels():
    """P 개 identity × K 개 샘플 라벨 (identity 순)"""

    def _make(P: int, K: int) -> np.ndarray:
        return np.repeat(np.arange(P), K)

    return _make


@pytest.fixture
def random_batch(pk_labels):
    """정규분포 feature 의 PK 배치 생성기"""

    def _make(P: int = 3, K: int = 3, D: int = 4, seed: int = 0, scale: float = 1.0):
        generator = np.random.default_rng(seed)
        labels = pk_labels(P, K)
        features = generator.standard_normal((labels.size, D)) * scale
        return EmbeddingBatch(features, labels)

    return _make


@pytest.fixture
def two_point_batch():
    """x_1=(0,0), x_2=(1,0)"""
    return EmbeddingBatch.from_arrays([[0.0, 0.0], [1.0, 0.0]], [0, 1])


@pytest.fixture
def small_dataset():
    """4 identity × 6 sample 합성 데이터"""
    return generate(
        SynthSpec(identities=4, samples_per_identity=6, input_dim=3, seed=3)
    )


@pytest.fixture
def random_orthogonal():
    """D×D 랜덤 직교 행렬 (QR 분해)"""

    def _make(dim: int, seed: int = 0) -> np.ndarray:
        generator = np.random.default_rng(seed)
        q, r = np.linalg.qr(generator.standard_normal((dim, dim)))
        return q * np.sign(np.diag(r))

    return _make
