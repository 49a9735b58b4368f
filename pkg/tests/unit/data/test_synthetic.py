"""
tests/unit/data/test_synthetic.py

합성 identity-cluster 데이터 테스트
"""

import numpy as np
import pytest
from pydantic import ValidationError
from scipy.spatial.distance import pdist

from src.data.synthetic import SynthSpec, generate


@pytest.mark.unit
class TestGenerate:
    def test_smallest_shape_and_labels(self):
        dataset = generate(SynthSpec(identities=2, samples_per_identity=2, input_dim=3))
        assert dataset.features.shape == (4, 3)
        np.testing.assert_array_equal(dataset.labels, [0, 0, 1, 1])
        assert dataset.centroids.shape == (2, 3)

    def test_same_seed_same_data(self):
        spec = SynthSpec(identities=5, samples_per_identity=4, seed=9)
        a, b = generate(spec), generate(spec)
        np.testing.assert_array_equal(a.features, b.features)
        np.testing.assert_array_equal(a.labels, b.labels)

    def test_different_seed_different_data(self):
        a = generate(SynthSpec(seed=1))
        b = generate(SynthSpec(seed=2))
        assert not np.array_equal(a.features, b.features)

    @pytest.mark.parametrize("separation, sigma", [(10.0, 1.0), (3.0, 0.25), (50.0, 2.0)])
    def test_minimum_centroid_separation(self, separation, sigma):
        dataset = generate(
            SynthSpec(identities=12, cluster_separation=separation, noise_sigma=sigma, seed=4)
        )
        closest = pdist(dataset.centroids).min()
        assert closest == pytest.approx(separation * sigma, rel=1e-9)

    def test_vanishing_noise_collapses_on_centroids(self):
        """sigma 가 0 에 가까우면 샘플이 centroid 와 겹침"""
        dataset = generate(
            SynthSpec(identities=3, samples_per_identity=5, noise_sigma=1e-9, cluster_separation=1e9)
        )
        np.testing.assert_allclose(
            dataset.features, dataset.centroids[dataset.labels], rtol=0, atol=1e-7
        )

    def test_default_spec(self):
        spec = SynthSpec()
        assert (spec.identities, spec.samples_per_identity, spec.input_dim) == (16, 32, 8)
        assert spec.cluster_separation == 10.0
        assert generate(spec).size == 512

    @pytest.mark.parametrize(
        "field, value", [("identities", 1), ("samples_per_identity", 1), ("noise_sigma", 0.0)]
    )
    def test_rejects_degenerate_spec(self, field, value):
        with pytest.raises(ValidationError):
            SynthSpec(**{field: value})
