from .core import (
    blend_distances,
    dca_distances,
    gaussian_similarity,
    jaccard_distances,
    pairwise_distances,
)
from .gradients import (
    FiniteDifferenceReport,
    GradientBuffer,
    finite_difference_check,
    loss_backward,
)
from .losses import (
    ABLATION_LAMBDAS,
    ABLATION_MARGINS,
    LossConfig,
    LossOutput,
    LossVariant,
    hinge,
    loss_forward,
)
from .mining import (
    MiningVariant,
    PkSpec,
    TripletSet,
    enumerate_batch_all,
    expected_batch_all_count,
    mine_batch_hard,
    pk_sample,
)
from .types import DcaDistances, EmbeddingBatch

__all__ = [
    "blend_distances",
    "dca_distances",
    "gaussian_similarity",
    "jaccard_distances",
    "pairwise_distances",
    "FiniteDifferenceReport",
    "GradientBuffer",
    "finite_difference_check",
    "loss_backward",
    "ABLATION_LAMBDAS",
    "ABLATION_MARGINS",
    "LossConfig",
    "LossOutput",
    "LossVariant",
    "hinge",
    "loss_forward",
    "MiningVariant",
    "PkSpec",
    "TripletSet",
    "enumerate_batch_all",
    "expected_batch_all_count",
    "mine_batch_hard",
    "pk_sample",
    "DcaDistances",
    "EmbeddingBatch",
]
