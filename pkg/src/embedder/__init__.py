from .checkpoint import read_checkpoint, write_checkpoint
from .gradcheck import check_parameter_gradients
from .model import MlpModel, ModelGradients
from .optimizer import AdamState, adam_step, default_milestones, lr_at
from .trainer import StepRecord, TrainConfig, TrainResult, train

__all__ = [
    "read_checkpoint",
    "write_checkpoint",
    "check_parameter_gradients",
    "MlpModel",
    "ModelGradients",
    "AdamState",
    "adam_step",
    "default_milestones",
    "lr_at",
    "StepRecord",
    "TrainConfig",
    "TrainResult",
    "train",
]
