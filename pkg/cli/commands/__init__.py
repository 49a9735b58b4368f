from .compare import compare
from .evaluate import eval_command, rerank
from .gradcheck import gradcheck
from .synth import synth
from .train import train

__all__ = ["compare", "eval_command", "rerank", "gradcheck", "synth", "train"]
