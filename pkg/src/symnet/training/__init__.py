"""Training loop, checkpoints and gradient-check problems."""

from symnet.training.checkpoint import (
    Checkpoint,
    load_checkpoint,
    model_from_checkpoint,
    save_checkpoint,
)
from symnet.training.trainer import LossLog, TrainResult, train

__all__ = [
    "Checkpoint",
    "LossLog",
    "TrainResult",
    "load_checkpoint",
    "model_from_checkpoint",
    "save_checkpoint",
    "train",
]
