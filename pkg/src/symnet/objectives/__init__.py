"""Training objectives."""

from symnet.objectives.batch import NO_PARTNER, LossBatch, batch_loss
from symnet.objectives.losses import (
    LOG_FIELDS,
    AxiomGraph,
    LossBreakdown,
    loss_clo,
    loss_cls,
    loss_com,
    loss_inv,
    loss_sym,
    loss_total,
    loss_triplet,
)

__all__ = [
    "LOG_FIELDS",
    "NO_PARTNER",
    "AxiomGraph",
    "LossBatch",
    "LossBreakdown",
    "batch_loss",
    "loss_clo",
    "loss_cls",
    "loss_com",
    "loss_inv",
    "loss_sym",
    "loss_total",
    "loss_triplet",
]
