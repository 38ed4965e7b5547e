"""Deterministic end-to-end training loop."""

import json
from dataclasses import dataclass, field
from typing import TextIO

import numpy as np

from symnet.config.settings import TrainConfig
from symnet.data.formats import check_embeddings
from symnet.data.sampling import NegativeSampler
from symnet.errors import DimensionMismatch, EmptyTrainSplit, NonFiniteLoss
from symnet.logging_config import get_logger
from symnet.model.symnet import SymNet
from symnet.models.dataset import DatasetMeta, Split
from symnet.models.matrix import EmbeddingTable, FeatureMatrix
from symnet.nn.optim import sgd_step
from symnet.nn.parameters import backward
from symnet.objectives.batch import NO_PARTNER, LossBatch, batch_loss
from symnet.objectives.losses import LOG_FIELDS
from symnet.training.checkpoint import Checkpoint

logger = get_logger(__name__)


class LossLog:
    """JSON-lines sink for per-step loss breakdowns."""

    def __init__(self, stream: TextIO) -> None:
        self.stream = stream

    def write(self, epoch: int, step: int, values: dict[str, float]) -> None:
        record = {"epoch": epoch, "step": step}
        record.update({name: values[name] for name in LOG_FIELDS})
        self.stream.write(json.dumps(record) + "\n")
        self.stream.flush()


@dataclass
class TrainResult:
    """Final model, its checkpoint and the per-step loss history."""

    model: SymNet
    checkpoint: Checkpoint
    history: list[dict[str, float]] = field(default_factory=list)

    def epoch_means(self) -> list[dict[str, float]]:
        """Mean of every logged term per epoch, in epoch order."""
        by_epoch: dict[int, list[dict[str, float]]] = {}
        for record in self.history:
            by_epoch.setdefault(int(record["epoch"]), []).append(record)
        return [
            {
                "epoch": epoch,
                **{
                    name: float(np.mean([r[name] for r in records]))
                    for name in LOG_FIELDS
                },
            }
            for epoch, records in sorted(by_epoch.items())
        ]


def _check_inputs(
    meta: DatasetMeta,
    features: FeatureMatrix,
    embeds: EmbeddingTable,
    cfg: TrainConfig,
) -> np.ndarray:
    train_rows = meta.split_indices(Split.TRAIN)
    if train_rows.size == 0:
        raise EmptyTrainSplit("The dataset has no train samples")
    if features.count != len(meta.samples) or features.dim != cfg.feat_dim:
        raise DimensionMismatch(
            f"Features are {features.count}x{features.dim}, expected "
            f"{len(meta.samples)}x{cfg.feat_dim}",
            count=features.count,
            dim=features.dim,
            samples=len(meta.samples),
            feat_dim=cfg.feat_dim,
        )
    check_embeddings(embeds, meta, cfg.embed_dim)
    return train_rows


def train(
    meta: DatasetMeta,
    features: FeatureMatrix,
    embeds: EmbeddingTable,
    cfg: TrainConfig,
    loss_log: LossLog | None = None,
    dtype: type = np.float32,
) -> TrainResult:
    """Train every component jointly with plain SGD.

    One generator seeded by ``cfg.seed`` drives initialization, epoch shuffles
    and negative draws, so a run is reproducible bit for bit. Each epoch
    visits every train sample once; the last batch may be partial.

    Raises:
        EmptyTrainSplit: no train samples
        NonFiniteLoss: a loss term became NaN or Inf
    """
    train_rows = _check_inputs(meta, features, embeds, cfg)
    rng = np.random.default_rng(cfg.seed)
    model = SymNet.build(cfg, meta.n_attrs, meta.n_objs, rng, dtype=dtype)
    model.train()
    store = model.store()
    sampler = NegativeSampler(meta)
    attrs = np.array([s.attr for s in meta.samples], dtype=np.int64)
    objs = np.array([s.obj for s in meta.samples], dtype=np.int64)
    table = embeds.data.astype(dtype)
    raw = features.data.astype(dtype)

    logger.info(
        "training_started",
        samples=int(train_rows.size),
        epochs=cfg.epochs,
        batch_size=cfg.batch_size,
        lr=cfg.lr,
        seed=cfg.seed,
        parameters=store.num_values(),
    )
    history: list[dict[str, float]] = []
    step = 0
    for epoch in range(1, cfg.epochs + 1):
        order = rng.permutation(train_rows)
        epoch_records: list[dict[str, float]] = []
        for start in range(0, order.size, cfg.batch_size):
            anchors = order[start : start + cfg.batch_size]
            negatives = sampler.draw_batch(anchors, rng)
            batch = LossBatch.from_anchors(raw, attrs, objs, anchors, negatives)
            breakdown = batch_loss(model, batch, table, cfg)
            step += 1
            bad = breakdown.first_non_finite()
            if bad is not None:
                logger.error("non_finite_loss", term=bad, epoch=epoch, step=step)
                raise NonFiniteLoss(
                    f"Loss term {bad} is not finite at step {step}",
                    term=bad,
                    epoch=epoch,
                    step=step,
                )
            sgd_step(store, backward(breakdown.total, store), cfg.lr)

            values = breakdown.to_dict()
            epoch_records.append(values)
            history.append({"epoch": epoch, "step": step, **values})
            if loss_log is not None and step % cfg.log_every == 0:
                loss_log.write(epoch, step, values)

        means = {
            name: float(np.mean([r[name] for r in epoch_records]))
            for name in LOG_FIELDS
        }
        logger.info("epoch_finished", epoch=epoch, steps=len(epoch_records), **means)

    model.eval()
    checkpoint = Checkpoint.capture(model, epoch=cfg.epochs, rng=rng)
    logger.info("training_finished", epochs=cfg.epochs, steps=step)
    return TrainResult(model=model, checkpoint=checkpoint, history=history)
