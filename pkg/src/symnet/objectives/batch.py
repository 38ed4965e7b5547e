"""Assembly of the full training objective for one mini-batch."""

from contextlib import nullcontext
from dataclasses import dataclass

import numpy as np

from symnet.config.settings import TrainConfig
from symnet.data.sampling import NO_NEGATIVE
from symnet.inference.rmd import rmd_distances
from symnet.model.symnet import SymNet
from symnet.nn.tensor import as_tensor, no_grad, take_rows
from symnet.objectives.losses import (
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

NO_PARTNER = NO_NEGATIVE


@dataclass(frozen=True)
class LossBatch:
    """Feature rows with labels and, per row, the partner attribute.

    An anchor and its negative appear as two rows whose partners point at each
    other's attribute; rows without a negative have ``NO_PARTNER``.
    """

    features: np.ndarray
    attrs: np.ndarray
    objs: np.ndarray
    partners: np.ndarray

    @classmethod
    def from_anchors(
        cls,
        features: np.ndarray,
        attrs: np.ndarray,
        objs: np.ndarray,
        anchors: np.ndarray,
        negatives: np.ndarray,
    ) -> "LossBatch":
        """Rows for ``anchors`` followed by their negatives (role-swapped).

        ``negatives[k]`` is the row position of anchor k's negative or
        ``NO_PARTNER``; features/attrs/objs are indexed by row position.
        """
        anchors = np.asarray(anchors, dtype=np.int64)
        negatives = np.asarray(negatives, dtype=np.int64)
        has_neg = negatives != NO_PARTNER
        neg_rows = negatives[has_neg]
        rows = np.concatenate([anchors, neg_rows])
        partners = np.full(rows.size, NO_PARTNER, dtype=np.int64)
        partners[: anchors.size][has_neg] = attrs[neg_rows]
        partners[anchors.size :] = attrs[anchors[has_neg]]
        return cls(
            features=np.asarray(features[rows]),
            attrs=np.asarray(attrs[rows], dtype=np.int64),
            objs=np.asarray(objs[rows], dtype=np.int64),
            partners=partners,
        )

    @property
    def size(self) -> int:
        return int(self.attrs.size)

    @property
    def paired_rows(self) -> np.ndarray:
        return np.flatnonzero(self.partners != NO_PARTNER)


def batch_loss(
    model: SymNet, batch: LossBatch, embeds: np.ndarray, cfg: TrainConfig
) -> LossBreakdown:
    """Full weighted objective for one batch in the model's current mode.

    Paired rows contribute every term; unpaired rows only the classification
    of the original embedding and the triplet term.
    """
    f = model.proj(batch.features)
    metric, squared = cfg.dist, cfg.squared_dist
    paired = batch.paired_rows
    zero = as_tensor(0.0, like=f)

    graph = None
    sym = clo = inv = com = zero
    if paired.size:
        graph = AxiomGraph(
            take_rows(f, paired),
            batch.attrs[paired],
            batch.partners[paired],
            embeds,
            model.con,
            model.decon,
        )
        sym = loss_sym(graph, metric, squared)
        clo = loss_clo(graph, metric, squared)
        inv = loss_inv(graph, metric, squared)
        com = loss_com(graph, metric, squared)

    cls_a, cls_o = loss_cls(
        f,
        batch.attrs,
        batch.objs,
        model.attr_clf,
        model.obj_clf,
        graph,
        batch.objs[paired] if graph is not None else None,
    )

    # with a zero weight the term is still measured for the log, off the graph
    with nullcontext() if cfg.weights.tri else no_grad():
        d_plus, d_minus = rmd_distances(
            f, embeds, model.con, model.decon, metric, squared
        )
        tri = loss_triplet(d_plus, d_minus, batch.attrs, cfg.weights.margin)

    return loss_total(sym, clo, inv, com, cls_a, cls_o, tri, cfg.weights)
