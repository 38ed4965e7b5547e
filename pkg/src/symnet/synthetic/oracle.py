"""Ground-truth checks against synthetic geometry."""

import numpy as np

from symnet.config.settings import Distance
from symnet.data.sampling import NegativeSampler
from symnet.evaluation.czsl import as_model, score_split
from symnet.logging_config import get_logger
from symnet.model.symnet import SymNet
from symnet.model.transforms import Transform
from symnet.models.dataset import DatasetMeta, Split
from symnet.models.matrix import EmbeddingTable, FeatureMatrix
from symnet.nn.tensor import Tensor, no_grad
from symnet.objectives.losses import AxiomGraph, loss_clo, loss_com, loss_inv, loss_sym
from symnet.synthetic.generator import SynthTruth
from symnet.training.checkpoint import Checkpoint

logger = get_logger(__name__)

AXIOMS = ("sym", "clo", "inv", "com")


def decode_attribute(
    truth: SynthTruth, latent: np.ndarray, obj: int | None = None
) -> int:
    """Attribute whose composed centre lies nearest to ``latent``.

    With a known object only that object's centres compete.
    """
    latent = np.asarray(latent, dtype=np.float64)
    protos = truth.prototypes if obj is None else truth.prototypes[obj : obj + 1]
    centres = protos[None, :, :] + truth.offsets[:, None, :]
    dist = np.linalg.norm(centres - latent, axis=-1)
    return int(np.unravel_index(np.argmin(dist), dist.shape)[0])


def oracle_rmd_sign(
    truth: SynthTruth, latent: np.ndarray, attr: int, obj: int | None = None
) -> bool:
    """Whether the sample was generated with ``attr``."""
    return decode_attribute(truth, latent, obj) == attr


def nearest_offset_accuracy(
    truth: SynthTruth, latents: np.ndarray, attrs: np.ndarray, objs: np.ndarray
) -> float:
    """Attribute accuracy of the nearest-offset rule given the true object."""
    residual = np.asarray(latents) - truth.prototypes[np.asarray(objs)]
    dist = np.linalg.norm(residual[:, None, :] - truth.offsets[None, :, :], axis=-1)
    return float(np.mean(np.argmin(dist, axis=1) == np.asarray(attrs)))


def oracle_agreement(
    source: SymNet | Checkpoint,
    meta: DatasetMeta,
    features: FeatureMatrix,
    embeds: EmbeddingTable,
    truth: SynthTruth,
    split: Split = Split.TEST,
) -> float:
    """Share of (sample, attribute) decisions where d >= 0 matches the oracle."""
    model = as_model(source)
    scores = score_split(model, meta, features, embeds, Split(split))
    if len(scores) == 0:
        return 0.0
    oracle = np.zeros_like(scores.d, dtype=bool)
    for row, (index, obj) in enumerate(zip(scores.rows, scores.objs)):
        oracle[row, decode_attribute(truth, truth.latents[index], int(obj))] = True
    rate = float(np.mean((scores.d >= 0) == oracle))
    logger.info("oracle_agreement", split=Split(split).value, rate=rate)
    return rate


def axiom_residuals_for(
    f: Tensor,
    attr_i: np.ndarray,
    attr_j: np.ndarray,
    embeds: np.ndarray,
    con: Transform,
    decon: Transform,
    metric: Distance | str = Distance.L2,
    squared: bool = False,
) -> dict[str, float]:
    """Mean axiom losses with gradients disabled."""
    with no_grad():
        graph = AxiomGraph(f, attr_i, attr_j, embeds, con, decon)
        terms = {
            "sym": loss_sym(graph, metric, squared),
            "clo": loss_clo(graph, metric, squared),
            "inv": loss_inv(graph, metric, squared),
            "com": loss_com(graph, metric, squared),
        }
    return {name: float(value.data) for name, value in terms.items()}


def axiom_residuals(
    source: SymNet | Checkpoint,
    meta: DatasetMeta,
    features: FeatureMatrix,
    embeds: EmbeddingTable,
    split: Split = Split.TEST,
    seed: int = 0,
) -> dict[str, float]:
    """Axiom losses over a split, one train negative drawn per sample.

    Samples whose object has no train sample with another attribute are
    skipped.
    """
    model = as_model(source)
    rng = np.random.default_rng(seed)
    sampler = NegativeSampler(meta)
    rows, partners = [], []
    for index in meta.split_indices(Split(split)):
        anchor = meta.samples[index]
        if sampler.has_negative(anchor):
            rows.append(index)
            partners.append(meta.samples[sampler.draw(anchor, rng)].attr)
    if not rows:
        return dict.fromkeys(AXIOMS, 0.0)
    with no_grad():
        f = model.proj(features.data[np.array(rows)].astype(model.dtype))
    residuals = axiom_residuals_for(
        f,
        np.array([meta.samples[r].attr for r in rows]),
        np.array(partners),
        embeds.data,
        model.con,
        model.decon,
        model.cfg.dist,
        model.cfg.squared_dist,
    )
    logger.info(
        "axiom_residuals", split=Split(split).value, samples=len(rows), **residuals
    )
    return residuals
