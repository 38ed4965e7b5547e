"""Relative moving distance and the probabilistic attribute/object/pair heads."""

from dataclasses import dataclass

import numpy as np

from symnet.config.settings import Distance
from symnet.errors import EmptyCandidateSet, NonPositiveGamma, ShapeMismatch
from symnet.model.classifiers import MlpClassifier
from symnet.model.transforms import Transform
from symnet.models.dataset import Pair, PairMask
from symnet.nn import functional as F
from symnet.nn.tensor import Tensor, as_tensor, broadcast_to, no_grad, reshape


def rmd_distances(
    f: Tensor,
    embeds: np.ndarray,
    con: Transform,
    decon: Transform,
    metric: Distance | str = Distance.L2,
    squared: bool = False,
) -> tuple[Tensor, Tensor]:
    """d+ and d- of every sample against every attribute, in one batched pass.

    ``f`` is [d] or [B, d]; the transforms see a [B, n, d] grid. Returns
    tensors of shape [n] or [B, n].
    """
    single = f.ndim == 1
    batch = reshape(f, (1, f.shape[0])) if single else f
    rows, dim = batch.shape
    embeds = np.asarray(embeds, dtype=batch.dtype)
    if embeds.ndim != 2:
        raise ShapeMismatch("Embeddings must be a 2-D table", shape=list(embeds.shape))
    n = embeds.shape[0]
    grid_f = broadcast_to(reshape(batch, (rows, 1, dim)), (rows, n, dim))
    grid_e = Tensor(np.broadcast_to(embeds, (rows, n, embeds.shape[1])))
    d_plus = F.distance(grid_f, con(grid_f, grid_e), metric, squared)
    d_minus = F.distance(grid_f, decon(grid_f, grid_e), metric, squared)
    if single:
        return reshape(d_plus, (n,)), reshape(d_minus, (n,))
    return d_plus, d_minus


@dataclass(frozen=True)
class RmdResult:
    """Per-attribute moving distances for one sample ([n]) or a batch ([B, n])."""

    d_plus: np.ndarray
    d_minus: np.ndarray
    p_attr: np.ndarray | None = None

    @property
    def d(self) -> np.ndarray:
        return self.d_minus - self.d_plus

    def has_attribute(self) -> np.ndarray:
        """Sign rule: d >= 0 means the attribute is present."""
        return self.d >= 0

    def with_probs(self, gamma: float) -> "RmdResult":
        return RmdResult(self.d_plus, self.d_minus, attr_probs(self.d, gamma))


def rmd_scores(
    f: Tensor | np.ndarray,
    embeds: np.ndarray,
    con: Transform,
    decon: Transform,
    metric: Distance | str = Distance.L2,
    squared: bool = False,
) -> RmdResult:
    """Moving distances with gradients disabled; transforms should be in eval mode."""
    with no_grad():
        d_plus, d_minus = rmd_distances(
            as_tensor(f), embeds, con, decon, metric, squared
        )
    return RmdResult(d_plus.numpy(), d_minus.numpy())


def attr_probs(d: np.ndarray, gamma: float) -> np.ndarray:
    """sigmoid(gamma * d).

    Raises:
        NonPositiveGamma: gamma <= 0
    """
    if not gamma > 0:
        raise NonPositiveGamma(f"gamma must be positive, got {gamma}", gamma=gamma)
    d = np.asarray(d)
    return 0.5 * (np.tanh(0.5 * gamma * d) + 1.0)


def object_probs(f: Tensor | np.ndarray, obj_clf: MlpClassifier) -> np.ndarray:
    """Softmax over the object logits, [m] or [B, m]."""
    with no_grad():
        return obj_clf.probs(f).numpy()


@dataclass(frozen=True)
class RankedPair:
    attr: int
    obj: int
    score: float


@dataclass(frozen=True)
class PairScores:
    """p_attr[i] * p_obj[j] over an n x m grid, filtered by a candidate mask.

    Masked cells keep their product value; they are only excluded at query time.
    """

    p_pair: np.ndarray
    mask: PairMask

    def topk(self, k: int) -> list[RankedPair]:
        """Best ``k`` candidates, ties broken by row-major index.

        Raises:
            EmptyCandidateSet: the mask admits nothing
        """
        flat_mask = self.mask.mask.ravel()
        cells = np.flatnonzero(flat_mask)
        if cells.size == 0:
            raise EmptyCandidateSet("No candidate pairs under the mask")
        scores = self.p_pair.ravel()[cells]
        order = cells[np.lexsort((cells, -scores))][:k]
        m = self.p_pair.shape[1]
        return [
            RankedPair(int(c // m), int(c % m), float(self.p_pair.ravel()[c]))
            for c in order
        ]

    def best(self) -> Pair:
        top = self.topk(1)[0]
        return (top.attr, top.obj)


def pair_scores(
    p_attr: np.ndarray, p_obj: np.ndarray, mask: PairMask
) -> PairScores:
    """Outer product of attribute and object probabilities.

    Raises:
        ShapeMismatch: vector lengths disagree with the mask
    """
    p_attr, p_obj = np.asarray(p_attr), np.asarray(p_obj)
    if (p_attr.shape[-1], p_obj.shape[-1]) != mask.shape:
        raise ShapeMismatch(
            f"Scores {p_attr.shape[-1]}x{p_obj.shape[-1]} vs mask {mask.shape}",
            n=p_attr.shape[-1],
            m=p_obj.shape[-1],
            mask=list(mask.shape),
        )
    return PairScores(np.outer(p_attr, p_obj), mask)


def pair_score_grid(p_attr: np.ndarray, p_obj: np.ndarray) -> np.ndarray:
    """Batched outer products, [B, n] x [B, m] -> [B, n, m]."""
    return p_attr[:, :, None] * p_obj[:, None, :]
