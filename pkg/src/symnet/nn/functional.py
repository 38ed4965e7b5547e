"""Activations, distances and cross-entropy on tensors."""

import numpy as np

from symnet.config.settings import Distance
from symnet.errors import LabelOutOfRange, ShapeMismatch
from symnet.nn import tensor as T
from symnet.nn.tensor import Tensor, TensorLike, as_tensor

COS_EPS = 1e-8


def relu(x: TensorLike) -> Tensor:
    """max(0, x) elementwise."""
    return T.relu(as_tensor(x))


def sigmoid(x: TensorLike) -> Tensor:
    """Logistic function, values in (0, 1) for moderate inputs."""
    return T.sigmoid(as_tensor(x))


def softmax(x: TensorLike, axis: int = -1) -> Tensor:
    """Max-shifted softmax along ``axis``."""
    return T.softmax(as_tensor(x), axis=axis)


def _check_same_shape(u: Tensor, v: Tensor) -> None:
    if u.shape != v.shape:
        raise ShapeMismatch(
            f"Distance operands differ: {u.shape} vs {v.shape}",
            left=list(u.shape),
            right=list(v.shape),
        )


def l2_distance(u: TensorLike, v: TensorLike) -> Tensor:
    """Euclidean norm of u - v over the last axis."""
    u, v = as_tensor(u), as_tensor(v)
    _check_same_shape(u, v)
    return T.norm(u - v, axis=-1)


def distance(
    u: Tensor,
    v: Tensor,
    metric: Distance | str = Distance.L2,
    squared: bool = False,
) -> Tensor:
    """Distance between embeddings over the last axis.

    ``l2`` is the default; ``l1`` and ``cos`` (1 - cosine similarity) exist for
    the distance ablation. ``squared`` squares the result.
    """
    u, v = as_tensor(u), as_tensor(v)
    _check_same_shape(u, v)
    match Distance(metric):
        case Distance.L2:
            d = T.norm(u - v, axis=-1)
        case Distance.L1:
            d = T.absolute(u - v).sum(axis=-1)
        case Distance.COS:
            dot = (u * v).sum(axis=-1)
            denom = T.norm(u, axis=-1) * T.norm(v, axis=-1) + COS_EPS
            d = 1.0 - dot / denom
    return d * d if squared else d


def cross_entropy(logits: Tensor, labels: np.ndarray) -> Tensor:
    """Mean softmax cross-entropy of ``logits`` [B, C] against integer labels.

    Raises:
        LabelOutOfRange: a label is negative or >= C
    """
    labels = np.asarray(labels, dtype=np.int64)
    classes = logits.shape[-1]
    if labels.size and (labels.min() < 0 or labels.max() >= classes):
        raise LabelOutOfRange(
            f"Labels must lie in [0, {classes})",
            classes=classes,
            low=int(labels.min()),
            high=int(labels.max()),
        )
    onehot = np.zeros(logits.shape, dtype=logits.dtype)
    onehot[np.arange(labels.size), labels] = 1
    return -(T.log_softmax(logits, axis=-1) * onehot).sum(axis=-1).mean()
