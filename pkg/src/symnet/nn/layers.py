"""Dense layers, batch normalization and the module/parameter registry."""

from __future__ import annotations

from collections.abc import Iterator
from enum import Enum

import numpy as np

from symnet.errors import DegenerateBatch, ShapeMismatch
from symnet.nn.tensor import Tensor, linear, reshape, sqrt


class Mode(str, Enum):
    """Forward mode; only batch normalization depends on it."""

    TRAIN = "train"
    EVAL = "eval"


class Module:
    """Base class: parameters, buffers and children found by attribute order."""

    training: bool = True

    def _members(self) -> Iterator[tuple[str, object]]:
        yield from vars(self).items()

    def named_parameters(self, prefix: str = "") -> Iterator[tuple[str, Tensor]]:
        for name, value in self._members():
            if isinstance(value, Tensor) and value.requires_grad:
                yield prefix + name, value
            elif isinstance(value, Module):
                yield from value.named_parameters(f"{prefix}{name}.")

    def named_buffers(self, prefix: str = "") -> Iterator[tuple[str, Tensor]]:
        for name, value in self._members():
            if isinstance(value, Tensor) and not value.requires_grad:
                yield prefix + name, value
            elif isinstance(value, Module):
                yield from value.named_buffers(f"{prefix}{name}.")

    def modules(self) -> Iterator[Module]:
        yield self
        for _, value in self._members():
            if isinstance(value, Module):
                yield from value.modules()

    def train(self, mode: bool = True) -> Module:
        for module in self.modules():
            module.training = mode
        return self

    def eval(self) -> Module:
        return self.train(False)

    @property
    def mode(self) -> Mode:
        return Mode.TRAIN if self.training else Mode.EVAL


def glorot_uniform(
    rng: np.random.Generator, out_dim: int, in_dim: int, dtype: type = np.float32
) -> np.ndarray:
    """Uniform in +-sqrt(6 / (fan_in + fan_out))."""
    limit = np.sqrt(6.0 / (in_dim + out_dim))
    return rng.uniform(-limit, limit, size=(out_dim, in_dim)).astype(dtype)


class DenseLayer(Module):
    """Affine map y = W x + b."""

    def __init__(
        self,
        in_dim: int,
        out_dim: int,
        rng: np.random.Generator | None = None,
        dtype: type = np.float32,
    ) -> None:
        weight = (
            glorot_uniform(rng, out_dim, in_dim, dtype)
            if rng is not None
            else np.zeros((out_dim, in_dim), dtype=dtype)
        )
        self.weight = Tensor(weight, requires_grad=True)
        self.bias = Tensor(np.zeros(out_dim, dtype=dtype), requires_grad=True)

    @property
    def in_dim(self) -> int:
        return self.weight.shape[1]

    @property
    def out_dim(self) -> int:
        return self.weight.shape[0]

    def __call__(self, x: Tensor) -> Tensor:
        return affine_forward(x, self)


def affine_forward(x: Tensor, layer: DenseLayer) -> Tensor:
    """y = W x + b per row of a vector or batch.

    Raises:
        ShapeMismatch: x's inner dim differs from the layer's in_dim
    """
    return linear(x, layer.weight, layer.bias)


class BatchNorm(Module):
    """Batch normalization state: affine params plus running statistics."""

    def __init__(
        self,
        dim: int,
        eps: float = 1e-5,
        momentum: float = 0.1,
        dtype: type = np.float32,
    ) -> None:
        if eps <= 0:
            raise ValueError("BatchNorm eps must be positive")
        if not 0 < momentum < 1:
            raise ValueError("BatchNorm momentum must lie in (0, 1)")
        self.gamma = Tensor(np.ones(dim, dtype=dtype), requires_grad=True)
        self.beta = Tensor(np.zeros(dim, dtype=dtype), requires_grad=True)
        self.running_mean = Tensor(np.zeros(dim, dtype=dtype))
        self.running_var = Tensor(np.ones(dim, dtype=dtype))
        self.eps = eps
        self.momentum = momentum

    @property
    def dim(self) -> int:
        return self.gamma.shape[0]

    def __call__(self, x: Tensor, mode: Mode | None = None) -> Tensor:
        return batchnorm_forward(x, self, mode or self.mode)


def batchnorm_forward(x: Tensor, state: BatchNorm, mode: Mode | str) -> Tensor:
    """Normalize over all leading axes of ``x``.

    Train mode uses the batch mean and population variance and updates the
    running statistics; eval mode uses the running statistics only.

    Raises:
        DegenerateBatch: fewer than two rows in train mode
        ShapeMismatch: feature width differs from the state
    """
    mode = Mode(mode)
    dim = state.dim
    if x.shape[-1] != dim:
        raise ShapeMismatch(
            f"BatchNorm over {dim} features got width {x.shape[-1]}",
            expected=dim,
            got=x.shape[-1],
        )
    lead = x.shape[:-1]
    flat = reshape(x, (-1, dim))

    if mode is Mode.TRAIN:
        rows = flat.shape[0]
        if rows < 2:
            raise DegenerateBatch(
                "BatchNorm needs at least 2 rows in train mode", rows=rows
            )
        mu = flat.mean(axis=0, keepdims=True)
        centered = flat - mu
        var = (centered * centered).mean(axis=0, keepdims=True)
        normed = centered / sqrt(var + state.eps)
        m = state.momentum
        state.running_mean.data[...] = (1 - m) * state.running_mean.data + m * mu.data[0]
        state.running_var.data[...] = (1 - m) * state.running_var.data + m * var.data[0]
    else:
        scale = np.sqrt(state.running_var.data + state.eps)
        normed = (flat - state.running_mean.data) / scale

    out = normed * state.gamma + state.beta
    return reshape(out, lead + (dim,))
