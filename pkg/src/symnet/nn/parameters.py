"""Named parameter registry and gradient extraction."""

from __future__ import annotations

from collections.abc import Iterator, Mapping

import numpy as np

from symnet.errors import (
    KeyMismatch,
    NonFiniteGradient,
    ShapeMismatch,
    UnregisteredParameter,
)
from symnet.logging_config import get_logger
from symnet.nn.layers import Module
from symnet.nn.tensor import Tensor, gradients, graph_leaves

logger = get_logger(__name__)

GradientMap = dict[str, np.ndarray]


class ParameterStore:
    """Ordered map from parameter path to trainable tensor, plus buffers.

    Iteration order is the module attribute order, so it is deterministic.
    """

    def __init__(
        self,
        parameters: Mapping[str, Tensor],
        buffers: Mapping[str, Tensor] | None = None,
    ) -> None:
        self.parameters: dict[str, Tensor] = dict(parameters)
        self.buffers: dict[str, Tensor] = dict(buffers or {})
        seen: dict[int, str] = {}
        for name, tensor in {**self.parameters, **self.buffers}.items():
            if id(tensor) in seen:
                raise ValueError(
                    f"Tensor registered twice: {seen[id(tensor)]} and {name}"
                )
            seen[id(tensor)] = name
            tensor.name = name

    @classmethod
    def from_module(cls, module: Module) -> ParameterStore:
        return cls(dict(module.named_parameters()), dict(module.named_buffers()))

    def __iter__(self) -> Iterator[str]:
        return iter(self.parameters)

    def __len__(self) -> int:
        return len(self.parameters)

    def __getitem__(self, name: str) -> Tensor:
        return self.parameters[name]

    def __contains__(self, name: object) -> bool:
        return name in self.parameters

    def names(self) -> list[str]:
        return list(self.parameters)

    def state(self) -> dict[str, np.ndarray]:
        """Copies of every parameter and buffer, parameters first."""
        return {
            name: np.array(t.data)
            for name, t in {**self.parameters, **self.buffers}.items()
        }

    def load_state(self, state: Mapping[str, np.ndarray]) -> None:
        """Overwrite tensors in place from ``state`` (names must match exactly)."""
        tensors = {**self.parameters, **self.buffers}
        if set(state) != set(tensors):
            raise KeyMismatch(
                "State names differ from the registered tensors",
                missing=sorted(set(tensors) - set(state)),
                unexpected=sorted(set(state) - set(tensors)),
            )
        for name, tensor in tensors.items():
            value = np.asarray(state[name])
            if value.shape != tensor.shape:
                raise ShapeMismatch(
                    f"{name}: expected {tensor.shape}, got {value.shape}",
                    name=name,
                )
            tensor.data[...] = value.astype(tensor.dtype)

    def num_values(self) -> int:
        return sum(t.data.size for t in self.parameters.values())


def backward(loss: Tensor, store: ParameterStore) -> GradientMap:
    """Gradients of a scalar loss w.r.t. every registered parameter.

    Raises:
        UnregisteredParameter: the graph reaches a trainable leaf not in store
        NonFiniteGradient: any gradient entry is NaN or Inf
    """
    registered = {id(t) for t in store.parameters.values()}
    for leaf in graph_leaves(loss):
        if id(leaf) not in registered:
            raise UnregisteredParameter(
                f"Loss depends on unregistered tensor {leaf.name or '<unnamed>'}",
                shape=list(leaf.shape),
            )
    names = store.names()
    grads = gradients(loss, [store[n] for n in names])
    result: GradientMap = {}
    for name, grad in zip(names, grads):
        if not np.all(np.isfinite(grad)):
            logger.error("non_finite_gradient", parameter=name)
            raise NonFiniteGradient(f"Non-finite gradient for {name}", parameter=name)
        result[name] = grad
    return result
