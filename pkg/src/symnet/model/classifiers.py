"""Attribute and object classification heads over latent embeddings."""

import numpy as np

from symnet.nn import functional as F
from symnet.nn.layers import DenseLayer, Module
from symnet.nn.tensor import Tensor, as_tensor


class MlpClassifier(Module):
    """Dense layers with ReLU between them; returns logits."""

    def __init__(
        self,
        in_dim: int,
        hidden_dim: int,
        classes: int,
        layers: int = 2,
        rng: np.random.Generator | None = None,
        dtype: type = np.float32,
    ) -> None:
        if layers < 2:
            raise ValueError("A classifier head needs at least 2 layers")
        self.fc1 = DenseLayer(in_dim, hidden_dim, rng, dtype)
        for i in range(2, layers):
            setattr(self, f"fc{i}", DenseLayer(hidden_dim, hidden_dim, rng, dtype))
        setattr(self, f"fc{layers}", DenseLayer(hidden_dim, classes, rng, dtype))
        self.depth = layers

    @property
    def classes(self) -> int:
        return getattr(self, f"fc{self.depth}").out_dim

    def logits(self, x: Tensor | np.ndarray) -> Tensor:
        h = as_tensor(x, like=self.fc1.weight)
        for i in range(1, self.depth):
            h = F.relu(getattr(self, f"fc{i}")(h))
        return getattr(self, f"fc{self.depth}")(h)

    def probs(self, x: Tensor | np.ndarray) -> Tensor:
        return F.softmax(self.logits(x), axis=-1)

    __call__ = logits
