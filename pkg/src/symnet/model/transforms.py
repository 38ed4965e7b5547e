"""Feature projection and the attribute-conditioned coupling/decoupling transformers."""

from collections.abc import Callable

import numpy as np

from symnet.config.settings import AttentionActivation
from symnet.nn import functional as F
from symnet.nn.layers import BatchNorm, DenseLayer, Mode, Module, affine_forward
from symnet.nn.tensor import Tensor, as_tensor, concat

# (f, attr_emb) -> transformed f; any callable of this shape can stand in for a
# Transformer, which is how the loss algebra is tested.
Transform = Callable[[Tensor, Tensor], Tensor]


class FeatureProjector(DenseLayer):
    """Single affine map from raw feature space to the latent space."""

    def __call__(self, raw: Tensor | np.ndarray) -> Tensor:
        return project_feature(raw, self)


def project_feature(raw: Tensor | np.ndarray, projector: FeatureProjector) -> Tensor:
    """Project raw features (vector or batch); no activation."""
    return affine_forward(as_tensor(raw, like=projector.weight), projector)


class Transformer(Module):
    """CoN or DecoN: an attention-gated two-layer MLP conditioned on an attribute.

    CoN and DecoN are two instances of this class; they never share tensors.
    """

    def __init__(
        self,
        embed_dim: int,
        latent_dim: int,
        attn_hidden: int,
        rng: np.random.Generator | None = None,
        dtype: type = np.float32,
        attn_act: AttentionActivation = AttentionActivation.SIGMOID,
        no_attention: bool = False,
        bn_eps: float = 1e-5,
        bn_momentum: float = 0.1,
    ) -> None:
        self.attn_fc1 = DenseLayer(embed_dim, attn_hidden, rng, dtype)
        self.bn_attn = BatchNorm(attn_hidden, bn_eps, bn_momentum, dtype)
        self.attn_fc2 = DenseLayer(attn_hidden, latent_dim, rng, dtype)
        self.main_fc1 = DenseLayer(latent_dim + embed_dim, latent_dim, rng, dtype)
        self.bn_main = BatchNorm(latent_dim, bn_eps, bn_momentum, dtype)
        self.main_fc2 = DenseLayer(latent_dim, latent_dim, rng, dtype)
        self.attn_act = AttentionActivation(attn_act)
        self.no_attention = no_attention

    @property
    def embed_dim(self) -> int:
        return self.attn_fc1.in_dim

    @property
    def latent_dim(self) -> int:
        return self.main_fc2.out_dim

    def __call__(self, f: Tensor, attr_emb: Tensor) -> Tensor:
        return apply_transform(f, attr_emb, self, self.mode)


def attention(attr_emb: Tensor, t: Transformer, mode: Mode | str) -> Tensor:
    """Gate computed from the attribute embedding, values in (0, 1)."""
    hidden = F.relu(t.bn_attn(t.attn_fc1(attr_emb), Mode(mode)))
    logits = t.attn_fc2(hidden)
    if t.attn_act is AttentionActivation.SOFTMAX:
        return F.softmax(logits, axis=-1)
    return F.sigmoid(logits)


def gate(f: Tensor, att: Tensor | np.ndarray) -> Tensor:
    """Residual gating h = f * att + f."""
    return f * att + f


def apply_transform(
    f: Tensor | np.ndarray,
    attr_emb: Tensor | np.ndarray,
    t: Transformer,
    mode: Mode | str = Mode.EVAL,
) -> Tensor:
    """Couple (CoN) or decouple (DecoN) ``attr_emb`` into/from ``f``.

    ``f`` and ``attr_emb`` share their leading axes: a vector, a batch [B, d]
    or a grid [B, n, d] all work.
    """
    mode = Mode(mode)
    f = as_tensor(f, like=t.main_fc2.weight)
    attr_emb = as_tensor(attr_emb, like=t.main_fc2.weight)
    h = f if t.no_attention else gate(f, attention(attr_emb, t, mode))
    z = concat([h, attr_emb], axis=-1)
    hidden = F.relu(t.bn_main(t.main_fc1(z), mode))
    return t.main_fc2(hidden)


def t_e(f: Tensor) -> Tensor:
    """Identity element of the transformation group."""
    return f
