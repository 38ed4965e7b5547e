"""Tiny float64 problems exercising the complete objective for gradient checks."""

import numpy as np

from symnet.config.settings import LossWeights, Profile, TrainConfig
from symnet.model.symnet import SymNet
from symnet.nn.gradcheck import LossFn
from symnet.nn.parameters import ParameterStore
from symnet.nn.tensor import Tensor
from symnet.objectives.batch import NO_PARTNER, LossBatch, batch_loss

TINY_ATTRS = 3
TINY_OBJS = 2


def tiny_config(**overrides: object) -> TrainConfig:
    """Transformer dims 4/6/4, every loss weight active."""
    values: dict[str, object] = {
        "profile": Profile.CUSTOM,
        "lr": 0.01,
        "batch_size": 4,
        "epochs": 1,
        "weights": LossWeights(
            sym=0.7, axiom=0.4, cls_attr=1.0, cls_obj=0.6, tri=0.5, margin=0.5
        ),
        "feat_dim": 5,
        "embed_dim": 4,
        "latent_dim": 4,
        "attn_hidden": 6,
        "cls_hidden": 5,
    }
    values.update(overrides)
    return TrainConfig(**values)


def tiny_problem(
    seed: int, cfg: TrainConfig | None = None
) -> tuple[ParameterStore, LossFn]:
    """A random model and batch; the loss runs batch norm in train mode.

    Biases and batch-norm affines are jittered so no ReLU input sits on its kink.

    Rows 0/1 and 2/3 are anchor/negative pairs sharing an object; row 4 has no
    negative.
    """
    cfg = cfg or tiny_config()
    rng = np.random.default_rng(seed)
    model = SymNet.build(cfg, TINY_ATTRS, TINY_OBJS, rng, dtype=np.float64)
    for layer in model.modules():
        for name in ("gamma", "beta", "bias"):
            tensor = getattr(layer, name, None)
            if isinstance(tensor, Tensor):
                tensor.data += rng.normal(0.0, 0.1, size=tensor.shape)
    batch = LossBatch(
        features=rng.normal(size=(5, cfg.feat_dim)),
        attrs=np.array([0, 1, 2, 0, 1]),
        objs=np.array([0, 0, 1, 1, 0]),
        partners=np.array([1, 0, 0, 2, NO_PARTNER]),
    )
    embeds = rng.normal(size=(TINY_ATTRS, cfg.embed_dim))
    model.train()

    def loss_fn() -> Tensor:
        return batch_loss(model, batch, embeds, cfg).total

    return model.store(), loss_fn
