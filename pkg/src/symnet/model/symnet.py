"""The full model: projector, CoN, DecoN and both classifier heads."""

from __future__ import annotations

import numpy as np

from symnet.config.settings import TrainConfig
from symnet.logging_config import get_logger
from symnet.model.classifiers import MlpClassifier
from symnet.model.transforms import FeatureProjector, Transformer
from symnet.nn.layers import Module
from symnet.nn.parameters import ParameterStore

logger = get_logger(__name__)


class SymNet(Module):
    """Every trainable tensor of the system.

    Parameter paths are stable: ``proj.*`` for the projector,
    ``con.*`` / ``decon.*`` for the transformers (``attn_fc1``, ``bn_attn``,
    ``attn_fc2``, ``main_fc1``, ``bn_main``, ``main_fc2``), ``attr_clf.*`` and
    ``obj_clf.*`` for the heads.
    """

    def __init__(
        self,
        cfg: TrainConfig,
        n_attrs: int,
        n_objs: int,
        rng: np.random.Generator | None = None,
        dtype: type = np.float32,
    ) -> None:
        self.proj = FeatureProjector(cfg.feat_dim, cfg.latent_dim, rng, dtype)
        self.con = self._transformer(cfg, rng, dtype)
        self.decon = self._transformer(cfg, rng, dtype)
        self.attr_clf = MlpClassifier(
            cfg.latent_dim, cfg.cls_hidden, n_attrs, 2, rng, dtype
        )
        self.obj_clf = MlpClassifier(
            cfg.latent_dim, cfg.cls_hidden, n_objs, cfg.obj_layers, rng, dtype
        )
        self.cfg = cfg
        self._store: ParameterStore | None = None

    @staticmethod
    def _transformer(
        cfg: TrainConfig, rng: np.random.Generator | None, dtype: type
    ) -> Transformer:
        return Transformer(
            cfg.embed_dim,
            cfg.latent_dim,
            cfg.attn_hidden,
            rng,
            dtype,
            attn_act=cfg.attn_act,
            no_attention=cfg.no_attention,
            bn_eps=cfg.bn_eps,
            bn_momentum=cfg.bn_momentum,
        )

    @classmethod
    def build(
        cls,
        cfg: TrainConfig,
        n_attrs: int,
        n_objs: int,
        rng: np.random.Generator,
        dtype: type = np.float32,
    ) -> SymNet:
        model = cls(cfg, n_attrs, n_objs, rng, dtype)
        logger.debug(
            "model_built",
            n_attrs=n_attrs,
            n_objs=n_objs,
            parameters=model.store().num_values(),
            dtype=np.dtype(dtype).name,
        )
        return model

    @property
    def n_attrs(self) -> int:
        return self.attr_clf.classes

    @property
    def n_objs(self) -> int:
        return self.obj_clf.classes

    @property
    def dtype(self) -> np.dtype:
        return self.proj.weight.dtype

    def store(self) -> ParameterStore:
        """The registry of this model's tensors (built once, then reused)."""
        if self._store is None:
            self._store = ParameterStore.from_module(self)
        return self._store
