"""Model definitions."""

from symnet.model.classifiers import MlpClassifier
from symnet.model.symnet import SymNet
from symnet.model.transforms import (
    FeatureProjector,
    Transform,
    Transformer,
    apply_transform,
    attention,
    gate,
    project_feature,
    t_e,
)

__all__ = [
    "FeatureProjector",
    "MlpClassifier",
    "SymNet",
    "Transform",
    "Transformer",
    "apply_transform",
    "attention",
    "gate",
    "project_feature",
    "t_e",
]
