"""Configuration settings using Pydantic."""

import os
from enum import Enum

from pydantic import BaseModel, Field, field_validator, model_validator


class Profile(str, Enum):
    """Dataset hyperparameter profile."""

    MIT = "mit"
    UT = "ut"
    CUSTOM = "custom"


class Distance(str, Enum):
    """Distance used by the objectives and the moving distances."""

    L2 = "l2"
    L1 = "l1"
    COS = "cos"


class AttentionActivation(str, Enum):
    """Output nonlinearity of the attribute attention head."""

    SIGMOID = "sigmoid"
    SOFTMAX = "softmax"


class LossWeights(BaseModel):
    """Weights of the total loss and the triplet margin."""

    sym: float = Field(default=0.05, ge=0.0, description="Symmetry loss weight")
    axiom: float = Field(
        default=0.01, ge=0.0, description="Closure + invertibility + commutativity"
    )
    cls_attr: float = Field(
        default=1.0, ge=0.0, description="Attribute classification weight"
    )
    cls_obj: float = Field(
        default=0.01, ge=0.0, description="Object classification weight"
    )
    tri: float = Field(default=0.03, ge=0.0, description="Triplet RMD loss weight")
    margin: float = Field(default=0.5, gt=0.0, description="Triplet margin")

    @field_validator("sym", "axiom", "cls_attr", "cls_obj", "tri", "margin")
    @classmethod
    def validate_finite(cls, v: float) -> float:
        """Reject infinite weights."""
        if v != v or v in (float("inf"), float("-inf")):
            raise ValueError("Loss weights must be finite")
        return v


ABLATABLE_LOSSES: dict[str, tuple[str, ...]] = {
    "sym": ("sym",),
    "axiom": ("axiom",),
    "cls_attr": ("cls_attr",),
    "cls_obj": ("cls_obj",),
    "cls": ("cls_attr", "cls_obj"),
    "tri": ("tri",),
}


class TrainConfig(BaseModel):
    """Everything needed to build and train a model."""

    profile: Profile = Field(default=Profile.MIT, description="Preset profile")
    lr: float = Field(default=5e-4, gt=0.0, description="SGD learning rate")
    batch_size: int = Field(default=512, ge=1, description="Anchors per step")
    epochs: int = Field(default=320, ge=1, description="Training epochs")
    weights: LossWeights = Field(default_factory=LossWeights)
    gamma: float = Field(default=1.0, gt=0.0, description="Attribute score scale")
    seed: int = Field(default=0, ge=0, lt=2**64, description="Random seed")

    feat_dim: int = Field(default=512, ge=1, description="Raw feature size")
    embed_dim: int = Field(default=300, ge=1, description="Attribute embedding size")
    latent_dim: int = Field(default=300, ge=1, description="Object embedding size")
    attn_hidden: int = Field(default=768, ge=1, description="Attention hidden size")
    cls_hidden: int = Field(default=512, ge=1, description="Classifier hidden size")
    obj_layers: int = Field(default=2, ge=2, le=3, description="Object head depth")

    dist: Distance = Field(default=Distance.L2)
    attn_act: AttentionActivation = Field(default=AttentionActivation.SIGMOID)
    no_attention: bool = Field(default=False, description="Bypass the gate")
    squared_dist: bool = Field(default=False, description="Square the distances")

    bn_eps: float = Field(default=1e-5, gt=0.0)
    bn_momentum: float = Field(default=0.1, gt=0.0, lt=1.0)
    log_every: int = Field(default=1, ge=1, description="Steps between loss lines")

    model_config = {
        "extra": "forbid",
    }


class SynthSpec(BaseModel):
    """Recipe for a synthetic attribute-object dataset."""

    n_attrs: int = Field(default=6, ge=2)
    n_objs: int = Field(default=8, ge=2)
    feat_dim: int = Field(default=64, ge=1)
    latent_dim: int = Field(default=32, ge=1)
    samples_per_pair: int = Field(default=40, ge=1)
    unseen_fraction: float = Field(default=0.15, gt=0.0, lt=1.0)
    noise_sigma: float = Field(default=0.05, ge=0.0)
    prototype_scale: float = Field(
        default=2.0, gt=0.0, description="Prototype std relative to the offsets"
    )
    heldout_fraction: float = Field(
        default=0.0, ge=0.0, lt=1.0, description="Per-pair share moved to val"
    )
    onehot: bool = Field(default=False, description="Onehot attribute embeddings")
    seed: int = Field(default=0, ge=0, lt=2**64)

    model_config = {
        "extra": "forbid",
    }

    @model_validator(mode="after")
    def validate_pairs(self) -> "SynthSpec":
        """At least one seen pair must remain per attribute and object."""
        pairs = self.n_attrs * self.n_objs
        if pairs - max(self.n_attrs, self.n_objs) < 1:
            raise ValueError("Too few pairs to hold any out")
        return self


class RuntimeSettings(BaseModel):
    """Process-level settings read from the environment."""

    threads: int = Field(default=0, ge=0, description="Evaluation threads, 0=auto")
    log_level: str = Field(default="INFO", description="Log level")

    @field_validator("log_level")
    @classmethod
    def validate_log_level(cls, v: str) -> str:
        """Validate log level."""
        valid_levels = {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}
        if v.upper() not in valid_levels:
            raise ValueError(f"Invalid log level: {v}. Must be one of {valid_levels}")
        return v.upper()

    @classmethod
    def from_env(cls) -> "RuntimeSettings":
        """Build settings from SYMNET_* environment variables."""
        data: dict[str, str] = {}
        if threads := os.getenv("SYMNET_THREADS"):
            data["threads"] = threads
        if level := os.getenv("SYMNET_LOG_LEVEL"):
            data["log_level"] = level
        return cls(**data)

    @property
    def worker_count(self) -> int:
        """Resolved number of evaluation workers."""
        if self.threads > 0:
            return self.threads
        return max(1, min(8, os.cpu_count() or 1))
