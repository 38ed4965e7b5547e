"""Default configuration values."""

from symnet.config.settings import LossWeights, Profile, SynthSpec, TrainConfig

PROFILE_PRESETS: dict[Profile, TrainConfig] = {
    Profile.MIT: TrainConfig(
        profile=Profile.MIT,
        lr=5e-4,
        batch_size=512,
        epochs=320,
        weights=LossWeights(
            sym=0.05, axiom=0.01, cls_attr=1.0, cls_obj=0.01, tri=0.03, margin=0.5
        ),
    ),
    Profile.UT: TrainConfig(
        profile=Profile.UT,
        lr=1e-4,
        batch_size=256,
        epochs=600,
        weights=LossWeights(
            sym=0.01, axiom=0.03, cls_attr=1.0, cls_obj=0.5, tri=0.5, margin=0.5
        ),
    ),
}

# Desk-scale acceptance dataset
DEFAULT_SYNTH_SPEC: SynthSpec = SynthSpec(
    n_attrs=6,
    n_objs=8,
    feat_dim=64,
    latent_dim=32,
    samples_per_pair=40,
    unseen_fraction=0.15,
    noise_sigma=0.05,
)

# Keys a custom profile must spell out
CUSTOM_REQUIRED_KEYS: tuple[str, ...] = ("lr", "batch_size", "epochs", "weights")


def synthetic_train_config(spec: SynthSpec, seed: int = 0, **overrides) -> TrainConfig:
    """Training config sized for a synthetic dataset.

    Uses heavier axiom weights than the benchmark presets so the group
    residuals are visible on small latent spaces.
    """
    data = {
        "profile": Profile.CUSTOM,
        "lr": 0.05,
        "batch_size": 64,
        "epochs": 40,
        "weights": LossWeights(
            sym=0.5, axiom=0.5, cls_attr=1.0, cls_obj=1.0, tri=1.0, margin=0.5
        ),
        "seed": seed,
        "feat_dim": spec.feat_dim,
        "embed_dim": spec.n_attrs if spec.onehot else spec.latent_dim,
        "latent_dim": spec.latent_dim,
        "attn_hidden": 64,
        "cls_hidden": 64,
    }
    data.update(overrides)
    return TrainConfig(**data)
