"""Shared fixtures: a hand-built tiny dataset, a float64 model, synthetic data."""

import numpy as np
import pytest

from symnet.config.settings import SynthSpec
from symnet.data.formats import write_matrix
from symnet.data.metadata import save_metadata
from symnet.model.symnet import SymNet
from symnet.models.dataset import DatasetMeta, SampleRecord, Split
from symnet.models.matrix import EmbeddingTable, FeatureMatrix
from symnet.synthetic import SyntheticDataset, gen_synthetic, write_synthetic
from symnet.training.gradcheck import TINY_ATTRS, TINY_OBJS, tiny_config

TRAIN_PAIRS = ((0, 0), (1, 0), (2, 1), (0, 1))
TEST_PAIRS = ((1, 1), (2, 0))


def make_tiny_meta() -> DatasetMeta:
    """3 attributes x 2 objects; 3 samples per train pair, 2 per test pair."""
    samples = []
    for pairs, split, per_pair in (
        (TRAIN_PAIRS, Split.TRAIN, 3),
        (TEST_PAIRS, Split.TEST, 2),
    ):
        for a, o in pairs:
            for k in range(per_pair):
                samples.append(SampleRecord(f"{split.value}_{a}_{o}_{k}", a, o, split))
    return DatasetMeta(
        attributes=("red", "blue", "green"),
        objects=("ball", "cube"),
        train_pairs=TRAIN_PAIRS,
        test_pairs=TEST_PAIRS,
        samples=tuple(samples),
    )


@pytest.fixture
def tiny_meta() -> DatasetMeta:
    return make_tiny_meta()


@pytest.fixture
def tiny_features(tiny_meta: DatasetMeta) -> FeatureMatrix:
    rng = np.random.default_rng(11)
    return FeatureMatrix(
        rng.normal(size=(len(tiny_meta.samples), 5)).astype(np.float32)
    )


@pytest.fixture
def tiny_embeds() -> EmbeddingTable:
    rng = np.random.default_rng(12)
    return EmbeddingTable(rng.normal(size=(TINY_ATTRS, 4)).astype(np.float32))


@pytest.fixture
def tiny_model() -> SymNet:
    """Random float64 model sized by ``tiny_config``, in eval mode."""
    model = SymNet.build(
        tiny_config(), TINY_ATTRS, TINY_OBJS, np.random.default_rng(3), np.float64
    )
    model.eval()
    return model


@pytest.fixture
def tiny_data_dir(tmp_path, tiny_meta, tiny_features, tiny_embeds):
    """The tiny dataset on disk in the CLI layout."""
    out = tmp_path / "tiny"
    save_metadata(tiny_meta, out / "meta.json")
    write_matrix(tiny_features, out / "features.bin")
    write_matrix(tiny_embeds, out / "embeds.bin")
    return out


SMALL_SPEC = SynthSpec(
    n_attrs=3,
    n_objs=3,
    feat_dim=8,
    latent_dim=6,
    samples_per_pair=6,
    unseen_fraction=0.2,
    noise_sigma=0.05,
    seed=5,
)


@pytest.fixture
def small_synthetic() -> SyntheticDataset:
    return gen_synthetic(SMALL_SPEC)


@pytest.fixture
def small_synthetic_dir(tmp_path, small_synthetic):
    return write_synthetic(small_synthetic, tmp_path / "synth")
