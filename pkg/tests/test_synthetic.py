"""Tests for the synthetic generator and its oracle checks."""

import numpy as np
import pytest

from symnet.config.defaults import synthetic_train_config
from symnet.config.settings import SynthSpec
from symnet.data.formats import load_features
from symnet.data.metadata import load_metadata
from symnet.errors import InfeasibleSplit, MissingFile
from symnet.model.symnet import SymNet
from symnet.models.dataset import Split
from symnet.nn.tensor import Tensor
from symnet.synthetic import (
    axiom_residuals,
    axiom_residuals_for,
    gen_synthetic,
    load_truth,
    nearest_offset_accuracy,
    oracle_agreement,
    oracle_rmd_sign,
)

SPEC = SynthSpec(
    n_attrs=3,
    n_objs=4,
    feat_dim=10,
    latent_dim=6,
    samples_per_pair=20,
    unseen_fraction=0.25,
    seed=1,
)


class TestGenerator:
    """Test splits, determinism and files."""

    def test_counts(self) -> None:
        """12 pairs, 3 held out, 20 samples each."""
        data = gen_synthetic(SPEC)
        meta = data.meta
        assert len(meta.train_pairs) + len(meta.test_pairs) == 12
        assert len(meta.test_pairs) == 3
        assert meta.split_indices(Split.TRAIN).size == 180
        assert meta.split_indices(Split.TEST).size == 60
        assert data.features.count == 240
        assert data.features.dim == 10
        assert data.embeds.count == 3

    def test_components_seen(self) -> None:
        """Every attribute and object occurs in some train pair."""
        meta = gen_synthetic(SPEC).meta
        assert {a for a, _ in meta.train_pairs} == {0, 1, 2}
        assert {o for _, o in meta.train_pairs} == {0, 1, 2, 3}
        assert not set(meta.train_pairs) & set(meta.test_pairs)

    def test_deterministic(self) -> None:
        """The same spec gives the same bytes."""
        a, b = gen_synthetic(SPEC), gen_synthetic(SPEC)
        np.testing.assert_array_equal(a.features.data, b.features.data)
        np.testing.assert_array_equal(a.embeds.data, b.embeds.data)
        assert a.meta == b.meta

    def test_seed_matters(self) -> None:
        """A different seed gives different features."""
        a = gen_synthetic(SPEC)
        b = gen_synthetic(SPEC.model_copy(update={"seed": 2}))
        assert not np.array_equal(a.features.data, b.features.data)

    def test_noise_free(self) -> None:
        """Without noise every sample of a pair shares its latent."""
        data = gen_synthetic(SPEC.model_copy(update={"noise_sigma": 0.0}))
        latents = data.truth.latents
        np.testing.assert_array_equal(latents[0], latents[19])
        expected = data.truth.prototypes[0] + data.truth.offsets[0]
        np.testing.assert_allclose(latents[0], expected)

    def test_prototype_scale(self) -> None:
        """The scale stretches prototypes and leaves offsets alone."""
        a = gen_synthetic(SPEC.model_copy(update={"prototype_scale": 1.0}))
        b = gen_synthetic(SPEC.model_copy(update={"prototype_scale": 3.0}))
        np.testing.assert_allclose(b.truth.prototypes, 3.0 * a.truth.prototypes)
        np.testing.assert_array_equal(b.truth.offsets, a.truth.offsets)

    def test_unseen_pairs_nearest_their_object(self) -> None:
        """An unseen centre lies nearest a seen centre of its own object."""
        data = gen_synthetic(SynthSpec())
        truth, meta = data.truth, data.meta
        seen = list(meta.train_pairs)
        centres = np.stack([truth.prototypes[o] + truth.offsets[a] for a, o in seen])
        for a, o in meta.test_pairs:
            centre = truth.prototypes[o] + truth.offsets[a]
            nearest = seen[int(np.argmin(np.linalg.norm(centres - centre, axis=1)))]
            assert nearest[1] == o

    def test_onehot(self) -> None:
        """Onehot embeddings are the identity."""
        data = gen_synthetic(SPEC.model_copy(update={"onehot": True}))
        np.testing.assert_array_equal(data.embeds.data, np.eye(3, dtype=np.float32))

    def test_heldout(self) -> None:
        """A held-out share of every pair goes to val."""
        data = gen_synthetic(SPEC.model_copy(update={"heldout_fraction": 0.25}))
        meta = data.meta
        assert meta.split_indices(Split.VAL).size == 12 * 5
        assert meta.val_pairs is not None and len(meta.val_pairs) == 12
        assert meta.split_indices(Split.TRAIN).size == 9 * 15

    def test_infeasible(self) -> None:
        """Holding out too many pairs leaves a component unseen."""
        spec = SynthSpec(n_attrs=2, n_objs=2, unseen_fraction=0.9, latent_dim=4)
        with pytest.raises(InfeasibleSplit):
            gen_synthetic(spec)

    def test_written_files(self, small_synthetic, small_synthetic_dir) -> None:
        """The directory loads back into the same dataset."""
        meta = load_metadata(small_synthetic_dir / "meta.json")
        assert meta == small_synthetic.meta
        features = load_features(small_synthetic_dir / "features.bin", meta)
        np.testing.assert_array_equal(features.data, small_synthetic.features.data)
        truth = load_truth(small_synthetic_dir / "truth.json")
        np.testing.assert_array_equal(truth.offsets, small_synthetic.truth.offsets)

    def test_missing_truth(self, tmp_path) -> None:
        """Absent truth files are reported."""
        with pytest.raises(MissingFile):
            load_truth(tmp_path / "truth.json")


class TestOracle:
    """Test the ground-truth checks."""

    def test_rmd_sign(self, small_synthetic) -> None:
        """A sample carries its own attribute and not another one."""
        sample = small_synthetic.meta.samples[0]
        latent = small_synthetic.truth.latents[0]
        truth = small_synthetic.truth
        assert oracle_rmd_sign(truth, latent, sample.attr)
        assert oracle_rmd_sign(truth, latent, sample.attr, sample.obj)
        other = (sample.attr + 1) % small_synthetic.meta.n_attrs
        assert not oracle_rmd_sign(truth, latent, other)

    def test_nearest_offset(self) -> None:
        """Default geometry separates attributes almost perfectly."""
        data = gen_synthetic(SynthSpec())
        attrs = np.array([s.attr for s in data.meta.samples])
        objs = np.array([s.obj for s in data.meta.samples])
        accuracy = nearest_offset_accuracy(data.truth, data.truth.latents, attrs, objs)
        assert accuracy >= 0.99

    def test_identity_residuals(self) -> None:
        """Transforms that do nothing satisfy every axiom."""
        identity = lambda f, a: f  # noqa: E731
        rng = np.random.default_rng(0)
        residuals = axiom_residuals_for(
            Tensor(rng.normal(size=(4, 3))),
            np.array([0, 1, 2, 0]),
            np.array([1, 0, 0, 2]),
            rng.normal(size=(3, 3)),
            identity,
            identity,
        )
        assert residuals == {"sym": 0.0, "clo": 0.0, "inv": 0.0, "com": 0.0}

    def test_model_checks(self, small_synthetic) -> None:
        """Agreement is a rate and residuals cover all four axioms."""
        spec = SynthSpec(n_attrs=3, n_objs=3, feat_dim=8, latent_dim=6)
        cfg = synthetic_train_config(spec)
        model = SymNet.build(cfg, 3, 3, np.random.default_rng(0))
        model.eval()
        data = small_synthetic
        rate = oracle_agreement(
            model, data.meta, data.features, data.embeds, data.truth
        )
        assert 0.0 <= rate <= 1.0
        residuals = axiom_residuals(model, data.meta, data.features, data.embeds)
        assert set(residuals) == {"sym", "clo", "inv", "com"}
        assert all(v >= 0 for v in residuals.values())
