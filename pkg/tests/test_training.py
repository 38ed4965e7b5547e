"""Tests for the training loop and checkpoint files."""

import io
import json
import struct
from dataclasses import replace

import numpy as np
import pytest

from symnet.errors import (
    BadMagic,
    DimensionMismatch,
    EmptyTrainSplit,
    MissingFile,
    MissingParameter,
    ParseError,
    VersionMismatch,
)
from symnet.models.dataset import Split
from symnet.models.matrix import FeatureMatrix
from symnet.objectives import LOG_FIELDS
from symnet.training import (
    LossLog,
    load_checkpoint,
    model_from_checkpoint,
    save_checkpoint,
    train,
)
from symnet.training.checkpoint import (
    MAGIC,
    decode_checkpoint,
    encode_checkpoint,
    expected_names,
)
from symnet.training.gradcheck import tiny_config


@pytest.fixture
def trained(tiny_meta, tiny_features, tiny_embeds):
    return train(tiny_meta, tiny_features, tiny_embeds, tiny_config(epochs=2, seed=4))


def _drop_tensor(buf: bytes, name: str) -> bytes:
    """Re-encode a checkpoint without one tensor, keeping the count honest."""
    ckpt = decode_checkpoint(buf)
    state = dict(ckpt.state)
    del state[name]
    return encode_checkpoint(replace(ckpt, state=state))


class TestTrain:
    """Test the end-to-end loop."""

    def test_deterministic(self, tiny_meta, tiny_features, tiny_embeds) -> None:
        """The same seed gives byte-identical checkpoints."""
        cfg = tiny_config(epochs=2, seed=4)
        first = train(tiny_meta, tiny_features, tiny_embeds, cfg)
        second = train(tiny_meta, tiny_features, tiny_embeds, cfg)
        assert encode_checkpoint(first.checkpoint) == encode_checkpoint(
            second.checkpoint
        )

    def test_seed_changes_result(self, tiny_meta, tiny_features, tiny_embeds) -> None:
        """A different seed gives different parameters."""
        a = train(tiny_meta, tiny_features, tiny_embeds, tiny_config(seed=1))
        b = train(tiny_meta, tiny_features, tiny_embeds, tiny_config(seed=2))
        assert encode_checkpoint(a.checkpoint) != encode_checkpoint(b.checkpoint)

    def test_history(self, trained) -> None:
        """12 train rows in batches of 4 give 3 steps per epoch."""
        assert len(trained.history) == 6
        assert [r["step"] for r in trained.history] == [1, 2, 3, 4, 5, 6]
        means = trained.epoch_means()
        assert [m["epoch"] for m in means] == [1, 2]
        assert all(np.isfinite(m["total"]) for m in means)

    def test_model_in_eval_mode(self, trained) -> None:
        """Training hands back an eval-mode model."""
        assert trained.model.mode == "eval"
        assert trained.checkpoint.epoch == 2

    def test_loss_log(self, tiny_meta, tiny_features, tiny_embeds) -> None:
        """One JSON line per step with every loss term."""
        stream = io.StringIO()
        train(
            tiny_meta,
            tiny_features,
            tiny_embeds,
            tiny_config(epochs=1),
            loss_log=LossLog(stream),
        )
        lines = stream.getvalue().splitlines()
        assert len(lines) == 3
        record = json.loads(lines[0])
        assert list(record) == ["epoch", "step", *LOG_FIELDS]
        assert record["epoch"] == 1

    def test_log_every(self, tiny_meta, tiny_features, tiny_embeds) -> None:
        """log_every thins the log, not the history."""
        stream = io.StringIO()
        result = train(
            tiny_meta,
            tiny_features,
            tiny_embeds,
            tiny_config(epochs=2, log_every=2),
            loss_log=LossLog(stream),
        )
        assert len(stream.getvalue().splitlines()) == 3
        assert len(result.history) == 6

    def test_empty_train_split(self, tiny_meta, tiny_features, tiny_embeds) -> None:
        """A dataset without train samples cannot be trained on."""
        test_only = tuple(s for s in tiny_meta.samples if s.split is Split.TEST)
        meta = replace(tiny_meta, samples=test_only)
        with pytest.raises(EmptyTrainSplit):
            train(meta, tiny_features, tiny_embeds, tiny_config())

    def test_feature_dim_checked(self, tiny_meta, tiny_features, tiny_embeds) -> None:
        """Feature width must equal feat_dim."""
        with pytest.raises(DimensionMismatch):
            train(tiny_meta, tiny_features, tiny_embeds, tiny_config(feat_dim=6))

    def test_feature_count_checked(self, tiny_meta, tiny_embeds) -> None:
        """One feature row per sample."""
        short = FeatureMatrix(np.zeros((3, 5), dtype=np.float32))
        with pytest.raises(DimensionMismatch):
            train(tiny_meta, short, tiny_embeds, tiny_config())


class TestCheckpoint:
    """Test the SYMC format."""

    def test_save_load_save(self, trained, tmp_path) -> None:
        """Reloading and saving again reproduces the file."""
        path = tmp_path / "a.ckpt"
        save_checkpoint(trained.checkpoint, path)
        again = tmp_path / "b.ckpt"
        save_checkpoint(load_checkpoint(path), again)
        assert path.read_bytes() == again.read_bytes()

    def test_names_match_architecture(self, trained) -> None:
        """Stored tensors are exactly the configured ones."""
        ckpt = trained.checkpoint
        assert list(ckpt.state) == expected_names(ckpt.config, 3, 2)
        assert all(v.dtype == np.float32 for v in ckpt.state.values())

    def test_model_round_trip(self, trained, tmp_path) -> None:
        """A reloaded model reproduces the trained parameters."""
        path = tmp_path / "m.ckpt"
        save_checkpoint(trained.checkpoint, path)
        model = model_from_checkpoint(load_checkpoint(path))
        assert model.mode == "eval"
        for name, value in trained.model.store().state().items():
            np.testing.assert_array_equal(model.store().state()[name], value)

    def test_missing_tensor(self, trained) -> None:
        """A checkpoint lacking a tensor is rejected with its name."""
        buf = encode_checkpoint(trained.checkpoint)
        name = next(iter(trained.checkpoint.state))
        with pytest.raises(MissingParameter) as exc:
            decode_checkpoint(_drop_tensor(buf, name))
        assert exc.value.context["missing"] == [name]

    def test_bad_magic(self, trained) -> None:
        """Only SYMC files are accepted."""
        buf = encode_checkpoint(trained.checkpoint)
        with pytest.raises(BadMagic):
            decode_checkpoint(b"XXXX" + buf[4:])

    def test_version(self, trained) -> None:
        """Unknown versions are refused."""
        buf = encode_checkpoint(trained.checkpoint)
        with pytest.raises(VersionMismatch):
            decode_checkpoint(MAGIC + struct.pack("<I", 99) + buf[8:])

    def test_name_not_utf8(self) -> None:
        """A tensor name that is not UTF-8 is a parse error."""
        buf = MAGIC + struct.pack("<IIH", 1, 1, 2) + b"\xff\xfe"
        with pytest.raises(ParseError):
            decode_checkpoint(buf)

    def test_missing_file(self, tmp_path) -> None:
        """A missing path is reported as such."""
        with pytest.raises(MissingFile):
            load_checkpoint(tmp_path / "nope.ckpt")

    def test_restore_rng(self, trained) -> None:
        """The saved generator state continues where training stopped."""
        ckpt = trained.checkpoint
        assert ckpt.rng_state
        first = ckpt.restore_rng().random(3)
        second = decode_checkpoint(encode_checkpoint(ckpt)).restore_rng().random(3)
        np.testing.assert_array_equal(first, second)
