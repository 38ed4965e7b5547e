"""Tests for the command-line interface."""

import json

import pytest
import yaml

from symnet import __version__
from symnet.cli.cli import main
from symnet.config.settings import SynthSpec
from symnet.synthetic import gen_synthetic, write_synthetic

SPEC = SynthSpec(
    n_attrs=3,
    n_objs=3,
    feat_dim=8,
    latent_dim=6,
    samples_per_pair=6,
    unseen_fraction=0.2,
    noise_sigma=0.05,
    seed=5,
)

TRAIN_CONFIG = {
    "profile": "custom",
    "lr": 0.05,
    "batch_size": 16,
    "epochs": 2,
    "weights": {"sym": 0.5, "axiom": 0.5, "cls_attr": 1.0, "cls_obj": 1.0, "tri": 1.0},
    "latent_dim": 6,
    "attn_hidden": 8,
    "cls_hidden": 8,
}


@pytest.fixture(scope="module")
def workdir(tmp_path_factory):
    """A synthetic dataset plus a checkpoint trained through the CLI."""
    root = tmp_path_factory.mktemp("cli")
    data = write_synthetic(gen_synthetic(SPEC), root / "data")
    config = root / "train.yaml"
    config.write_text(yaml.safe_dump(TRAIN_CONFIG))
    code = main(
        [
            "train",
            "--data",
            str(data),
            "--out",
            str(root / "model.ckpt"),
            "--config",
            str(config),
            "--log",
            str(root / "loss.jsonl"),
        ]
    )
    assert code == 0
    return root


def _stdout_json(capsys) -> dict:
    return json.loads(capsys.readouterr().out)


def _stderr_error(capsys) -> dict:
    """The JSON error line among the stderr output."""
    lines = capsys.readouterr().err.splitlines()
    return json.loads([line for line in lines if line.startswith("{")][-1])


class TestRoot:
    """Test the top-level options."""

    def test_version(self, capsys) -> None:
        """--version prints the package version."""
        assert main(["--version"]) == 0
        assert __version__ in capsys.readouterr().out

    def test_unknown_command(self) -> None:
        """Usage errors exit with 2."""
        assert main(["frobnicate"]) == 2

    def test_missing_option_returns_code(self, tmp_path, capsys) -> None:
        """A missing required option is returned as 2, not raised."""
        assert main(["eval", "--data", str(tmp_path)]) == 2
        assert "Error" in capsys.readouterr().err


class TestGradcheck:
    """Test the gradcheck command."""

    def test_passes(self, capsys) -> None:
        """A random seed passes and the report reaches stdout."""
        assert main(["gradcheck", "--seed", "7"]) == 0
        report = _stdout_json(capsys)
        assert report["passed"] is True
        assert report["seed"] == 7

    def test_several_seeds(self, capsys) -> None:
        """--seeds checks consecutive seeds."""
        assert main(["gradcheck", "--seed", "1", "--seeds", "2"]) == 0
        reports = _stdout_json(capsys)["reports"]
        assert [r["seed"] for r in reports] == [1, 2]


class TestSynth:
    """Test the synth command."""

    def test_writes_dataset(self, tmp_path, capsys) -> None:
        """The four files appear and counts are reported."""
        spec = tmp_path / "spec.yaml"
        spec.write_text(yaml.safe_dump(SPEC.model_dump()))
        out = tmp_path / "synth"
        assert main(["synth", "--out", str(out), "--spec", str(spec)]) == 0
        summary = _stdout_json(capsys)
        assert summary["unseen_pairs"] == 2
        assert summary["train"] + summary["test"] == 9 * 6
        for name in ("meta.json", "features.bin", "embeds.bin", "truth.json"):
            assert (out / name).exists()

    def test_bad_spec(self, tmp_path, capsys) -> None:
        """An invalid spec is a domain error."""
        spec = tmp_path / "spec.yaml"
        spec.write_text("n_attrs: 1\n")
        assert main(["synth", "--out", str(tmp_path / "x"), "--spec", str(spec)]) == 1
        assert _stderr_error(capsys)["error"] == "config_error"


class TestTrainAndEvaluate:
    """Test train, eval, components and retrieve on one trained checkpoint."""

    def test_loss_log(self, workdir) -> None:
        """One JSON line per step."""
        lines = (workdir / "loss.jsonl").read_text().splitlines()
        # 7 seen pairs x 6 samples in batches of 16 give 3 steps per epoch
        assert len(lines) == 6
        assert json.loads(lines[-1])["epoch"] == 2

    def test_eval_closed(self, workdir, capsys) -> None:
        """The closed-world report is printed as JSON."""
        args = ["eval", "--data", str(workdir / "data"), "--ckpt"]
        assert main([*args, str(workdir / "model.ckpt")]) == 0
        report = _stdout_json(capsys)
        assert report["protocol"] == "closed_world"
        assert set(report["topk"]) == {"1", "2", "3"}
        assert report["topk"]["1"] <= report["topk"]["2"] <= report["topk"]["3"]

    def test_eval_generalized(self, workdir, capsys, tmp_path) -> None:
        """The generalized report carries curves and AUCs; --report saves it."""
        saved = tmp_path / "report.json"
        code = main(
            [
                "eval",
                "--data",
                str(workdir / "data"),
                "--ckpt",
                str(workdir / "model.ckpt"),
                "--protocol",
                "generalized",
                "--topk",
                "1",
                "--report",
                str(saved),
            ]
        )
        assert code == 0
        report = _stdout_json(capsys)
        assert report["protocol"] == "generalized"
        assert list(report["auc_topk"]) == ["1"]
        assert len(report["seen_curve"]) == len(report["bias_grid"])
        assert json.loads(saved.read_text()) == report

    def test_components(self, workdir, capsys) -> None:
        """Component accuracies for the test split."""
        code = main(
            [
                "components",
                "--data",
                str(workdir / "data"),
                "--ckpt",
                str(workdir / "model.ckpt"),
            ]
        )
        assert code == 0
        result = _stdout_json(capsys)
        assert 0.0 <= result["attr_acc"] <= 1.0
        assert result["split"] == "test"

    def test_retrieve(self, workdir, capsys) -> None:
        """TSV hits on stdout."""
        code = main(
            [
                "retrieve",
                "--data",
                str(workdir / "data"),
                "--ckpt",
                str(workdir / "model.ckpt"),
                "--sample",
                "a0_o0_000",
                "--remove",
                "attr0",
                "--add",
                "attr1",
                "--k",
                "3",
            ]
        )
        assert code == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == "rank\tsample_id\tdistance"
        assert len(lines) == 4

    def test_query_pair(self, workdir, capsys) -> None:
        """A pair query ranks test samples by score."""
        data, ckpt = str(workdir / "data"), str(workdir / "model.ckpt")
        args = ["retrieve", "--data", data, "--ckpt", ckpt]
        assert main([*args, "--query-pair", "attr0,obj1", "--k", "2"]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == "rank\tsample_id\tscore"
        assert len(lines) == 3
        scores = [float(line.split("\t")[2]) for line in lines[1:]]
        assert scores == sorted(scores, reverse=True)

    def test_query_with_sample_is_usage_error(self, workdir) -> None:
        """Query and manipulation options do not mix."""
        data, ckpt = str(workdir / "data"), str(workdir / "model.ckpt")
        args = ["retrieve", "--data", data, "--ckpt", ckpt, "--query-attr", "attr0"]
        assert main([*args, "--sample", "a0_o0_000"]) == 2

    def test_missing_ckpt_option(self, workdir) -> None:
        """A required option left out is a usage error."""
        assert main(["eval", "--data", str(workdir / "data")]) == 2

    def test_bad_topk(self, workdir) -> None:
        """--topk takes positive integers."""
        args = ["eval", "--data", str(workdir / "data"), "--ckpt"]
        assert main([*args, str(workdir / "model.ckpt"), "--topk", "0,x"]) == 2

    def test_missing_checkpoint_file(self, workdir, capsys) -> None:
        """A missing checkpoint is reported as JSON on stderr with exit 1."""
        args = ["eval", "--data", str(workdir / "data"), "--ckpt"]
        assert main([*args, str(workdir / "nope.ckpt")]) == 1
        assert _stderr_error(capsys)["error"] == "missing_file"

    def test_unknown_loss_name(self, workdir, tmp_path) -> None:
        """Unknown --no-loss names are rejected."""
        code = main(
            [
                "train",
                "--data",
                str(workdir / "data"),
                "--out",
                str(tmp_path / "m.ckpt"),
                "--config",
                str(workdir / "train.yaml"),
                "--no-loss",
                "bogus",
            ]
        )
        assert code == 1
