"""Synthetic dataset command."""

from pathlib import Path

import typer

from symnet.cli.common import domain_errors, emit_json

app = typer.Typer(help="Generate a synthetic dataset")


@app.command()
def synth(
    out: Path = typer.Option(..., "--out", help="Output directory"),
    spec: Path = typer.Option(None, "--spec", help="JSON/YAML SynthSpec file"),
    seed: int = typer.Option(None, "--seed", min=0, help="Override the spec seed"),
    onehot: bool = typer.Option(
        False, "--onehot", help="Onehot attribute embeddings"
    ),
) -> None:
    """Write meta.json, features.bin, embeds.bin and truth.json."""
    from symnet.config.loader import dump_config, load_synth_spec  # noqa: PLC0415
    from symnet.models.dataset import Split  # noqa: PLC0415
    from symnet.synthetic import gen_synthetic, write_synthetic  # noqa: PLC0415

    with domain_errors():
        synth_spec = load_synth_spec(spec, seed=seed, onehot=onehot or None)
        dataset = gen_synthetic(synth_spec)
        write_synthetic(dataset, out)

    meta = dataset.meta
    emit_json(
        {
            "out": str(out),
            "spec": dump_config(synth_spec),
            "unseen_pairs": len(meta.test_pairs),
            **{s.value: int(meta.split_indices(s).size) for s in Split},
        }
    )
