"""Train command."""

import sys
from pathlib import Path

import typer

from symnet.config.settings import AttentionActivation, Distance, Profile
from symnet.cli.common import console, domain_errors, load_dataset, show_table

app = typer.Typer(help="Train a model on a feature directory")


@app.command()
def train(
    data: Path = typer.Option(..., "--data", help="Dataset directory"),
    out: Path = typer.Option(..., "--out", help="Checkpoint path to write"),
    profile: Profile = typer.Option(Profile.MIT, "--profile", help="Preset profile"),
    config: Path = typer.Option(None, "--config", help="JSON/YAML config file"),
    seed: int = typer.Option(None, "--seed", min=0, help="Random seed"),
    epochs: int = typer.Option(None, "--epochs", min=1, help="Training epochs"),
    lr: float = typer.Option(None, "--lr", help="Learning rate"),
    batch_size: int = typer.Option(None, "--batch-size", min=1, help="Batch size"),
    no_loss: str = typer.Option(
        None, "--no-loss", help="Loss terms to switch off, e.g. sym,tri"
    ),
    no_attention: bool = typer.Option(
        False, "--no-attention", help="Bypass the attention gate"
    ),
    dist: Distance = typer.Option(None, "--dist", help="Distance metric"),
    attn_act: AttentionActivation = typer.Option(
        None, "--attn-act", help="Attention activation"
    ),
    squared_dist: bool = typer.Option(
        False, "--squared-dist", help="Use squared distances"
    ),
    onehot: bool = typer.Option(
        False, "--onehot", help="Replace word vectors with onehot vectors"
    ),
    log: Path = typer.Option(
        None, "--log", help="Loss log file (JSON lines); default stdout"
    ),
) -> None:
    """Train a SymNet model and save a checkpoint."""
    from symnet.config.loader import (  # noqa: PLC0415
        ablation_overrides,
        load_train_config,
    )
    from symnet.models.matrix import onehot_embeddings  # noqa: PLC0415
    from symnet.training import LossLog, save_checkpoint  # noqa: PLC0415
    from symnet.training import train as run_training  # noqa: PLC0415

    with domain_errors():
        meta, features, embeds = load_dataset(data)
        if onehot:
            embeds = onehot_embeddings(meta.n_attrs)

        names = [n.strip() for n in (no_loss or "").split(",") if n.strip()]
        overrides = {
            "seed": seed,
            "epochs": epochs,
            "lr": lr,
            "batch_size": batch_size,
            "no_attention": no_attention or None,
            "dist": dist.value if dist else None,
            "attn_act": attn_act.value if attn_act else None,
            "squared_dist": squared_dist or None,
            "feat_dim": features.dim,
            "embed_dim": embeds.dim,
            **ablation_overrides(names),
        }
        cfg = load_train_config(config, profile, overrides)

        if log is None:
            result = run_training(meta, features, embeds, cfg, LossLog(sys.stdout))
        else:
            log.parent.mkdir(parents=True, exist_ok=True)
            with log.open("w") as stream:
                result = run_training(meta, features, embeds, cfg, LossLog(stream))
        save_checkpoint(result.checkpoint, out)

    last = result.epoch_means()[-1] if result.history else {}
    show_table(
        f"Trained {cfg.epochs} epochs ({cfg.profile.value})",
        {"checkpoint": str(out), **last},
    )
    console.print(f"[green]Checkpoint written to {out}[/green]")
