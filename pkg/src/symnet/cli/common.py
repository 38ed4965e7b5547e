"""Common utilities for CLI commands."""

import json
import sys
from collections.abc import Iterator
from contextlib import contextmanager
from pathlib import Path
from typing import Any

import typer
from rich.console import Console
from rich.table import Table

from symnet.data.formats import load_embeddings, load_features
from symnet.data.metadata import load_metadata
from symnet.errors import SymNetError
from symnet.logging_config import get_logger
from symnet.models.dataset import DatasetMeta
from symnet.models.matrix import EmbeddingTable, FeatureMatrix

logger = get_logger(__name__)

# stdout carries JSON; everything for humans goes to stderr
console = Console(stderr=True)

META_FILE = "meta.json"
FEATURES_FILE = "features.bin"
EMBEDS_FILE = "embeds.bin"


@contextmanager
def domain_errors() -> Iterator[None]:
    """Turn a SymNetError into its JSON on stderr and exit code 1."""
    try:
        yield
    except SymNetError as e:
        logger.debug("command_failed", error=e.code)
        sys.stderr.write(json.dumps(e.to_dict(), default=str) + "\n")
        raise typer.Exit(code=1) from e


def load_dataset(data_dir: Path) -> tuple[DatasetMeta, FeatureMatrix, EmbeddingTable]:
    """meta.json, features.bin and embeds.bin from one directory."""
    meta = load_metadata(data_dir / META_FILE)
    features = load_features(data_dir / FEATURES_FILE, meta)
    embeds = load_embeddings(data_dir / EMBEDS_FILE, meta, embed_dim=None)
    return meta, features, embeds


def emit_json(data: dict[str, Any], path: Path | None = None) -> None:
    """Print a report on stdout and optionally save it."""
    text = json.dumps(data, indent=2, default=str)
    typer.echo(text)
    if path is not None:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text + "\n")


def parse_int_list(value: str, option: str) -> list[int]:
    """Comma-separated positive integers, e.g. ``1,2,3``."""
    try:
        values = [int(v) for v in value.split(",") if v.strip()]
    except ValueError as e:
        raise typer.BadParameter(f"expected integers like 1,2,3, got {value!r}") from e
    if not values or min(values) < 1:
        raise typer.BadParameter(f"{option} needs positive integers")
    return sorted(set(values))


def show_table(title: str, rows: dict[str, Any]) -> None:
    """Two-column summary table on stderr."""
    table = Table(title=title)
    table.add_column("Metric", style="cyan")
    table.add_column("Value", justify="right")
    for key, value in rows.items():
        text = f"{value:.4f}" if isinstance(value, float) else str(value)
        table.add_row(key, text)
    console.print(table)
