"""Retrieve command."""

from pathlib import Path

import typer

from symnet.cli.common import console, domain_errors, load_dataset
from symnet.models.dataset import Split

app = typer.Typer(help="Attribute-manipulated and query retrieval")


def _parse_pair(value: str) -> tuple[str, str]:
    attr, sep, obj = value.partition(",")
    if not sep or not attr.strip() or not obj.strip():
        raise typer.BadParameter(f"--query-pair expects ATTR,OBJ, got {value!r}")
    return attr.strip(), obj.strip()


@app.command()
def retrieve(
    data: Path = typer.Option(..., "--data", help="Dataset directory"),
    ckpt: Path = typer.Option(..., "--ckpt", help="Checkpoint to use"),
    sample: str = typer.Option(None, "--sample", help="Source sample id"),
    remove: str = typer.Option(None, "--remove", help="Attribute to remove"),
    add: str = typer.Option(None, "--add", help="Attribute to add"),
    query_attr: str = typer.Option(
        None, "--query-attr", help="Rank samples by this attribute's probability"
    ),
    query_pair: str = typer.Option(
        None, "--query-pair", help="Rank samples by the score of ATTR,OBJ"
    ),
    split: Split = typer.Option(Split.TEST, "--split", help="Split to rank (queries)"),
    k: int = typer.Option(5, "--k", min=1, help="Hits to return"),
    out: Path = typer.Option(None, "--out", help="Also write the TSV here"),
) -> None:
    """Retrieve test samples for a manipulated sample or a query.

    With --sample/--remove/--add, the nearest test samples to SAMPLE with one
    attribute swapped for another, as rank, sample_id and distance. With
    --query-attr or --query-pair, the samples of --split with the highest
    attribute or pair score, as rank, sample_id and score.
    """
    from symnet.evaluation.retrieval import (  # noqa: PLC0415
        format_tsv,
        query_retrieve,
        retrieve as run_retrieval,
        write_tsv,
    )
    from symnet.training import load_checkpoint  # noqa: PLC0415

    manipulation = (sample, remove, add)
    queries = [q for q in (query_attr, query_pair) if q is not None]
    if len(queries) > 1:
        raise typer.BadParameter("Use either --query-attr or --query-pair")
    if queries and any(v is not None for v in manipulation):
        raise typer.BadParameter("Queries do not take --sample, --remove or --add")
    if not queries and any(v is None for v in manipulation):
        raise typer.BadParameter(
            "Give --sample, --remove and --add, or --query-attr, or --query-pair"
        )
    pair = _parse_pair(query_pair) if query_pair is not None else None

    with domain_errors():
        meta, features, embeds = load_dataset(data)
        checkpoint = load_checkpoint(ckpt)
        if pair is not None:
            hits = query_retrieve(
                checkpoint, meta, features, embeds, pair[0], pair[1], k, split
            )
        elif query_attr is not None:
            hits = query_retrieve(
                checkpoint, meta, features, embeds, query_attr, None, k, split
            )
        else:
            hits = run_retrieval(
                checkpoint, meta, features, embeds, sample, remove, add, k
            )

    column = "distance" if not queries else "score"
    typer.echo(format_tsv(hits, column), nl=False)
    if out is not None:
        write_tsv(hits, out, column)
        console.print(f"[green]Wrote {len(hits)} hits to {out}[/green]")
