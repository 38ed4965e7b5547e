"""Evaluation commands."""

from pathlib import Path

import typer

from symnet.cli.common import (
    domain_errors,
    emit_json,
    load_dataset,
    parse_int_list,
    show_table,
)
from symnet.models.dataset import Split

app = typer.Typer(help="Evaluate a checkpoint")


@app.command(name="eval")
def evaluate(
    data: Path = typer.Option(..., "--data", help="Dataset directory"),
    ckpt: Path = typer.Option(..., "--ckpt", help="Checkpoint to evaluate"),
    protocol: str = typer.Option(
        "closed", "--protocol", help="closed or generalized"
    ),
    topk: str = typer.Option("1,2,3", "--topk", help="Comma-separated k values"),
    split: Split = typer.Option(Split.TEST, "--split", help="Split to evaluate"),
    gamma: float = typer.Option(None, "--gamma", help="Attribute score scale"),
    dump_scores: Path = typer.Option(
        None, "--dump-scores", help="Write per-sample pair scores here"
    ),
    report: Path = typer.Option(None, "--report", help="Also save the JSON report"),
) -> None:
    """Top-k accuracy (closed) or the seen/unseen bias sweep (generalized)."""
    from symnet.evaluation import (  # noqa: PLC0415
        evaluate_closed,
        evaluate_generalized,
    )
    from symnet.models.dataset import Protocol  # noqa: PLC0415
    from symnet.training import load_checkpoint  # noqa: PLC0415

    ks = parse_int_list(topk, "--topk")
    try:
        chosen = Protocol.from_string(protocol)
    except ValueError as e:
        raise typer.BadParameter(str(e), param_hint="--protocol") from e

    with domain_errors():
        meta, features, embeds = load_dataset(data)
        checkpoint = load_checkpoint(ckpt)
        if chosen is Protocol.CLOSED_WORLD:
            result = evaluate_closed(
                checkpoint, meta, features, embeds, ks, split, gamma,
                dump_path=dump_scores,
            )
            rows = {f"top-{k}": v for k, v in result.topk.items()}
            rows.update(attr_acc=result.attr_acc, obj_acc=result.obj_acc)
        else:
            result = evaluate_generalized(
                checkpoint, meta, features, embeds, ks, split, gamma=gamma,
                dump_path=dump_scores,
            )
            rows = {f"auc top-{k}": v for k, v in result.auc_topk.items()}
            rows.update(
                best_hm=result.best_hm,
                seen_at_best=result.seen_at_best,
                unseen_at_best=result.unseen_at_best,
            )

    show_table(f"{chosen.value} evaluation ({split.value})", rows)
    emit_json({"protocol": chosen.value, **result.to_dict()}, report)


@app.command()
def components(
    data: Path = typer.Option(..., "--data", help="Dataset directory"),
    ckpt: Path = typer.Option(..., "--ckpt", help="Checkpoint to evaluate"),
    split: Split = typer.Option(Split.TEST, "--split", help="Split to evaluate"),
    report: Path = typer.Option(None, "--report", help="Also save the JSON report"),
) -> None:
    """Attribute-only and object-only accuracy."""
    from symnet.evaluation import component_accuracy, score_split  # noqa: PLC0415
    from symnet.evaluation.czsl import as_model  # noqa: PLC0415
    from symnet.training import load_checkpoint  # noqa: PLC0415

    with domain_errors():
        meta, features, embeds = load_dataset(data)
        model = as_model(load_checkpoint(ckpt))
        scores = score_split(model, meta, features, embeds, split)
        attr_acc, obj_acc = component_accuracy(scores)

    result = {
        "attr_acc": attr_acc,
        "obj_acc": obj_acc,
        "n_samples": len(scores),
        "split": split.value,
    }
    show_table(f"Component accuracy ({split.value})", result)
    emit_json(result, report)
