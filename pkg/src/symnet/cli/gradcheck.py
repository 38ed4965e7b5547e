"""Gradient check command."""

import typer

from symnet.cli.common import console, domain_errors, emit_json

app = typer.Typer(help="Check analytic gradients against finite differences")


@app.command()
def gradcheck(
    seed: int = typer.Option(0, "--seed", min=0, help="Seed of the random problem"),
    seeds: int = typer.Option(1, "--seeds", min=1, help="Consecutive seeds to check"),
    tol: float = typer.Option(1e-4, "--tol", help="Relative error tolerance"),
    h: float = typer.Option(1e-5, "--h", help="Finite-difference step"),
) -> None:
    """Check every parameter of a tiny float64 model under the full loss."""
    from symnet.nn.gradcheck import gradcheck as run_gradcheck  # noqa: PLC0415
    from symnet.training.gradcheck import tiny_problem  # noqa: PLC0415

    reports = []
    with domain_errors():
        for s in range(seed, seed + seeds):
            report = run_gradcheck(tiny_problem, s, h=h, tol=tol)
            reports.append(report.to_dict())
            console.print(
                f"[green]seed {s}: {report.checked} coordinates, "
                f"max relative error {report.max_rel_error:.2e}[/green]"
            )

    emit_json(reports[0] if len(reports) == 1 else {"reports": reports})
