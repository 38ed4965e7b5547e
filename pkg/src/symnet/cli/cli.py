"""CLI for SymNet."""

import logging
import sys
from collections.abc import Sequence

import typer
from dotenv import load_dotenv

from symnet.version import version_string

app = typer.Typer(
    name="symnet",
    help="Train and evaluate attribute-object composition models",
    no_args_is_help=True,
    add_completion=False,
    rich_markup_mode="rich",
)


def config_callback(log_level: str) -> str:
    """Configure logging based on log level."""
    from symnet.logging_config import configure_logging  # noqa: PLC0415

    level_int = getattr(logging, log_level.upper(), logging.INFO)
    configure_logging(level_int)
    return log_level


def _exit_with_version(value: bool) -> None:
    """Exit with version information."""
    if value:
        typer.echo(version_string())
        raise typer.Exit()


@app.callback()
def callback(
    version: bool = typer.Option(
        False,
        "--version",
        "-V",
        help="Show version and exit",
        is_eager=True,
        callback=_exit_with_version,
    ),
    log_level: str = typer.Option(
        "INFO",
        "--log-level",
        "-l",
        envvar="SYMNET_LOG_LEVEL",
        help="Set logging level",
        callback=config_callback,
    ),
) -> None:
    """SymNet - symmetry learning for attribute-object compositions."""
    load_dotenv()


# Import and register commands (must come after app is defined)
from symnet.cli import evaluate, gradcheck, retrieve, synth, train  # noqa: E402

app.add_typer(train.app)
app.add_typer(evaluate.app)
app.add_typer(retrieve.app)
app.add_typer(gradcheck.app)
app.add_typer(synth.app)


def main(argv: Sequence[str] | None = None) -> int:
    """Run the CLI and return its exit code.

    0 on success, 1 on a domain error, 2 on a usage error.
    """
    command = typer.main.get_command(app)
    args = list(argv) if argv is not None else sys.argv[1:]
    try:
        command.main(args=args, prog_name="symnet", standalone_mode=True)
    except SystemExit as e:
        if e.code is None:
            return 0
        return e.code if isinstance(e.code, int) else 1
    return 0


def run() -> None:
    """Console-script entry point."""
    sys.exit(main())
