"""Version information for SymNet."""

from __future__ import annotations

from pathlib import Path

from structlog import get_logger

from symnet import __version__

logger = get_logger(__name__)


def get_git_commit() -> str | None:
    """Get the git commit hash of a source checkout, if there is one.

    Read at call time so long-running processes report the live checkout.
    """
    git_dir = Path(__file__).parent.parent.parent / ".git"
    try:
        if not git_dir.exists():
            logger.debug("git_dir_missing", git_dir=str(git_dir))
            return None
        head = (git_dir / "HEAD").read_text().strip()
        if head.startswith("ref:"):
            ref = head.split(" ", 1)[1]
            return (git_dir / ref).read_text().strip()
        return head
    except OSError as e:
        logger.debug("git_commit_unreadable", error=str(e))
        return None


def version_string() -> str:
    """Package version with the commit suffix when known."""
    commit = get_git_commit()
    return f"{__version__}+{commit[:8]}" if commit else __version__
