"""Pair-score dumps.

Layout: magic ``SYMS``, u32-LE count, u32-LE n, u32-LE m, then count*n*m
f32-LE scores, sample-major then row-major. Cells outside the candidate mask
are written as NaN; that sentinel exists only in the dump.
"""

from pathlib import Path

import numpy as np

from symnet.errors import BadMagic, MissingFile, ParseError
from symnet.logging_config import get_logger

logger = get_logger(__name__)

MAGIC = b"SYMS"
HEADER_SIZE = 16
U32 = np.dtype("<u4")
F32 = np.dtype("<f4")


def encode_scores(scores: np.ndarray, mask: np.ndarray) -> bytes:
    """Serialize [count, n, m] scores with masked cells as NaN."""
    scores = np.asarray(scores)
    if scores.ndim != 3 or scores.shape[1:] != mask.shape:
        raise ParseError(
            "Scores must be [count, n, m] and match the mask",
            shape=list(scores.shape),
            mask=list(mask.shape),
        )
    out = np.where(mask[None, :, :], scores, np.nan).astype(F32)
    header = np.array(scores.shape, dtype=U32)
    return MAGIC + header.tobytes() + out.tobytes()


def decode_scores(buf: bytes, source: str = "<bytes>") -> np.ndarray:
    """Parse a dump back into a [count, n, m] float32 array (NaN = masked)."""
    if len(buf) < HEADER_SIZE:
        raise ParseError("Truncated header", source=source, size=len(buf))
    if bytes(buf[:4]) != MAGIC:
        raise BadMagic(
            f"Expected magic {MAGIC!r}", source=source, found=bytes(buf[:4]).hex()
        )
    count, n, m = (int(v) for v in np.frombuffer(buf, U32, count=3, offset=4))
    if len(buf) - HEADER_SIZE != count * n * m * F32.itemsize:
        raise ParseError(
            "Payload length disagrees with header",
            source=source,
            count=count,
            n=n,
            m=m,
        )
    data = np.frombuffer(buf, F32, count=count * n * m, offset=HEADER_SIZE)
    return data.reshape(count, n, m).copy()


def write_score_dump(path: Path | str, scores: np.ndarray, mask: np.ndarray) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(encode_scores(scores, mask))
    logger.info("scores_dumped", path=str(path), count=int(np.shape(scores)[0]))


def read_score_dump(path: Path | str) -> np.ndarray:
    path = Path(path)
    if not path.exists():
        raise MissingFile(f"File not found: {path}", path=str(path))
    return decode_scores(path.read_bytes(), source=str(path))
