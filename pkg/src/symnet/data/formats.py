"""Binary matrix formats for features and embeddings.

Layout: 4-byte magic (``SYMF`` features, ``SYME`` embeddings), u32-LE version,
u32-LE count, u32-LE dim, then count*dim f32-LE values, row-major, no padding.
"""

from pathlib import Path
from typing import TypeVar

import numpy as np

from symnet.errors import (
    BadMagic,
    DimMismatch,
    DimensionMismatch,
    MissingFile,
    NonFiniteValue,
    ParseError,
    RowCountMismatch,
    VersionMismatch,
)
from symnet.logging_config import get_logger
from symnet.models.dataset import DatasetMeta
from symnet.models.matrix import EmbeddingTable, FeatureMatrix, Float32Matrix

logger = get_logger(__name__)

FORMAT_VERSION = 1
HEADER_SIZE = 16
U32 = np.dtype("<u4")
F32 = np.dtype("<f4")

M = TypeVar("M", bound=Float32Matrix)


def encode_matrix(matrix: Float32Matrix) -> bytes:
    """Serialize a matrix with its class magic."""
    header = np.array([FORMAT_VERSION, matrix.count, matrix.dim], dtype=U32)
    return matrix.MAGIC + header.tobytes() + matrix.data.astype(F32).tobytes()


def decode_matrix(buf: bytes, cls: type[M], source: str = "<bytes>") -> M:
    """Parse bytes into a matrix of the given class.

    Raises:
        ParseError: truncated header or payload length disagreeing with header
        BadMagic: magic bytes do not match ``cls``
        VersionMismatch: unsupported format version
        NonFiniteValue: NaN or Inf in the payload
    """
    if len(buf) < HEADER_SIZE:
        raise ParseError(
            "Truncated header", source=source, size=len(buf), needed=HEADER_SIZE
        )
    magic = bytes(buf[:4])
    if magic != cls.MAGIC:
        raise BadMagic(
            f"Expected magic {cls.MAGIC!r}, found {magic!r}",
            source=source,
            expected=cls.MAGIC.decode(),
            found=magic.hex(),
        )
    version, count, dim = (int(v) for v in np.frombuffer(buf, U32, count=3, offset=4))
    if version != FORMAT_VERSION:
        raise VersionMismatch(
            f"Unsupported version {version}", source=source, version=version
        )
    payload = len(buf) - HEADER_SIZE
    expected = count * dim * F32.itemsize
    if payload != expected:
        raise ParseError(
            f"Header declares {count}x{dim} floats but payload has {payload} bytes",
            source=source,
            count=count,
            dim=dim,
            payload_bytes=payload,
        )
    if dim == 0:
        raise ParseError("Matrix dim must be positive", source=source)
    data = np.frombuffer(buf, F32, count=count * dim, offset=HEADER_SIZE)
    data = data.reshape(count, dim)
    finite = np.isfinite(data)
    if not finite.all():
        row = int(np.argwhere(~finite)[0][0])
        raise NonFiniteValue(f"Non-finite value in row {row}", source=source, row=row)
    return cls(data.astype(np.float32))


def read_matrix(path: Path | str, cls: type[M]) -> M:
    """Read a matrix file from disk."""
    path = Path(path)
    if not path.exists():
        raise MissingFile(f"File not found: {path}", path=str(path))
    matrix = decode_matrix(path.read_bytes(), cls, source=str(path))
    logger.debug(
        "matrix_loaded", path=str(path), kind=cls.__name__, count=matrix.count
    )
    return matrix


def write_matrix(matrix: Float32Matrix, path: Path | str) -> None:
    """Write a matrix file to disk."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(encode_matrix(matrix))
    logger.debug("matrix_saved", path=str(path), kind=type(matrix).__name__)


def load_features(path: Path | str, meta: DatasetMeta | None = None) -> FeatureMatrix:
    """Load raw features, optionally checking the row count against ``meta``."""
    features = read_matrix(path, FeatureMatrix)
    if meta is not None and features.count != len(meta.samples):
        raise DimensionMismatch(
            f"{features.count} feature rows for {len(meta.samples)} samples",
            path=str(path),
            count=features.count,
            samples=len(meta.samples),
        )
    return features


def load_embeddings(
    path: Path | str, meta: DatasetMeta, embed_dim: int | None = 300
) -> EmbeddingTable:
    """Load attribute word vectors aligned to ``meta.attributes``.

    Args:
        path: SYME file
        meta: Dataset whose attribute vocabulary the rows follow
        embed_dim: Required row width, or None to accept any
    """
    table = read_matrix(path, EmbeddingTable)
    check_embeddings(table, meta, embed_dim)
    return table


def check_embeddings(
    table: EmbeddingTable, meta: DatasetMeta, embed_dim: int | None = None
) -> None:
    """Validate an embedding table against a vocabulary."""
    if table.count != meta.n_attrs:
        raise RowCountMismatch(
            f"{table.count} embedding rows for {meta.n_attrs} attributes",
            rows=table.count,
            attributes=meta.n_attrs,
        )
    if embed_dim is not None and table.dim != embed_dim:
        raise DimMismatch(
            f"Embedding dim {table.dim}, expected {embed_dim}",
            dim=table.dim,
            expected=embed_dim,
        )
