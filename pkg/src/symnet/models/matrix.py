"""Row-major float32 matrices stored on disk."""

from dataclasses import dataclass
from typing import ClassVar

import numpy as np


@dataclass(frozen=True, eq=False)
class Float32Matrix:
    """A count x dim float32 matrix; the array is read-only."""

    MAGIC: ClassVar[bytes] = b""

    data: np.ndarray

    def __post_init__(self) -> None:
        data = np.array(self.data, dtype=np.float32, order="C")
        if data.ndim != 2:
            raise ValueError(f"Expected a 2-D matrix, got shape {data.shape}")
        data.setflags(write=False)
        object.__setattr__(self, "data", data)

    @property
    def count(self) -> int:
        return int(self.data.shape[0])

    @property
    def dim(self) -> int:
        return int(self.data.shape[1])

    def rows(self, indices: np.ndarray) -> np.ndarray:
        """Copy of the selected rows."""
        return np.array(self.data[indices])


@dataclass(frozen=True, eq=False)
class FeatureMatrix(Float32Matrix):
    """Raw image features, rows aligned with DatasetMeta.samples."""

    MAGIC: ClassVar[bytes] = b"SYMF"


@dataclass(frozen=True, eq=False)
class EmbeddingTable(Float32Matrix):
    """Attribute word vectors, rows aligned with the attribute vocabulary."""

    MAGIC: ClassVar[bytes] = b"SYME"


def onehot_embeddings(n: int) -> EmbeddingTable:
    """Onehot attribute representation: the n x n identity."""
    return EmbeddingTable(np.eye(n, dtype=np.float32))
