"""Data models for SymNet."""

from symnet.models.dataset import (
    DatasetMeta,
    Pair,
    PairMask,
    Protocol,
    SampleRecord,
    Split,
)
from symnet.models.matrix import (
    EmbeddingTable,
    FeatureMatrix,
    Float32Matrix,
    onehot_embeddings,
)

__all__ = [
    "DatasetMeta",
    "EmbeddingTable",
    "FeatureMatrix",
    "Float32Matrix",
    "Pair",
    "PairMask",
    "Protocol",
    "SampleRecord",
    "Split",
    "onehot_embeddings",
]
