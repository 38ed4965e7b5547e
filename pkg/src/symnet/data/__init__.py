"""Dataset loading, masks and negative sampling."""

from symnet.data.formats import (
    load_embeddings,
    load_features,
    read_matrix,
    write_matrix,
)
from symnet.data.masks import build_pair_mask
from symnet.data.metadata import load_metadata, save_metadata
from symnet.data.sampling import NegativeSampler, sample_negative

__all__ = [
    "NegativeSampler",
    "build_pair_mask",
    "load_embeddings",
    "load_features",
    "load_metadata",
    "read_matrix",
    "sample_negative",
    "save_metadata",
    "write_matrix",
]
