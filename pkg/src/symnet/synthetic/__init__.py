"""Synthetic datasets with known geometry and oracle checks."""

from symnet.synthetic.generator import (
    SynthTruth,
    SyntheticDataset,
    gen_synthetic,
    load_truth,
    write_synthetic,
)
from symnet.synthetic.oracle import (
    axiom_residuals,
    axiom_residuals_for,
    nearest_offset_accuracy,
    oracle_agreement,
    oracle_rmd_sign,
)

__all__ = [
    "SynthTruth",
    "SyntheticDataset",
    "axiom_residuals",
    "axiom_residuals_for",
    "gen_synthetic",
    "load_truth",
    "nearest_offset_accuracy",
    "oracle_agreement",
    "oracle_rmd_sign",
    "write_synthetic",
]
