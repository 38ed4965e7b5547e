"""Relative moving distance inference and pair scoring."""

from symnet.inference.dump import read_score_dump, write_score_dump
from symnet.inference.rmd import (
    PairScores,
    RankedPair,
    RmdResult,
    attr_probs,
    object_probs,
    pair_score_grid,
    pair_scores,
    rmd_distances,
    rmd_scores,
)

__all__ = [
    "PairScores",
    "RankedPair",
    "RmdResult",
    "attr_probs",
    "object_probs",
    "pair_score_grid",
    "pair_scores",
    "read_score_dump",
    "rmd_distances",
    "rmd_scores",
    "write_score_dump",
]
