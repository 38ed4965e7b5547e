"""Evaluation protocols, metrics and retrieval."""

from symnet.evaluation.czsl import (
    CzslReport,
    GeneralizedReport,
    SplitScores,
    component_accuracy,
    evaluate_closed,
    evaluate_generalized,
    score_split,
)
from symnet.evaluation.retrieval import (
    QueryHit,
    RetrievalHit,
    format_tsv,
    query_retrieve,
    retrieve,
)

__all__ = [
    "CzslReport",
    "GeneralizedReport",
    "QueryHit",
    "RetrievalHit",
    "SplitScores",
    "component_accuracy",
    "evaluate_closed",
    "evaluate_generalized",
    "format_tsv",
    "query_retrieve",
    "retrieve",
    "score_split",
]
