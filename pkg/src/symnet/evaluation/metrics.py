"""Pure ranking metrics over pair-score matrices.

Scores are flattened to [B, C] with C = n * m cells in row-major order; ties
are broken by the smaller flat index, as in ``PairScores.topk``. The
generalized sweep adds a bias to every unseen cell. Instead of re-ranking at
every bias, each sample yields one threshold per k: a seen-pair sample is
correct while the bias stays below it, an unseen-pair sample once the bias
exceeds it.
"""

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from symnet.errors import EmptyGrid

NEVER_RANK = np.iinfo(np.int64).max


def flat_truth(attrs: np.ndarray, objs: np.ndarray, n_objs: int) -> np.ndarray:
    return np.asarray(attrs, dtype=np.int64) * n_objs + np.asarray(objs, dtype=np.int64)


def truth_ranks(
    scores: np.ndarray, candidates: np.ndarray, truth: np.ndarray
) -> np.ndarray:
    """0-based rank of the true cell among candidates; NEVER_RANK if not a candidate."""
    scores = np.asarray(scores)
    rows = np.arange(scores.shape[0])
    cand = np.asarray(candidates, dtype=bool)
    s_true = scores[rows, truth]
    above = (scores > s_true[:, None]) & cand
    index = np.arange(scores.shape[1])
    tied_before = (scores == s_true[:, None]) & (index[None, :] < truth[:, None]) & cand
    ranks = above.sum(axis=1) + tied_before.sum(axis=1)
    return np.where(cand[truth], ranks, NEVER_RANK).astype(np.int64)


def topk_accuracy(ranks: np.ndarray, ks: Sequence[int]) -> dict[int, float]:
    """Share of samples whose rank is below k, for each k."""
    if ranks.size == 0:
        return {int(k): 0.0 for k in ks}
    return {int(k): float(np.count_nonzero(ranks < k)) / ranks.size for k in ks}


def closed_topk(
    scores: np.ndarray,
    mask: np.ndarray,
    attrs: np.ndarray,
    objs: np.ndarray,
    ks: Sequence[int] = (1, 2, 3),
) -> dict[int, float]:
    """Top-k accuracy of [B, n, m] scores restricted to ``mask``."""
    b, _, m = scores.shape
    ranks = truth_ranks(scores.reshape(b, -1), mask.ravel(), flat_truth(attrs, objs, m))
    return topk_accuracy(ranks, ks)


def _kth_largest(scores: np.ndarray, cand: np.ndarray, depth: int) -> np.ndarray:
    """[B, depth] descending candidate scores, padded with -inf."""
    masked = np.where(cand[None, :], scores, -np.inf)
    depth = max(1, depth)
    width = masked.shape[1]
    if depth < width:
        part = np.partition(masked, width - depth, axis=1)[:, width - depth :]
    else:
        part = masked
    top = -np.sort(-part, axis=1)
    if top.shape[1] < depth:
        pad = np.full((top.shape[0], depth - top.shape[1]), -np.inf)
        top = np.concatenate([top, pad], axis=1)
    return top[:, :depth]


@dataclass(frozen=True)
class BiasThresholds:
    """Per-sample bias thresholds for the generalized sweep."""

    unseen_truth: np.ndarray
    tau: dict[int, np.ndarray]
    gaps: np.ndarray

    @classmethod
    def concat(cls, parts: Sequence["BiasThresholds"]) -> "BiasThresholds":
        ks = parts[0].tau.keys() if parts else ()
        return cls(
            unseen_truth=np.concatenate([p.unseen_truth for p in parts]),
            tau={k: np.concatenate([p.tau[k] for p in parts]) for k in ks},
            gaps=np.concatenate([p.gaps for p in parts]),
        )


def bias_thresholds(
    scores: np.ndarray,
    seen_cand: np.ndarray,
    unseen_cand: np.ndarray,
    truth: np.ndarray,
    unseen_truth: np.ndarray,
    ks: Sequence[int] = (1, 2, 3),
) -> BiasThresholds:
    """Thresholds of flattened scores [B, C] for every k.

    ``unseen_truth`` marks samples whose true pair is not a train pair; the
    two candidate masks split the candidate cells the same way.
    """
    scores = np.asarray(scores, dtype=np.float64)
    seen_cand = np.asarray(seen_cand, dtype=bool)
    unseen_cand = np.asarray(unseen_cand, dtype=bool)
    unseen_truth = np.asarray(unseen_truth, dtype=bool)
    rows = np.arange(scores.shape[0])
    depth = max(ks)
    top_seen = _kth_largest(scores, seen_cand, depth)
    top_unseen = _kth_largest(scores, unseen_cand, depth)
    s_true = scores[rows, truth]

    own_cand = np.where(unseen_truth[:, None], unseen_cand[None, :], seen_cand[None, :])
    in_group = own_cand[rows, truth]
    index = np.arange(scores.shape[1])
    above = (scores > s_true[:, None]) & own_cand
    tied = (scores == s_true[:, None]) & (index[None, :] < truth[:, None]) & own_cand
    group_rank = above.sum(axis=1) + tied.sum(axis=1)

    tau: dict[int, np.ndarray] = {}
    for k in ks:
        j = k - group_rank
        usable = in_group & (j >= 1)
        pick = np.clip(j, 1, depth) - 1
        other_unseen = top_unseen[rows, pick]
        other_seen = top_seen[rows, pick]
        seen_tau = np.where(usable, s_true - other_unseen, -np.inf)
        unseen_tau = np.where(usable, other_seen - s_true, np.inf)
        tau[int(k)] = np.where(unseen_truth, unseen_tau, seen_tau)

    with np.errstate(invalid="ignore"):
        gaps = top_seen[:, 0] - top_unseen[:, 0]
    return BiasThresholds(unseen_truth=unseen_truth, tau=tau, gaps=gaps)


def bias_grid(thresholds: BiasThresholds) -> np.ndarray:
    """Midpoints of adjacent distinct finite gaps plus two outer points.

    Correctness only changes at a threshold, so the outer points, placed beyond
    every finite threshold and gap, behave like -inf and +inf.
    """
    gaps = thresholds.gaps[np.isfinite(thresholds.gaps)]
    values = np.concatenate([gaps, *thresholds.tau.values()])
    values = values[np.isfinite(values)]
    lo = float(values.min()) - 1.0 if values.size else -1.0
    hi = float(values.max()) + 1.0 if values.size else 1.0
    distinct = np.unique(gaps)
    mids = (distinct[1:] + distinct[:-1]) / 2
    return np.concatenate([[lo], mids, [hi]])


def sweep(
    thresholds: BiasThresholds, grid: Sequence[float]
) -> dict[int, tuple[np.ndarray, np.ndarray]]:
    """(seen accuracy, unseen accuracy) at every bias, per k.

    An empty group scores 0 everywhere.

    Raises:
        EmptyGrid: no bias values
    """
    grid = np.asarray(grid, dtype=np.float64)
    if grid.size == 0:
        raise EmptyGrid("The bias grid is empty")
    unseen_truth = thresholds.unseen_truth
    curves: dict[int, tuple[np.ndarray, np.ndarray]] = {}
    for k, tau in thresholds.tau.items():
        seen_tau = np.sort(tau[~unseen_truth])
        unseen_tau = np.sort(tau[unseen_truth])
        seen_acc = np.zeros(grid.size)
        unseen_acc = np.zeros(grid.size)
        if seen_tau.size:
            correct = seen_tau.size - np.searchsorted(seen_tau, grid, side="right")
            seen_acc = correct / seen_tau.size
        if unseen_tau.size:
            unseen_acc = np.searchsorted(unseen_tau, grid, side="left") / unseen_tau.size
        curves[k] = (seen_acc, unseen_acc)
    return curves


def auc(seen: Sequence[float], unseen: Sequence[float]) -> float:
    """Trapezoid area under unseen accuracy as a function of seen accuracy."""
    seen = np.asarray(seen, dtype=np.float64)
    unseen = np.asarray(unseen, dtype=np.float64)
    order = np.lexsort((-unseen, seen))
    return float(np.trapezoid(unseen[order], seen[order]))


def harmonic_mean(seen: float, unseen: float) -> float:
    if seen + unseen == 0:
        return 0.0
    return 2 * seen * unseen / (seen + unseen)


def best_harmonic_mean(
    seen: Sequence[float], unseen: Sequence[float]
) -> tuple[float, float, float]:
    """(best hm, seen, unseen) over the curve; first maximum wins."""
    hms = [harmonic_mean(float(s), float(u)) for s, u in zip(seen, unseen)]
    best = int(np.argmax(hms))
    return hms[best], float(seen[best]), float(unseen[best])
