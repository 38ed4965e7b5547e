"""Closed-world and generalized compositional zero-shot evaluation."""

from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from symnet.config.settings import RuntimeSettings
from symnet.data.masks import build_pair_mask
from symnet.errors import EmptyCandidateSet, EmptyGrid
from symnet.evaluation import metrics
from symnet.inference.dump import write_score_dump
from symnet.inference.rmd import attr_probs, object_probs, pair_score_grid, rmd_scores
from symnet.logging_config import get_logger
from symnet.model.symnet import SymNet
from symnet.models.dataset import DatasetMeta, PairMask, Protocol, Split
from symnet.models.matrix import EmbeddingTable, FeatureMatrix
from symnet.nn.tensor import no_grad
from symnet.training.checkpoint import Checkpoint, model_from_checkpoint

logger = get_logger(__name__)

CHUNK_ROWS = 256
DEFAULT_KS = (1, 2, 3)


@dataclass
class SplitScores:
    """Per-sample probabilities of one evaluated split."""

    rows: np.ndarray
    attrs: np.ndarray
    objs: np.ndarray
    d: np.ndarray
    p_attr: np.ndarray
    p_obj: np.ndarray

    def __len__(self) -> int:
        return int(self.rows.size)

    def pair_grid(self, start: int = 0, stop: int | None = None) -> np.ndarray:
        return pair_score_grid(self.p_attr[start:stop], self.p_obj[start:stop])

    def chunks(self) -> list[tuple[int, int]]:
        return [
            (s, min(s + CHUNK_ROWS, len(self))) for s in range(0, len(self), CHUNK_ROWS)
        ]


@dataclass
class CzslReport:
    """Closed-world top-k and component accuracies."""

    topk: dict[int, float]
    attr_acc: float
    obj_acc: float
    n_samples: int
    split: str = Split.TEST.value

    def to_dict(self) -> dict:
        data = asdict(self)
        data["topk"] = {str(k): v for k, v in self.topk.items()}
        return data


@dataclass
class GeneralizedReport:
    """Bias sweep over seen and unseen pairs."""

    bias_grid: list[float]
    seen_curve: list[float]
    unseen_curve: list[float]
    auc_topk: dict[int, float]
    best_hm: float
    seen_at_best: float
    unseen_at_best: float
    n_seen: int = 0
    n_unseen: int = 0
    split: str = Split.TEST.value
    curves: dict[int, tuple[list[float], list[float]]] = field(default_factory=dict)

    def to_dict(self) -> dict:
        data = asdict(self)
        data["auc_topk"] = {str(k): v for k, v in self.auc_topk.items()}
        data["curves"] = {
            str(k): {"seen": s, "unseen": u} for k, (s, u) in self.curves.items()
        }
        return data


def as_model(source: SymNet | Checkpoint) -> SymNet:
    """Eval-mode model from a model or a checkpoint."""
    model = model_from_checkpoint(source) if isinstance(source, Checkpoint) else source
    model.eval()
    return model


def _score_chunk(
    model: SymNet, raw: np.ndarray, embeds: np.ndarray, gamma: float
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    with no_grad():
        f = model.proj(raw)
        rmd = rmd_scores(
            f, embeds, model.con, model.decon, model.cfg.dist, model.cfg.squared_dist
        )
        return rmd.d, attr_probs(rmd.d, gamma), object_probs(f, model.obj_clf)


def score_split(
    model: SymNet,
    meta: DatasetMeta,
    features: FeatureMatrix,
    embeds: EmbeddingTable,
    split: Split = Split.TEST,
    gamma: float | None = None,
    threads: int | None = None,
) -> SplitScores:
    """RMD and probabilities for every sample of ``split``.

    Chunks are scored on a thread pool; results are reassembled in row order,
    so the output does not depend on the schedule.
    """
    split = Split(split)
    rows = meta.split_indices(split)
    gamma = model.cfg.gamma if gamma is None else gamma
    attr_probs(np.zeros(1), gamma)  # rejects a bad gamma before any work
    workers = threads or RuntimeSettings.from_env().worker_count
    table = embeds.data.astype(model.dtype)
    raw = features.data.astype(model.dtype)
    bounds = [
        (s, min(s + CHUNK_ROWS, rows.size)) for s in range(0, rows.size, CHUNK_ROWS)
    ]

    def work(bound: tuple[int, int]) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return _score_chunk(model, raw[rows[bound[0] : bound[1]]], table, gamma)

    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        parts = list(pool.map(work, bounds))

    n, m = meta.n_attrs, meta.n_objs
    logger.debug(
        "split_scored", split=split.value, samples=int(rows.size), workers=workers
    )
    return SplitScores(
        rows=rows,
        attrs=np.array([meta.samples[r].attr for r in rows], dtype=np.int64),
        objs=np.array([meta.samples[r].obj for r in rows], dtype=np.int64),
        d=np.concatenate([p[0] for p in parts]) if parts else np.zeros((0, n)),
        p_attr=np.concatenate([p[1] for p in parts]) if parts else np.zeros((0, n)),
        p_obj=np.concatenate([p[2] for p in parts]) if parts else np.zeros((0, m)),
    )


def component_accuracy(scores: SplitScores) -> tuple[float, float]:
    """Attribute and object accuracy from independent argmaxes."""
    if len(scores) == 0:
        return 0.0, 0.0
    attr_acc = float(np.mean(np.argmax(scores.p_attr, axis=1) == scores.attrs))
    obj_acc = float(np.mean(np.argmax(scores.p_obj, axis=1) == scores.objs))
    return attr_acc, obj_acc


def _dump(scores: SplitScores, mask: PairMask, dump_path: Path | str | None) -> None:
    if dump_path is not None:
        write_score_dump(dump_path, scores.pair_grid(), mask.mask)


def evaluate_closed(
    source: SymNet | Checkpoint,
    meta: DatasetMeta,
    features: FeatureMatrix,
    embeds: EmbeddingTable,
    ks: Sequence[int] = DEFAULT_KS,
    split: Split = Split.TEST,
    gamma: float | None = None,
    threads: int | None = None,
    dump_path: Path | str | None = None,
) -> CzslReport:
    """Closed-world top-k accuracy plus attribute/object accuracy.

    Raises:
        EmptyCandidateSet: the closed-world mask admits no pair
    """
    split = Split(split)
    model = as_model(source)
    mask = build_pair_mask(meta, Protocol.CLOSED_WORLD, split)
    if mask.candidate_count == 0:
        raise EmptyCandidateSet("Closed-world mask admits no pair", split=split.value)
    scores = score_split(model, meta, features, embeds, split, gamma, threads)
    _dump(scores, mask, dump_path)

    ranks = [
        metrics.truth_ranks(
            scores.pair_grid(a, b).reshape(b - a, -1),
            mask.mask.ravel(),
            metrics.flat_truth(scores.attrs[a:b], scores.objs[a:b], meta.n_objs),
        )
        for a, b in scores.chunks()
    ]
    all_ranks = np.concatenate(ranks) if ranks else np.zeros(0, dtype=np.int64)
    attr_acc, obj_acc = component_accuracy(scores)
    report = CzslReport(
        topk=metrics.topk_accuracy(all_ranks, ks),
        attr_acc=attr_acc,
        obj_acc=obj_acc,
        n_samples=len(scores),
        split=split.value,
    )
    logger.info("closed_world_evaluated", **report.to_dict())
    return report


def evaluate_generalized(
    source: SymNet | Checkpoint,
    meta: DatasetMeta,
    features: FeatureMatrix,
    embeds: EmbeddingTable,
    ks: Sequence[int] = DEFAULT_KS,
    split: Split = Split.TEST,
    grid: Sequence[float] | None = None,
    gamma: float | None = None,
    threads: int | None = None,
    dump_path: Path | str | None = None,
) -> GeneralizedReport:
    """Seen/unseen accuracy over a calibration-bias sweep.

    ``grid`` overrides the exact sweep built from the per-sample score gaps.

    Raises:
        EmptyGrid: the grid is empty or there is nothing to evaluate
    """
    split = Split(split)
    model = as_model(source)
    mask = build_pair_mask(meta, Protocol.GENERALIZED, split)
    scores = score_split(model, meta, features, embeds, split, gamma, threads)
    if len(scores) == 0:
        raise EmptyGrid("No samples to sweep", split=split.value)
    _dump(scores, mask, dump_path)

    seen_cand = (mask.mask & ~mask.unseen).ravel()
    unseen_cand = mask.unseen.ravel()
    unseen_truth = np.array(
        [(a, o) not in meta.train_pair_set for a, o in zip(scores.attrs, scores.objs)]
    )
    n_unseen = int(unseen_truth.sum())
    n_seen = len(scores) - n_unseen
    if n_seen == 0 or n_unseen == 0:
        logger.warning(
            "generalized_group_empty",
            split=split.value,
            seen_samples=n_seen,
            unseen_samples=n_unseen,
        )

    thresholds = metrics.BiasThresholds.concat(
        [
            metrics.bias_thresholds(
                scores.pair_grid(a, b).reshape(b - a, -1),
                seen_cand,
                unseen_cand,
                metrics.flat_truth(scores.attrs[a:b], scores.objs[a:b], meta.n_objs),
                unseen_truth[a:b],
                ks,
            )
            for a, b in scores.chunks()
        ]
    )
    if grid is None:
        bias = metrics.bias_grid(thresholds)
    else:
        bias = np.asarray(grid, dtype=np.float64)
    curves = metrics.sweep(thresholds, bias)
    top1 = min(curves)
    seen_curve, unseen_curve = curves[top1]
    best_hm, seen_best, unseen_best = metrics.best_harmonic_mean(seen_curve, unseen_curve)
    report = GeneralizedReport(
        bias_grid=bias.tolist(),
        seen_curve=seen_curve.tolist(),
        unseen_curve=unseen_curve.tolist(),
        auc_topk={k: metrics.auc(s, u) for k, (s, u) in curves.items()},
        best_hm=best_hm,
        seen_at_best=seen_best,
        unseen_at_best=unseen_best,
        n_seen=n_seen,
        n_unseen=n_unseen,
        split=split.value,
        curves={k: (s.tolist(), u.tolist()) for k, (s, u) in curves.items()},
    )
    logger.info(
        "generalized_evaluated",
        split=split.value,
        grid=len(report.bias_grid),
        auc={str(k): v for k, v in report.auc_topk.items()},
        best_hm=best_hm,
    )
    return report
