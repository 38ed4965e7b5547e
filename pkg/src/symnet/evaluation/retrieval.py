"""Retrieval by attribute manipulation and by attribute or pair queries."""

from collections.abc import Sequence
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from symnet.errors import (
    AttrOutOfRange,
    IdenticalAttrIndices,
    ObjOutOfRange,
    UnknownSampleId,
)
from symnet.evaluation.czsl import as_model, score_split
from symnet.logging_config import get_logger
from symnet.model.symnet import SymNet
from symnet.model.transforms import Transform
from symnet.models.dataset import DatasetMeta, Split
from symnet.models.matrix import EmbeddingTable, FeatureMatrix
from symnet.nn.tensor import Tensor, no_grad
from symnet.training.checkpoint import Checkpoint

logger = get_logger(__name__)


@dataclass(frozen=True)
class RetrievalHit:
    rank: int
    sample_id: str
    distance: float

    @property
    def value(self) -> float:
        return self.distance


@dataclass(frozen=True)
class QueryHit:
    rank: int
    sample_id: str
    score: float

    @property
    def value(self) -> float:
        return self.score


def _check_attr(meta: DatasetMeta, key: str | int, role: str) -> int:
    index = meta.attr_index(key)
    if not 0 <= index < meta.n_attrs:
        raise AttrOutOfRange(
            f"Unknown {role} attribute {key!r}", attr=str(key), n_attrs=meta.n_attrs
        )
    return index


def manipulate(
    f: Tensor, remove: np.ndarray, add: np.ndarray, con: Transform, decon: Transform
) -> Tensor:
    """f . T-(remove) . T+(add)."""
    return con(decon(f, Tensor(remove)), Tensor(add))


def rank_gallery(
    query: np.ndarray, gallery: np.ndarray, k: int, exclude: int | None = None
) -> list[tuple[int, float]]:
    """(gallery row, L2 distance) of the k nearest rows, ties by row index."""
    dist = np.linalg.norm(gallery - query[None, :], axis=1)
    index = np.arange(gallery.shape[0])
    keep = index != exclude if exclude is not None else np.ones_like(index, dtype=bool)
    index, dist = index[keep], dist[keep]
    order = np.lexsort((index, dist))[:k]
    return [(int(index[i]), float(dist[i])) for i in order]


def retrieve(
    source: SymNet | Checkpoint,
    meta: DatasetMeta,
    features: FeatureMatrix,
    embeds: EmbeddingTable,
    sample_id: str,
    remove_attr: str | int,
    add_attr: str | int,
    k: int = 5,
) -> list[RetrievalHit]:
    """Test-split samples nearest to the manipulated embedding of ``sample_id``.

    The source sample itself is never returned; ``k`` larger than the gallery
    returns the whole gallery.

    Raises:
        UnknownSampleId: no such sample
        AttrOutOfRange: an attribute is not in the vocabulary
        IdenticalAttrIndices: removing and adding the same attribute
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    if sample_id not in meta.sample_index:
        raise UnknownSampleId(f"Unknown sample {sample_id!r}", sample_id=sample_id)
    a = _check_attr(meta, remove_attr, "remove")
    b = _check_attr(meta, add_attr, "add")
    if a == b:
        raise IdenticalAttrIndices(
            "Removed and added attributes must differ", attr=a
        )

    model = as_model(source)
    table = embeds.data.astype(model.dtype)
    raw = features.data.astype(model.dtype)
    source_row = meta.sample_index[sample_id]
    gallery_rows = meta.split_indices(Split.TEST)

    with no_grad():
        f = model.proj(raw[source_row : source_row + 1])
        query = manipulate(f, table[a : a + 1], table[b : b + 1], model.con, model.decon)
        gallery = model.proj(raw[gallery_rows]).numpy()

    exclude = np.flatnonzero(gallery_rows == source_row)
    ranked = rank_gallery(
        query.numpy()[0], gallery, k, int(exclude[0]) if exclude.size else None
    )
    hits = [
        RetrievalHit(rank + 1, meta.samples[gallery_rows[i]].sample_id, d)
        for rank, (i, d) in enumerate(ranked)
    ]
    logger.info(
        "retrieval_finished",
        sample_id=sample_id,
        remove=meta.attributes[a],
        add=meta.attributes[b],
        hits=len(hits),
    )
    return hits


def query_retrieve(
    source: SymNet | Checkpoint,
    meta: DatasetMeta,
    features: FeatureMatrix,
    embeds: EmbeddingTable,
    attr: str | int,
    obj: str | int | None = None,
    k: int = 5,
    split: Split = Split.TEST,
    gamma: float | None = None,
    threads: int | None = None,
) -> list[QueryHit]:
    """Samples of ``split`` ranked by the score of a queried attribute or pair.

    Without ``obj`` the score is p_attr of ``attr``; with it, the pair score
    p_attr * p_obj. Higher scores come first, ties by sample order.

    Raises:
        AttrOutOfRange: the attribute is not in the vocabulary
        ObjOutOfRange: the object is not in the vocabulary
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    a = _check_attr(meta, attr, "query")
    o = None
    if obj is not None:
        o = meta.obj_index(obj)
        if not 0 <= o < meta.n_objs:
            raise ObjOutOfRange(
                f"Unknown query object {obj!r}", obj=str(obj), n_objs=meta.n_objs
            )

    model = as_model(source)
    scores = score_split(model, meta, features, embeds, split, gamma, threads)
    values = scores.p_attr[:, a] if o is None else scores.pair_grid()[:, a, o]
    order = np.lexsort((np.arange(values.size), -values))[:k]
    hits = [
        QueryHit(rank + 1, meta.samples[scores.rows[i]].sample_id, float(values[i]))
        for rank, i in enumerate(order)
    ]
    logger.info(
        "query_retrieval_finished",
        attr=meta.attributes[a],
        obj=meta.objects[o] if o is not None else None,
        split=Split(split).value,
        hits=len(hits),
    )
    return hits


def format_tsv(
    hits: Sequence[RetrievalHit | QueryHit], column: str = "distance"
) -> str:
    """rank, sample_id and the hit value per line with a header."""
    lines = [f"rank\tsample_id\t{column}"]
    lines.extend(f"{h.rank}\t{h.sample_id}\t{h.value:.6f}" for h in hits)
    return "\n".join(lines) + "\n"


def write_tsv(
    hits: Sequence[RetrievalHit | QueryHit], path: Path | str, column: str = "distance"
) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(format_tsv(hits, column))
