"""Training objectives: group-axiom losses, classification and triplet RMD terms.

Every term is computed per row and averaged over rows. The axiom terms take an
``AxiomGraph``, which memoizes the transformed embeddings so a batch builds
each of them once.
"""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass, fields
from functools import cached_property

import numpy as np

from symnet.config.settings import Distance, LossWeights
from symnet.errors import IdenticalAttrIndices, ShapeMismatch
from symnet.model.transforms import Transform
from symnet.nn import functional as F
from symnet.nn.tensor import Tensor, TensorLike, as_tensor, concat

Classifier = Callable[[Tensor], Tensor]


class AxiomGraph:
    """Transformed embeddings of f under T+/T- with attributes i and j.

    Attribute names follow the order of application: ``plus_i_minus_j`` is
    f . T+(a_i) . T-(a_j).
    """

    def __init__(
        self,
        f: Tensor,
        attr_i: np.ndarray,
        attr_j: np.ndarray,
        embeds: np.ndarray,
        con: Transform,
        decon: Transform,
    ) -> None:
        attr_i = np.atleast_1d(np.asarray(attr_i, dtype=np.int64))
        attr_j = np.atleast_1d(np.asarray(attr_j, dtype=np.int64))
        same = np.flatnonzero(attr_i == attr_j)
        if same.size:
            raise IdenticalAttrIndices(
                "Positive and negative attributes must differ",
                row=int(same[0]),
                attr=int(attr_i[same[0]]),
            )
        if f.shape[0] != attr_i.shape[0] or attr_i.shape != attr_j.shape:
            raise ShapeMismatch(
                "One attribute pair per feature row is required",
                rows=f.shape[0],
                attr_i=attr_i.shape[0],
                attr_j=attr_j.shape[0],
            )
        table = np.asarray(embeds, dtype=f.dtype)
        self.f = f
        self.attr_i = attr_i
        self.attr_j = attr_j
        self.emb_i = Tensor(table[attr_i])
        self.emb_j = Tensor(table[attr_j])
        self.con = con
        self.decon = decon

    @cached_property
    def plus_i(self) -> Tensor:
        return self.con(self.f, self.emb_i)

    @cached_property
    def minus_i(self) -> Tensor:
        return self.decon(self.f, self.emb_i)

    @cached_property
    def plus_j(self) -> Tensor:
        return self.con(self.f, self.emb_j)

    @cached_property
    def minus_j(self) -> Tensor:
        return self.decon(self.f, self.emb_j)

    @cached_property
    def plus_i_minus_i(self) -> Tensor:
        return self.decon(self.plus_i, self.emb_i)

    @cached_property
    def minus_i_plus_i(self) -> Tensor:
        return self.con(self.minus_i, self.emb_i)

    @cached_property
    def plus_j_minus_j(self) -> Tensor:
        return self.decon(self.plus_j, self.emb_j)

    @cached_property
    def minus_j_plus_j(self) -> Tensor:
        return self.con(self.minus_j, self.emb_j)

    @cached_property
    def plus_i_minus_j(self) -> Tensor:
        return self.decon(self.plus_i, self.emb_j)

    @cached_property
    def minus_j_plus_i(self) -> Tensor:
        return self.con(self.minus_j, self.emb_i)


def _dist(
    u: Tensor, v: Tensor, metric: Distance | str, squared: bool
) -> Tensor:
    return F.distance(u, v, metric, squared)


def loss_sym(
    g: AxiomGraph, metric: Distance | str = Distance.L2, squared: bool = False
) -> Tensor:
    """Adding a present attribute or removing an absent one is a no-op."""
    return (
        _dist(g.f, g.plus_i, metric, squared)
        + _dist(g.f, g.minus_j, metric, squared)
    ).mean()


def loss_clo(
    g: AxiomGraph, metric: Distance | str = Distance.L2, squared: bool = False
) -> Tensor:
    """Composed transformations land where a single one does."""
    return (
        _dist(g.plus_i_minus_i, g.minus_i, metric, squared)
        + _dist(g.minus_j_plus_j, g.plus_j, metric, squared)
    ).mean()


def loss_inv(
    g: AxiomGraph, metric: Distance | str = Distance.L2, squared: bool = False
) -> Tensor:
    """T+ and T- of the same attribute cancel."""
    return (
        _dist(g.plus_j_minus_j, g.f, metric, squared)
        + _dist(g.minus_i_plus_i, g.f, metric, squared)
    ).mean()


def loss_com(
    g: AxiomGraph, metric: Distance | str = Distance.L2, squared: bool = False
) -> Tensor:
    """Coupling a_i and decoupling a_j commute."""
    return _dist(g.plus_i_minus_j, g.minus_j_plus_i, metric, squared).mean()


def loss_cls(
    f: Tensor,
    attrs: np.ndarray,
    objs: np.ndarray,
    attr_clf: Classifier,
    obj_clf: Classifier,
    graph: AxiomGraph | None = None,
    graph_objs: np.ndarray | None = None,
) -> tuple[Tensor, Tensor]:
    """Semantic-consistency cross-entropies (cls_a, cls_o).

    The attribute head sees f with its own attribute and, for rows in
    ``graph``, f . T+(a_j) with a_j. The object head sees f and the four
    single-step transforms, all labelled with the object. Each term is the
    mean over every (input, row) it covers.
    """
    attr_inputs, attr_labels = [f], [np.asarray(attrs)]
    obj_inputs, obj_labels = [f], [np.asarray(objs)]
    if graph is not None:
        if graph_objs is None:
            raise ValueError("graph_objs is required with a graph")
        attr_inputs.append(graph.plus_j)
        attr_labels.append(graph.attr_j)
        for t in (graph.plus_j, graph.minus_i, graph.plus_i, graph.minus_j):
            obj_inputs.append(t)
            obj_labels.append(np.asarray(graph_objs))
    cls_a = F.cross_entropy(
        attr_clf(concat(attr_inputs, axis=0)), np.concatenate(attr_labels)
    )
    cls_o = F.cross_entropy(
        obj_clf(concat(obj_inputs, axis=0)), np.concatenate(obj_labels)
    )
    return cls_a, cls_o


def loss_triplet(
    d_plus: TensorLike, d_minus: TensorLike, attr_label: np.ndarray, margin: float
) -> Tensor:
    """Hinge on the moving distances, summed over attributes, mean over rows.

    The labelled attribute should move less under T+ than under T-; every
    other attribute the reverse, each by at least ``margin``.
    """
    d_plus, d_minus = as_tensor(d_plus), as_tensor(d_minus)
    if d_plus.ndim == 1:
        d_plus = d_plus.reshape(1, -1)
        d_minus = d_minus.reshape(1, -1)
    labels = np.atleast_1d(np.asarray(attr_label, dtype=np.int64))
    if d_plus.shape != d_minus.shape or d_plus.shape[0] != labels.shape[0]:
        raise ShapeMismatch(
            "d+ and d- must be [rows, n] with one label per row",
            d_plus=list(d_plus.shape),
            d_minus=list(d_minus.shape),
            labels=labels.shape[0],
        )
    n = d_plus.shape[1]
    if labels.size and (labels.min() < 0 or labels.max() >= n):
        raise ShapeMismatch("Attribute label outside the distance vector", n=n)
    sign = np.full(d_plus.shape, -1.0, dtype=d_plus.dtype)
    sign[np.arange(labels.size), labels] = 1.0
    return F.relu((d_plus - d_minus) * sign + margin).sum(axis=-1).mean()


LOG_FIELDS = ("sym", "clo", "inv", "com", "cls_a", "cls_o", "tri", "total")


@dataclass
class LossBreakdown:
    """Weighted total and its components; ``total`` carries the gradient graph."""

    sym: Tensor
    clo: Tensor
    inv: Tensor
    com: Tensor
    axiom: Tensor
    cls_a: Tensor
    cls_o: Tensor
    tri: Tensor
    total: Tensor

    def values(self) -> dict[str, float]:
        return {f.name: float(getattr(self, f.name).data) for f in fields(self)}

    def to_dict(self) -> dict[str, float]:
        """The logged subset, in log order."""
        values = self.values()
        return {name: values[name] for name in LOG_FIELDS}

    def first_non_finite(self) -> str | None:
        for name, value in self.values().items():
            if not np.isfinite(value):
                return name
        return None


def loss_total(
    sym: TensorLike,
    clo: TensorLike,
    inv: TensorLike,
    com: TensorLike,
    cls_a: TensorLike,
    cls_o: TensorLike,
    tri: TensorLike,
    weights: LossWeights,
) -> LossBreakdown:
    """Weighted sum of all terms; a zero weight drops its term entirely."""
    terms = [as_tensor(t) for t in (sym, clo, inv, com, cls_a, cls_o, tri)]
    sym, clo, inv, com, cls_a, cls_o, tri = terms
    axiom = clo + inv + com
    weighted = [
        (weights.sym, sym),
        (weights.axiom, axiom),
        (weights.cls_attr, cls_a),
        (weights.cls_obj, cls_o),
        (weights.tri, tri),
    ]
    total = as_tensor(0.0, like=sym)
    for weight, term in weighted:
        if weight:
            total = total + weight * term
    return LossBreakdown(sym, clo, inv, com, axiom, cls_a, cls_o, tri, total)
