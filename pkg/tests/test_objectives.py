"""Tests for the axiom, classification and triplet losses."""

import math

import numpy as np
import pytest

from symnet.config.settings import LossWeights
from symnet.errors import IdenticalAttrIndices, ShapeMismatch
from symnet.nn.tensor import Tensor
from symnet.objectives import (
    NO_PARTNER,
    AxiomGraph,
    LossBatch,
    batch_loss,
    loss_clo,
    loss_cls,
    loss_com,
    loss_inv,
    loss_sym,
    loss_total,
    loss_triplet,
)
from symnet.training.gradcheck import tiny_config

# u_0 = (1, 0, 0), u_1 = (0, 2, 0)
EMBEDS = np.array([[1.0, 0.0, 0.0], [0.0, 2.0, 0.0], [0.0, 0.0, 1.0]])


def _additive() -> tuple:
    return (lambda f, a: f + a), (lambda f, a: f - a)


def _graph(con, decon, rows: int = 2) -> AxiomGraph:
    f = Tensor(np.random.default_rng(0).normal(size=(rows, 3)))
    return AxiomGraph(f, np.zeros(rows, int), np.ones(rows, int), EMBEDS, con, decon)


class TestAxiomGraph:
    """Test the memoized transform graph."""

    def test_identical_attributes(self) -> None:
        """i == j is rejected."""
        con, decon = _additive()
        with pytest.raises(IdenticalAttrIndices):
            AxiomGraph(Tensor(np.ones((1, 3))), [1], [1], EMBEDS, con, decon)

    def test_row_mismatch(self) -> None:
        """One attribute pair per row."""
        con, decon = _additive()
        with pytest.raises(ShapeMismatch):
            AxiomGraph(Tensor(np.ones((2, 3))), [0], [1], EMBEDS, con, decon)

    def test_each_transform_built_once(self) -> None:
        """All four axiom losses share ten transform calls."""
        calls = {"con": 0, "decon": 0}

        def con(f, a):
            calls["con"] += 1
            return f + a

        def decon(f, a):
            calls["decon"] += 1
            return f - a

        g = _graph(con, decon)
        for loss in (loss_sym, loss_clo, loss_inv, loss_com):
            loss(g)
        assert calls == {"con": 5, "decon": 5}
        assert g.plus_i is g.plus_i


class TestAxiomLosses:
    """Hand-evaluated axiom losses with mock transforms."""

    def test_sym_identity(self) -> None:
        """Identity transforms satisfy symmetry exactly."""
        ident = lambda f, a: f  # noqa: E731
        assert loss_sym(_graph(ident, ident)).item() == 0.0

    def test_sym_additive(self) -> None:
        """|u_i| + |u_j| = 1 + 2."""
        assert loss_sym(_graph(*_additive())).item() == pytest.approx(3.0)

    def test_clo_additive(self) -> None:
        """Closure residuals are |u_i| and |u_j|."""
        assert loss_clo(_graph(*_additive())).item() == pytest.approx(3.0)

    def test_clo_identity(self) -> None:
        """Identity transforms are closed."""
        ident = lambda f, a: f  # noqa: E731
        assert loss_clo(_graph(ident, ident)).item() == 0.0

    def test_inv_additive(self) -> None:
        """Adding then subtracting cancels."""
        assert loss_inv(_graph(*_additive())).item() == pytest.approx(0.0, abs=1e-12)

    def test_inv_doubling(self) -> None:
        """CoN = 2f, DecoN = id gives 2|f|."""
        g = _graph(lambda f, a: f * 2.0, lambda f, a: f)
        expected = 2 * np.linalg.norm(g.f.numpy(), axis=1).mean()
        assert loss_inv(g).item() == pytest.approx(expected)

    def test_com_additive(self) -> None:
        """Addition commutes."""
        assert loss_com(_graph(*_additive())).item() == pytest.approx(0.0, abs=1e-12)

    def test_com_affine(self) -> None:
        """CoN = 2f, DecoN = f + 1 leaves |-1| = sqrt(dim)."""
        g = _graph(lambda f, a: f * 2.0, lambda f, a: f + 1.0)
        assert loss_com(g).item() == pytest.approx(math.sqrt(3))

    def test_random_model_non_negative(self, tiny_model) -> None:
        """Real transformers give finite non-negative residuals."""
        rng = np.random.default_rng(1)
        f = Tensor(rng.normal(size=(4, 4)))
        embeds = rng.normal(size=(3, 4))
        con, decon = tiny_model.con, tiny_model.decon
        g = AxiomGraph(f, [0, 1, 2, 0], [1, 2, 0, 2], embeds, con, decon)
        for loss in (loss_sym, loss_clo, loss_inv, loss_com):
            value = loss(g).item()
            assert np.isfinite(value) and value >= 0

    def test_squared_and_l1(self) -> None:
        """Metric switches apply to every term."""
        g = _graph(*_additive())
        assert loss_sym(g, squared=True).item() == pytest.approx(1.0 + 4.0)
        assert loss_sym(g, metric="l1").item() == pytest.approx(3.0)


class TestClassification:
    """Test the cross-entropy heads."""

    def test_uniform_logits(self) -> None:
        """Uniform logits over m classes give ln m."""
        zero = lambda x: x * 0.0  # noqa: E731
        g = _graph(*_additive())
        cls_a, cls_o = loss_cls(g.f, [0, 1], [2, 1], zero, zero, g, np.array([2, 1]))
        assert cls_a.item() == pytest.approx(math.log(3))
        assert cls_o.item() == pytest.approx(math.log(3))

    def test_saturated_correct(self) -> None:
        """Huge logits on the true class drive the loss to zero."""
        logits = Tensor(np.eye(3)[[0, 2]] * 1e6)
        clf = lambda x: logits  # noqa: E731
        cls_a, cls_o = loss_cls(Tensor(np.zeros((2, 3))), [0, 2], [0, 2], clf, clf)
        assert cls_a.item() == pytest.approx(0.0, abs=1e-12)
        assert cls_o.item() == pytest.approx(0.0, abs=1e-12)

    def test_graph_inputs_counted(self) -> None:
        """The object head sees f and four transforms per paired row."""
        seen = []

        def clf(x):
            seen.append(x.shape[0])
            return x * 0.0

        g = _graph(*_additive(), rows=2)
        loss_cls(g.f, [0, 0], [1, 1], clf, clf, g, np.array([1, 1]))
        assert seen == [4, 10]

    def test_graph_requires_objects(self) -> None:
        """Passing a graph without object labels is an error."""
        g = _graph(*_additive())
        ident = lambda x: x  # noqa: E731
        with pytest.raises(ValueError):
            loss_cls(g.f, [0, 0], [1, 1], ident, ident, g)


class TestTriplet:
    """Hand-evaluated triplet hinge."""

    def test_satisfied_margin(self) -> None:
        """d+ = 0.2, d- = 1.0 already beats the margin."""
        assert loss_triplet([0.2], [1.0], [0], 0.5).item() == pytest.approx(0.0)

    def test_violated_margin(self) -> None:
        """d+ = 0.8, d- = 1.0 leaves 0.3."""
        assert loss_triplet([0.8], [1.0], [0], 0.5).item() == pytest.approx(0.3)

    def test_other_attributes_reversed(self) -> None:
        """Non-label attributes want d+ > d-."""
        out = loss_triplet([0.2, 1.0], [1.0, 0.2], [0], 0.5)
        assert out.item() == pytest.approx(0.0)
        out = loss_triplet([0.2, 0.2], [1.0, 1.0], [0], 0.5)
        assert out.item() == pytest.approx(1.3)

    def test_mean_over_rows(self) -> None:
        """Rows are averaged."""
        d_plus = np.array([[0.8], [0.2]])
        d_minus = np.array([[1.0], [1.0]])
        assert loss_triplet(d_plus, d_minus, [0, 0], 0.5).item() == pytest.approx(0.15)

    def test_label_out_of_range(self) -> None:
        """Labels index the distance vector."""
        with pytest.raises(ShapeMismatch):
            loss_triplet([0.1, 0.2], [0.1, 0.2], [2], 0.5)


class TestLossTotal:
    """Test the weighted sum."""

    def test_all_zero(self) -> None:
        """Zero components give zero."""
        out = loss_total(0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, LossWeights())
        assert out.total.item() == 0.0

    def test_mit_weights(self) -> None:
        """sym=3, axiom=3, cls=1/1, tri=0.3 with the mit weights sum to 1.199."""
        weights = LossWeights(sym=0.05, axiom=0.01, cls_attr=1, cls_obj=0.01, tri=0.03)
        out = loss_total(3.0, 3.0, 0.0, 0.0, 1.0, 1.0, 0.3, weights)
        assert out.total.item() == pytest.approx(1.199)
        assert out.axiom.item() == pytest.approx(3.0)

    def test_zero_weight_drops_term(self) -> None:
        """A switched-off term cannot poison the total."""
        weights = LossWeights(tri=0.0)
        out = loss_total(1.0, 0.0, 0.0, 0.0, 1.0, 1.0, float("nan"), weights)
        assert np.isfinite(out.total.item())
        assert out.first_non_finite() == "tri"

    def test_log_dict(self) -> None:
        """The logged subset lists every term and the total."""
        out = loss_total(1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, LossWeights())
        assert list(out.to_dict()) == [
            "sym", "clo", "inv", "com", "cls_a", "cls_o", "tri", "total"
        ]


class TestBatch:
    """Test batch assembly and the full objective."""

    def test_from_anchors(self) -> None:
        """Negatives follow their anchors with swapped partners."""
        features = np.arange(8.0).reshape(4, 2)
        attrs = np.array([0, 1, 2, 0])
        objs = np.array([0, 0, 1, 1])
        batch = LossBatch.from_anchors(features, attrs, objs, [0, 2], [1, NO_PARTNER])
        assert batch.attrs.tolist() == [0, 2, 1]
        assert batch.partners.tolist() == [1, NO_PARTNER, 0]
        assert batch.paired_rows.tolist() == [0, 2]
        assert batch.size == 3
        np.testing.assert_array_equal(batch.features[2], [2.0, 3.0])

    def test_full_loss(self, tiny_model) -> None:
        """Every term is finite and the total matches the weights."""
        cfg = tiny_config()
        rng = np.random.default_rng(2)
        batch = LossBatch(
            features=rng.normal(size=(4, cfg.feat_dim)),
            attrs=np.array([0, 1, 2, 0]),
            objs=np.array([0, 0, 1, 1]),
            partners=np.array([1, 0, NO_PARTNER, 2]),
        )
        out = batch_loss(tiny_model, batch, rng.normal(size=(3, cfg.embed_dim)), cfg)
        assert out.first_non_finite() is None
        w = cfg.weights
        expected = (
            w.sym * out.sym.item()
            + w.axiom * out.axiom.item()
            + w.cls_attr * out.cls_a.item()
            + w.cls_obj * out.cls_o.item()
            + w.tri * out.tri.item()
        )
        assert out.total.item() == pytest.approx(expected)

    def test_unpaired_batch(self, tiny_model) -> None:
        """Without pairs only classification and triplet terms remain."""
        cfg = tiny_config()
        rng = np.random.default_rng(3)
        batch = LossBatch(
            features=rng.normal(size=(2, cfg.feat_dim)),
            attrs=np.array([0, 1]),
            objs=np.array([0, 1]),
            partners=np.array([NO_PARTNER, NO_PARTNER]),
        )
        out = batch_loss(tiny_model, batch, rng.normal(size=(3, cfg.embed_dim)), cfg)
        assert out.sym.item() == 0.0
        assert out.axiom.item() == 0.0
        assert out.tri.item() > 0.0

    def test_tri_measured_when_off(self, tiny_model) -> None:
        """A zero triplet weight still logs the term, off the graph and the total."""
        rng = np.random.default_rng(4)
        on, off = tiny_config(), tiny_config()
        off.weights.tri = 0.0
        batch = LossBatch(
            features=rng.normal(size=(2, on.feat_dim)),
            attrs=np.array([0, 1]),
            objs=np.array([0, 0]),
            partners=np.array([1, 0]),
        )
        embeds = rng.normal(size=(3, on.embed_dim))
        out_on = batch_loss(tiny_model, batch, embeds, on)
        out_off = batch_loss(tiny_model, batch, embeds, off)
        assert out_off.tri.item() == pytest.approx(out_on.tri.item())
        assert not out_off.tri.requires_grad
        expected = out_on.total.item() - on.weights.tri * out_on.tri.item()
        assert out_off.total.item() == pytest.approx(expected)
