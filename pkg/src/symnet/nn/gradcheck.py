"""Central-difference verification of analytic gradients."""

from collections.abc import Callable
from dataclasses import dataclass, field

import numpy as np

from symnet.errors import ToleranceExceeded
from symnet.logging_config import get_logger
from symnet.nn.parameters import ParameterStore, backward
from symnet.nn.tensor import Tensor

logger = get_logger(__name__)

LossFn = Callable[[], Tensor]
ProblemBuilder = Callable[[int], tuple[ParameterStore, LossFn]]

REFINE_STEPS = (1e-1, 1e-2, 1e-3)


@dataclass(order=True)
class GradientOffender:
    """One checked coordinate."""

    rel_error: float
    parameter: str = field(compare=False)
    index: tuple[int, ...] = field(compare=False)
    analytic: float = field(compare=False)
    numeric: float = field(compare=False)

    def to_dict(self) -> dict:
        return {
            "parameter": self.parameter,
            "index": list(self.index),
            "analytic": self.analytic,
            "numeric": self.numeric,
            "rel_error": self.rel_error,
        }


@dataclass
class GradcheckReport:
    """Outcome of a gradient check."""

    seed: int
    h: float
    tol: float
    checked: int
    max_rel_error: float
    worst: list[GradientOffender]

    @property
    def passed(self) -> bool:
        return self.max_rel_error <= self.tol

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "h": self.h,
            "tol": self.tol,
            "checked": self.checked,
            "max_rel_error": self.max_rel_error,
            "passed": self.passed,
            "worst": [w.to_dict() for w in self.worst],
        }


def _compare(
    value: float, param: Tensor, idx: tuple[int, ...], loss_fn: LossFn, h: float
) -> tuple[float, float]:
    original = param.data[idx].copy()
    param.data[idx] = original + h
    plus = float(loss_fn().data)
    param.data[idx] = original - h
    minus = float(loss_fn().data)
    param.data[idx] = original
    numeric = (plus - minus) / (2 * h)
    return abs(value - numeric) / max(1.0, abs(numeric)), numeric


def check_gradients(
    store: ParameterStore,
    loss_fn: LossFn,
    h: float = 1e-5,
    tol: float = 1e-4,
    max_coords: int | None = None,
    rng: np.random.Generator | None = None,
    seed: int = 0,
    keep_worst: int = 5,
) -> GradcheckReport:
    """Compare backward() against central differences.

    ``loss_fn`` must rebuild the loss from the current parameter values. All
    coordinates are checked unless ``max_coords`` caps the count per parameter.

    Raises:
        ToleranceExceeded: |analytic - numeric| / max(1, |numeric|) > tol
    """
    analytic = backward(loss_fn(), store)
    offenders: list[GradientOffender] = []
    checked = 0
    for name, param in store.parameters.items():
        coords = list(np.ndindex(param.shape))
        if max_coords is not None and len(coords) > max_coords:
            rng = rng or np.random.default_rng(seed)
            picks = rng.choice(len(coords), size=max_coords, replace=False)
            coords = [coords[i] for i in sorted(picks)]
        for idx in coords:
            value = float(analytic[name][idx])
            rel, numeric = _compare(value, param, idx, loss_fn, h)
            # A step straddling a ReLU or hinge kink skews the difference;
            # smaller steps rule that out.
            for refine in REFINE_STEPS:
                if rel <= tol:
                    break
                rel, numeric = min(
                    (rel, numeric), _compare(value, param, idx, loss_fn, h * refine)
                )
            offenders.append(GradientOffender(rel, name, tuple(idx), value, numeric))
            checked += 1

    offenders.sort(reverse=True)
    worst = offenders[:keep_worst]
    report = GradcheckReport(
        seed=seed,
        h=h,
        tol=tol,
        checked=checked,
        max_rel_error=worst[0].rel_error if worst else 0.0,
        worst=worst,
    )
    logger.info(
        "gradcheck_finished",
        seed=seed,
        checked=checked,
        max_rel_error=report.max_rel_error,
    )
    if not report.passed:
        top = worst[0]
        raise ToleranceExceeded(
            f"Gradient mismatch at {top.parameter}{list(top.index)}",
            parameter=top.parameter,
            index=list(top.index),
            rel_error=top.rel_error,
            report=report.to_dict(),
        )
    return report


def gradcheck(
    builder: ProblemBuilder,
    seed: int,
    h: float = 1e-5,
    tol: float = 1e-4,
    max_coords: int | None = None,
) -> GradcheckReport:
    """Build a problem for ``seed`` and check its gradients."""
    store, loss_fn = builder(seed)
    for name, param in store.parameters.items():
        if param.dtype != np.float64:
            raise ValueError(
                f"Gradcheck needs float64 parameters, {name} is {param.dtype}"
            )
    return check_gradients(
        store, loss_fn, h=h, tol=tol, max_coords=max_coords, seed=seed
    )
