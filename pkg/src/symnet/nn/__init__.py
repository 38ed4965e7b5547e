"""Dense differentiable building blocks."""

from symnet.nn.functional import (
    cross_entropy,
    distance,
    l2_distance,
    relu,
    sigmoid,
    softmax,
)
from symnet.nn.layers import (
    BatchNorm,
    DenseLayer,
    Mode,
    Module,
    affine_forward,
    batchnorm_forward,
)
from symnet.nn.optim import sgd_step
from symnet.nn.parameters import GradientMap, ParameterStore, backward
from symnet.nn.tensor import Tensor, no_grad

__all__ = [
    "BatchNorm",
    "DenseLayer",
    "GradientMap",
    "Mode",
    "Module",
    "ParameterStore",
    "Tensor",
    "affine_forward",
    "backward",
    "batchnorm_forward",
    "cross_entropy",
    "distance",
    "l2_distance",
    "no_grad",
    "relu",
    "sgd_step",
    "sigmoid",
    "softmax",
]
