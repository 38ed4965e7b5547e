"""Plain stochastic gradient descent."""

from symnet.errors import KeyMismatch
from symnet.nn.parameters import GradientMap, ParameterStore


def sgd_step(store: ParameterStore, grads: GradientMap, lr: float) -> ParameterStore:
    """p <- p - lr * g for every parameter, in place; no momentum or decay.

    Raises:
        KeyMismatch: gradient names differ from the store's parameter names
        ValueError: lr is not positive
    """
    if lr <= 0:
        raise ValueError("Learning rate must be positive")
    if set(grads) != set(store.parameters):
        raise KeyMismatch(
            "Gradient names differ from parameter names",
            missing=sorted(set(store.parameters) - set(grads)),
            unexpected=sorted(set(grads) - set(store.parameters)),
        )
    for name, param in store.parameters.items():
        param.data -= (lr * grads[name]).astype(param.dtype)
    return store
