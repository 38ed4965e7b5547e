"""Candidate-pair masks for the evaluation protocols."""

import numpy as np

from symnet.logging_config import get_logger
from symnet.models.dataset import DatasetMeta, Pair, PairMask, Protocol, Split

logger = get_logger(__name__)


def _cells(meta: DatasetMeta, pairs: tuple[Pair, ...] | frozenset[Pair]) -> np.ndarray:
    mask = np.zeros((meta.n_attrs, meta.n_objs), dtype=bool)
    for a, o in pairs:
        mask[a, o] = True
    return mask


def build_pair_mask(
    meta: DatasetMeta,
    protocol: Protocol | str,
    split: Split | str = Split.TEST,
) -> PairMask:
    """Candidate pairs admitted under a protocol.

    Closed world admits exactly the test pairs. Generalized admits
    train_pairs | test_pairs, plus val_pairs when evaluating the val split.
    ``unseen`` marks candidates outside the train pairs.
    """
    protocol = Protocol.from_string(protocol) if isinstance(protocol, str) else protocol
    split = Split(split)

    if protocol is Protocol.CLOSED_WORLD:
        if split is Split.VAL:
            mask = _cells(meta, val_pairs_or_test(meta))
            mask &= ~_cells(meta, meta.train_pairs)
        else:
            mask = _cells(meta, meta.test_pairs)
    else:
        pairs = set(meta.train_pairs) | set(meta.test_pairs)
        if split is Split.VAL:
            pairs |= set(val_pairs_or_test(meta))
        mask = _cells(meta, frozenset(pairs))

    unseen = mask & ~_cells(meta, meta.train_pairs)
    return PairMask(mask=mask, protocol=protocol, unseen=unseen)


def val_pairs_or_test(meta: DatasetMeta) -> tuple[Pair, ...]:
    """Validation pairs, reusing the test pairs when none were provided."""
    if meta.val_pairs is None:
        logger.warning("val_pairs_missing_using_test_pairs")
        return meta.test_pairs
    return meta.val_pairs
