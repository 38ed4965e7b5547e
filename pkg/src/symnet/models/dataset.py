"""Dataset-related data models."""

from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property

import numpy as np

Pair = tuple[int, int]


class Split(str, Enum):
    """Sample split."""

    TRAIN = "train"
    VAL = "val"
    TEST = "test"


class Protocol(str, Enum):
    """Candidate-pair protocol for evaluation."""

    CLOSED_WORLD = "closed_world"
    GENERALIZED = "generalized"

    @classmethod
    def from_string(cls, value: str) -> "Protocol":
        """Parse a protocol name, accepting the short CLI spellings."""
        aliases = {"closed": cls.CLOSED_WORLD, "generalized": cls.GENERALIZED}
        if value.lower() in aliases:
            return aliases[value.lower()]
        return cls(value.lower())


@dataclass(frozen=True)
class SampleRecord:
    """A single labeled sample."""

    sample_id: str
    attr: int
    obj: int
    split: Split

    @property
    def pair(self) -> Pair:
        return (self.attr, self.obj)


@dataclass(frozen=True)
class DatasetMeta:
    """Vocabularies, pair splits and sample index of a dataset.

    Immutable after construction; use ``symnet.data.metadata.validate_meta``
    or the loader to check invariants.
    """

    attributes: tuple[str, ...]
    objects: tuple[str, ...]
    train_pairs: tuple[Pair, ...]
    test_pairs: tuple[Pair, ...]
    samples: tuple[SampleRecord, ...]
    val_pairs: tuple[Pair, ...] | None = None

    @property
    def n_attrs(self) -> int:
        return len(self.attributes)

    @property
    def n_objs(self) -> int:
        return len(self.objects)

    @cached_property
    def train_pair_set(self) -> frozenset[Pair]:
        return frozenset(self.train_pairs)

    @cached_property
    def test_pair_set(self) -> frozenset[Pair]:
        return frozenset(self.test_pairs)

    @cached_property
    def sample_index(self) -> dict[str, int]:
        """Map sample id to its row position."""
        return {s.sample_id: i for i, s in enumerate(self.samples)}

    def split_indices(self, split: Split) -> np.ndarray:
        """Row positions of the samples of one split, in file order."""
        return np.array(
            [i for i, s in enumerate(self.samples) if s.split is split], dtype=np.int64
        )

    def attr_index(self, name_or_index: str | int) -> int:
        """Resolve an attribute by name or index string."""
        return _resolve(self.attributes, name_or_index)

    def obj_index(self, name_or_index: str | int) -> int:
        """Resolve an object by name or index string."""
        return _resolve(self.objects, name_or_index)


def _resolve(vocab: tuple[str, ...], key: str | int) -> int:
    if isinstance(key, int):
        return key
    if key in vocab:
        return vocab.index(key)
    if key.lstrip("-").isdigit():
        return int(key)
    return -1


@dataclass(frozen=True)
class PairMask:
    """Boolean n x m candidate matrix for one protocol."""

    mask: np.ndarray
    protocol: Protocol
    unseen: np.ndarray = field(repr=False)

    @property
    def shape(self) -> tuple[int, int]:
        return self.mask.shape

    @property
    def candidate_count(self) -> int:
        return int(self.mask.sum())

    def candidates(self) -> list[Pair]:
        """Candidate pairs in row-major order."""
        return [(int(a), int(o)) for a, o in zip(*np.nonzero(self.mask))]
