"""Negative sampling: same object, different attribute."""

from collections import defaultdict

import numpy as np

from symnet.errors import NoNegativeAvailable
from symnet.models.dataset import DatasetMeta, SampleRecord, Split

NO_NEGATIVE = -1


class NegativeSampler:
    """Index of train samples by object for repeated negative draws."""

    def __init__(self, meta: DatasetMeta) -> None:
        self.meta = meta
        by_obj: dict[int, list[int]] = defaultdict(list)
        for i, s in enumerate(meta.samples):
            if s.split is Split.TRAIN:
                by_obj[s.obj].append(i)
        self._by_obj = {o: np.array(ix, dtype=np.int64) for o, ix in by_obj.items()}
        self._attrs = np.array([s.attr for s in meta.samples], dtype=np.int64)
        self._cache: dict[tuple[int, int], np.ndarray] = {}

    def candidates(self, attr: int, obj: int) -> np.ndarray:
        """Row positions of train samples with ``obj`` and an attribute != ``attr``."""
        key = (attr, obj)
        if key not in self._cache:
            rows = self._by_obj.get(obj, np.empty(0, dtype=np.int64))
            self._cache[key] = rows[self._attrs[rows] != attr]
        return self._cache[key]

    def has_negative(self, anchor: SampleRecord) -> bool:
        return self.candidates(anchor.attr, anchor.obj).size > 0

    def draw(self, anchor: SampleRecord, rng: np.random.Generator) -> int:
        """Row position of a uniformly drawn negative.

        Raises:
            NoNegativeAvailable: the anchor's object has a single train attribute
        """
        rows = self.candidates(anchor.attr, anchor.obj)
        if rows.size == 0:
            raise NoNegativeAvailable(
                f"No negative for sample {anchor.sample_id!r}",
                sample_id=anchor.sample_id,
                obj=anchor.obj,
            )
        return int(rows[rng.integers(rows.size)])

    def draw_batch(self, anchors: np.ndarray, rng: np.random.Generator) -> np.ndarray:
        """One negative row per anchor row, distinct within the batch.

        Each anchor draws uniformly from its candidates not yet taken by an
        earlier anchor; once those run out it draws from all of them again.
        Anchors without any candidate get ``NO_NEGATIVE``.
        """
        taken = np.zeros(len(self.meta.samples), dtype=bool)
        out = np.full(len(anchors), NO_NEGATIVE, dtype=np.int64)
        for k, row in enumerate(anchors):
            anchor = self.meta.samples[int(row)]
            rows = self.candidates(anchor.attr, anchor.obj)
            if rows.size == 0:
                continue
            free = rows[~taken[rows]]
            pool = free if free.size else rows
            out[k] = int(pool[rng.integers(pool.size)])
            taken[out[k]] = True
        return out


def sample_negative(
    meta: DatasetMeta,
    anchor: SampleRecord,
    rng: np.random.Generator,
    sampler: NegativeSampler | None = None,
) -> SampleRecord:
    """Draw a train sample with the anchor's object and a different attribute.

    Pass ``sampler`` when drawing repeatedly; building one indexes every sample.
    """
    if sampler is None:
        sampler = NegativeSampler(meta)
    return meta.samples[sampler.draw(anchor, rng)]
