"""Synthetic attribute-object datasets with known additive geometry.

A sample of pair (a, o) has latent ``prototype[o] + offset[a] + noise`` and raw
feature ``mixing @ latent``. Prototypes are spread ``prototype_scale`` times wider
than the offsets, so an unseen pair lies nearer its object than its attribute.
Attribute word vectors are the offsets plus a little noise, or onehot vectors.
"""

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from symnet.config.settings import SynthSpec
from symnet.data.formats import write_matrix
from symnet.data.metadata import save_metadata, validate_meta
from symnet.errors import InfeasibleSplit, MissingFile, ParseError
from symnet.logging_config import get_logger
from symnet.models.dataset import DatasetMeta, Pair, SampleRecord, Split
from symnet.models.matrix import EmbeddingTable, FeatureMatrix, onehot_embeddings

logger = get_logger(__name__)

MAX_OFFSET_DRAWS = 100
MAX_SPLIT_DRAWS = 200
SEPARATION_FACTOR = 4.0
EMBED_NOISE = 0.05


@dataclass(frozen=True, eq=False)
class SynthTruth:
    """Ground-truth geometry behind a synthetic dataset."""

    prototypes: np.ndarray
    offsets: np.ndarray
    mixing: np.ndarray
    latents: np.ndarray

    def min_offset_distance(self) -> float:
        return min_pairwise_distance(self.offsets)

    def to_dict(self) -> dict:
        return {
            "prototypes": self.prototypes.tolist(),
            "offsets": self.offsets.tolist(),
            "mixing": self.mixing.tolist(),
            "latents": self.latents.tolist(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SynthTruth":
        return cls(
            prototypes=np.asarray(data["prototypes"], dtype=np.float64),
            offsets=np.asarray(data["offsets"], dtype=np.float64),
            mixing=np.asarray(data["mixing"], dtype=np.float64),
            latents=np.asarray(data["latents"], dtype=np.float64),
        )


@dataclass(frozen=True, eq=False)
class SyntheticDataset:
    meta: DatasetMeta
    features: FeatureMatrix
    embeds: EmbeddingTable
    truth: SynthTruth


def min_pairwise_distance(points: np.ndarray) -> float:
    diff = points[:, None, :] - points[None, :, :]
    dist = np.linalg.norm(diff, axis=-1)
    return float(dist[~np.eye(len(points), dtype=bool)].min())


def _draw_offsets(spec: SynthSpec, rng: np.random.Generator) -> np.ndarray:
    needed = SEPARATION_FACTOR * spec.noise_sigma * math.sqrt(spec.latent_dim)
    for _ in range(MAX_OFFSET_DRAWS):
        offsets = rng.normal(size=(spec.n_attrs, spec.latent_dim))
        if min_pairwise_distance(offsets) >= needed:
            return offsets
    raise InfeasibleSplit(
        "Could not draw well-separated attribute offsets",
        needed=needed,
        draws=MAX_OFFSET_DRAWS,
    )


def _split_pairs(
    spec: SynthSpec, rng: np.random.Generator
) -> tuple[list[Pair], list[Pair]]:
    pairs = [(a, o) for a in range(spec.n_attrs) for o in range(spec.n_objs)]
    n_unseen = math.ceil(spec.unseen_fraction * len(pairs))
    for _ in range(MAX_SPLIT_DRAWS):
        picked = set(rng.choice(len(pairs), size=n_unseen, replace=False).tolist())
        seen = [p for i, p in enumerate(pairs) if i not in picked]
        if {a for a, _ in seen} == set(range(spec.n_attrs)) and {
            o for _, o in seen
        } == set(range(spec.n_objs)):
            unseen = [p for i, p in enumerate(pairs) if i in picked]
            return seen, unseen
    raise InfeasibleSplit(
        f"No split with {n_unseen} unseen pairs keeps every component seen",
        unseen_pairs=n_unseen,
        draws=MAX_SPLIT_DRAWS,
    )


def gen_synthetic(spec: SynthSpec) -> SyntheticDataset:
    """Generate a dataset; identical specs give identical outputs.

    Seen-pair samples go to train and unseen-pair samples to test, except a
    ``heldout_fraction`` of every pair's samples, which go to val.

    Raises:
        InfeasibleSplit: the pair split or the offset separation failed
    """
    rng = np.random.default_rng(spec.seed)
    offsets = _draw_offsets(spec, rng)
    prototypes = spec.prototype_scale * rng.normal(
        size=(spec.n_objs, spec.latent_dim)
    )
    mixing = rng.normal(size=(spec.feat_dim, spec.latent_dim)) / math.sqrt(
        spec.latent_dim
    )
    seen, unseen = _split_pairs(spec, rng)
    seen_set = set(seen)
    n_val = round(spec.heldout_fraction * spec.samples_per_pair)

    samples: list[SampleRecord] = []
    latents: list[np.ndarray] = []
    for a, o in sorted(seen_set | set(unseen)):
        shape = (spec.samples_per_pair, spec.latent_dim)
        noise = rng.normal(0.0, spec.noise_sigma, size=shape)
        latents.append(prototypes[o] + offsets[a] + noise)
        home = Split.TRAIN if (a, o) in seen_set else Split.TEST
        for k in range(spec.samples_per_pair):
            split = Split.VAL if k < n_val else home
            samples.append(SampleRecord(f"a{a}_o{o}_{k:03d}", a, o, split))

    latent = np.concatenate(latents)
    features = FeatureMatrix((latent @ mixing.T).astype(np.float32))
    if spec.onehot:
        embeds = onehot_embeddings(spec.n_attrs)
    else:
        noise = rng.normal(0.0, EMBED_NOISE, size=offsets.shape)
        embeds = EmbeddingTable((offsets + noise).astype(np.float32))

    meta = DatasetMeta(
        attributes=tuple(f"attr{a}" for a in range(spec.n_attrs)),
        objects=tuple(f"obj{o}" for o in range(spec.n_objs)),
        train_pairs=tuple(seen),
        test_pairs=tuple(unseen),
        samples=tuple(samples),
        val_pairs=tuple(sorted(seen_set | set(unseen))) if n_val else None,
    )
    validate_meta(meta)
    truth = SynthTruth(prototypes, offsets, mixing, latent)
    logger.info(
        "synthetic_generated",
        seed=spec.seed,
        pairs=len(seen) + len(unseen),
        unseen_pairs=len(unseen),
        train=int(meta.split_indices(Split.TRAIN).size),
        val=int(meta.split_indices(Split.VAL).size),
        test=int(meta.split_indices(Split.TEST).size),
    )
    return SyntheticDataset(meta, features, embeds, truth)


def write_synthetic(dataset: SyntheticDataset, out_dir: Path | str) -> Path:
    """Write meta.json, features.bin, embeds.bin and truth.json."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    save_metadata(dataset.meta, out / "meta.json")
    write_matrix(dataset.features, out / "features.bin")
    write_matrix(dataset.embeds, out / "embeds.bin")
    (out / "truth.json").write_text(json.dumps(dataset.truth.to_dict()) + "\n")
    logger.info("synthetic_written", path=str(out))
    return out


def load_truth(path: Path | str) -> SynthTruth:
    path = Path(path)
    if not path.exists():
        raise MissingFile(f"File not found: {path}", path=str(path))
    try:
        return SynthTruth.from_dict(json.loads(path.read_text()))
    except (ValueError, KeyError) as e:
        raise ParseError(f"Invalid truth file: {e}", path=str(path)) from e
