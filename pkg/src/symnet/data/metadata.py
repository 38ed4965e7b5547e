"""Dataset metadata (meta.json) loading, validation and saving."""

import json
from pathlib import Path
from typing import Any

from symnet.errors import InvariantViolation, MissingFile, ParseError
from symnet.logging_config import get_logger
from symnet.models.dataset import DatasetMeta, Pair, SampleRecord, Split

logger = get_logger(__name__)


def load_metadata(path: Path | str) -> DatasetMeta:
    """Load and validate a meta.json file.

    Raises:
        MissingFile: path does not exist
        ParseError: malformed JSON or fields (with line or field context)
        InvariantViolation: a dataset invariant does not hold
    """
    path = Path(path)
    if not path.exists():
        raise MissingFile(f"Metadata not found: {path}", path=str(path))
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise ParseError(
            f"Invalid JSON: {e.msg}", path=str(path), line=e.lineno, column=e.colno
        ) from e
    except UnicodeDecodeError as e:
        raise ParseError("Metadata is not UTF-8", path=str(path)) from e
    meta = parse_metadata(raw, source=str(path))
    logger.info(
        "metadata_loaded",
        path=str(path),
        attributes=meta.n_attrs,
        objects=meta.n_objs,
        train_pairs=len(meta.train_pairs),
        test_pairs=len(meta.test_pairs),
        samples=len(meta.samples),
    )
    return meta


def parse_metadata(raw: Any, source: str = "<dict>") -> DatasetMeta:
    """Build a validated DatasetMeta from decoded JSON."""
    if not isinstance(raw, dict):
        raise ParseError("Metadata root must be an object", source=source)

    attributes = _names(raw, "attributes", source)
    objects = _names(raw, "objects", source)
    train_pairs = _pairs(raw, "train_pairs", source)
    test_pairs = _pairs(raw, "test_pairs", source)
    val_pairs = _pairs(raw, "val_pairs", source) if "val_pairs" in raw else None

    samples_raw = raw.get("samples")
    if not isinstance(samples_raw, list):
        raise ParseError("Field 'samples' must be a list", source=source, field="samples")
    samples = tuple(_sample(s, i, source) for i, s in enumerate(samples_raw))

    meta = DatasetMeta(
        attributes=attributes,
        objects=objects,
        train_pairs=train_pairs,
        test_pairs=test_pairs,
        val_pairs=val_pairs,
        samples=samples,
    )
    validate_meta(meta)
    return meta


def _names(raw: dict, key: str, source: str) -> tuple[str, ...]:
    value = raw.get(key)
    if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
        raise ParseError(
            f"Field '{key}' must be a list of strings", source=source, field=key
        )
    return tuple(value)


def _pairs(raw: dict, key: str, source: str) -> tuple[Pair, ...]:
    value = raw.get(key)
    if not isinstance(value, list):
        raise ParseError(f"Field '{key}' must be a list", source=source, field=key)
    pairs = []
    for i, item in enumerate(value):
        if (
            not isinstance(item, list)
            or len(item) != 2
            or not all(isinstance(v, int) and not isinstance(v, bool) for v in item)
        ):
            raise ParseError(
                f"{key}[{i}] must be [attr, obj] integers",
                source=source,
                field=f"{key}[{i}]",
            )
        pairs.append((item[0], item[1]))
    return tuple(pairs)


def _sample(item: Any, i: int, source: str) -> SampleRecord:
    field = f"samples[{i}]"
    if not isinstance(item, dict):
        raise ParseError(f"{field} must be an object", source=source, field=field)
    try:
        sample_id = item["id"]
        attr = item["attr"]
        obj = item["obj"]
        split = Split(item["split"])
    except KeyError as e:
        raise ParseError(f"{field} lacks {e}", source=source, field=field) from e
    except ValueError as e:
        raise ParseError(f"{field}: {e}", source=source, field=f"{field}.split") from e
    if not isinstance(sample_id, str):
        raise ParseError(f"{field}.id must be a string", source=source, field=field)
    for name, v in (("attr", attr), ("obj", obj)):
        if not isinstance(v, int) or isinstance(v, bool):
            raise ParseError(
                f"{field}.{name} must be an integer",
                source=source,
                field=f"{field}.{name}",
            )
    return SampleRecord(sample_id=sample_id, attr=attr, obj=obj, split=split)


def validate_meta(meta: DatasetMeta) -> None:
    """Check every DatasetMeta invariant, raising on the first failure."""
    for key, names in (("attributes", meta.attributes), ("objects", meta.objects)):
        if len(set(names)) != len(names):
            raise InvariantViolation(
                f"Duplicate names in {key}", rule="unique_names", field=key
            )
        if not names:
            raise InvariantViolation(
                f"Empty {key} vocabulary", rule="non_empty", field=key
            )

    n, m = meta.n_attrs, meta.n_objs
    pair_lists = {"train_pairs": meta.train_pairs, "test_pairs": meta.test_pairs}
    if meta.val_pairs is not None:
        pair_lists["val_pairs"] = meta.val_pairs
    for key, pairs in pair_lists.items():
        for a, o in pairs:
            if not (0 <= a < n and 0 <= o < m):
                raise InvariantViolation(
                    f"Pair ({a}, {o}) in {key} is out of range",
                    rule="pair_in_range",
                    field=key,
                    pair=[a, o],
                )

    overlap = sorted(meta.train_pair_set & meta.test_pair_set)
    if overlap:
        raise InvariantViolation(
            f"{len(overlap)} pairs appear in both train and test",
            rule="train_test_disjoint",
            pair=list(overlap[0]),
        )

    seen_attrs = {a for a, _ in meta.train_pairs}
    seen_objs = {o for _, o in meta.train_pairs}
    for a, o in meta.test_pairs:
        if a not in seen_attrs or o not in seen_objs:
            raise InvariantViolation(
                f"Test pair ({a}, {o}) has a component never seen in training",
                rule="components_seen",
                pair=[a, o],
            )

    val_set = frozenset(meta.val_pairs) if meta.val_pairs is not None else None
    ids: set[str] = set()
    for i, s in enumerate(meta.samples):
        if s.sample_id in ids:
            raise InvariantViolation(
                f"Duplicate sample id {s.sample_id!r}", rule="unique_sample_ids", index=i
            )
        ids.add(s.sample_id)
        if not (0 <= s.attr < n and 0 <= s.obj < m):
            raise InvariantViolation(
                f"Sample {s.sample_id!r} label out of range",
                rule="label_in_range",
                index=i,
            )
        if s.split is Split.TRAIN and s.pair not in meta.train_pair_set:
            raise InvariantViolation(
                f"Train sample {s.sample_id!r} has a non-train pair",
                rule="train_sample_pair",
                index=i,
            )
        if s.split is Split.TEST and s.pair not in meta.test_pair_set:
            raise InvariantViolation(
                f"Test sample {s.sample_id!r} has a non-test pair",
                rule="test_sample_pair",
                index=i,
            )
        if s.split is Split.VAL and val_set is not None and s.pair not in val_set:
            raise InvariantViolation(
                f"Val sample {s.sample_id!r} has a pair outside val_pairs",
                rule="val_sample_pair",
                index=i,
            )


def metadata_to_dict(meta: DatasetMeta) -> dict[str, Any]:
    """JSON-ready representation in the meta.json layout."""
    data: dict[str, Any] = {
        "attributes": list(meta.attributes),
        "objects": list(meta.objects),
        "train_pairs": [list(p) for p in meta.train_pairs],
        "test_pairs": [list(p) for p in meta.test_pairs],
    }
    if meta.val_pairs is not None:
        data["val_pairs"] = [list(p) for p in meta.val_pairs]
    data["samples"] = [
        {"id": s.sample_id, "attr": s.attr, "obj": s.obj, "split": s.split.value}
        for s in meta.samples
    ]
    return data


def save_metadata(meta: DatasetMeta, path: Path | str) -> None:
    """Write meta.json."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(metadata_to_dict(meta), indent=1) + "\n", encoding="utf-8")
    logger.debug("metadata_saved", path=str(path))
