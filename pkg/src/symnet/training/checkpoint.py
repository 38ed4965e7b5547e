"""Checkpoint files.

Layout (little-endian): magic ``SYMC``, u32 version, u32 entry count; per
entry a u16 name length, the UTF-8 name, u32 rank, rank x u32 dims and the f32
payload; then a u32 length and a JSON blob holding the config, the epoch
counter, the vocabulary sizes and the generator state.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from symnet.config.settings import TrainConfig
from symnet.errors import (
    BadMagic,
    MissingFile,
    MissingParameter,
    ParseError,
    VersionMismatch,
)
from symnet.logging_config import get_logger
from symnet.model.symnet import SymNet

logger = get_logger(__name__)

MAGIC = b"SYMC"
CHECKPOINT_VERSION = 1
F32 = np.dtype("<f4")


@dataclass
class Checkpoint:
    """Parameter and buffer snapshot with everything needed to rebuild the model."""

    state: dict[str, np.ndarray]
    config: TrainConfig
    n_attrs: int
    n_objs: int
    epoch: int = 0
    rng_state: dict[str, Any] = field(default_factory=dict)

    @classmethod
    def capture(
        cls,
        model: SymNet,
        epoch: int,
        rng: np.random.Generator | None = None,
    ) -> Checkpoint:
        return cls(
            state={k: v.astype(np.float32) for k, v in model.store().state().items()},
            config=model.cfg,
            n_attrs=model.n_attrs,
            n_objs=model.n_objs,
            epoch=epoch,
            rng_state=dict(rng.bit_generator.state) if rng is not None else {},
        )

    def restore_rng(self) -> np.random.Generator:
        """A generator continuing from the saved state."""
        rng = np.random.default_rng(self.config.seed)
        if self.rng_state:
            rng.bit_generator.state = self.rng_state
        return rng

    def meta_blob(self) -> bytes:
        blob = {
            "config": self.config.model_dump(mode="json"),
            "epoch": self.epoch,
            "n_attrs": self.n_attrs,
            "n_objs": self.n_objs,
            "rng_state": self.rng_state,
        }
        return json.dumps(blob, sort_keys=True).encode("utf-8")


def expected_names(config: TrainConfig, n_attrs: int, n_objs: int) -> list[str]:
    """Tensor names the architecture implied by ``config`` registers."""
    return list(SymNet(config, n_attrs, n_objs).store().state())


def model_from_checkpoint(ckpt: Checkpoint, dtype: type = np.float32) -> SymNet:
    """Rebuild a model from a snapshot, in eval mode."""
    model = SymNet(ckpt.config, ckpt.n_attrs, ckpt.n_objs, dtype=dtype)
    model.store().load_state(ckpt.state)
    model.eval()
    return model


def encode_checkpoint(ckpt: Checkpoint) -> bytes:
    parts = [MAGIC, struct.pack("<II", CHECKPOINT_VERSION, len(ckpt.state))]
    for name, value in ckpt.state.items():
        raw = name.encode("utf-8")
        value = np.asarray(value)
        parts.append(struct.pack("<H", len(raw)) + raw)
        parts.append(struct.pack(f"<I{value.ndim}I", value.ndim, *value.shape))
        parts.append(value.astype(F32).tobytes())
    blob = ckpt.meta_blob()
    parts.append(struct.pack("<I", len(blob)) + blob)
    return b"".join(parts)


class _Reader:
    def __init__(self, buf: bytes, source: str) -> None:
        self.buf = buf
        self.pos = 0
        self.source = source

    def take(self, size: int) -> bytes:
        if self.pos + size > len(self.buf):
            raise ParseError(
                "Truncated checkpoint", source=self.source, offset=self.pos
            )
        chunk = self.buf[self.pos : self.pos + size]
        self.pos += size
        return chunk

    def unpack(self, fmt: str) -> tuple:
        return struct.unpack(fmt, self.take(struct.calcsize(fmt)))


def decode_checkpoint(buf: bytes, source: str = "<bytes>") -> Checkpoint:
    """Parse checkpoint bytes and check the tensor names against the config.

    Raises:
        BadMagic: not a checkpoint
        VersionMismatch: unsupported version
        ParseError: truncated or malformed content
        MissingParameter: tensor names differ from the configured architecture
    """
    reader = _Reader(buf, source)
    magic = reader.take(4)
    if magic != MAGIC:
        raise BadMagic(
            f"Expected magic {MAGIC!r}, found {magic!r}",
            source=source,
            found=magic.hex(),
        )
    version, count = reader.unpack("<II")
    if version != CHECKPOINT_VERSION:
        raise VersionMismatch(
            f"Unsupported checkpoint version {version}", source=source, version=version
        )
    state: dict[str, np.ndarray] = {}
    for _ in range(count):
        (name_len,) = reader.unpack("<H")
        raw_name = reader.take(name_len)
        try:
            name = raw_name.decode("utf-8")
        except UnicodeDecodeError as e:
            raise ParseError(
                f"Tensor name is not UTF-8: {raw_name!r}", source=source
            ) from e
        (rank,) = reader.unpack("<I")
        shape = reader.unpack(f"<{rank}I")
        size = int(np.prod(shape, dtype=np.int64))
        payload = reader.take(size * F32.itemsize)
        state[name] = np.frombuffer(payload, F32).reshape(shape).copy()
    (blob_len,) = reader.unpack("<I")
    try:
        blob = json.loads(reader.take(blob_len).decode("utf-8"))
        config = TrainConfig.model_validate(blob["config"])
        ckpt = Checkpoint(
            state=state,
            config=config,
            n_attrs=int(blob["n_attrs"]),
            n_objs=int(blob["n_objs"]),
            epoch=int(blob["epoch"]),
            rng_state=blob.get("rng_state") or {},
        )
    except (ValueError, KeyError, TypeError) as e:
        raise ParseError(f"Invalid checkpoint metadata: {e}", source=source) from e

    expected = expected_names(ckpt.config, ckpt.n_attrs, ckpt.n_objs)
    missing = [n for n in expected if n not in state]
    unexpected = [n for n in state if n not in set(expected)]
    if missing or unexpected:
        logger.error(
            "checkpoint_names_mismatch",
            source=source,
            missing=missing,
            unexpected=unexpected,
        )
        raise MissingParameter(
            f"Checkpoint tensors do not match the architecture: missing {missing}",
            missing=missing,
            unexpected=unexpected,
        )
    return ckpt


def save_checkpoint(ckpt: Checkpoint, path: Path | str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(encode_checkpoint(ckpt))
    logger.info("checkpoint_saved", path=str(path), epoch=ckpt.epoch)


def load_checkpoint(path: Path | str) -> Checkpoint:
    path = Path(path)
    if not path.exists():
        raise MissingFile(f"File not found: {path}", path=str(path))
    ckpt = decode_checkpoint(path.read_bytes(), source=str(path))
    logger.debug("checkpoint_loaded", path=str(path), tensors=len(ckpt.state))
    return ckpt
