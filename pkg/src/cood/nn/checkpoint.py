"""Binary checkpoint format for parameter stores.

Little-endian layout: magic "COODCKPT", version u32, entry count u32,
then per entry: name length u32, UTF-8 name, trainable u8, rank u32,
extents u32 x rank, float32 data. Text metadata (model configuration)
rides along as a float-encoded byte entry so checkpoints stay
self-contained.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .params import ParamStore

MAGIC = b"COODCKPT"
VERSION = 1
TEXT_META_PREFIX = "meta."


class CheckpointError(ValueError):
    """Malformed checkpoint file."""


def encode_text(value: str) -> np.ndarray:
    return np.frombuffer(value.encode("utf-8"), dtype=np.uint8).astype(np.float32)


def decode_text(arr: np.ndarray) -> str:
    return arr.astype(np.uint8).tobytes().decode("utf-8")


def save_params(store: ParamStore, path: str | Path,
                extra: dict[str, np.ndarray] | None = None) -> Path:
    """Write every store entry plus optional extra (non-trainable) entries."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    entries: list[tuple[str, np.ndarray, bool]] = [
        (name, t.data, trainable) for name, t, trainable in store.items()
    ]
    for name, arr in (extra or {}).items():
        entries.append((name, np.asarray(arr, dtype=np.float32), False))
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<II", VERSION, len(entries)))
        for name, arr, trainable in entries:
            raw = name.encode("utf-8")
            fh.write(struct.pack("<I", len(raw)))
            fh.write(raw)
            fh.write(struct.pack("<BI", int(trainable), arr.ndim))
            fh.write(struct.pack(f"<{arr.ndim}I", *arr.shape))
            fh.write(np.ascontiguousarray(arr, dtype="<f4").tobytes())
    return path


def load_params(path: str | Path) -> tuple[dict[str, np.ndarray], dict[str, bool]]:
    """Read a checkpoint into (name -> array, name -> trainable) maps."""
    path = Path(path)
    data = path.read_bytes()
    if data[:8] != MAGIC:
        raise CheckpointError(f"{path}: bad magic {data[:8]!r}")
    version, count = struct.unpack_from("<II", data, 8)
    if version != VERSION:
        raise CheckpointError(f"{path}: version {version}, expected {VERSION}")
    off = 16
    arrays: dict[str, np.ndarray] = {}
    trainable: dict[str, bool] = {}
    try:
        for _ in range(count):
            (nlen,) = struct.unpack_from("<I", data, off)
            off += 4
            name = data[off:off + nlen].decode("utf-8")
            off += nlen
            tflag, rank = struct.unpack_from("<BI", data, off)
            off += 5
            shape = struct.unpack_from(f"<{rank}I", data, off)
            off += 4 * rank
            size = int(np.prod(shape)) if rank else 1
            arr = np.frombuffer(data, dtype="<f4", count=size, offset=off).reshape(shape)
            off += 4 * size
            arrays[name] = arr.copy()
            trainable[name] = bool(tflag)
    except (struct.error, ValueError) as err:
        raise CheckpointError(f"{path}: truncated checkpoint ({err})") from err
    return arrays, trainable


def restore_into(store: ParamStore, arrays: dict[str, np.ndarray]) -> None:
    """Load arrays into an existing store, ignoring metadata entries."""
    for name, t, _ in store.items():
        if name not in arrays:
            raise CheckpointError(f"checkpoint missing entry {name!r}")
        if arrays[name].shape != t.data.shape:
            raise CheckpointError(
                f"entry {name!r}: shape {arrays[name].shape} != {t.data.shape}"
            )
        t.data[...] = arrays[name]
