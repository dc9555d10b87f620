"""Dataset directory serialization.

A dataset directory holds manifest.json plus one binary file per split.
Records are fixed-size and little-endian; for grid size G each record is
2*G*G + 12 bytes (2060 at G=32):

    action u8 | input G*G u8 (row-major, row 0 = bottom) | target G*G u8 |
    shape_bit u8 | colour_bit u8 | size_bit u8 | pos_x i16 | pos_y i16 |
    canvas offset_x u8 | offset_y u8 | n u8 | m u8
"""

from __future__ import annotations

import json
import struct
from pathlib import Path

import numpy as np

from .concepts import ConceptCombo
from .generate import Dataset, Sample, FORMAT_VERSION, SPLIT_NAMES
from .scene import CanvasSpec, SceneSpec, World, N_COLORS

_TAIL = struct.Struct("<BBBhhBBBB")  # bits, position, canvas


class DatasetDecodeError(ValueError):
    """Malformed dataset file (bad version, truncation, bad color byte)."""


def record_size(grid: int) -> int:
    return 1 + 2 * grid * grid + _TAIL.size


def encode_record(sample: Sample, grid: int) -> bytes:
    m = sample.meta
    parts = [
        bytes([sample.action]),
        sample.input.astype("<u1").tobytes(),
        sample.target.astype("<u1").tobytes(),
        _TAIL.pack(
            m.combo.shape_bit,
            m.combo.colour_bit,
            m.size_bit,
            m.pos_x,
            m.pos_y,
            m.canvas.offset_x,
            m.canvas.offset_y,
            m.canvas.n,
            m.canvas.m,
        ),
    ]
    return b"".join(parts)


def decode_record(buf: bytes, grid: int, index: int) -> Sample:
    if len(buf) != record_size(grid):
        raise DatasetDecodeError(
            f"record {index}: truncated ({len(buf)} of {record_size(grid)} bytes)"
        )
    action = buf[0]
    npix = grid * grid
    images = np.frombuffer(buf, dtype=np.uint8, count=2 * npix, offset=1)
    if (images >= N_COLORS).any():
        bad = int(images[images >= N_COLORS][0])
        raise DatasetDecodeError(f"record {index}: color byte {bad} out of range 0..3")
    if action not in (0, 1):
        raise DatasetDecodeError(f"record {index}: action byte {action} not 0/1")
    inp = images[:npix].reshape(grid, grid).copy()
    tgt = images[npix:].reshape(grid, grid).copy()
    shape_bit, colour_bit, size_bit, pos_x, pos_y, ox, oy, n, m = _TAIL.unpack_from(
        buf, 1 + 2 * npix
    )
    meta = SceneSpec(
        combo=ConceptCombo(shape_bit, colour_bit, action),
        size_bit=size_bit,
        pos_x=pos_x,
        pos_y=pos_y,
        canvas=CanvasSpec(offset_x=ox, offset_y=oy, n=n, m=m),
    )
    if colour_bit not in (0, 1) or shape_bit not in (0, 1) or size_bit not in (0, 1):
        raise DatasetDecodeError(f"record {index}: concept bit out of range")
    return Sample(input=inp, action=action, target=tgt, meta=meta)


def write_dataset(ds: Dataset, path: str | Path) -> Path:
    """Write manifest.json plus one .bin file per split; returns the dir."""
    root = Path(path)
    root.mkdir(parents=True, exist_ok=True)
    manifest = ds.manifest()
    with open(root / "manifest.json", "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    for name, samples in ds.splits.items():
        with open(root / f"{name}.bin", "wb") as fh:
            for sample in samples:
                fh.write(encode_record(sample, ds.grid))
    return root


def read_dataset(path: str | Path) -> Dataset:
    root = Path(path)
    try:
        with open(root / "manifest.json", encoding="utf-8") as fh:
            manifest = json.load(fh)
    except FileNotFoundError:
        raise DatasetDecodeError(f"no manifest.json under {root}")
    if manifest.get("format_version") != FORMAT_VERSION:
        raise DatasetDecodeError(
            f"format version {manifest.get('format_version')!r}, expected {FORMAT_VERSION}"
        )
    grid = int(manifest["grid_size"])
    ds = Dataset(world=World(manifest["world"]), grid=grid, seed=int(manifest["seed"]))
    rec = record_size(grid)
    for name, count in manifest["counts"].items():
        if name not in SPLIT_NAMES:
            raise DatasetDecodeError(f"unknown split {name!r} in manifest")
        data = (root / f"{name}.bin").read_bytes()
        if len(data) != rec * count:
            raise DatasetDecodeError(
                f"{name}.bin holds {len(data)} bytes, expected {rec * count}"
            )
        ds.splits[name] = [
            decode_record(data[i * rec:(i + 1) * rec], grid, i) for i in range(count)
        ]
    return ds
