"""Object shape masks and their quarter-turn rotations.

Shape bit 0 is an L, bit 1 is a T. Both lack 4-fold rotational symmetry,
so every quarter- and half-turn action changes the visible object. Masks
are boolean arrays indexed [y, x] with y=0 the bottom row, trimmed to a
square bounding box (side = 4 for small objects, 7 for large ones).
"""

from __future__ import annotations

import numpy as np

SMALL_SIDE = 4
LARGE_SIDE = 7


def side_for_size_bit(size_bit: int) -> int:
    return LARGE_SIDE if size_bit else SMALL_SIDE


def _l_mask(side: int) -> np.ndarray:
    """Left column band plus bottom row band."""
    t = max(1, round(side / 3))
    yy, xx = np.mgrid[0:side, 0:side]
    return (xx < t) | (yy < t)


def _t_mask(side: int) -> np.ndarray:
    """Top row band plus a centred stem down to the bottom."""
    t = max(1, round(side / 3))
    yy, xx = np.mgrid[0:side, 0:side]
    stem_lo = (side - t) // 2
    return (yy >= side - t) | ((xx >= stem_lo) & (xx < stem_lo + t))


def base_mask(shape_bit: int, size_bit: int) -> np.ndarray:
    """Untransformed mask for a (shape, size) pair, trimmed to its bbox."""
    side = side_for_size_bit(size_bit)
    mask = _t_mask(side) if shape_bit else _l_mask(side)
    return trim_to_bbox(mask)


def trim_to_bbox(mask: np.ndarray) -> np.ndarray:
    """Crop a boolean mask to its true-cell bounding box."""
    if not mask.any():
        raise ValueError("mask has no true cells")
    ys, xs = np.nonzero(mask)
    return np.ascontiguousarray(mask[ys.min():ys.max() + 1, xs.min():xs.max() + 1])


def rot90_ccw(mask: np.ndarray) -> np.ndarray:
    """Quarter-turn counterclockwise in bottom-origin coordinates.

    With y pointing up, (x, y) -> (-y, x); on [y, x]-indexed arrays whose
    row 0 is the bottom this is transpose followed by a column flip.
    """
    return np.ascontiguousarray(mask.T[:, ::-1])


def rotate_mask(mask: np.ndarray, quarter_turns: int) -> np.ndarray:
    out = mask
    for _ in range(quarter_turns % 4):
        out = rot90_ccw(out)
    return out
