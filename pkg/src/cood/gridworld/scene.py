"""Scene specification and rendering for the Translate and Rotate worlds.

A scene is an object (shape/colour/size, possibly rotated) at a signed
grid position on top of a black canvas rectangle inside a white G x G
grid. Images are uint8 arrays indexed [y, x] with y=0 the bottom row.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from .concepts import ConceptCombo
from .shapes import base_mask, rotate_mask

WHITE, BLACK, RED, BLUE = 0, 1, 2, 3
N_COLORS = 4
DEFAULT_GRID = 32
TRANSLATE_SHIFT = 5


class World(Enum):
    TRANSLATE = "translate"
    ROTATE = "rotate"


class SceneError(ValueError):
    """Scene constraint violation (bad canvas, invisible object, ...)."""


def min_canvas_side(grid: int) -> int:
    """Minimum canvas extent; 10 at the standard 32-pixel grid.

    The floor of 8 keeps every canvas able to hold the largest (7x7)
    object at reduced grids, matching the standard grid where 10x10
    canvases always fit it.
    """
    return max(10 * grid // 32, 8)


def colour_code(colour_bit: int) -> int:
    return BLUE if colour_bit else RED


@dataclass(frozen=True)
class CanvasSpec:
    """Black rectangle: offset of its bottom-left corner plus extents.

    n is the height (y extent) and m the width (x extent).
    """

    offset_x: int
    offset_y: int
    n: int
    m: int

    def validate(self, grid: int) -> None:
        lo = min_canvas_side(grid)
        if not (lo <= self.n <= grid and lo <= self.m <= grid):
            raise SceneError(
                f"canvas {self.n}x{self.m} outside [{lo}, {grid}] for grid {grid}"
            )
        if self.offset_x < 0 or self.offset_y < 0:
            raise SceneError("canvas offset must be non-negative")
        if self.offset_y + self.n > grid or self.offset_x + self.m > grid:
            raise SceneError("canvas extends past the grid")


@dataclass(frozen=True)
class SceneSpec:
    """Full description of one rendered image.

    pos_x/pos_y locate the mask's bottom-left cell and may be negative or
    place the mask partially off-canvas. orientation counts quarter-turns
    counterclockwise applied to the base mask; input scenes always carry
    orientation 0, Rotate-world targets carry 1 or 2.
    """

    combo: ConceptCombo
    size_bit: int
    pos_x: int
    pos_y: int
    canvas: CanvasSpec
    orientation: int = 0

    def mask(self) -> np.ndarray:
        return rotate_mask(base_mask(self.combo.shape_bit, self.size_bit), self.orientation)


def visible_object_cells(scene: SceneSpec) -> int:
    """Number of object cells that land inside the canvas rectangle."""
    mask = scene.mask()
    h, w = mask.shape
    c = scene.canvas
    y0 = max(scene.pos_y, c.offset_y)
    y1 = min(scene.pos_y + h, c.offset_y + c.n)
    x0 = max(scene.pos_x, c.offset_x)
    x1 = min(scene.pos_x + w, c.offset_x + c.m)
    if y0 >= y1 or x0 >= x1:
        return 0
    sub = mask[y0 - scene.pos_y:y1 - scene.pos_y, x0 - scene.pos_x:x1 - scene.pos_x]
    return int(sub.sum())


def render_scene(scene: SceneSpec, grid: int = DEFAULT_GRID) -> np.ndarray:
    """Paint a scene: white grid, black canvas, object cells clipped to it."""
    scene.canvas.validate(grid)
    img = np.full((grid, grid), WHITE, dtype=np.uint8)
    c = scene.canvas
    img[c.offset_y:c.offset_y + c.n, c.offset_x:c.offset_x + c.m] = BLACK
    mask = scene.mask()
    h, w = mask.shape
    y0 = max(scene.pos_y, c.offset_y)
    y1 = min(scene.pos_y + h, c.offset_y + c.n)
    x0 = max(scene.pos_x, c.offset_x)
    x1 = min(scene.pos_x + w, c.offset_x + c.m)
    if y0 < y1 and x0 < x1:
        sub = mask[y0 - scene.pos_y:y1 - scene.pos_y, x0 - scene.pos_x:x1 - scene.pos_x]
        region = img[y0:y1, x0:x1]
        region[sub] = colour_code(scene.combo.colour_bit)
    return img


def apply_action(scene: SceneSpec, action: int, world: World) -> SceneSpec:
    """Transform a scene by the world's action.

    Translate: action 0 moves the object up by 5 pixels, action 1 down by
    5. Rotate: action 0 is a quarter-turn counterclockwise, action 1 a
    half-turn, both about the mask's bounding-box centre (the canvas never
    changes). Raises SceneError if the result has no visible object cell;
    callers resample the position.
    """
    if action not in (0, 1):
        raise SceneError(f"action must be 0 or 1, got {action}")
    if world is World.TRANSLATE:
        dy = TRANSLATE_SHIFT if action == 0 else -TRANSLATE_SHIFT
        out = replace(scene, pos_y=scene.pos_y + dy)
    else:
        turns = 1 if action == 0 else 2
        h, w = scene.mask().shape
        new_h, new_w = (w, h) if turns % 2 else (h, w)
        # Keep the bbox centre fixed: 2*pos + (extent-1) is twice the centre.
        cx2 = 2 * scene.pos_x + (w - 1)
        cy2 = 2 * scene.pos_y + (h - 1)
        if (cx2 - (new_w - 1)) % 2 or (cy2 - (new_h - 1)) % 2:
            raise SceneError("rotation of a non-square bbox breaks the integer grid")
        out = replace(
            scene,
            orientation=(scene.orientation + turns) % 4,
            pos_x=(cx2 - (new_w - 1)) // 2,
            pos_y=(cy2 - (new_h - 1)) // 2,
        )
    if visible_object_cells(out) == 0:
        raise SceneError("action left no visible object cell")
    return out
