"""Shape masks, scene rendering and world actions."""

import numpy as np
import pytest

from cood.gridworld import (
    BLACK,
    BLUE,
    RED,
    WHITE,
    CanvasSpec,
    ConceptCombo,
    SceneError,
    SceneSpec,
    World,
    apply_action,
    base_mask,
    min_canvas_side,
    render_scene,
    rot90_ccw,
    rotate_mask,
    visible_object_cells,
)


def make_scene(shape=0, colour=0, action=0, size=1, pos=(0, 0), canvas=None):
    canvas = canvas or CanvasSpec(offset_x=0, offset_y=0, n=10, m=10)
    return SceneSpec(
        combo=ConceptCombo(shape, colour, action),
        size_bit=size,
        pos_x=pos[0],
        pos_y=pos[1],
        canvas=canvas,
    )


class TestMasks:
    @pytest.mark.parametrize("shape_bit", [0, 1])
    @pytest.mark.parametrize("size_bit", [0, 1])
    def test_square_bbox_and_trimmed(self, shape_bit, size_bit):
        m = base_mask(shape_bit, size_bit)
        side = 7 if size_bit else 4
        assert m.shape == (side, side)
        # Trimmed: every boundary row/column holds a true cell.
        assert m[0].any() and m[-1].any()
        assert m[:, 0].any() and m[:, -1].any()

    @pytest.mark.parametrize("shape_bit", [0, 1])
    @pytest.mark.parametrize("size_bit", [0, 1])
    def test_no_quarter_or_half_turn_symmetry(self, shape_bit, size_bit):
        # Both worlds need observable actions, so neither rotation may fix a shape.
        m = base_mask(shape_bit, size_bit)
        assert not np.array_equal(m, rotate_mask(m, 1))
        assert not np.array_equal(m, rotate_mask(m, 2))

    def test_shapes_differ(self):
        assert not np.array_equal(base_mask(0, 1), base_mask(1, 1))
        assert not np.array_equal(base_mask(0, 0), base_mask(1, 0))

    def test_rot90_is_order_4(self):
        m = base_mask(1, 1)
        out = m
        for _ in range(4):
            out = rot90_ccw(out)
        assert np.array_equal(out, m)

    def test_rot90_moves_bottom_left_to_bottom_right(self):
        m = np.zeros((3, 3), dtype=bool)
        m[0, 0] = True
        r = rot90_ccw(m)
        assert r[0, 2]


class TestRender:
    def test_paper_example_clipped_square_counts_28(self):
        # Large 7x7 solid object, bottom-left at (6,1), 10x10 canvas at the
        # origin: columns 6..9 of the grid survive, so 7 rows x 4 cols = 28.
        # Oracle: count mask cells that land inside the canvas one by one.
        canvas = CanvasSpec(offset_x=0, offset_y=0, n=10, m=10)
        mask = np.ones((7, 7), dtype=bool)
        pos_x, pos_y = 6, 1
        expected = sum(
            1
            for dy in range(7)
            for dx in range(7)
            if mask[dy, dx]
            and 0 <= pos_y + dy < 10
            and 0 <= pos_x + dx < 10
        )
        assert expected == 28

        scene = make_scene(pos=(pos_x, pos_y), canvas=canvas)
        img = render_scene(scene, grid=32)
        # The L mask is not solid; check against the same per-cell oracle.
        m = scene.mask()
        visible = sum(
            1
            for dy in range(m.shape[0])
            for dx in range(m.shape[1])
            if m[dy, dx] and 0 <= pos_y + dy < 10 and 0 <= pos_x + dx < 10
        )
        assert (img == RED).sum() == visible
        assert visible_object_cells(scene) == visible

    def test_fully_inside_mask_shows_all_cells(self):
        canvas = CanvasSpec(offset_x=2, offset_y=2, n=20, m=20)
        scene = make_scene(pos=(5, 5), canvas=canvas, colour=1)
        img = render_scene(scene, grid=32)
        assert (img == BLUE).sum() == scene.mask().sum()

    def test_outside_canvas_is_white_inside_is_black(self):
        canvas = CanvasSpec(offset_x=4, offset_y=6, n=10, m=12)
        scene = make_scene(pos=(-20, -20), canvas=canvas)  # object invisible
        img = render_scene(scene, grid=32)
        assert img[0, 0] == WHITE
        assert img[5, 3] == WHITE
        assert img[6, 4] == BLACK
        assert img[15, 15] == BLACK
        assert img[16, 4] == WHITE
        assert (img == WHITE).sum() == 32 * 32 - 10 * 12

    def test_small_canvas_rejected(self):
        canvas = CanvasSpec(offset_x=0, offset_y=0, n=9, m=10)
        with pytest.raises(SceneError):
            render_scene(make_scene(canvas=canvas), grid=32)

    def test_min_canvas_scales_with_grid(self):
        assert min_canvas_side(32) == 10
        assert min_canvas_side(16) == 8
        # Floor: a canvas always fits the 7x7 large object.
        assert min_canvas_side(8) == 8


class TestActions:
    def test_translate_up_shifts_5(self):
        scene = make_scene(action=0, pos=(1, 1))
        out = apply_action(scene, 0, World.TRANSLATE)
        assert out.pos_y == scene.pos_y + 5
        assert out.pos_x == scene.pos_x

    def test_translate_down_shifts_5(self):
        scene = make_scene(action=1, pos=(1, 6))
        out = apply_action(scene, 1, World.TRANSLATE)
        assert out.pos_y == scene.pos_y - 5

    def test_rot180_twice_is_identity(self):
        canvas = CanvasSpec(offset_x=0, offset_y=0, n=16, m=16)
        scene = make_scene(pos=(4, 4), canvas=canvas)
        once = apply_action(scene, 1, World.ROTATE)
        twice = apply_action(once, 1, World.ROTATE)
        assert twice == scene
        assert np.array_equal(
            render_scene(twice, 16), render_scene(scene, 16)
        )

    def test_rot90_four_times_is_identity(self):
        canvas = CanvasSpec(offset_x=0, offset_y=0, n=16, m=16)
        scene = make_scene(pos=(4, 4), canvas=canvas, shape=1)
        out = scene
        for _ in range(4):
            out = apply_action(out, 0, World.ROTATE)
        assert out == scene

    def test_rotation_keeps_bbox_centre(self):
        canvas = CanvasSpec(offset_x=0, offset_y=0, n=20, m=20)
        scene = make_scene(pos=(3, 7), canvas=canvas, size=1)
        out = apply_action(scene, 0, World.ROTATE)
        # Square bbox: the position is unchanged and the canvas untouched.
        assert (out.pos_x, out.pos_y) == (scene.pos_x, scene.pos_y)
        assert out.canvas == scene.canvas

    def test_invisible_result_rejected(self):
        # Moving down by 5 pushes the whole 4x4 object below the grid.
        scene = make_scene(action=1, pos=(0, 1), size=0)
        with pytest.raises(SceneError):
            apply_action(scene, 1, World.TRANSLATE)

    def test_bad_action_rejected(self):
        with pytest.raises(SceneError):
            apply_action(make_scene(), 2, World.TRANSLATE)
