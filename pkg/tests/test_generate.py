"""Sample/dataset generation: determinism, split purity, target consistency."""

from collections import Counter

import numpy as np
import pytest

from cood.gridworld import (
    BLACK,
    WHITE,
    ConceptCombo,
    SplitClass,
    SPLIT_CLASSES,
    World,
    apply_action,
    assign_splits,
    build_concept_graph,
    generate_dataset,
    generate_sample,
    render_scene,
)

GRID = 16


def test_same_seed_is_byte_identical():
    a = generate_sample(World.TRANSLATE, ConceptCombo(0, 0, 1), [3, 0, 5], GRID)
    b = generate_sample(World.TRANSLATE, ConceptCombo(0, 0, 1), [3, 0, 5], GRID)
    assert a == b
    c = generate_sample(World.TRANSLATE, ConceptCombo(0, 0, 1), [3, 0, 6], GRID)
    assert not np.array_equal(a.input, c.input) or a.meta != c.meta


def test_sample_carries_requested_combo_and_action():
    combo = ConceptCombo(1, 0, 1)
    s = generate_sample(World.ROTATE, combo, [11, 2, 0], GRID)
    assert s.meta.combo == combo
    assert s.action == combo.action_bit


@pytest.mark.parametrize("world", [World.TRANSLATE, World.ROTATE])
def test_both_images_show_the_object(world):
    # Scan all pixels of 1000 generated samples for at least one
    # object-coloured pixel in both input and target.
    for i in range(1000):
        combo = ConceptCombo((i >> 2) & 1, (i >> 1) & 1, i & 1)
        s = generate_sample(world, combo, [21, 7, i], GRID)
        assert (s.input >= 2).any(), f"sample {i}: blank input"
        assert (s.target >= 2).any(), f"sample {i}: blank target"


@pytest.mark.parametrize("world", [World.TRANSLATE, World.ROTATE])
def test_target_equals_regenerated_scene(world):
    for i in range(300):
        combo = ConceptCombo((i >> 2) & 1, (i >> 1) & 1, i & 1)
        s = generate_sample(world, combo, [5, 1, i], GRID)
        regen = render_scene(apply_action(s.meta, s.action, world), GRID)
        assert np.array_equal(s.target, regen)
        assert np.array_equal(s.input, render_scene(s.meta, GRID))


def test_translate_masks_shift_by_5_before_clipping():
    for i in range(200):
        s = generate_sample(World.TRANSLATE, ConceptCombo(0, 0, i & 1), [9, 3, i], GRID)
        moved = apply_action(s.meta, s.action, World.TRANSLATE)
        dy = moved.pos_y - s.meta.pos_y
        assert abs(dy) == 5
        assert moved.pos_x == s.meta.pos_x
        assert dy == (5 if s.action == 0 else -5)


def test_rotate_masks_rotate_before_clipping():
    for i in range(100):
        s = generate_sample(World.ROTATE, ConceptCombo(1, 1, i & 1), [13, 3, i], GRID)
        moved = apply_action(s.meta, s.action, World.ROTATE)
        turns = 1 if s.action == 0 else 2
        assert moved.orientation == turns
        assert np.array_equal(
            moved.mask(), np.ascontiguousarray(np.rot90(s.meta.mask(), k=-turns))
        )


def test_pixels_outside_canvas_are_white():
    for i in range(200):
        s = generate_sample(World.TRANSLATE, ConceptCombo(1, 1, 0), [17, 0, i], GRID)
        c = s.meta.canvas
        for img in (s.input, s.target):
            outside = np.ones((GRID, GRID), dtype=bool)
            outside[c.offset_y:c.offset_y + c.n, c.offset_x:c.offset_x + c.m] = False
            assert (img[outside] == WHITE).all()
            assert (img == WHITE).sum() >= GRID * GRID - c.n * c.m
            inside = img[c.offset_y:c.offset_y + c.n, c.offset_x:c.offset_x + c.m]
            assert ((inside == BLACK) | (inside >= 2)).all()


@pytest.fixture(scope="module")
def translate_ds():
    return generate_dataset(World.TRANSLATE, seed=42, train_count=60, test_count=21, grid=GRID)


class TestDataset:
    @pytest.fixture()
    def ds(self, translate_ds):
        return translate_ds

    def test_counts(self, ds):
        assert len(ds.splits["train"]) == 60
        for name in ("test_d0", "test_d1", "test_d2"):
            assert len(ds.splits[name]) == 21

    def test_split_purity_brute_force(self, ds):
        assignment = assign_splits(build_concept_graph())
        for name, samples in ds.splits.items():
            want = SPLIT_CLASSES[name]
            for s in samples:
                assert assignment.class_of(s.meta.combo) is want

    def test_test_d2_is_all_ones_combo(self, ds):
        for s in ds.splits["test_d2"]:
            assert s.meta.combo == ConceptCombo(1, 1, 1)

    def test_train_combo_histogram_uniform(self, ds):
        counts = Counter(s.meta.combo for s in ds.splits["train"])
        assert len(counts) == 4
        assert max(counts.values()) - min(counts.values()) <= 1

    def test_d1_combo_histogram_uniform(self, ds):
        counts = Counter(s.meta.combo for s in ds.splits["test_d1"])
        assert len(counts) == 3
        assert max(counts.values()) - min(counts.values()) <= 1

    def test_regenerating_is_identical(self, ds):
        again = generate_dataset(World.TRANSLATE, seed=42, train_count=60, test_count=21, grid=GRID)
        assert again == ds

    def test_train_and_d0_are_independent_draws(self, ds):
        # Fresh samples, not reused training ones: metadata streams differ.
        assert ds.splits["train"][:21] != ds.splits["test_d0"]

    def test_bad_counts_rejected(self):
        with pytest.raises(ValueError):
            generate_dataset(World.TRANSLATE, seed=1, train_count=0, test_count=5, grid=GRID)
