"""Synthetic ARC-like world models with concept-graph OOD splits."""

from .concepts import (
    ALL_COMBOS,
    ConceptCombo,
    ConceptGraph,
    SplitAssignment,
    SplitClass,
    assign_splits,
    build_concept_graph,
    hamming,
)
from .scene import (
    BLACK,
    BLUE,
    DEFAULT_GRID,
    N_COLORS,
    RED,
    TRANSLATE_SHIFT,
    WHITE,
    CanvasSpec,
    SceneError,
    SceneSpec,
    World,
    apply_action,
    colour_code,
    min_canvas_side,
    render_scene,
    visible_object_cells,
)
from .shapes import base_mask, rotate_mask, rot90_ccw, trim_to_bbox
from .generate import (
    Dataset,
    GenerationError,
    Sample,
    SPLIT_CLASSES,
    SPLIT_NAMES,
    generate_dataset,
    generate_sample,
)
from .io import (
    DatasetDecodeError,
    decode_record,
    encode_record,
    read_dataset,
    record_size,
    write_dataset,
)

__all__ = [
    "ALL_COMBOS", "ConceptCombo", "ConceptGraph", "SplitAssignment", "SplitClass",
    "assign_splits", "build_concept_graph", "hamming",
    "BLACK", "BLUE", "DEFAULT_GRID", "N_COLORS", "RED", "TRANSLATE_SHIFT", "WHITE",
    "CanvasSpec", "SceneError", "SceneSpec", "World", "apply_action", "colour_code",
    "min_canvas_side", "render_scene", "visible_object_cells",
    "base_mask", "rotate_mask", "rot90_ccw", "trim_to_bbox",
    "Dataset", "GenerationError", "Sample", "SPLIT_CLASSES", "SPLIT_NAMES",
    "generate_dataset", "generate_sample",
    "DatasetDecodeError", "decode_record", "encode_record", "read_dataset",
    "record_size", "write_dataset",
]
