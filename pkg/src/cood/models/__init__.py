"""The five benchmark architectures over the nn engine."""

from .base import Model, ModelOutput, N_COLORS, one_hot_images
from .config import (
    ModelConfig,
    ModelKind,
    POINTER_KINDS,
    PRESET_NAMES,
    config_from_text,
    config_to_text,
    preset_config,
)
from .pointer import (
    ApnModel,
    AplnModel,
    PointerField,
    decode_batch,
    pointer_decode,
)
from .zoo import CnnModel, MlpModel, TransformerModel
from .build import (
    build_model,
    count_params,
    forward,
    load_model,
    predict,
    predict_batch,
    save_model,
)

__all__ = [
    "Model", "ModelOutput", "N_COLORS", "one_hot_images",
    "ModelConfig", "ModelKind", "POINTER_KINDS", "PRESET_NAMES",
    "config_from_text", "config_to_text", "preset_config",
    "ApnModel", "AplnModel", "PointerField", "decode_batch", "pointer_decode",
    "CnnModel", "MlpModel", "TransformerModel",
    "build_model", "count_params", "forward", "load_model", "predict",
    "predict_batch", "save_model",
]
