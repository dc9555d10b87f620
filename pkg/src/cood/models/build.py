"""Model construction, parameter counting, prediction, checkpointing."""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .. import nn
from .base import Model, ModelOutput
from .config import (
    ModelConfig,
    ModelKind,
    POINTER_KINDS,
    config_from_text,
    config_to_text,
    preset_config,
)
from .pointer import ApnModel, AplnModel, PointerField, decode_batch, pointer_decode
from .zoo import CnnModel, MlpModel, TransformerModel

_BUILDERS = {
    ModelKind.MLP: MlpModel,
    ModelKind.CNN: CnnModel,
    ModelKind.TRANSFORMER: TransformerModel,
    ModelKind.APN: ApnModel,
    ModelKind.APLN: AplnModel,
}

_KIND_IDS = {kind: i for i, kind in enumerate(ModelKind)}


def build_model(config: ModelConfig, seed: int = 0) -> Model:
    """Instantiate one of the five architectures with seeded initialization."""
    config.validate()
    rng = np.random.default_rng([seed, _KIND_IDS[config.kind]])
    return _BUILDERS[config.kind](config, rng)


def count_params(model: Model) -> tuple[int, int]:
    """(total, trainable) sizes summed over the parameter store."""
    return model.store.total_count(), model.store.trainable_count()


def forward(model: Model, image: np.ndarray, action: int):
    """Single-sample forward: logits grid, plus a PointerField for pointer kinds."""
    with nn.no_grad():
        out = model.forward_batch(np.asarray(image)[None], np.asarray([int(action)]))
    logits = out.logits.data[0]
    if model.kind in POINTER_KINDS:
        field = PointerField(
            kind=model.kind, row=out.row_dist.data[0], col=out.col_dist.data[0]
        )
        return logits, field
    return logits, None


def predict_batch(model: Model, images: np.ndarray, actions: np.ndarray) -> np.ndarray:
    """Hard predictions: argmax colors, or pointer decode for pointer kinds.

    Ties break toward the lowest color code / source index.
    """
    was_training = model.mode.training
    model.set_training(False)
    try:
        with nn.no_grad():
            out = model.forward_batch(images, actions)
            if model.kind in POINTER_KINDS:
                pred = decode_batch(model.kind, out.row_dist.data, out.col_dist.data, images)
            else:
                pred = np.argmax(out.logits.data, axis=-1).astype(np.uint8)
    finally:
        model.set_training(was_training)
    return pred.astype(np.uint8)


def predict(model: Model, sample) -> np.ndarray:
    """Predict the output image for one dataset Sample."""
    return predict_batch(model, sample.input[None], np.asarray([sample.action]))[0]


def save_model(model: Model, path: str | Path) -> Path:
    """Checkpoint the store plus kind/config metadata entries."""
    extra = {
        "kind": np.asarray([float(_KIND_IDS[model.kind])], dtype=np.float32),
        "meta.config_utf8": nn.encode_text(config_to_text(model.config)),
    }
    return nn.save_params(model.store, path, extra=extra)


def load_model(path: str | Path) -> Model:
    """Rebuild a model from a checkpoint written by save_model."""
    arrays, _ = nn.load_params(path)
    if "meta.config_utf8" not in arrays:
        raise nn.CheckpointError(f"{path}: missing config metadata entry")
    config = config_from_text(nn.decode_text(arrays["meta.config_utf8"]))
    model = build_model(config)
    weights = {
        k: v for k, v in arrays.items() if k != "kind" and not k.startswith("meta.")
    }
    nn.restore_into(model.store, weights)
    return model


__all__ = [
    "build_model", "count_params", "forward", "predict", "predict_batch",
    "save_model", "load_model", "Model", "ModelOutput", "ModelConfig",
    "ModelKind", "POINTER_KINDS", "preset_config", "PointerField",
    "pointer_decode",
]
