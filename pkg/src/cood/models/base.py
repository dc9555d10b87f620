"""Shared model shell: two input pathways merging into one output path.

Every architecture takes the image through its own pathway, embeds the
action bit into a vector, merges, and emits a per-pixel 4-way logit grid
(pointer kinds additionally expose their source distributions).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .. import nn
from ..nn import Tensor
from ..nn.layers import Mode
from .config import ModelConfig, ModelKind

N_COLORS = 4


@dataclass
class ModelOutput:
    logits: Tensor                 # (B, G, G, 4)
    row_dist: Tensor | None = None  # pointer kinds: (B, G, G, G)
    col_dist: Tensor | None = None  # APN (B, G, G, G); APLN (B, G, G)


def one_hot_images(images: np.ndarray, dtype=np.float32) -> np.ndarray:
    images = np.asarray(images)
    return (np.arange(N_COLORS) == images[..., None]).astype(dtype)


class Model:
    def __init__(self, config: ModelConfig):
        config.validate()
        self.config = config
        self.kind: ModelKind = config.kind
        self.grid = config.grid
        self.store = nn.ParamStore()
        self.mode = Mode()

    def set_training(self, flag: bool) -> None:
        self.mode.training = flag

    def forward_batch(self, images: np.ndarray, actions: np.ndarray) -> ModelOutput:
        raise NotImplementedError

    def _check_inputs(self, images: np.ndarray, actions: np.ndarray) -> None:
        if images.ndim != 3 or images.shape[1:] != (self.grid, self.grid):
            raise ValueError(
                f"expected images (B, {self.grid}, {self.grid}), got {images.shape}"
            )
        if actions.shape != images.shape[:1]:
            raise ValueError("actions must be one bit per image")

    def loss_batch(self, images: np.ndarray, actions: np.ndarray,
                   targets: np.ndarray) -> Tensor:
        out = self.forward_batch(images, actions)
        return nn.cross_entropy_grid(out.logits, targets)

    def param_dtype(self) -> np.dtype:
        for _, t, _ in self.store.items():
            return t.data.dtype
        return np.dtype(np.float32)
