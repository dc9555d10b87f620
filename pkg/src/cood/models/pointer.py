"""Axial pointer networks: APN and APLN.

Both run the image through a gMLP trunk interleaved with row/column axial
attention, merge the action embedding, and emit per-output-pixel source
distributions over input rows and columns. Output colors are the
attention-weighted mixture of input colors during training and a hard
argmax copy at evaluation, so decoded outputs can only contain colors
present in the input.

APN discovers each output pixel's source row and source column
independently (G*G independent distribution pairs). APLN first discovers
one source-column distribution per output column, shared by all its
pixels, then a per-pixel source row — the bias that favors copying whole
rows/columns in a translation-like way.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .. import nn
from ..nn import Tensor
from ..nn.layers import (
    AxialAttentionBlock,
    Embedding,
    GMLPBlock,
    LayerNorm,
    Linear,
)
from .base import Model, ModelOutput, N_COLORS, one_hot_images
from .config import ModelConfig, ModelKind

PROB_FLOOR = 1e-12


@dataclass
class PointerField:
    """Per-output-pixel source distributions for one sample.

    row: (G, G, G) — row_dist[i, j] over source rows for output pixel (i, j).
    col: (G, G, G) for APN; (G, G) for APLN where col[j] is the single
    source-column distribution shared by every pixel of output column j.
    """

    kind: ModelKind
    row: np.ndarray
    col: np.ndarray

    def grid(self) -> int:
        return self.row.shape[0]

    def validate(self, atol: float = 1e-5) -> None:
        g = self.grid()
        if self.row.shape != (g, g, g):
            raise ValueError(f"row distributions must be (G,G,G), got {self.row.shape}")
        want_col = (g, g) if self.kind is ModelKind.APLN else (g, g, g)
        if self.col.shape != want_col:
            raise ValueError(f"col distributions must be {want_col}, got {self.col.shape}")
        for arr in (self.row, self.col):
            sums = arr.sum(axis=-1)
            if not np.allclose(sums, 1.0, atol=atol):
                raise ValueError("pointer distributions must sum to 1")


def pointer_decode(field: PointerField, image: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Hard-decode a pointer field against an input image.

    Returns (pointer_map, output) where pointer_map[i, j] = (src_row,
    src_col) and output[i, j] = image[src_row, src_col]. Argmax ties break
    toward the lowest index. APLN picks the column first, then the row.
    """
    g = field.grid()
    src_row = np.argmax(field.row, axis=-1)
    if field.kind is ModelKind.APLN:
        col_sel = np.argmax(field.col, axis=-1)          # (G,) per output column
        src_col = np.broadcast_to(col_sel[None, :], (g, g))
    else:
        src_col = np.argmax(field.col, axis=-1)
    pointer_map = np.stack([src_row, src_col], axis=-1)
    output = image[src_row, src_col]
    return pointer_map, output


def decode_batch(kind: ModelKind, row: np.ndarray, col: np.ndarray,
                 images: np.ndarray) -> np.ndarray:
    """Vectorized hard decode over a batch."""
    b, g = images.shape[0], images.shape[1]
    src_row = np.argmax(row, axis=-1)
    if kind is ModelKind.APLN:
        col_sel = np.argmax(col, axis=-1)                # (B, G)
        src_col = np.broadcast_to(col_sel[:, None, :], (b, g, g))
    else:
        src_col = np.argmax(col, axis=-1)
    batch_idx = np.arange(b)[:, None, None]
    return images[batch_idx, src_row, src_col]


class _AxialPointerBase(Model):
    def __init__(self, config: ModelConfig, rng: np.random.Generator):
        super().__init__(config)
        store, g = self.store, config.grid
        c, ffn, heads = config.ap_dim, config.ap_ffn, config.ap_heads
        tokens = g * g
        self.color_emb = Embedding(store, "color_emb", N_COLORS, c, rng)
        self.row_emb = Embedding(store, "row_emb", g, c, rng)
        self.col_emb = Embedding(store, "col_emb", g, c, rng)
        self.action_emb = Embedding(store, "action_emb", 2, config.action_dim, rng)
        self.gmlp1 = GMLPBlock(store, "gmlp1", tokens, c, ffn, rng)
        self.axial_row = AxialAttentionBlock(store, "axial_row", c, heads, "row", rng)
        self.gmlp2 = GMLPBlock(store, "gmlp2", tokens, c, ffn, rng)
        self.axial_col = AxialAttentionBlock(store, "axial_col", c, heads, "col", rng)
        self.trunk_norm = LayerNorm(store, "trunk_norm", c)
        yy, xx = np.mgrid[0:g, 0:g]
        self._row_idx, self._col_idx = yy, xx

    def _trunk(self, images: np.ndarray, actions: np.ndarray) -> Tensor:
        """Image pathway + broadcast action merge -> (B, G, G, C + A)."""
        b, g = images.shape[0], self.grid
        x = self.color_emb(np.asarray(images))
        x = x + self.row_emb(self._row_idx)
        x = x + self.col_emb(self._col_idx)
        flat = x.reshape(b, g * g, -1)
        flat = self.gmlp1(flat)
        x = flat.reshape(b, g, g, -1)
        x = self.axial_row(x)
        flat = self.gmlp2(x.reshape(b, g * g, -1))
        x = flat.reshape(b, g, g, -1)
        x = self.axial_col(x)
        x = self.trunk_norm(x)
        act = self.action_emb(np.asarray(actions)).reshape(b, 1, 1, -1)
        act = nn.broadcast_to(act, (b, g, g, act.shape[-1]))
        return nn.concat([x, act], axis=-1)

    def _mixture_logits(self, images: np.ndarray, row_dist: Tensor,
                        col_mix: Tensor) -> Tensor:
        """log of the attention-weighted input color mixture.

        col_mix[b, i?, j, r, k] is the column-mixed one-hot already reduced
        over source columns; contracting with the row distribution yields
        per-pixel color probabilities.
        """
        raise NotImplementedError

    def forward_single(self, image: np.ndarray, action: int) -> tuple[np.ndarray, PointerField]:
        with nn.no_grad():
            out = self.forward_batch(image[None], np.asarray([action]))
        row = out.row_dist.data[0]
        col = out.col_dist.data[0]
        return out.logits.data[0], PointerField(kind=self.kind, row=row, col=col)


class ApnModel(_AxialPointerBase):
    """Independent row/column source distributions per output pixel."""

    def __init__(self, config: ModelConfig, rng: np.random.Generator):
        super().__init__(config, rng)
        store = self.store
        c, a, f, g = config.ap_dim, config.action_dim, config.final_mlp_hidden, config.grid
        self.head1 = Linear(store, "head1", c + a, f, rng)
        self.head2 = Linear(store, "head2", f, 2 * g, rng)

    def forward_batch(self, images, actions) -> ModelOutput:
        self._check_inputs(images, actions)
        b, g = images.shape[0], self.grid
        h = self._trunk(images, actions)
        z = self.head2(nn.gelu(self.head1(h)))          # (B, G, G, 2G)
        row_dist = nn.softmax(z[..., :g], axis=-1)       # (B, G, G, G)
        col_dist = nn.softmax(z[..., g:], axis=-1)       # (B, G, G, G)
        onehot = Tensor(one_hot_images(images, self.param_dtype()))
        mix = nn.einsum2("bijc,brck->bijrk", col_dist, onehot)
        probs = nn.einsum2("bijr,bijrk->bijk", row_dist, mix)
        logits = nn.log(nn.clamp_min(probs, PROB_FLOOR))
        return ModelOutput(logits=logits, row_dist=row_dist, col_dist=col_dist)


class AplnModel(_AxialPointerBase):
    """Column-first pointer: one shared source-column distribution per
    output column, then a per-pixel source row."""

    def __init__(self, config: ModelConfig, rng: np.random.Generator):
        super().__init__(config, rng)
        store = self.store
        c, a, f, g = config.ap_dim, config.action_dim, config.final_mlp_hidden, config.grid
        self.row_head1 = Linear(store, "row_head1", c + a, f, rng)
        self.row_head2 = Linear(store, "row_head2", f, g, rng)
        self.col_head1 = Linear(store, "col_head1", c + a, f, rng)
        self.col_head2 = Linear(store, "col_head2", f, g, rng)

    def forward_batch(self, images, actions) -> ModelOutput:
        self._check_inputs(images, actions)
        b, g = images.shape[0], self.grid
        h = self._trunk(images, actions)                 # (B, G, G, C+A)
        row_z = self.row_head2(nn.gelu(self.row_head1(h)))
        row_dist = nn.softmax(row_z, axis=-1)            # (B, G, G, G)
        col_feat = h.mean(axis=1)                        # pool rows -> (B, G, C+A)
        col_z = self.col_head2(nn.gelu(self.col_head1(col_feat)))
        col_dist = nn.softmax(col_z, axis=-1)            # (B, G, G): per output col j
        onehot = Tensor(one_hot_images(images, self.param_dtype()))
        mix = nn.einsum2("bjc,brck->bjrk", col_dist, onehot)
        probs = nn.einsum2("bijr,bjrk->bijk", row_dist, mix)
        logits = nn.log(nn.clamp_min(probs, PROB_FLOOR))
        return ModelOutput(logits=logits, row_dist=row_dist, col_dist=col_dist)
