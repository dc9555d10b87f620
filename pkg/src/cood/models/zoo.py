"""The three baseline architectures: MLP, CNN, Transformer."""

from __future__ import annotations

import numpy as np

from .. import nn
from ..nn import Tensor
from ..nn.layers import (
    BatchNorm,
    Conv2d,
    ConvTranspose2d,
    Embedding,
    LayerNorm,
    Linear,
    TransformerBlock,
)
from .base import Model, ModelOutput, N_COLORS, one_hot_images
from .config import ModelConfig


class MlpModel(Model):
    """Flattened one-hot image through three dense stages and a pixel head."""

    def __init__(self, config: ModelConfig, rng: np.random.Generator):
        super().__init__(config)
        g, h, a = config.grid, config.mlp_hidden, config.action_dim
        store = self.store
        self.action_emb = Embedding(store, "action_emb", 2, a, rng)
        flat = g * g * N_COLORS
        self.fc1 = Linear(store, "fc1", flat, h, rng)
        self.fc2 = Linear(store, "fc2", h + a, h, rng)
        self.fc3 = Linear(store, "fc3", h, h, rng)
        self.head = Linear(store, "head", h, flat, rng)

    def forward_batch(self, images, actions) -> ModelOutput:
        self._check_inputs(images, actions)
        b, g = images.shape[0], self.grid
        dtype = self.param_dtype()
        x = Tensor(one_hot_images(images, dtype).reshape(b, -1))
        h = nn.gelu(self.fc1(x))
        act = self.action_emb(np.asarray(actions))
        h = nn.concat([h, act], axis=-1)
        h = nn.gelu(self.fc2(h))
        h = nn.gelu(self.fc3(h))
        logits = self.head(h).reshape(b, g, g, N_COLORS)
        return ModelOutput(logits=logits)


class CnnModel(Model):
    """Strided conv encoder, dense action merge, transposed-conv decoder.

    Mirrored encoder stages feed the decoder through skip concatenations
    (plus a full-resolution one-hot skip before the head); without them
    the stack cannot reach pixel-exact outputs within the epoch budgets
    that in-distribution saturation demands. Batch normalization follows
    every conv/dense stage; its running statistics are the store's
    non-trainable entries.
    """

    def __init__(self, config: ModelConfig, rng: np.random.Generator):
        super().__init__(config)
        store, mode = self.store, self.mode
        stages = config.cnn_stages()
        enc = config.cnn_channels[:stages]
        d1, d2 = config.cnn_dense
        a = config.action_dim
        self.action_emb = Embedding(store, "action_emb", 2, a, rng)

        self.enc = []
        c_in = N_COLORS
        for i, c_out in enumerate(enc):
            conv = Conv2d(store, f"enc{i}.conv", c_in, c_out, k=3, stride=2, pad=1, rng=rng)
            bn = BatchNorm(store, f"enc{i}.bn", c_out, mode)
            self.enc.append((conv, bn))
            c_in = c_out

        self.bottleneck_hw = config.grid // (2 ** stages)
        flat = self.bottleneck_hw * self.bottleneck_hw * enc[-1]
        self.fc1 = Linear(store, "merge1", flat + a, d1, rng)
        self.bn1 = BatchNorm(store, "merge1.bn", d1, mode)
        self.fc2 = Linear(store, "merge2", d1, d2, rng)
        self.bn2 = BatchNorm(store, "merge2.bn", d2, mode)
        self.seed_channels = d2 // (self.bottleneck_hw * self.bottleneck_hw)
        if self.seed_channels * self.bottleneck_hw ** 2 != d2:
            raise ValueError("second merge width must tile the bottleneck")

        dec = list(reversed(enc))[1:] + [max(enc[0] // 2, 4)]
        skips = list(reversed(enc))  # encoder outputs, deepest first
        self.dec = []
        c_in = self.seed_channels
        for i, c_out in enumerate(dec):
            c_in += skips[i]
            conv = ConvTranspose2d(
                store, f"dec{i}.conv", c_in, c_out, k=3, stride=2, pad=1, out_pad=1, rng=rng
            )
            bn = BatchNorm(store, f"dec{i}.bn", c_out, mode)
            self.dec.append((conv, bn))
            c_in = c_out
        self.head = Conv2d(
            store, "head", c_in + N_COLORS, N_COLORS, k=3, stride=1, pad=1, rng=rng
        )

    def forward_batch(self, images, actions) -> ModelOutput:
        self._check_inputs(images, actions)
        b = images.shape[0]
        dtype = self.param_dtype()
        onehot = Tensor(one_hot_images(images, dtype))
        x = onehot
        enc_outs = []
        for conv, bn in self.enc:
            x = nn.gelu(bn(conv(x)))
            enc_outs.append(x)
        x = x.reshape(b, -1)
        act = self.action_emb(np.asarray(actions))
        x = nn.concat([x, act], axis=-1)
        x = nn.gelu(self.bn1(self.fc1(x)))
        x = nn.gelu(self.bn2(self.fc2(x)))
        x = x.reshape(b, self.bottleneck_hw, self.bottleneck_hw, self.seed_channels)
        for i, (conv, bn) in enumerate(self.dec):
            x = nn.concat([x, enc_outs[-1 - i]], axis=-1)
            x = nn.gelu(bn(conv(x)))
        logits = self.head(nn.concat([x, onehot], axis=-1))
        return ModelOutput(logits=logits)


class TransformerModel(Model):
    """Per-pixel color embedding + 2-D positions, encoder blocks, pixel head.

    Tokens are the G*G pixels plus one action token.
    """

    def __init__(self, config: ModelConfig, rng: np.random.Generator):
        super().__init__(config)
        store = self.store
        g, d = config.grid, config.tf_dim
        self.color_emb = Embedding(store, "color_emb", N_COLORS, d, rng)
        self.row_emb = Embedding(store, "row_emb", g, d, rng)
        self.col_emb = Embedding(store, "col_emb", g, d, rng)
        self.action_emb = Embedding(store, "action_emb", 2, d, rng)
        self.blocks = [
            TransformerBlock(store, f"block{i}", d, config.tf_heads, 4 * d, rng)
            for i in range(config.tf_blocks)
        ]
        self.final_norm = LayerNorm(store, "final_norm", d)
        self.head = Linear(store, "head", d, N_COLORS, rng)
        yy, xx = np.mgrid[0:g, 0:g]
        self._row_idx, self._col_idx = yy, xx

    def forward_batch(self, images, actions) -> ModelOutput:
        self._check_inputs(images, actions)
        b, g = images.shape[0], self.grid
        x = self.color_emb(np.asarray(images))
        x = x + self.row_emb(self._row_idx)
        x = x + self.col_emb(self._col_idx)
        tokens = x.reshape(b, g * g, -1)
        act = self.action_emb(np.asarray(actions)).reshape(b, 1, -1)
        tokens = nn.concat([tokens, act], axis=1)
        for block in self.blocks:
            tokens = block(tokens)
        tokens = self.final_norm(tokens)
        pixels = tokens[:, :g * g, :]
        logits = self.head(pixels).reshape(b, g, g, N_COLORS)
        return ModelOutput(logits=logits)
