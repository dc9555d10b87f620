"""Neural layers over the autodiff engine.

Layers register their parameters in a ParamStore under hierarchical names
at construction and are plain callables afterwards. Initialization:
fan-in-scaled uniform for dense/conv kernels, 0.02-scale normal for
embeddings, and a near-zero spatial projection with unit gate bias inside
the spatial gating unit so gMLP blocks start close to identity.
"""

from __future__ import annotations

import numpy as np

from . import tensor as T
from .params import ParamStore
from .tensor import Tensor


def uniform_fan_in(rng: np.random.Generator, fan_in: int, shape) -> np.ndarray:
    bound = 1.0 / np.sqrt(max(fan_in, 1))
    return rng.uniform(-bound, bound, size=shape).astype(np.float32)


class Mode:
    """Shared train/eval switch for layers with batch statistics."""

    def __init__(self):
        self.training = True


class Linear:
    def __init__(self, store: ParamStore, name: str, d_in: int, d_out: int,
                 rng: np.random.Generator):
        self.w = store.add(f"{name}.w", uniform_fan_in(rng, d_in, (d_in, d_out)))
        self.b = store.add(f"{name}.b", np.zeros(d_out, dtype=np.float32))
        self.d_in, self.d_out = d_in, d_out

    def __call__(self, x: Tensor) -> Tensor:
        # Flatten leading dims so both matmul directions are single GEMMs.
        if x.data.ndim == 2:
            return (x @ self.w) + self.b
        lead = x.shape[:-1]
        flat = x.reshape(-1, self.d_in)
        out = (flat @ self.w) + self.b
        return out.reshape(*lead, self.d_out)


class Embedding:
    def __init__(self, store: ParamStore, name: str, vocab: int, dim: int,
                 rng: np.random.Generator):
        self.table = store.add(
            f"{name}.table", (rng.normal(0.0, 0.02, size=(vocab, dim))).astype(np.float32)
        )

    def __call__(self, idx: np.ndarray) -> Tensor:
        return T.embedding(self.table, idx)


class LayerNorm:
    def __init__(self, store: ParamStore, name: str, dim: int):
        self.gamma = store.add(f"{name}.gamma", np.ones(dim, dtype=np.float32))
        self.beta = store.add(f"{name}.beta", np.zeros(dim, dtype=np.float32))

    def __call__(self, x: Tensor) -> Tensor:
        return T.layer_norm(x, self.gamma, self.beta)


class BatchNorm:
    """Batch normalization over all leading axes; stats per trailing channel."""

    def __init__(self, store: ParamStore, name: str, dim: int, mode: Mode,
                 momentum: float = 0.1):
        self.gamma = store.add(f"{name}.gamma", np.ones(dim, dtype=np.float32))
        self.beta = store.add(f"{name}.beta", np.zeros(dim, dtype=np.float32))
        self.running_mean = store.add(
            f"{name}.running_mean", np.zeros(dim, dtype=np.float32), trainable=False
        )
        self.running_var = store.add(
            f"{name}.running_var", np.ones(dim, dtype=np.float32), trainable=False
        )
        self.mode = mode
        self.momentum = momentum

    def __call__(self, x: Tensor) -> Tensor:
        return T.batch_norm(
            x, self.gamma, self.beta,
            self.running_mean.data, self.running_var.data,
            training=self.mode.training, momentum=self.momentum,
        )


class Conv2d:
    def __init__(self, store: ParamStore, name: str, c_in: int, c_out: int,
                 k: int, stride: int, pad: int, rng: np.random.Generator):
        fan_in = k * k * c_in
        self.w = store.add(f"{name}.w", uniform_fan_in(rng, fan_in, (k, k, c_in, c_out)))
        self.b = store.add(f"{name}.b", np.zeros(c_out, dtype=np.float32))
        self.stride, self.pad = stride, pad

    def __call__(self, x: Tensor) -> Tensor:
        return T.conv2d(x, self.w, self.b, stride=self.stride, pad=self.pad)


class ConvTranspose2d:
    def __init__(self, store: ParamStore, name: str, c_in: int, c_out: int,
                 k: int, stride: int, pad: int, out_pad: int, rng: np.random.Generator):
        fan_in = k * k * c_in
        self.w = store.add(f"{name}.w", uniform_fan_in(rng, fan_in, (k, k, c_in, c_out)))
        self.b = store.add(f"{name}.b", np.zeros(c_out, dtype=np.float32))
        self.stride, self.pad, self.out_pad = stride, pad, out_pad

    def __call__(self, x: Tensor) -> Tensor:
        return T.conv_transpose2d(
            x, self.w, self.b, stride=self.stride, pad=self.pad, out_pad=self.out_pad
        )


def spatial_gating_forward(x: Tensor, norm_gamma: Tensor, norm_beta: Tensor,
                           proj_w: Tensor, proj_b: Tensor) -> Tensor:
    """Split channels, normalize and project one half along tokens, gate.

    x: (..., tokens, channels) with an even channel count. The projection
    mixes information across the token axis only; with proj_w == 0 and
    proj_b == 1 the gate is identically one and the output equals the
    un-gated half.
    """
    channels = x.shape[-1]
    if channels % 2:
        raise ValueError(f"spatial gating needs an even channel count, got {channels}")
    half = channels // 2
    u = x[..., :half]
    v = x[..., half:]
    v = T.layer_norm(v, norm_gamma, norm_beta)
    # Project along the token axis; explicit batch index keeps every
    # direction of the contraction on a single BLAS call.
    if v.data.ndim == 2:
        vt = T.einsum2("st,tc->sc", proj_w, v)
    else:
        vt = T.einsum2("st,btc->bsc", proj_w, v)
    v = vt + proj_b.reshape((-1, 1))
    return T.mul(u, v)


class SpatialGatingUnit:
    def __init__(self, store: ParamStore, name: str, tokens: int, half_dim: int,
                 rng: np.random.Generator):
        self.norm = LayerNorm(store, f"{name}.norm", half_dim)
        init = rng.uniform(-1e-3, 1e-3, size=(tokens, tokens)).astype(np.float32)
        self.proj_w = store.add(f"{name}.proj_w", init)
        self.proj_b = store.add(f"{name}.proj_b", np.ones(tokens, dtype=np.float32))

    def __call__(self, x: Tensor) -> Tensor:
        return spatial_gating_forward(
            x, self.norm.gamma, self.norm.beta, self.proj_w, self.proj_b
        )


class GMLPBlock:
    """norm -> channel expand -> gelu -> spatial gate -> channel project, residual."""

    def __init__(self, store: ParamStore, name: str, tokens: int, dim: int,
                 ffn_dim: int, rng: np.random.Generator):
        if ffn_dim % 2:
            raise ValueError("gMLP expansion width must be even")
        self.norm = LayerNorm(store, f"{name}.norm", dim)
        self.proj_in = Linear(store, f"{name}.proj_in", dim, ffn_dim, rng)
        self.sgu = SpatialGatingUnit(store, f"{name}.sgu", tokens, ffn_dim // 2, rng)
        self.proj_out = Linear(store, f"{name}.proj_out", ffn_dim // 2, dim, rng)

    def __call__(self, x: Tensor) -> Tensor:
        y = self.norm(x)
        y = T.gelu(self.proj_in(y))
        y = self.sgu(y)
        y = self.proj_out(y)
        return x + y


def attention(q: Tensor, k: Tensor, v: Tensor, heads: int) -> Tensor:
    """Scaled dot-product attention over (..., tokens, dim) with h heads."""
    *lead, t, d = q.shape
    dh = d // heads
    if dh * heads != d:
        raise ValueError(f"width {d} not divisible by {heads} heads")

    def split(x: Tensor) -> Tensor:
        x = x.reshape(*lead, t, heads, dh)
        n = len(lead)
        return x.transpose(*range(n), n + 1, n, n + 2)  # (..., heads, t, dh)

    qh, kh, vh = split(q), split(k), split(v)
    # Scale q before the big (tokens x tokens) product.
    qh = qh * (1.0 / np.sqrt(dh))
    n = len(lead)
    scores = qh @ kh.transpose(*range(n + 1), n + 2, n + 1)
    w = T.softmax(scores, axis=-1)
    out = w @ vh  # (..., heads, t, dh)
    out = out.transpose(*range(n), n + 1, n, n + 2)  # (..., t, heads, dh)
    return out.reshape(*lead, t, d)


class MultiHeadSelfAttention:
    def __init__(self, store: ParamStore, name: str, dim: int, heads: int,
                 rng: np.random.Generator):
        self.q = Linear(store, f"{name}.q", dim, dim, rng)
        self.k = Linear(store, f"{name}.k", dim, dim, rng)
        self.v = Linear(store, f"{name}.v", dim, dim, rng)
        self.out = Linear(store, f"{name}.out", dim, dim, rng)
        self.heads = heads

    def __call__(self, x: Tensor) -> Tensor:
        return self.out(attention(self.q(x), self.k(x), self.v(x), self.heads))


def axial_attention_forward(x: Tensor, axis: str, mha: MultiHeadSelfAttention) -> Tensor:
    """Self-attention restricted to rows or columns of a (B, H, W, C) grid.

    axis="row": every row attends within itself (tokens are its W columns);
    axis="col": every column attends within itself.
    """
    if axis not in ("row", "col"):
        raise ValueError(f"axis must be 'row' or 'col', got {axis!r}")
    b, h, w, c = x.shape
    if axis == "row":
        flat = x.reshape(b * h, w, c)
        out = mha(flat)
        return out.reshape(b, h, w, c)
    xt = x.transpose(0, 2, 1, 3)  # (B, W, H, C)
    flat = xt.reshape(b * w, h, c)
    out = mha(flat).reshape(b, w, h, c)
    return out.transpose(0, 2, 1, 3)


class AxialAttentionBlock:
    """Pre-norm axial self-attention with a residual connection."""

    def __init__(self, store: ParamStore, name: str, dim: int, heads: int,
                 axis: str, rng: np.random.Generator):
        self.norm = LayerNorm(store, f"{name}.norm", dim)
        self.mha = MultiHeadSelfAttention(store, f"{name}.mha", dim, heads, rng)
        self.axis = axis

    def __call__(self, x: Tensor) -> Tensor:
        return x + axial_attention_forward(self.norm(x), self.axis, self.mha)


class TransformerBlock:
    """Pre-norm encoder block: self-attention then a gelu MLP."""

    def __init__(self, store: ParamStore, name: str, dim: int, heads: int,
                 ffn_dim: int, rng: np.random.Generator):
        self.norm1 = LayerNorm(store, f"{name}.norm1", dim)
        self.mha = MultiHeadSelfAttention(store, f"{name}.mha", dim, heads, rng)
        self.norm2 = LayerNorm(store, f"{name}.norm2", dim)
        self.ff1 = Linear(store, f"{name}.ff1", dim, ffn_dim, rng)
        self.ff2 = Linear(store, f"{name}.ff2", ffn_dim, dim, rng)

    def __call__(self, x: Tensor) -> Tensor:
        x = x + self.mha(self.norm1(x))
        return x + self.ff2(T.gelu(self.ff1(self.norm2(x))))
