"""Reverse-mode automatic differentiation over numpy arrays.

A Tensor wraps an ndarray and records a backward closure per operation;
`backward()` on a scalar walks the graph in reverse topological order.
The operation set is exactly what the five benchmark architectures need:
dense/conv algebra, attention primitives, normalization, the fused
per-pixel cross entropy, and a two-operand einsum for pointer mixtures.
All math is float32 unless a caller builds float64 leaves (gradient
checks shadow in 64-bit).
"""

from __future__ import annotations

import contextlib
from typing import Callable, Iterable

import numpy as np

_GRAD_ENABLED = True


@contextlib.contextmanager
def no_grad():
    """Disable graph construction (evaluation / finite differences)."""
    global _GRAD_ENABLED
    prev = _GRAD_ENABLED
    _GRAD_ENABLED = False
    try:
        yield
    finally:
        _GRAD_ENABLED = prev


def grad_enabled() -> bool:
    return _GRAD_ENABLED


class Tensor:
    __slots__ = ("data", "grad", "requires_grad", "_parents", "_backward", "_grad_aliased")

    def __init__(
        self,
        data,
        requires_grad: bool = False,
        _parents: tuple = (),
        _backward: Callable[[np.ndarray], None] | None = None,
    ):
        if isinstance(data, Tensor):
            data = data.data
        arr = np.asarray(data)
        if arr.dtype not in (np.float32, np.float64):
            arr = arr.astype(np.float32)
        self.data = arr
        self.grad: np.ndarray | None = None
        self._grad_aliased = False
        self.requires_grad = requires_grad and _GRAD_ENABLED
        self._parents = _parents if self.requires_grad else ()
        self._backward = _backward if self.requires_grad else None

    # -- graph ------------------------------------------------------------

    @property
    def shape(self) -> tuple[int, ...]:
        return self.data.shape

    @property
    def dtype(self):
        return self.data.dtype

    def backward(self) -> None:
        """Reverse pass from a scalar node, accumulating `.grad` everywhere."""
        if self.data.size != 1:
            raise ValueError("backward() expects a scalar loss")
        topo: list[Tensor] = []
        visited: set[int] = set()
        stack: list[tuple[Tensor, bool]] = [(self, False)]
        while stack:
            node, processed = stack.pop()
            if processed:
                topo.append(node)
                continue
            if id(node) in visited:
                continue
            visited.add(id(node))
            stack.append((node, True))
            for p in node._parents:
                if p.requires_grad and id(p) not in visited:
                    stack.append((p, False))
        self.grad = np.ones_like(self.data)
        for node in reversed(topo):
            if node._backward is not None and node.grad is not None:
                node._backward(node.grad)

    def zero_grad(self) -> None:
        self.grad = None

    def _accumulate(self, g: np.ndarray) -> None:
        # First store keeps a reference (g may alias another node's buffer,
        # so an aliased grad is never mutated in place).
        if self.grad is None:
            self.grad = g
            self._grad_aliased = True
        elif self._grad_aliased:
            self.grad = self.grad + g
            self._grad_aliased = False
        else:
            self.grad += g

    def _owned_grad(self) -> np.ndarray:
        """Writable gradient buffer for scatter-style backward passes."""
        if self.grad is None:
            self.grad = np.zeros_like(self.data)
            self._grad_aliased = False
        elif self._grad_aliased:
            self.grad = np.array(self.grad)
            self._grad_aliased = False
        return self.grad

    # -- construction helpers ----------------------------------------------

    @staticmethod
    def of(other, like: "Tensor") -> "Tensor":
        if isinstance(other, Tensor):
            return other
        return Tensor(np.asarray(other, dtype=like.dtype))

    def detach(self) -> "Tensor":
        return Tensor(self.data)

    def item(self) -> float:
        return float(self.data)

    def __repr__(self) -> str:
        return f"Tensor(shape={self.shape}, dtype={self.data.dtype}, grad={self.requires_grad})"

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        return add(self, Tensor.of(other, self))

    __radd__ = __add__

    def __mul__(self, other):
        return mul(self, Tensor.of(other, self))

    __rmul__ = __mul__

    def __sub__(self, other):
        return add(self, mul(Tensor.of(other, self), Tensor(np.asarray(-1.0, dtype=self.dtype))))

    def __rsub__(self, other):
        return Tensor.of(other, self) - self

    def __neg__(self):
        return mul(self, Tensor(np.asarray(-1.0, dtype=self.dtype)))

    def __matmul__(self, other):
        return matmul(self, other)

    def __getitem__(self, idx):
        return getitem(self, idx)

    def reshape(self, *shape):
        if len(shape) == 1 and not isinstance(shape[0], int):
            shape = tuple(shape[0])
        return reshape(self, shape)

    def transpose(self, *axes):
        return transpose(self, axes)

    def sum(self, axis=None, keepdims=False):
        return reduce_sum(self, axis, keepdims)

    def mean(self, axis=None, keepdims=False):
        return reduce_mean(self, axis, keepdims)


def _unbroadcast(g: np.ndarray, shape: tuple[int, ...]) -> np.ndarray:
    """Sum a gradient back down to a broadcast operand's shape."""
    if g.shape == shape:
        return g
    extra = g.ndim - len(shape)
    if extra > 0:
        g = g.sum(axis=tuple(range(extra)))
    axes = tuple(i for i, s in enumerate(shape) if s == 1 and g.shape[i] != 1)
    if axes:
        g = g.sum(axis=axes, keepdims=True)
    return g.reshape(shape)


def _make(data: np.ndarray, parents: tuple, backward) -> Tensor:
    req = _GRAD_ENABLED and any(p.requires_grad for p in parents)
    return Tensor(data, requires_grad=req, _parents=parents, _backward=backward if req else None)


# -- elementwise ------------------------------------------------------------


def add(a: Tensor, b: Tensor) -> Tensor:
    out_data = a.data + b.data

    def backward(g):
        if a.requires_grad:
            a._accumulate(_unbroadcast(g, a.shape))
        if b.requires_grad:
            b._accumulate(_unbroadcast(g, b.shape))

    return _make(out_data, (a, b), backward)


def mul(a: Tensor, b: Tensor) -> Tensor:
    out_data = a.data * b.data

    def backward(g):
        if a.requires_grad:
            a._accumulate(_unbroadcast(g * b.data, a.shape))
        if b.requires_grad:
            b._accumulate(_unbroadcast(g * a.data, b.shape))

    return _make(out_data, (a, b), backward)


def exp(a: Tensor) -> Tensor:
    out_data = np.exp(a.data)

    def backward(g):
        a._accumulate(g * out_data)

    return _make(out_data, (a,), backward)


def log(a: Tensor) -> Tensor:
    out_data = np.log(a.data)

    def backward(g):
        a._accumulate(g / a.data)

    return _make(out_data, (a,), backward)


def clamp_min(a: Tensor, lo: float) -> Tensor:
    out_data = np.maximum(a.data, np.asarray(lo, dtype=a.dtype))
    mask = a.data > lo

    def backward(g):
        a._accumulate(g * mask)

    return _make(out_data, (a,), backward)


def relu(a: Tensor) -> Tensor:
    out_data = np.maximum(a.data, 0)

    def backward(g):
        a._accumulate(g * (a.data > 0))

    return _make(out_data, (a,), backward)


def tanh(a: Tensor) -> Tensor:
    out_data = np.tanh(a.data)

    def backward(g):
        a._accumulate(g * (1.0 - out_data * out_data))

    return _make(out_data, (a,), backward)


_GELU_K = 1.702  # sigmoid-form gelu: x * sigmoid(1.702 x)


def gelu(a: Tensor) -> Tensor:
    x = a.data
    s = 1.0 / (1.0 + np.exp(np.clip(-_GELU_K * x, -60.0, 60.0)))
    out_data = x * s

    def backward(g):
        da = s * (1.0 + _GELU_K * x * (1.0 - s))
        da *= g
        a._accumulate(da)

    return _make(out_data, (a,), backward)


# -- shape ops ----------------------------------------------------------------


def reshape(a: Tensor, shape) -> Tensor:
    out_data = a.data.reshape(shape)

    def backward(g):
        a._accumulate(g.reshape(a.shape))

    return _make(out_data, (a,), backward)


def transpose(a: Tensor, axes: tuple[int, ...]) -> Tensor:
    out_data = np.transpose(a.data, axes)
    inv = np.argsort(axes)

    def backward(g):
        a._accumulate(np.transpose(g, inv))

    return _make(out_data, (a,), backward)


def getitem(a: Tensor, idx) -> Tensor:
    out_data = a.data[idx]

    def backward(g):
        a._owned_grad()[idx] += g

    return _make(np.ascontiguousarray(out_data), (a,), backward)


def concat(tensors: Iterable[Tensor], axis: int) -> Tensor:
    tensors = list(tensors)
    out_data = np.concatenate([t.data for t in tensors], axis=axis)
    sizes = [t.data.shape[axis] for t in tensors]
    offsets = np.cumsum([0] + sizes)

    def backward(g):
        for t, lo, hi in zip(tensors, offsets[:-1], offsets[1:]):
            if t.requires_grad:
                sl = [slice(None)] * g.ndim
                sl[axis] = slice(lo, hi)
                t._accumulate(g[tuple(sl)])

    return _make(out_data, tuple(tensors), backward)


def broadcast_to(a: Tensor, shape: tuple[int, ...]) -> Tensor:
    out_data = np.broadcast_to(a.data, shape)

    def backward(g):
        a._accumulate(_unbroadcast(g, a.shape))

    return _make(out_data, (a,), backward)


def reduce_sum(a: Tensor, axis=None, keepdims=False) -> Tensor:
    out_data = a.data.sum(axis=axis, keepdims=keepdims)

    def backward(g):
        gg = g
        if not keepdims and axis is not None:
            gg = np.expand_dims(g, axis)
        a._accumulate(np.broadcast_to(gg, a.shape).astype(a.dtype, copy=False))

    return _make(out_data, (a,), backward)


def reduce_mean(a: Tensor, axis=None, keepdims=False) -> Tensor:
    out_data = a.data.mean(axis=axis, keepdims=keepdims)
    denom = a.data.size if axis is None else np.prod(
        [a.shape[ax] for ax in (axis if isinstance(axis, tuple) else (axis,))]
    )

    def backward(g):
        gg = g
        if not keepdims and axis is not None:
            gg = np.expand_dims(g, axis)
        a._accumulate(
            (np.broadcast_to(gg, a.shape) / denom).astype(a.dtype, copy=False)
        )

    return _make(out_data, (a,), backward)


# -- linear algebra ------------------------------------------------------------


def matmul(a: Tensor, b: Tensor) -> Tensor:
    out_data = a.data @ b.data

    def backward(g):
        if a.requires_grad:
            ga = g @ np.swapaxes(b.data, -1, -2)
            a._accumulate(_unbroadcast(ga, a.shape))
        if b.requires_grad:
            gb = np.swapaxes(a.data, -1, -2) @ g
            b._accumulate(_unbroadcast(gb, b.shape))

    return _make(out_data, (a, b), backward)


def einsum2(subscripts: str, a: Tensor, b: Tensor) -> Tensor:
    """Two-operand einsum with index sets free of in-operand repeats."""
    lhs, out_sub = subscripts.replace(" ", "").split("->")
    sa, sb = lhs.split(",")
    for sub in (sa.replace(".", ""), sb.replace(".", "")):
        if len(set(sub)) != len(sub):
            raise ValueError("einsum2 does not support repeated indices in one operand")
    out_data = np.einsum(subscripts, a.data, b.data, optimize=True)

    def grad_operand(target_sub: str, spec_lhs: str, x, y, ndim: int):
        # Ellipsis dims broadcast in numpy einsum and are never summed, so
        # route them to the front of the output and reduce explicitly.
        if "..." not in target_sub:
            tmp = np.einsum(f"{spec_lhs}->...{target_sub}", x, y, optimize=True)
            if tmp.ndim > ndim:
                tmp = tmp.sum(axis=tuple(range(tmp.ndim - ndim)))
            return tmp
        return np.einsum(f"{spec_lhs}->{target_sub}", x, y, optimize=True)

    def backward(g):
        if a.requires_grad:
            a._accumulate(grad_operand(sa, f"{out_sub},{sb}", g, b.data, a.data.ndim))
        if b.requires_grad:
            b._accumulate(grad_operand(sb, f"{sa},{out_sub}", a.data, g, b.data.ndim))

    return _make(out_data, (a, b), backward)


def embedding(table: Tensor, idx: np.ndarray) -> Tensor:
    idx = np.asarray(idx)
    out_data = table.data[idx]

    def backward(g):
        np.add.at(table._owned_grad(), idx, g)

    return _make(out_data, (table,), backward)


# -- fused neural ops ---------------------------------------------------------


def softmax(a: Tensor, axis: int = -1) -> Tensor:
    z = a.data - a.data.max(axis=axis, keepdims=True)
    np.exp(z, out=z)
    z /= z.sum(axis=axis, keepdims=True)
    out_data = z

    def backward(g):
        dx = g * out_data
        dx -= out_data * dx.sum(axis=axis, keepdims=True)
        a._accumulate(dx)

    return _make(out_data, (a,), backward)


def layer_norm(x: Tensor, gamma: Tensor, beta: Tensor, eps: float = 1e-5) -> Tensor:
    """Normalize over the trailing feature axis."""
    mu = x.data.mean(axis=-1, keepdims=True)
    xc = x.data - mu
    var = (xc * xc).mean(axis=-1, keepdims=True)
    ivar = 1.0 / np.sqrt(var + eps)
    xhat = xc * ivar
    out_data = xhat * gamma.data + beta.data
    n = x.shape[-1]

    def backward(g):
        if gamma.requires_grad:
            axes = tuple(range(g.ndim - 1))
            gamma._accumulate((g * xhat).sum(axis=axes))
        if beta.requires_grad:
            axes = tuple(range(g.ndim - 1))
            beta._accumulate(g.sum(axis=axes))
        if x.requires_grad:
            gh = g * gamma.data
            dx = ivar * (
                gh
                - gh.mean(axis=-1, keepdims=True)
                - xhat * (gh * xhat).mean(axis=-1, keepdims=True)
            )
            x._accumulate(dx.astype(x.dtype, copy=False))

    return _make(out_data.astype(x.dtype, copy=False), (x, gamma, beta), backward)


def batch_norm(
    x: Tensor,
    gamma: Tensor,
    beta: Tensor,
    running_mean: np.ndarray,
    running_var: np.ndarray,
    training: bool,
    momentum: float = 0.1,
    eps: float = 1e-5,
) -> Tensor:
    """Normalize over all leading axes, per trailing channel.

    Running statistics are plain arrays mutated in place during training;
    they live in the ParamStore as non-trainable entries.
    """
    axes = tuple(range(x.data.ndim - 1))
    if training:
        mu = x.data.mean(axis=axes)
        xc = x.data - mu
        var = (xc * xc).mean(axis=axes)
        running_mean *= 1.0 - momentum
        running_mean += momentum * mu
        running_var *= 1.0 - momentum
        running_var += momentum * var
    else:
        mu = running_mean.astype(x.dtype, copy=False)
        var = running_var.astype(x.dtype, copy=False)
        xc = x.data - mu
    ivar = 1.0 / np.sqrt(var + eps)
    xhat = xc * ivar
    out_data = xhat * gamma.data + beta.data
    n = int(np.prod([x.shape[ax] for ax in axes])) if axes else 1

    def backward(g):
        if gamma.requires_grad:
            gamma._accumulate((g * xhat).sum(axis=axes))
        if beta.requires_grad:
            beta._accumulate(g.sum(axis=axes))
        if x.requires_grad:
            gh = g * gamma.data
            if training:
                dx = ivar * (
                    gh
                    - gh.mean(axis=axes)
                    - xhat * (gh * xhat).mean(axis=axes)
                )
            else:
                dx = gh * ivar
            x._accumulate(dx.astype(x.dtype, copy=False))

    return _make(out_data.astype(x.dtype, copy=False), (x, gamma, beta), backward)


def cross_entropy_grid(logits: Tensor, target: np.ndarray) -> Tensor:
    """Mean per-pixel 4-way cross entropy.

    logits: (..., G, G, C); target: int array (..., G, G) of color codes.
    Returns a scalar Tensor, the mean over every pixel of every sample.
    """
    target = np.asarray(target)
    if logits.shape[:-1] != target.shape:
        raise ValueError(
            f"logit grid {logits.shape[:-1]} does not match target {target.shape}"
        )
    z = logits.data - logits.data.max(axis=-1, keepdims=True)
    lse = np.log(np.exp(z).sum(axis=-1, keepdims=True))
    logp = z - lse
    flat_logp = logp.reshape(-1, logits.shape[-1])
    flat_t = target.reshape(-1)
    n = flat_t.size
    picked = flat_logp[np.arange(n), flat_t]
    loss = -picked.mean(dtype=np.float64)
    out_data = np.asarray(loss, dtype=logits.dtype)

    def backward(g):
        p = np.exp(logp)
        flat_p = p.reshape(-1, logits.shape[-1])
        flat_p[np.arange(n), flat_t] -= 1.0
        grad = (flat_p.reshape(logits.shape) * (g / n)).astype(logits.dtype, copy=False)
        logits._accumulate(grad)

    return _make(out_data, (logits,), backward)


# -- convolution ---------------------------------------------------------------


def conv2d(x: Tensor, w: Tensor, b: Tensor, stride: int = 1, pad: int = 0) -> Tensor:
    """NHWC convolution with a (k, k, Cin, Cout) kernel."""
    B, H, W, Cin = x.shape
    k = w.shape[0]
    Ho = (H + 2 * pad - k) // stride + 1
    Wo = (W + 2 * pad - k) // stride + 1
    xp = np.pad(x.data, ((0, 0), (pad, pad), (pad, pad), (0, 0))) if pad else x.data
    out_data = np.zeros((B, Ho, Wo, w.shape[3]), dtype=x.dtype)
    slices = []
    for dy in range(k):
        for dx in range(k):
            xs = xp[:, dy:dy + stride * Ho:stride, dx:dx + stride * Wo:stride, :]
            slices.append(xs)
            out_data += xs @ w.data[dy, dx]
    out_data += b.data

    def backward(g):
        if b.requires_grad:
            b._accumulate(g.sum(axis=(0, 1, 2)))
        if w.requires_grad:
            gw = np.empty_like(w.data)
            gflat = g.reshape(-1, g.shape[-1])
            for i, (dy, dx) in enumerate((dy, dx) for dy in range(k) for dx in range(k)):
                gw[dy, dx] = slices[i].reshape(-1, Cin).T @ gflat
            w._accumulate(gw)
        if x.requires_grad:
            gxp = np.zeros_like(xp)
            for dy in range(k):
                for dx in range(k):
                    gxp[:, dy:dy + stride * Ho:stride, dx:dx + stride * Wo:stride, :] += (
                        g @ w.data[dy, dx].T
                    )
            gx = gxp[:, pad:pad + H, pad:pad + W, :] if pad else gxp
            x._accumulate(gx)

    return _make(out_data, (x, w, b), backward)


def conv_transpose2d(
    x: Tensor, w: Tensor, b: Tensor, stride: int = 2, pad: int = 1, out_pad: int = 1
) -> Tensor:
    """NHWC transposed convolution, the adjoint of conv2d.

    Kernel is (k, k, Cin, Cout); output extent is (H-1)*stride - 2*pad + k
    + out_pad per axis (2x upsampling at k=3, stride=2, pad=1, out_pad=1).
    Requires out_pad <= pad so the scatter buffer covers the crop.
    """
    B, H, W, Cin = x.shape
    k = w.shape[0]
    if out_pad > pad:
        raise ValueError("out_pad must not exceed pad")
    Ho = (H - 1) * stride - 2 * pad + k + out_pad
    Wo = (W - 1) * stride - 2 * pad + k + out_pad
    buf = np.zeros((B, (H - 1) * stride + k, (W - 1) * stride + k, w.shape[3]), dtype=x.dtype)
    for dy in range(k):
        for dx in range(k):
            buf[:, dy:dy + stride * H:stride, dx:dx + stride * W:stride, :] += (
                x.data @ w.data[dy, dx]
            )
    out_data = buf[:, pad:pad + Ho, pad:pad + Wo, :] + b.data

    def backward(g):
        if b.requires_grad:
            b._accumulate(g.sum(axis=(0, 1, 2)))
        gbuf = np.zeros(buf.shape, dtype=g.dtype)
        gbuf[:, pad:pad + Ho, pad:pad + Wo, :] = g
        if w.requires_grad:
            gw = np.empty_like(w.data)
            xflat = x.data.reshape(-1, Cin)
            for dy in range(k):
                for dx in range(k):
                    gs = gbuf[:, dy:dy + stride * H:stride, dx:dx + stride * W:stride, :]
                    gw[dy, dx] = xflat.T @ gs.reshape(-1, gs.shape[-1])
            w._accumulate(gw)
        if x.requires_grad:
            gx = np.zeros_like(x.data)
            for dy in range(k):
                for dx in range(k):
                    gs = gbuf[:, dy:dy + stride * H:stride, dx:dx + stride * W:stride, :]
                    gx += gs @ w.data[dy, dx].T
            x._accumulate(gx)

    return _make(out_data, (x, w, b), backward)
