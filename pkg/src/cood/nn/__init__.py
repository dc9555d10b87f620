"""Differentiable operation set, parameter storage, optimizer, grad checks."""

from .tensor import (
    Tensor,
    no_grad,
    grad_enabled,
    add,
    mul,
    exp,
    log,
    clamp_min,
    relu,
    tanh,
    gelu,
    reshape,
    transpose,
    getitem,
    concat,
    broadcast_to,
    reduce_sum,
    reduce_mean,
    matmul,
    einsum2,
    embedding,
    softmax,
    layer_norm,
    batch_norm,
    cross_entropy_grid,
    conv2d,
    conv_transpose2d,
)
from .params import ParamStore
from .optim import Adam, AdamState, adam_step, DEFAULT_LR, DEFAULT_BETAS, DEFAULT_EPS
from .gradcheck import GradReport, grad_check, REL_TOLERANCE, DEFAULT_STEP
from .checkpoint import (
    CheckpointError,
    decode_text,
    encode_text,
    load_params,
    restore_into,
    save_params,
    MAGIC,
    TEXT_META_PREFIX,
)
from . import layers

__all__ = [
    "Tensor", "no_grad", "grad_enabled",
    "add", "mul", "exp", "log", "clamp_min", "relu", "tanh", "gelu",
    "reshape", "transpose", "getitem", "concat", "broadcast_to", "reduce_sum", "reduce_mean",
    "matmul", "einsum2", "embedding", "softmax", "layer_norm", "batch_norm",
    "cross_entropy_grid", "conv2d", "conv_transpose2d",
    "ParamStore", "Adam", "AdamState", "adam_step",
    "DEFAULT_LR", "DEFAULT_BETAS", "DEFAULT_EPS",
    "GradReport", "grad_check", "REL_TOLERANCE", "DEFAULT_STEP",
    "CheckpointError", "decode_text", "encode_text", "load_params",
    "restore_into", "save_params", "MAGIC", "TEXT_META_PREFIX",
    "layers",
]
