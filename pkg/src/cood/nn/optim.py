"""Adam with bias-corrected moment estimates."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .params import ParamStore

DEFAULT_LR = 1e-3
DEFAULT_BETAS = (0.9, 0.999)
DEFAULT_EPS = 1e-8


@dataclass
class AdamState:
    lr: float = DEFAULT_LR
    beta1: float = DEFAULT_BETAS[0]
    beta2: float = DEFAULT_BETAS[1]
    eps: float = DEFAULT_EPS
    step: int = 0
    m: dict[str, np.ndarray] = field(default_factory=dict)
    v: dict[str, np.ndarray] = field(default_factory=dict)


def adam_step(store: ParamStore, grads: dict[str, np.ndarray], state: AdamState) -> AdamState:
    """One update over the trainable entries present in `grads` (in place)."""
    state.step += 1
    b1, b2 = state.beta1, state.beta2
    bc1 = 1.0 - b1 ** state.step
    bc2 = 1.0 - b2 ** state.step
    for name, g in grads.items():
        p = store.get(name)
        if p.data.shape != g.shape:
            raise ValueError(f"gradient shape {g.shape} != param shape {p.data.shape} ({name})")
        m = state.m.setdefault(name, np.zeros_like(p.data))
        v = state.v.setdefault(name, np.zeros_like(p.data))
        m *= b1
        m += (1.0 - b1) * g
        v *= b2
        v += (1.0 - b2) * (g * g)
        mhat = m / bc1
        vhat = v / bc2
        p.data -= (state.lr * mhat / (np.sqrt(vhat) + state.eps)).astype(p.data.dtype)
    return state


class Adam:
    """Convenience wrapper reading gradients straight off the store."""

    def __init__(self, store: ParamStore, lr: float = DEFAULT_LR,
                 betas: tuple[float, float] = DEFAULT_BETAS, eps: float = DEFAULT_EPS):
        self.store = store
        self.state = AdamState(lr=lr, beta1=betas[0], beta2=betas[1], eps=eps)

    def step(self) -> None:
        grads = {}
        for name, t in self.store.trainable():
            if t.grad is not None:
                grads[name] = t.grad
        adam_step(self.store, grads, self.state)

    def zero_grad(self) -> None:
        self.store.zero_grad()
