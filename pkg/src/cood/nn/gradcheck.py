"""Central-difference verification of analytic gradients.

Functions under test are rebuilt in float64 (the engine propagates leaf
dtypes) so finite-difference noise stays far below the acceptance
threshold; the step size stays at the contractual 1e-3.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .tensor import Tensor, no_grad

REL_TOLERANCE = 1e-2
DEFAULT_STEP = 1e-3
_DENOM_FLOOR = 1e-6


@dataclass
class GradReport:
    per_param: dict[str, float]
    overall: float

    def passed(self, tol: float = REL_TOLERANCE) -> bool:
        return self.overall < tol


def grad_check(
    fn: Callable[[dict[str, Tensor]], Tensor],
    leaves: dict[str, np.ndarray],
    h: float = DEFAULT_STEP,
    sample_per_leaf: int | None = None,
    rng: np.random.Generator | None = None,
) -> GradReport:
    """Compare analytic gradients of a scalar-valued fn to central differences.

    leaves maps names to arrays; fn receives float64 Tensor leaves and must
    return a scalar Tensor. sample_per_leaf limits the finite-difference
    probes per leaf to a random subset (all elements when None).
    """
    rng = rng or np.random.default_rng(0)
    tensors = {
        name: arr if isinstance(arr, Tensor)
        else Tensor(np.asarray(arr, dtype=np.float64), requires_grad=True)
        for name, arr in leaves.items()
    }
    for t in tensors.values():
        t.grad = None
    out = fn(tensors)
    if out.data.size != 1:
        raise ValueError("grad_check expects a scalar-valued function")
    if not np.isfinite(out.data).all():
        raise FloatingPointError("non-finite forward value at the check point")
    out.backward()

    def eval_at() -> float:
        with no_grad():
            return float(fn(tensors).data)

    per_param: dict[str, float] = {}
    for name, t in tensors.items():
        analytic = t.grad if t.grad is not None else np.zeros_like(t.data)
        if not np.isfinite(analytic).all():
            raise FloatingPointError(f"non-finite analytic gradient for {name}")
        n = t.data.size
        if sample_per_leaf is None or sample_per_leaf >= n:
            idxs = np.arange(n)
        else:
            idxs = rng.choice(n, size=sample_per_leaf, replace=False)
        worst = 0.0
        aflat = np.asarray(analytic).reshape(-1)
        for i in idxs:
            mi = np.unravel_index(i, t.data.shape)
            orig = t.data[mi]
            t.data[mi] = orig + h
            f_plus = eval_at()
            t.data[mi] = orig - h
            f_minus = eval_at()
            t.data[mi] = orig
            numeric = (f_plus - f_minus) / (2.0 * h)
            denom = max(abs(aflat[i]), abs(numeric), _DENOM_FLOOR)
            worst = max(worst, abs(aflat[i] - numeric) / denom)
        per_param[name] = worst
    overall = max(per_param.values()) if per_param else 0.0
    return GradReport(per_param=per_param, overall=overall)
