"""Named parameter/buffer storage shared by all architectures."""

from __future__ import annotations

from typing import Iterator

import numpy as np

from .tensor import Tensor


class ParamStore:
    """Ordered map of unique names to (tensor, trainable) entries.

    Trainable entries receive gradients and optimizer updates; buffers
    (normalization statistics) are carried, counted and checkpointed but
    never updated by the optimizer.
    """

    def __init__(self):
        self._entries: dict[str, tuple[Tensor, bool]] = {}

    def add(self, name: str, data: np.ndarray, trainable: bool = True) -> Tensor:
        if name in self._entries:
            raise ValueError(f"duplicate parameter name {name!r}")
        t = Tensor(np.ascontiguousarray(data, dtype=np.float32), requires_grad=trainable)
        self._entries[name] = (t, trainable)
        return t

    def __contains__(self, name: str) -> bool:
        return name in self._entries

    def __len__(self) -> int:
        return len(self._entries)

    def get(self, name: str) -> Tensor:
        return self._entries[name][0]

    def is_trainable(self, name: str) -> bool:
        return self._entries[name][1]

    def items(self) -> Iterator[tuple[str, Tensor, bool]]:
        for name, (t, trainable) in self._entries.items():
            yield name, t, trainable

    def trainable(self) -> Iterator[tuple[str, Tensor]]:
        for name, (t, flag) in self._entries.items():
            if flag:
                yield name, t

    def total_count(self) -> int:
        return sum(t.data.size for t, _ in self._entries.values())

    def trainable_count(self) -> int:
        return sum(t.data.size for t, flag in self._entries.values() if flag)

    def zero_grad(self) -> None:
        for t, flag in self._entries.values():
            t.grad = None

    def clone_data(self) -> dict[str, np.ndarray]:
        return {name: t.data.copy() for name, (t, _) in self._entries.items()}

    def load_data(self, blob: dict[str, np.ndarray]) -> None:
        for name, arr in blob.items():
            t = self.get(name)
            if t.data.shape != arr.shape:
                raise ValueError(f"shape mismatch for {name}: {t.data.shape} vs {arr.shape}")
            t.data[...] = arr
