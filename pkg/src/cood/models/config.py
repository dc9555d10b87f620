"""Model kinds, width configurations and named presets.

Preset widths at grid 32 are tuned so total parameter counts land within
10% of the published budgets (MLP 6.17M, CNN 4.47M, Transformer 4.66M,
APN 4.48M, APLN 4.45M for the ~4M tier); the 20M/80M tiers keep the
stated final-hidden sizes and scale the trunk. The desk preset is sized
for CPU runs at grid 16 or 32.
"""

from __future__ import annotations

from dataclasses import dataclass, replace, asdict
from enum import Enum


class ModelKind(Enum):
    MLP = "mlp"
    CNN = "cnn"
    TRANSFORMER = "transformer"
    APN = "apn"
    APLN = "apln"


POINTER_KINDS = (ModelKind.APN, ModelKind.APLN)


@dataclass(frozen=True)
class ModelConfig:
    kind: ModelKind
    grid: int = 32
    preset: str = "custom"
    action_dim: int = 32
    # MLP
    mlp_hidden: int = 648
    # CNN: encoder channel ladder plus the two merge dense widths
    cnn_channels: tuple[int, ...] = (32, 64, 128, 256)
    cnn_dense: tuple[int, int] = (1152, 2048)
    # Transformer
    tf_dim: int = 312
    tf_heads: int = 8
    tf_blocks: int = 4
    # Axial pointer trunk
    ap_dim: int = 384
    ap_ffn: int = 768
    ap_heads: int = 4
    final_mlp_hidden: int = 32

    def validate(self) -> None:
        widths = [
            self.action_dim, self.mlp_hidden, self.tf_dim, self.tf_heads,
            self.tf_blocks, self.ap_dim, self.ap_ffn, self.ap_heads,
            self.final_mlp_hidden, *self.cnn_channels, *self.cnn_dense,
        ]
        if any(w <= 0 for w in widths):
            raise ValueError("all configured widths must be positive")
        if self.grid < 4:
            raise ValueError(f"grid {self.grid} too small")
        if self.kind is ModelKind.TRANSFORMER and self.tf_dim % self.tf_heads:
            raise ValueError("transformer width must divide evenly into heads")
        if self.kind in POINTER_KINDS:
            if self.ap_ffn % 2:
                raise ValueError("pointer trunk expansion width must be even")
            if self.ap_dim % self.ap_heads:
                raise ValueError("pointer trunk width must divide evenly into heads")
        if self.kind is ModelKind.CNN:
            if self.grid & (self.grid - 1) or self.grid < 8:
                raise ValueError("CNN needs a power-of-two grid of at least 8")
            if self.cnn_dense[1] % 4:
                raise ValueError("second CNN merge width must be divisible by 4")

    def cnn_stages(self) -> int:
        # Downsample to a 2x2 bottleneck, at most four halvings.
        g, stages = self.grid, 0
        while g > 2 and stages < 4:
            g //= 2
            stages += 1
        return stages

    def describe(self) -> dict:
        d = asdict(self)
        d["kind"] = self.kind.value
        return d


_PAPER_4M = {
    ModelKind.MLP: dict(mlp_hidden=648),
    ModelKind.CNN: dict(cnn_channels=(32, 64, 128, 256), cnn_dense=(1152, 2048)),
    ModelKind.TRANSFORMER: dict(tf_dim=312, tf_heads=8),
    ModelKind.APN: dict(ap_dim=384, ap_ffn=768, action_dim=64, final_mlp_hidden=32),
    ModelKind.APLN: dict(ap_dim=384, ap_ffn=768, action_dim=64, final_mlp_hidden=256),
}

_PAPER_20M = {
    ModelKind.APN: dict(ap_dim=1120, ap_ffn=2240, action_dim=64, final_mlp_hidden=256),
    ModelKind.APLN: dict(ap_dim=1024, ap_ffn=2048, action_dim=64, final_mlp_hidden=1024),
}

_PAPER_80M = {
    ModelKind.APN: dict(ap_dim=2304, ap_ffn=4608, action_dim=64, final_mlp_hidden=1024),
    ModelKind.APLN: dict(ap_dim=2240, ap_ffn=4480, action_dim=64, final_mlp_hidden=2560),
}

_DESK = {
    ModelKind.MLP: dict(mlp_hidden=320),
    ModelKind.CNN: dict(cnn_channels=(24, 48, 96, 192), cnn_dense=(256, 384)),
    ModelKind.TRANSFORMER: dict(tf_dim=64, tf_heads=2),
    ModelKind.APN: dict(ap_dim=96, ap_ffn=192, ap_heads=2, action_dim=32, final_mlp_hidden=64),
    ModelKind.APLN: dict(ap_dim=96, ap_ffn=192, ap_heads=2, action_dim=32, final_mlp_hidden=256),
}

_PRESETS: dict[str, dict[ModelKind, dict]] = {
    "paper-4M": _PAPER_4M,
    "paper-20M": _PAPER_20M,
    "paper-80M": _PAPER_80M,
    "desk": _DESK,
}

PRESET_NAMES = tuple(_PRESETS)


def preset_config(kind: ModelKind, preset: str, grid: int | None = None) -> ModelConfig:
    """Look up a named preset; paper presets assume grid 32."""
    if preset not in _PRESETS:
        raise ValueError(f"unknown preset {preset!r}; choose from {PRESET_NAMES}")
    table = _PRESETS[preset]
    if kind not in table:
        raise ValueError(f"preset {preset!r} is not defined for {kind.value}")
    if grid is None:
        grid = 16 if preset == "desk" else 32
    cfg = ModelConfig(kind=kind, grid=grid, preset=preset, **table[kind])
    cfg.validate()
    return cfg


def config_to_text(cfg: ModelConfig) -> str:
    lines = []
    for key, value in cfg.describe().items():
        if isinstance(value, tuple):
            value = ",".join(str(v) for v in value)
        lines.append(f"{key}={value}")
    return "\n".join(lines) + "\n"


def config_from_text(text: str) -> ModelConfig:
    fields: dict = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, _, raw = line.partition("=")
        key = key.strip()
        raw = raw.strip()
        if key == "kind":
            fields["kind"] = ModelKind(raw)
        elif key == "preset":
            fields["preset"] = raw
        elif key in ("cnn_channels", "cnn_dense"):
            fields[key] = tuple(int(v) for v in raw.split(",") if v)
        else:
            fields[key] = int(raw)
    cfg = ModelConfig(**fields)
    cfg.validate()
    return cfg
