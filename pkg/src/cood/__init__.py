"""cood: concept-graph OOD benchmark for ARC-like grid worlds.

Generates the Translate/Rotate world-model datasets, trains five
architectures (MLP, CNN, Transformer, APN, APLN) on them, and reproduces
exact-match learning curves, error galleries and pointer-copy maps.
"""

__version__ = "0.1.0"
