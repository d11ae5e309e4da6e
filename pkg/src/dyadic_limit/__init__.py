"""Tree-tensor-network representations of Thompson's group T and their
continuity diagnostics."""

__version__ = "0.1.0"

from .dyadic import DyadicPartition, DyadicRational, StandardDyadicInterval
from .linalg import Isometry, Tolerances, haar_isometry
from .thompson import ThompsonElement, rotation
from .ttn import ScaleState

__all__ = [
    "DyadicPartition",
    "DyadicRational",
    "Isometry",
    "ScaleState",
    "StandardDyadicInterval",
    "ThompsonElement",
    "Tolerances",
    "haar_isometry",
    "rotation",
]
