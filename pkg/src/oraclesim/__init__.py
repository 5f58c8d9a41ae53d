"""Block-structured simulation of oracle algorithms in the extended K-X-V representation."""

from .hilbert import BlockState, DensityEnsemble, Projector, RegisterLayout
from .families import FunctionFamily, get_family

__all__ = ["BlockState", "DensityEnsemble", "FunctionFamily", "Projector", "RegisterLayout", "get_family"]
