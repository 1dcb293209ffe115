"""Python bindings for the revdft reversible-circuit DFT toolkit."""

from ._core import (
    Circuit,
    dpe,
    grade,
    gts,
    quantum_cost,
    self_check,
    transform,
)

__all__ = [
    "Circuit",
    "dpe",
    "grade",
    "gts",
    "quantum_cost",
    "self_check",
    "transform",
]
