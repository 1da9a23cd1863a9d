"""Cell complexes whose cells are cones on suspensions of a fixed core space,
modelled through their reduced cellular chains."""

from .chains import ChainComplex, ChainMap, HomologySummary, homology
from .complexes import (
    AttachedCell,
    CwaPresentation,
    PresentationError,
    cone,
    paste,
    quotient,
    suspend,
    underlying_chain,
    validate,
    wedge,
)
from .core_model import CorePresentation, cone_core, empty_core, sphere_core, suspend_core
from .rewriting import change_core_equivalence, change_core_retract, flatten, layer_order

__all__ = [
    "AttachedCell", "ChainComplex", "ChainMap", "CorePresentation", "CwaPresentation",
    "HomologySummary", "PresentationError", "change_core_equivalence", "change_core_retract",
    "cone", "cone_core", "empty_core", "flatten", "homology", "layer_order", "paste",
    "quotient", "sphere_core", "suspend", "suspend_core", "underlying_chain", "validate", "wedge",
]
