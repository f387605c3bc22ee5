"""Dual density operators for compositional distributional semantics."""

from .density import (DualDensity, Operator, dual_density_from_mixtures,
                      dual_density_from_normal_form, entropies, entropy, graded_entailment,
                      lift_pure, phi1, phi2, swap_sw_ne)
from .lexicon import Lexicon, builtin_beirut, load, save
from .pregroup import PregroupType, ReductionDiagram, parse_type, reduce
from .tensor import Space, Tensor, Wire

__all__ = [
    "DualDensity", "Operator", "dual_density_from_mixtures", "dual_density_from_normal_form",
    "entropies", "entropy", "graded_entailment", "lift_pure", "phi1", "phi2", "swap_sw_ne",
    "Lexicon", "builtin_beirut", "load", "save",
    "PregroupType", "ReductionDiagram", "parse_type", "reduce",
    "Space", "Tensor", "Wire",
]
