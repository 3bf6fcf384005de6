"""Numerical laboratory for convergence sets of formal power series and the
pluripotential quantities that control them."""
from .polynomial import NormedPoly, Polynomial, sup_norm
from .regions import ProjCover, Region, find_avoiding_hyperplane
from .series import ClassifierConfig, SeriesSpec, TermRule, Verdict, classify, hartogs_joint_check
from .pluripotential import (bernstein_constant, capacity, extremal_lower, fekete_search,
                             ghull_member, transfinite_diameter)
from .weights import saddulaev_transform
from .synthesis import (beta_construct, synth_block, synth_enumeration, synth_projective,
                        synth_variety, verify)

__version__ = "0.1.0"

__all__ = [
    "NormedPoly", "Polynomial", "sup_norm", "ProjCover", "Region", "find_avoiding_hyperplane",
    "ClassifierConfig", "SeriesSpec", "TermRule", "Verdict", "classify", "hartogs_joint_check",
    "bernstein_constant", "capacity", "extremal_lower", "fekete_search", "ghull_member",
    "transfinite_diameter", "saddulaev_transform", "beta_construct", "synth_block",
    "synth_enumeration", "synth_projective", "synth_variety", "verify",
]
