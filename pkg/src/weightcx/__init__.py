"""Weight structures on bounded complexes of free modules.

Exact linear algebra over Z, Q, Z/n and F_p; the stupid weight structure on
the homotopy category, weight complexes and Postnikov towers; pure functors
and weight spectral sequences; complexes of abelian groups; base change.
"""

from .complexes import ChainMap, Complex, ComplexError, Homotopy, PeriodicComplex, cone, homology, stupid_truncation
from .homotopy import HomotopyEquivalence, homotopy_equivalence, is_contractible, k_hom, weak_homotopy_range
from .kernels import BACKEND
from .linalg import Invariants, ModulePresentation, kernel_basis, module_invariants, smith_normal_form, solve_linear
from .matrix import ExactMatrix
from .rings import QQ, ZZ, IntegersMod, PrimeField, RingSpec
from .weights import (
    PostnikovTower,
    check_axioms,
    hereditary_weight_bounds,
    weight_bounds,
    weight_complex,
    weight_membership,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "ChainMap",
    "Complex",
    "ComplexError",
    "ExactMatrix",
    "Homotopy",
    "HomotopyEquivalence",
    "IntegersMod",
    "Invariants",
    "ModulePresentation",
    "PeriodicComplex",
    "PostnikovTower",
    "PrimeField",
    "QQ",
    "RingSpec",
    "ZZ",
    "check_axioms",
    "cone",
    "hereditary_weight_bounds",
    "homology",
    "homotopy_equivalence",
    "is_contractible",
    "k_hom",
    "kernel_basis",
    "module_invariants",
    "smith_normal_form",
    "solve_linear",
    "stupid_truncation",
    "weak_homotopy_range",
    "weight_bounds",
    "weight_complex",
    "weight_membership",
]
