"""Finite-window computations for FI_G-modules over a field."""

from .category import FiniteGroup, Morphism, compose, hom_set
from .degree import NEG_INF, DegreeValue
from .filtered import (basic_filtered, derived_regularity, filtered_complex, fit_polynomial,
                       is_filtered)
from .homology import (CertificateError, free_resolution, gd, h0, hd, invariant_report,
                       projective_dimension, tor)
from .linalg import PrimeField, RationalField, field_from_spec
from .modules import (Bounds, DegreewiseModule, FreeModule, ModuleMap, Presentation, Relation,
                      WindowError, compile_presentation, direct_sum, free_module, validate)
from .shift import derivative, natural_map, shift, torsion_degree, torsion_split

__all__ = [
    "Bounds", "CertificateError", "DegreeValue", "DegreewiseModule", "FiniteGroup",
    "FreeModule", "ModuleMap", "Morphism", "NEG_INF", "Presentation", "PrimeField",
    "RationalField", "Relation", "WindowError", "basic_filtered", "compile_presentation",
    "compose", "derivative", "derived_regularity", "direct_sum", "field_from_spec",
    "filtered_complex", "fit_polynomial", "free_module", "free_resolution", "gd", "h0", "hd",
    "hom_set", "invariant_report", "is_filtered", "natural_map", "projective_dimension",
    "shift", "tor", "torsion_degree", "torsion_split", "validate",
]

__version__ = "0.1.0"
