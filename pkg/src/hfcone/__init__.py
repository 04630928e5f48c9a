"""HF+ of integer surgeries on knots from a knot Floer complex, over F2."""

from .knotcx import (ComplexError, KnotComplex, ValidationError, builtin, load_complex,
                     parse_complex, validate)
from .homalg import TOWER, GradedModule
from .gradings import d_lens, d_invariants
from .cone import (StabilizationError, SurgeryResult, cobordism_map, surgery_homology,
                   zero_surgery_homology)
from .regions import large_surgery_homology

__version__ = "0.1.0"

__all__ = [
    "ComplexError", "KnotComplex", "ValidationError", "builtin", "load_complex",
    "parse_complex", "validate", "TOWER", "GradedModule", "d_lens", "d_invariants",
    "StabilizationError", "SurgeryResult", "cobordism_map", "surgery_homology",
    "zero_surgery_homology", "large_surgery_homology", "__version__",
]
