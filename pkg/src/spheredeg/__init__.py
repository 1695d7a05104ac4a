"""Degrees of sphere maps, indices of vector-field zeros, and index-sum checks
on manifolds with boundary."""

from .constructors import AlphaSpec, build_alpha, degree_table, power_pair
from .degree import DegreeReport, SphereMapEval, degree, pl_degree, winding_number
from .errors import CrossCheckError, InputError, NumericalError, SphereDegError
from .fields import (FuncField, Monomial, PolyField, eval_field, jacobian, restrict_field,
                     suspend_field)
from .index import (IndexReport, Lemma21Report, check_lemma21, index_at,
                    verify_homotopy_nonvanishing)
from .mesh import TriangulatedSphere, build_mesh, refine, validate_mesh
from .morse import (BoundarySphere, MorseReport, MorseScenario, boundary_indices, classify_boundary,
                    double_check, load_scenario, morse_check, smooth_step, tangential_field)

__version__ = "0.1.0"

__all__ = [
    "AlphaSpec", "BoundarySphere", "CrossCheckError", "DegreeReport", "FuncField", "IndexReport",
    "InputError", "Lemma21Report", "Monomial", "MorseReport", "MorseScenario", "NumericalError",
    "PolyField", "SphereDegError", "SphereMapEval", "TriangulatedSphere", "boundary_indices",
    "build_alpha", "build_mesh", "check_lemma21", "classify_boundary", "degree", "degree_table",
    "double_check", "eval_field", "index_at", "jacobian", "load_scenario", "morse_check",
    "pl_degree", "power_pair", "refine", "restrict_field", "smooth_step", "suspend_field",
    "tangential_field", "validate_mesh", "verify_homotopy_nonvanishing", "winding_number",
]
