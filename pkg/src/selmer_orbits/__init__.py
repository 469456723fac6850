"""Orbit parametrization of 2-Selmer elements for odd hyperelliptic Jacobians:
exact algebra, finite-field censuses, p-adic tools and the descent pipeline."""

from .curves import HyperCurve, curve_height, enumerate_curves, normalize_indivisible
from .errors import Infeasible, Unsupported, ValidationError
from .exact import Poly, charpoly_pencil, discriminant, hermite_normal_form, sturm_real_root_count
from .orbit_rep import OperatorRep, SignPattern, distinguished_rep, invariants, sign_pattern

__version__ = "0.1.0"

__all__ = [
    "HyperCurve", "curve_height", "enumerate_curves", "normalize_indivisible",
    "Infeasible", "Unsupported", "ValidationError",
    "Poly", "charpoly_pencil", "discriminant", "hermite_normal_form", "sturm_real_root_count",
    "OperatorRep", "SignPattern", "distinguished_rep", "invariants", "sign_pattern",
]
