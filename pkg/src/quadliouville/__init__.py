"""Quadratic Liouville structures on symplectic vector spaces and their automorphisms."""
from .linalg import Q
from .symplectic import SymplecticSpace, omega, standard_space, symplectic_adjoint
from .quadratic import QuadraticGenerator, SquareClass, classify_square, dpsi, liouville_field, psi, theta
from .flow import flow, flow_matrix
from .maps import PolynomialMap, LinearMap, pullback_residual, pushforward_residual
from .automorphisms import centralizer_lie_basis, cotangent_lift, lagrangian_splitting, restrict_to_plus
from .suite import SuiteConfig, run_suite

__version__ = "0.1.0"

__all__ = [
    "Q",
    "SymplecticSpace",
    "omega",
    "standard_space",
    "symplectic_adjoint",
    "QuadraticGenerator",
    "SquareClass",
    "classify_square",
    "dpsi",
    "liouville_field",
    "psi",
    "theta",
    "flow",
    "flow_matrix",
    "PolynomialMap",
    "LinearMap",
    "pullback_residual",
    "pushforward_residual",
    "centralizer_lie_basis",
    "cotangent_lift",
    "lagrangian_splitting",
    "restrict_to_plus",
    "SuiteConfig",
    "run_suite",
]
