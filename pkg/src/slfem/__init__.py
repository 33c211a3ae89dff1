"""Finite element solvers for 1D Sturm-Liouville boundary value problems.

Three methods over the same mesh and tridiagonal system structure:

* ``solve_p1`` - classical piecewise-linear Galerkin (second order in L2),
* ``solve_posterior`` - P1 plus a posterior interpolation-error correction,
  third order in L2 for constant beta and q == 0,
* ``solve_compact`` - third-order compact method with corrected trial
  functions and an element bubble, for variable coefficients.
"""

from slfem._kernels import backend
from slfem.analysis import (
    RefinementReport,
    StudyRow,
    convergence_order,
    error_h1,
    error_l2,
    refinement_study,
)
from slfem.assembly import TridiagonalSystem, apply_boundary, assemble_classical, assemble_compact
from slfem.errors import (
    CoercivityError,
    ConstantCoefficientRequired,
    NumericalError,
    SingularSystemError,
)
from slfem.geometry import Mesh, QuadratureRule, gauss_legendre, integrate_element, uniform_mesh
from slfem.problem import (
    CATALOG,
    BoundaryCondition,
    ProblemSpec,
    ScalarField,
    catalog_poisson,
    catalog_variable,
    constant_field,
    field_deriv,
)
from slfem.solve import (
    METHODS,
    DiscreteSolution,
    solve_compact,
    solve_p1,
    solve_posterior,
    thomas_solve,
)

__version__ = "0.1.0"

__all__ = [
    "BoundaryCondition",
    "CATALOG",
    "CoercivityError",
    "ConstantCoefficientRequired",
    "DiscreteSolution",
    "METHODS",
    "Mesh",
    "NumericalError",
    "ProblemSpec",
    "QuadratureRule",
    "RefinementReport",
    "ScalarField",
    "SingularSystemError",
    "StudyRow",
    "TridiagonalSystem",
    "apply_boundary",
    "assemble_classical",
    "assemble_compact",
    "backend",
    "catalog_poisson",
    "catalog_variable",
    "constant_field",
    "convergence_order",
    "error_h1",
    "error_l2",
    "field_deriv",
    "gauss_legendre",
    "integrate_element",
    "refinement_study",
    "solve_compact",
    "solve_p1",
    "solve_posterior",
    "thomas_solve",
    "uniform_mesh",
]
