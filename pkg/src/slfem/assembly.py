"""Tridiagonal system assembly for the classical and compact methods."""

from dataclasses import dataclass

import numpy as np

from slfem import _kernels
from slfem.geometry import Mesh, QuadratureRule, gauss_legendre
from slfem.problem import ProblemSpec

DEFAULT_ASSEMBLY_ORDER = 5


@dataclass(frozen=True)
class TridiagonalSystem:
    """Bands and load of A u = F.

    Row i reads sub[i-1]*u[i-1] + diag[i]*u[i] + sup[i]*u[i+1] = rhs[i];
    sub and sup have length m - 1 for m unknowns.
    """

    sub: np.ndarray
    diag: np.ndarray
    sup: np.ndarray
    rhs: np.ndarray

    def __post_init__(self):
        for name in ("sub", "diag", "sup", "rhs"):
            object.__setattr__(self, name, np.ascontiguousarray(getattr(self, name), dtype=float))
        m = self.diag.shape[0]
        if self.rhs.shape != (m,) or self.sub.shape != (m - 1,) or self.sup.shape != (m - 1,):
            raise ValueError("inconsistent band lengths")

    @property
    def m(self) -> int:
        return self.diag.shape[0]

    def dense(self) -> np.ndarray:
        """Dense copy of the matrix (small-system oracle helper)."""
        return np.diag(self.diag) + np.diag(self.sub, -1) + np.diag(self.sup, 1)


def _check_mesh(problem: ProblemSpec, mesh: Mesh) -> None:
    x_l, x_r = problem.domain
    span = x_r - x_l
    if abs(mesh.nodes[0] - x_l) > 1e-12 * span or abs(mesh.nodes[-1] - x_r) > 1e-12 * span:
        raise ValueError(
            f"mesh [{mesh.nodes[0]}, {mesh.nodes[-1]}] does not cover domain {problem.domain}"
        )


def _quad_points(mesh: Mesh, rule: QuadratureRule) -> np.ndarray:
    h = mesh.widths
    mid = 0.5 * (mesh.nodes[:-1] + mesh.nodes[1:])
    return mid[:, None] + 0.5 * h[:, None] * rule.points[None, :]


def assemble_classical(problem: ProblemSpec, mesh: Mesh, rule: QuadratureRule | None = None,
                       *, apply_bc: bool = True) -> TridiagonalSystem:
    """Assemble the P1 Galerkin system: a_ij = int(beta phi_i' phi_j' + q phi_i phi_j),
    rhs_i = int(f phi_i), with boundary conditions applied unless apply_bc=False."""
    rule = rule if rule is not None else gauss_legendre(DEFAULT_ASSEMBLY_ORDER)
    _check_mesh(problem, mesh)
    x = _quad_points(mesh, rule)
    problem.validate_samples(x)
    sub, diag, sup, rhs = _kernels.assemble_p1(
        mesh.widths, rule.points, rule.weights,
        problem.beta.sample(x), problem.q.sample(x), problem.f.sample(x),
    )
    system = TridiagonalSystem(sub, diag, sup, rhs)
    return apply_boundary(system, problem) if apply_bc else system


def assemble_compact(problem: ProblemSpec, mesh: Mesh, rule: QuadratureRule | None = None,
                     *, apply_bc: bool = True) -> TridiagonalSystem:
    """Assemble the Petrov-Galerkin system of the compact method.

    Trial functions are the corrected hats (basis.modified_trial); test
    functions are the plain hats, which keeps the load vector simple.  The
    element bubble's bilinear action is subtracted from the load, so the
    trial object sum(c_j psi_j) + bubble is affine in the unknowns and the
    system stays tridiagonal.
    """
    rule = rule if rule is not None else gauss_legendre(DEFAULT_ASSEMBLY_ORDER)
    _check_mesh(problem, mesh)
    x = _quad_points(mesh, rule)
    problem.validate_samples(x)
    sub, diag, sup, rhs = _kernels.assemble_compact(
        mesh.widths, rule.points, rule.weights,
        problem.beta.sample(x),
        problem.beta.sample_deriv(x, domain=problem.domain),
        problem.q.sample(x), problem.f.sample(x),
    )
    system = TridiagonalSystem(sub, diag, sup, rhs)
    return apply_boundary(system, problem) if apply_bc else system


def apply_boundary(system: TridiagonalSystem, problem: ProblemSpec) -> TridiagonalSystem:
    """Apply both boundary conditions to a system assembled over all nodes.

    Dirichlet unknowns are eliminated exactly (known values moved to the rhs
    of the adjacent row); Neumann adds the natural term beta*g*v(endpoint) to
    the rhs; Robin adds alpha to the diagonal and alpha*g to the rhs.
    """
    sub = system.sub.copy()
    diag = system.diag.copy()
    sup = system.sup.copy()
    rhs = system.rhs.copy()
    x_l, x_r = problem.domain
    left, right = problem.bc_left, problem.bc_right

    if left.kind == "neumann":
        rhs[0] -= float(problem.beta.sample(x_l)) * left.value
    elif left.kind == "robin":
        diag[0] += left.alpha
        rhs[0] += left.alpha * left.value
    if right.kind == "neumann":
        rhs[-1] += float(problem.beta.sample(x_r)) * right.value
    elif right.kind == "robin":
        diag[-1] += right.alpha
        rhs[-1] += right.alpha * right.value

    if left.kind == "dirichlet":
        rhs[1] -= sub[0] * left.value
        sub, diag, sup, rhs = sub[1:], diag[1:], sup[1:], rhs[1:]
    if right.kind == "dirichlet":
        rhs[-2] -= sup[-1] * right.value
        sub, diag, sup, rhs = sub[:-1], diag[:-1], sup[:-1], rhs[:-1]

    return TridiagonalSystem(sub, diag, sup, rhs)
