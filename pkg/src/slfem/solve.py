"""Tridiagonal solve and the three end-to-end methods.

All three solvers return a DiscreteSolution whose nodal coefficients agree
with the evaluator at mesh nodes (every correction term carries the element
weight w, which vanishes there).
"""

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from slfem import _kernels
from slfem.assembly import DEFAULT_ASSEMBLY_ORDER, TridiagonalSystem, assemble_classical, assemble_compact
from slfem.errors import ConstantCoefficientRequired
from slfem.geometry import Mesh, gauss_legendre, uniform_mesh
from slfem.problem import ProblemSpec, deriv_field, ratio_field


def thomas_solve(system: TridiagonalSystem) -> np.ndarray:
    """Solve the tridiagonal system by forward elimination / back substitution."""
    return _kernels.thomas(system.sub, system.diag, system.sup, system.rhs)


@dataclass(frozen=True)
class DiscreteSolution:
    """Nodal coefficients plus method-specific evaluators for u_h and u_h'."""

    method: str
    mesh: Mesh
    coeffs: np.ndarray
    problem: ProblemSpec
    beta_const: float | None = field(default=None)  # posterior method only

    def __post_init__(self):
        coeffs = np.ascontiguousarray(self.coeffs, dtype=float)
        if coeffs.shape != (self.mesh.n + 1,):
            raise ValueError("coefficient vector must cover every mesh node")
        coeffs.flags.writeable = False
        object.__setattr__(self, "coeffs", coeffs)

    # ratio fields of the compact corrections, built once per solution
    @cached_property
    def _r(self):
        return ratio_field(deriv_field(self.problem.beta), self.problem.beta)

    @cached_property
    def _s(self):
        return ratio_field(self.problem.q, self.problem.beta)

    @cached_property
    def _t(self):
        return ratio_field(self.problem.f, self.problem.beta)

    def _linear(self, flat: np.ndarray):
        val, slope, idx = _kernels.linear_eval(self.mesh.nodes, self.coeffs, flat)
        xl = self.mesh.nodes[idx]
        xr = self.mesh.nodes[idx + 1]
        w = (flat - xl) * (flat - xr)
        dw = 2.0 * flat - xl - xr
        return val, slope, w, dw

    def __call__(self, x):
        return self.evaluate(x)

    def evaluate(self, x):
        """u_h(x); accepts scalars or arrays."""
        arr = np.asarray(x, dtype=float)
        flat = np.ascontiguousarray(arr.ravel())
        val, slope, w, _ = self._linear(flat)
        if self.method == "p1":
            out = val
        elif self.method == "posterior":
            out = val - 0.5 * w * self.problem.f.sample(flat) / self.beta_const
        else:
            out = (val - 0.5 * self._r.sample(flat) * w * slope
                   + 0.5 * self._s.sample(flat) * w * val
                   - 0.5 * self._t.sample(flat) * w)
        return float(out[0]) if arr.ndim == 0 else out.reshape(arr.shape)

    def derivative(self, x):
        """u_h'(x); one-sided at nodes, matching the element convention."""
        arr = np.asarray(x, dtype=float)
        flat = np.ascontiguousarray(arr.ravel())
        val, slope, w, dw = self._linear(flat)
        domain = self.problem.domain
        if self.method == "p1":
            out = slope
        elif self.method == "posterior":
            fv = self.problem.f.sample(flat)
            fp = self.problem.f.sample_deriv(flat, domain=domain)
            out = slope - 0.5 * (dw * fv + w * fp) / self.beta_const
        else:
            rv = self._r.sample(flat)
            rp = self._r.sample_deriv(flat, domain=domain)
            sv = self._s.sample(flat)
            sp = self._s.sample_deriv(flat, domain=domain)
            tv = self._t.sample(flat)
            tp = self._t.sample_deriv(flat, domain=domain)
            out = (slope - 0.5 * (rp * w + rv * dw) * slope
                   + 0.5 * (sp * w + sv * dw) * val + 0.5 * sv * w * slope
                   - 0.5 * (tp * w + tv * dw))
        return float(out[0]) if arr.ndim == 0 else out.reshape(arr.shape)


def _reconstruct(u: np.ndarray, problem: ProblemSpec, mesh: Mesh) -> np.ndarray:
    """Insert Dirichlet data at eliminated endpoints."""
    parts = []
    if problem.bc_left.kind == "dirichlet":
        parts.append([problem.bc_left.value])
    parts.append(u)
    if problem.bc_right.kind == "dirichlet":
        parts.append([problem.bc_right.value])
    coeffs = np.concatenate(parts)
    if coeffs.shape != (mesh.n + 1,):
        raise ValueError("reconstructed coefficients do not match the mesh")
    return coeffs


def _resolve_mesh(problem: ProblemSpec, n: int, mesh: Mesh | None) -> Mesh:
    return mesh if mesh is not None else uniform_mesh(*problem.domain, n)


def solve_p1(problem: ProblemSpec, n: int, *, quad_order: int = DEFAULT_ASSEMBLY_ORDER,
             mesh: Mesh | None = None) -> DiscreteSolution:
    """Classical P1 Galerkin solution (piecewise linear)."""
    mesh = _resolve_mesh(problem, n, mesh)
    system = assemble_classical(problem, mesh, gauss_legendre(quad_order))
    u = thomas_solve(system)
    return DiscreteSolution("p1", mesh, _reconstruct(u, problem, mesh), problem)


def _constant_beta_value(problem: ProblemSpec) -> float:
    x = np.linspace(*problem.domain, 64)
    if problem.beta.constant:
        return float(problem.beta.sample(x[:1])[0])
    v = problem.beta.sample(x)
    scale = float(np.max(np.abs(v)))
    if scale == 0.0 or float(np.max(v) - np.min(v)) > 1e-12 * scale:
        raise ConstantCoefficientRequired(
            "posterior correction requires constant beta (sampled variation too large)"
        )
    return float(np.mean(v))


def _require_zero_q(problem: ProblemSpec) -> None:
    x = np.linspace(*problem.domain, 64)
    if problem.q.constant:
        x = x[:1]
    if float(np.max(np.abs(problem.q.sample(x)))) > 1e-14:
        raise ConstantCoefficientRequired("posterior correction requires q identically zero")


def solve_posterior(problem: ProblemSpec, n: int, *, quad_order: int = DEFAULT_ASSEMBLY_ORDER,
                    mesh: Mesh | None = None) -> DiscreteSolution:
    """P1 solution plus the interpolation-error correction -w f / (2 beta).

    Only valid when beta is constant and q == 0 (then u'' = -f/beta exactly,
    so the correction equals the leading interpolation error); anything else
    raises ConstantCoefficientRequired.
    """
    beta_const = _constant_beta_value(problem)
    _require_zero_q(problem)
    base = solve_p1(problem, n, quad_order=quad_order, mesh=mesh)
    return DiscreteSolution("posterior", base.mesh, base.coeffs, problem, beta_const=beta_const)


def solve_compact(problem: ProblemSpec, n: int, *, quad_order: int = DEFAULT_ASSEMBLY_ORDER,
                  mesh: Mesh | None = None) -> DiscreteSolution:
    """Compact third-order solution with corrected trial functions.

    Nodal coefficients come from the Petrov-Galerkin system; the evaluator
    applies the corrections to the piecewise-linear part, which is identical
    to summing the corrected basis functions but needs fewer field values.
    """
    mesh = _resolve_mesh(problem, n, mesh)
    system = assemble_compact(problem, mesh, gauss_legendre(quad_order))
    u = thomas_solve(system)
    return DiscreteSolution("compact", mesh, _reconstruct(u, problem, mesh), problem)


METHODS = {
    "p1": solve_p1,
    "posterior": solve_posterior,
    "compact": solve_compact,
}
