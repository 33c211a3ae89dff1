"""Pointwise basis evaluators: hats, the element weight, the corrected trial
functions of the compact method, and the per-element bubble.

On element [x_k, x_{k+1}] the weight is w(x) = (x - x_k)(x - x_{k+1}); it
vanishes at both endpoints, which keeps the corrected functions continuous
and makes all corrections drop out at mesh nodes.  With r = beta'/beta,
s = q/beta and t = f/beta, the corrected trial function and the bubble are

    psi_i = phi_i - 1/2 r w phi_i' + 1/2 s w phi_i
    b     = -1/2 t w                                  (one per element)

and the solution object of the compact method is sum(c_j psi_j) + b.
"""

import numpy as np

from slfem.errors import CoercivityError
from slfem.geometry import Mesh
from slfem.problem import ProblemSpec, deriv_field, ratio_field


def _locate(mesh: Mesh, x: float) -> int:
    """Element index containing x; a node belongs to the element on its right
    (the last node to the last element), matching the kernel convention."""
    idx = int(np.searchsorted(mesh.nodes, x, side="right")) - 1
    return min(max(idx, 0), mesh.n - 1)


def hat(mesh: Mesh, i: int, x: float) -> tuple[float, float]:
    """Value and one-sided slope of the hat function of node i at x."""
    nodes = mesh.nodes
    if not 0 <= i <= mesh.n:
        raise IndexError(f"node index {i} out of range for {mesh.n + 1} nodes")
    if not nodes[0] <= x <= nodes[-1]:
        raise ValueError(f"x={x} outside mesh domain [{nodes[0]}, {nodes[-1]}]")
    k = _locate(mesh, x)
    xl, xr = float(nodes[k]), float(nodes[k + 1])
    hk = xr - xl
    if i == k:
        return (xr - x) / hk, -1.0 / hk
    if i == k + 1:
        return (x - xl) / hk, 1.0 / hk
    return 0.0, 0.0


def element_weight(mesh: Mesh, k: int, x: float) -> tuple[float, float]:
    """w(x) = (x - x_k)(x - x_{k+1}) and w'(x) = 2x - x_k - x_{k+1} on element k."""
    xl, xr = mesh.element(k)
    if not xl <= x <= xr:
        raise ValueError(f"x={x} outside element {k} = [{xl}, {xr}]")
    return (x - xl) * (x - xr), 2.0 * x - xl - xr


def _check_beta(problem: ProblemSpec, x: float) -> None:
    if float(problem.beta.sample(x)) <= 0.0:
        raise CoercivityError(f"beta({x}) <= 0")


def modified_trial(problem: ProblemSpec, mesh: Mesh, i: int, x: float) -> tuple[float, float]:
    """Corrected trial function psi_i and its derivative at x.

    psi_i' = phi_i' - 1/2 (r w)' phi_i' + 1/2 (s w)' phi_i + 1/2 s w phi_i'
    using phi_i'' = 0 inside elements.  r' and s' come from the analytic
    quotient rule when the coefficient derivatives are attached, otherwise
    from the FD fallback applied to the composite ratio.
    """
    phi, dphi = hat(mesh, i, x)
    k = _locate(mesh, x)
    w, dw = element_weight(mesh, k, x)
    _check_beta(problem, x)

    r = ratio_field(deriv_field(problem.beta), problem.beta)
    s = ratio_field(problem.q, problem.beta)
    rv = float(r.sample(x))
    sv = float(s.sample(x))
    rp = float(r.sample_deriv(x, domain=problem.domain))
    sp = float(s.sample_deriv(x, domain=problem.domain))

    value = phi - 0.5 * rv * w * dphi + 0.5 * sv * w * phi
    deriv = (dphi - 0.5 * (rp * w + rv * dw) * dphi
             + 0.5 * (sp * w + sv * dw) * phi + 0.5 * sv * w * dphi)
    return value, deriv


def bubble(problem: ProblemSpec, mesh: Mesh, k: int, x: float) -> tuple[float, float]:
    """Element bubble -1/2 (f/beta) w and its derivative at x in element k."""
    w, dw = element_weight(mesh, k, x)
    _check_beta(problem, x)
    t = ratio_field(problem.f, problem.beta)
    tv = float(t.sample(x))
    tp = float(t.sample_deriv(x, domain=problem.domain))
    return -0.5 * tv * w, -0.5 * (tp * w + tv * dw)
