"""Error norms, convergence orders, and grid-refinement studies."""

import math
from dataclasses import dataclass

import numpy as np

from slfem.geometry import QuadratureRule, gauss_legendre
from slfem.problem import ProblemSpec, ScalarField
from slfem.solve import METHODS, DiscreteSolution

# 7-point Gauss on 4 equal sub-intervals per element: the table problems
# contain sin(50*pi*x) factors, and at the coarsest rows an element spans
# several oscillations, so a single rule per element would be marginal.
DEFAULT_NORM_ORDER = 7
DEFAULT_SUBDIVISIONS = 4


def _norm_points(mesh, rule: QuadratureRule, subdivisions: int):
    """Quadrature points and jacobian-weights over all element sub-intervals."""
    h = mesh.widths
    sub_w = h / subdivisions
    starts = (mesh.nodes[:-1][:, None] + sub_w[:, None] * np.arange(subdivisions)[None, :]).ravel()
    widths = np.repeat(sub_w, subdivisions)
    x = (starts + 0.5 * widths)[:, None] + 0.5 * widths[:, None] * rule.points[None, :]
    jw = 0.5 * widths[:, None] * rule.weights[None, :]
    return x, jw


def error_l2(solution: DiscreteSolution, exact: ScalarField | None = None,
             rule: QuadratureRule | None = None, *,
             subdivisions: int = DEFAULT_SUBDIVISIONS) -> float:
    """L2 norm of u - u_h by element-wise Gauss quadrature."""
    exact = exact if exact is not None else solution.problem.exact
    if exact is None:
        raise ValueError("no exact solution available for error measurement")
    rule = rule if rule is not None else gauss_legendre(DEFAULT_NORM_ORDER)
    x, jw = _norm_points(solution.mesh, rule, subdivisions)
    diff = exact.sample(x) - solution.evaluate(x)
    return float(np.sqrt(np.sum(jw * diff**2)))


def error_h1(solution: DiscreteSolution, exact: ScalarField | None = None,
             rule: QuadratureRule | None = None, *,
             subdivisions: int = DEFAULT_SUBDIVISIONS, full: bool = False) -> float:
    """H1 seminorm of the error, ||u' - u_h'||_L2 (the derivative error).

    With full=True the L2 part is added, giving the full H1 norm.
    """
    exact = exact if exact is not None else solution.problem.exact
    if exact is None:
        raise ValueError("no exact solution available for error measurement")
    if exact.deriv is None:
        raise ValueError("exact solution has no derivative evaluator")
    rule = rule if rule is not None else gauss_legendre(DEFAULT_NORM_ORDER)
    x, jw = _norm_points(solution.mesh, rule, subdivisions)
    diff = exact.sample_deriv(x) - solution.derivative(x)
    total = float(np.sum(jw * diff**2))
    if full:
        vdiff = exact.sample(x) - solution.evaluate(x)
        total += float(np.sum(jw * vdiff**2))
    return math.sqrt(total)


def convergence_order(e1: float, e2: float, n1: int, n2: int) -> float:
    """Order = |log(e1/e2) / log(n2/n1)| from two refinement rows."""
    if e1 <= 0.0 or e2 <= 0.0:
        raise ValueError("errors must be positive to estimate an order")
    if n1 == n2:
        raise ValueError("refinement levels must differ")
    return abs(math.log(e1 / e2) / math.log(n2 / n1))


@dataclass(frozen=True)
class StudyRow:
    n: int
    l2_error: float
    l2_order: float | None
    h1_error: float
    h1_order: float | None


@dataclass(frozen=True)
class RefinementReport:
    """One refinement study: errors and consecutive-row orders per level."""

    method: str
    problem: str
    rows: tuple[StudyRow, ...]
    norm_quad_order: int

    def final_orders(self) -> tuple[float, float]:
        return self.rows[-1].l2_order, self.rows[-1].h1_order


def refinement_study(problem: ProblemSpec, method: str, levels, *,
                     quad_order: int = 5,
                     norm_quad_order: int = DEFAULT_NORM_ORDER,
                     subdivisions: int = DEFAULT_SUBDIVISIONS,
                     full_h1: bool = False) -> RefinementReport:
    """Solve at every level and tabulate both error norms with orders.

    Order columns are filled from consecutive rows only, so the first row
    has none, matching the usual table layout.
    """
    levels = list(levels)
    if len(levels) < 2:
        raise ValueError("a refinement study needs at least 2 levels")
    if any(b <= a for a, b in zip(levels, levels[1:])):
        raise ValueError("levels must be strictly increasing")
    if problem.exact is None:
        raise ValueError("refinement studies need a problem with an exact solution")
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}; choose from {sorted(METHODS)}")

    solver = METHODS[method]
    rule = gauss_legendre(norm_quad_order)
    rows = []
    prev = None
    for n in levels:
        sol = solver(problem, n, quad_order=quad_order)
        l2 = error_l2(sol, rule=rule, subdivisions=subdivisions)
        h1 = error_h1(sol, rule=rule, subdivisions=subdivisions, full=full_h1)
        if prev is None:
            rows.append(StudyRow(n, l2, None, h1, None))
        else:
            rows.append(StudyRow(
                n, l2, convergence_order(prev.l2_error, l2, prev.n, n),
                h1, convergence_order(prev.h1_error, h1, prev.n, n),
            ))
        prev = rows[-1]
    return RefinementReport(method, problem.label or "custom", tuple(rows), norm_quad_order)
