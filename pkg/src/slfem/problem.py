"""Coefficient fields, boundary conditions, and the built-in problem catalog.

The boundary value problem is

    -(beta(x) u'(x))' + q(x) u(x) = f(x)   on (x_l, x_r)

with beta >= beta_0 > 0 and q >= 0, plus one boundary condition per endpoint.
"""

from collections.abc import Callable
from dataclasses import dataclass

import numpy as np

from slfem.errors import CoercivityError

# step factor for the finite-difference derivative fallback; eps^(1/5) keeps
# the 5-point stencil's truncation and rounding errors balanced near 1e-10
_FD_STEP = float(np.finfo(float).eps ** 0.2)


def _vec_eval(fn, x: np.ndarray) -> np.ndarray:
    """Evaluate fn at an ndarray of points, accepting scalar-only callables."""
    try:
        y = np.asarray(fn(x), dtype=float)
    except (TypeError, ValueError):
        return np.array([float(fn(v)) for v in np.atleast_1d(x).ravel()]).reshape(x.shape)
    if y.shape != x.shape:
        # constant-returning callables; materialize so downstream kernels get
        # a contiguous buffer
        y = np.ascontiguousarray(np.broadcast_to(y, x.shape))
    return y


def _fd_deriv(sample: Callable, x: np.ndarray, domain=None) -> np.ndarray:
    """5-point finite-difference derivative, one-sided near domain endpoints."""
    e = np.maximum(1.0, np.abs(x)) * _FD_STEP
    lo, hi = (-np.inf, np.inf) if domain is None else domain
    central = (x - 2.0 * e >= lo) & (x + 2.0 * e <= hi)
    room_right = hi - x >= x - lo

    out = np.empty_like(x)
    stencils = (
        (central, (-2.0, -1.0, 1.0, 2.0), (1.0, -8.0, 8.0, -1.0)),
        (~central & room_right, (0.0, 1.0, 2.0, 3.0, 4.0), (-25.0, 48.0, -36.0, 16.0, -3.0)),
        (~central & ~room_right, (0.0, -1.0, -2.0, -3.0, -4.0), (25.0, -48.0, 36.0, -16.0, 3.0)),
    )
    for mask, shifts, coefs in stencils:
        if not np.any(mask):
            continue
        xm, em = x[mask], e[mask]
        pts = xm[None, :] + np.outer(np.asarray(shifts), em)
        vals = sample(pts.ravel()).reshape(pts.shape)
        out[mask] = (np.asarray(coefs) @ vals) / (12.0 * em)
    return out


@dataclass(frozen=True)
class ScalarField:
    """Real function of one real variable, optionally with an analytic derivative.

    When ``deriv`` is absent, derivative queries fall back to the finite
    difference above.  ``constant`` marks fields known to be constant so that
    constancy checks can short-circuit.
    """

    fn: Callable
    deriv: Callable | None = None
    constant: bool = False

    def __call__(self, x):
        return self.fn(x)

    def sample(self, x) -> np.ndarray:
        return _vec_eval(self.fn, np.asarray(x, dtype=float))

    def sample_deriv(self, x, domain=None) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if self.deriv is not None:
            return _vec_eval(self.deriv, x)
        return _fd_deriv(self.sample, x, domain)


def constant_field(value: float) -> ScalarField:
    return ScalarField(
        fn=lambda x: value * np.ones_like(np.asarray(x, dtype=float)),
        deriv=lambda x: np.zeros_like(np.asarray(x, dtype=float)),
        constant=True,
    )


def ratio_field(num: ScalarField, den: ScalarField) -> ScalarField:
    """Field num/den; quotient-rule derivative when both factors have one,
    otherwise the FD fallback applied to the composite ratio directly."""
    def fn(x):
        return num.sample(x) / den.sample(x)

    deriv = None
    if num.deriv is not None and den.deriv is not None:
        def deriv(x):
            d = den.sample(x)
            return (num.sample_deriv(x) * d - num.sample(x) * den.sample_deriv(x)) / d**2

    return ScalarField(fn=fn, deriv=deriv, constant=num.constant and den.constant)


def deriv_field(field: ScalarField) -> ScalarField:
    """The derivative of a field as a field (no second derivative attached)."""
    if field.deriv is not None:
        return ScalarField(fn=field.deriv)
    return ScalarField(fn=lambda x: field.sample_deriv(np.asarray(x, dtype=float)))


def field_deriv(field: ScalarField, x, domain=None):
    """Derivative of ``field`` at x: analytic when attached, FD fallback otherwise."""
    arr = np.asarray(x, dtype=float)
    out = field.sample_deriv(arr, domain=domain)
    return float(out) if arr.ndim == 0 else out


@dataclass(frozen=True)
class BoundaryCondition:
    """One endpoint condition.

    kind 'dirichlet': u = value.
    kind 'neumann':   u' = value.
    kind 'robin':     beta * du/dn = alpha * (value - u), outward normal n.
    """

    kind: str
    value: float = 0.0
    alpha: float = 0.0

    def __post_init__(self):
        if self.kind not in ("dirichlet", "neumann", "robin"):
            raise ValueError(f"unknown boundary condition kind {self.kind!r}")
        if self.kind == "robin" and self.alpha < 0:
            raise ValueError("robin coefficient alpha must be >= 0")

    @classmethod
    def dirichlet(cls, value: float = 0.0):
        return cls("dirichlet", value)

    @classmethod
    def neumann(cls, value: float = 0.0):
        return cls("neumann", value)

    @classmethod
    def robin(cls, alpha: float, value: float = 0.0):
        return cls("robin", value, alpha)


@dataclass(frozen=True)
class ProblemSpec:
    """The boundary value problem plus an optional exact solution."""

    domain: tuple[float, float]
    beta: ScalarField
    q: ScalarField
    f: ScalarField
    bc_left: BoundaryCondition
    bc_right: BoundaryCondition
    exact: ScalarField | None = None
    label: str = ""

    def __post_init__(self):
        if self.domain[0] >= self.domain[1]:
            raise ValueError(f"degenerate domain {self.domain}")

    def validate_samples(self, x) -> float:
        """Check coercivity on sample points; returns the observed beta_0."""
        beta0 = float(np.min(self.beta.sample(x)))
        if not beta0 > 0.0:
            raise CoercivityError(
                f"beta must satisfy beta >= beta_0 > 0; sampled minimum {beta0:.6e}"
            )
        qmin = float(np.min(self.q.sample(x)))
        if qmin < 0.0:
            raise CoercivityError(f"q must be >= 0; sampled minimum {qmin:.6e}")
        return beta0


def _pi_label(k: float) -> str:
    m = k / np.pi
    if abs(2 * m - round(2 * m)) < 1e-9:
        return f"{m:g}*pi"
    return f"{k:g}"


def catalog_poisson(k: float) -> ProblemSpec:
    """Constant-coefficient Poisson problem -u'' = f with exact u = sin(k x).

    Domain [0, 1] with homogeneous Dirichlet conditions; f = k^2 sin(k x)
    is manufactured so the exact solution (and its derivative) is attached.
    """
    if k == 0:
        raise ValueError("k must be nonzero")
    f = ScalarField(
        fn=lambda x: k * k * np.sin(k * x),
        deriv=lambda x: k**3 * np.cos(k * x),
    )
    exact = ScalarField(
        fn=lambda x: np.sin(k * x),
        deriv=lambda x: k * np.cos(k * x),
    )
    return ProblemSpec(
        domain=(0.0, 1.0),
        beta=constant_field(1.0),
        q=constant_field(0.0),
        f=f,
        bc_left=BoundaryCondition.dirichlet(0.0),
        bc_right=BoundaryCondition.dirichlet(0.0),
        exact=exact,
        label=f"poisson(k1={_pi_label(k)})",
    )


def _variable_parts(k1: float, k2: float, x):
    """u = sin(k1 x) cos(k2 x) and its first three derivatives."""
    s1, c1 = np.sin(k1 * x), np.cos(k1 * x)
    s2, c2 = np.sin(k2 * x), np.cos(k2 * x)
    u = s1 * c2
    du = k1 * c1 * c2 - k2 * s1 * s2
    d2u = -(k1 * k1 + k2 * k2) * s1 * c2 - 2.0 * k1 * k2 * c1 * s2
    d3u = -(k1 * k1 + k2 * k2) * du - 2.0 * k1 * k2 * (k2 * c1 * c2 - k1 * s1 * s2)
    return u, du, d2u, d3u


def catalog_variable(k1: float, k2: float) -> ProblemSpec:
    """Variable-coefficient problem with beta = e^x, q = x^2.

    Exact u = sin(k1 x) cos(k2 x); the source is expanded analytically,
    f = -e^x (u' + u'') + x^2 u, so manufacturing error stays at machine
    precision.  Domain [0, 1], homogeneous Dirichlet.
    """
    if k1 == 0 and k2 == 0:
        raise ValueError("(k1, k2) must not both be zero")

    def f_fn(x):
        u, du, d2u, _ = _variable_parts(k1, k2, x)
        return -np.exp(x) * (du + d2u) + x**2 * u

    def f_deriv(x):
        u, du, d2u, d3u = _variable_parts(k1, k2, x)
        return -np.exp(x) * (du + 2.0 * d2u + d3u) + 2.0 * x * u + x**2 * du

    exact = ScalarField(
        fn=lambda x: _variable_parts(k1, k2, x)[0],
        deriv=lambda x: _variable_parts(k1, k2, x)[1],
    )
    return ProblemSpec(
        domain=(0.0, 1.0),
        beta=ScalarField(fn=np.exp, deriv=np.exp),
        q=ScalarField(fn=lambda x: x**2, deriv=lambda x: 2.0 * x),
        f=ScalarField(fn=f_fn, deriv=f_deriv),
        bc_left=BoundaryCondition.dirichlet(0.0),
        bc_right=BoundaryCondition.dirichlet(0.0),
        exact=exact,
        label=f"variable(k1={_pi_label(k1)}, k2={_pi_label(k2)})",
    )


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    summary: str
    reference: str
    build: Callable


CATALOG = {
    "poisson": CatalogEntry(
        name="poisson",
        summary="beta = 1, q = 0, exact u = sin(k1*x) on [0,1]",
        reference="reference tables 1-2 (k1 = 5*pi and 50*pi)",
        build=lambda k1, k2=0.0: catalog_poisson(k1),
    ),
    "variable": CatalogEntry(
        name="variable",
        summary="beta = exp(x), q = x^2, exact u = sin(k1*x)*cos(k2*x) on [0,1]",
        reference="reference tables 3-6 (k1, k2 in {5*pi, 50*pi} x {0, k1})",
        build=catalog_variable,
    ),
}
