"""1D meshes and Gauss-Legendre quadrature on elements."""

import numbers
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

MAX_QUAD_ORDER = 16


@dataclass(frozen=True)
class Mesh:
    """Ordered node coordinates partitioning an interval into elements."""

    nodes: np.ndarray

    def __post_init__(self):
        nodes = np.ascontiguousarray(self.nodes, dtype=float)
        if nodes.ndim != 1 or nodes.size < 3:
            raise ValueError("mesh needs at least 3 nodes (2 elements)")
        if not np.all(np.diff(nodes) > 0):
            raise ValueError("mesh nodes must be strictly increasing")
        nodes.flags.writeable = False
        object.__setattr__(self, "nodes", nodes)

    @property
    def n(self) -> int:
        """Number of elements."""
        return self.nodes.size - 1

    @property
    def h_max(self) -> float:
        return float(np.max(np.diff(self.nodes)))

    @property
    def widths(self) -> np.ndarray:
        return np.diff(self.nodes)

    def element(self, k: int) -> tuple[float, float]:
        """Endpoints (x_k, x_{k+1}) of element k."""
        if not 0 <= k < self.n:
            raise IndexError(f"element index {k} out of range for {self.n} elements")
        return float(self.nodes[k]), float(self.nodes[k + 1])


def uniform_mesh(x_l: float, x_r: float, n: int) -> Mesh:
    """Uniform mesh with n elements on [x_l, x_r]."""
    if x_l >= x_r:
        raise ValueError(f"degenerate domain: x_l={x_l} >= x_r={x_r}")
    if n < 2:
        raise ValueError(f"need at least 2 elements, got {n}")
    return Mesh(np.linspace(x_l, x_r, n + 1))


@dataclass(frozen=True)
class QuadratureRule:
    """Gauss-Legendre points/weights on the reference interval [-1, 1]."""

    order: int
    points: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)

    def __post_init__(self):
        for name in ("points", "weights"):
            arr = np.ascontiguousarray(getattr(self, name), dtype=float)
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)


def _legendre(n: int, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """P_n(x) and P_n'(x) by the three-term recurrence."""
    p_prev = np.ones_like(x)
    p = x.copy()
    if n == 0:
        return p_prev, np.zeros_like(x)
    for k in range(1, n):
        p_prev, p = p, ((2 * k + 1) * x * p - k * p_prev) / (k + 1)
    dp = n * (x * p - p_prev) / (x**2 - 1.0)
    return p, dp


@lru_cache(maxsize=None)
def gauss_legendre(n_q: int) -> QuadratureRule:
    """Gauss-Legendre rule with n_q points, exact for degree <= 2*n_q - 1.

    Nodes are the Legendre roots, found by Newton iteration from the
    Chebyshev-like initial guess, iterated to a 1e-15 residual; weights are
    2 / ((1 - x^2) P_n'(x)^2).  Points and weights are symmetrized so the
    rule is exactly even.
    """
    if not isinstance(n_q, numbers.Integral) or not 1 <= n_q <= MAX_QUAD_ORDER:
        raise ValueError(f"unsupported quadrature order {n_q!r} (need 1..{MAX_QUAD_ORDER})")
    if n_q == 1:
        return QuadratureRule(1, np.array([0.0]), np.array([2.0]))

    i = np.arange(1, n_q + 1)
    x = np.cos(np.pi * (i - 0.25) / (n_q + 0.5))
    for _ in range(60):
        p, dp = _legendre(n_q, x)
        x = x - p / dp
        if np.max(np.abs(p)) < 1e-15:
            break
    x = 0.5 * (x - x[::-1])  # enforce exact symmetry about 0
    p, dp = _legendre(n_q, x)
    w = 2.0 / ((1.0 - x**2) * dp**2)
    w = 0.5 * (w + w[::-1])
    order = np.argsort(x)
    return QuadratureRule(n_q, x[order], w[order])


def integrate_element(rule: QuadratureRule, a: float, b: float, g) -> float:
    """Integrate g over [a, b] with the reference rule mapped affinely."""
    if a >= b:
        raise ValueError(f"degenerate interval [{a}, {b}]")
    half = 0.5 * (b - a)
    x = 0.5 * (a + b) + half * rule.points
    try:
        y = np.asarray(g(x), dtype=float)
        if y.shape != x.shape:
            y = np.broadcast_to(y, x.shape)
    except (TypeError, ValueError):
        y = np.array([g(xi) for xi in x])
    return float(half * np.dot(rule.weights, y))
