import numpy as np
import pytest

from slfem.basis import bubble, element_weight, hat, modified_trial
from slfem.errors import CoercivityError
from slfem.geometry import Mesh, uniform_mesh
from slfem.problem import BoundaryCondition, ProblemSpec, ScalarField, constant_field


def _make_problem(beta, q, f, domain=(0.0, 1.0)):
    return ProblemSpec(
        domain=domain, beta=beta, q=q, f=f,
        bc_left=BoundaryCondition.dirichlet(),
        bc_right=BoundaryCondition.dirichlet(),
    )


class TestHat:
    def test_nodal_interpolation_property(self):
        mesh = uniform_mesh(0.0, 1.0, 8)
        for i in range(mesh.n + 1):
            for j in range(mesh.n + 1):
                value, _ = hat(mesh, i, float(mesh.nodes[j]))
                assert value == pytest.approx(1.0 if i == j else 0.0, abs=1e-15)

    def test_midpoint_of_left_support(self):
        mesh = uniform_mesh(0.0, 1.0, 8)  # h = 0.125
        i = 4
        x = float(mesh.nodes[i - 1]) + 0.0625
        value, deriv = hat(mesh, i, x)
        assert value == pytest.approx(0.5)
        assert deriv == pytest.approx(8.0)

    def test_one_sided_slope_at_node(self):
        # at an interior node the element to the right provides the slope
        mesh = uniform_mesh(0.0, 1.0, 4)
        _, deriv = hat(mesh, 2, 0.5)
        assert deriv == pytest.approx(-4.0)
        # the last node uses the element to its left
        _, deriv = hat(mesh, 4, 1.0)
        assert deriv == pytest.approx(4.0)

    def test_index_out_of_range(self):
        mesh = uniform_mesh(0.0, 1.0, 4)
        with pytest.raises(IndexError):
            hat(mesh, 5, 0.5)

    def test_outside_domain(self):
        mesh = uniform_mesh(0.0, 1.0, 4)
        with pytest.raises(ValueError):
            hat(mesh, 0, -0.1)

    @pytest.mark.parametrize("nodes", [np.linspace(0, 1, 17), np.array([0.0, 0.07, 0.3, 0.55, 0.8, 1.0])])
    def test_partition_of_unity(self, nodes):
        mesh = Mesh(nodes)
        rng = np.random.default_rng(3)
        for x in rng.uniform(0.0, 1.0, 100):
            total = sum(hat(mesh, i, x)[0] for i in range(mesh.n + 1))
            assert abs(total - 1.0) <= 1e-14


class TestElementWeight:
    def test_vanishes_at_left_node(self):
        mesh = uniform_mesh(0.0, 1.0, 4)
        value, deriv = element_weight(mesh, 1, 0.25)
        assert value == 0.0
        assert deriv == pytest.approx(-0.25)  # w' = -h_k at the left node

    def test_parabola_vertex_at_midpoint(self):
        mesh = uniform_mesh(0.0, 1.0, 4)
        value, deriv = element_weight(mesh, 1, 0.375)
        assert value == pytest.approx(-0.25**2 / 4)
        assert deriv == pytest.approx(0.0, abs=1e-16)

    def test_plain_arithmetic(self):
        mesh = uniform_mesh(0.0, 1.0, 2)  # elements [0, 0.5], [0.5, 1]
        value, _ = element_weight(mesh, 0, 0.25)
        assert value == pytest.approx(-0.0625)

    def test_outside_element(self):
        mesh = uniform_mesh(0.0, 1.0, 4)
        with pytest.raises(ValueError):
            element_weight(mesh, 1, 0.6)


class TestModifiedTrial:
    def test_reduces_to_hat_for_constant_coefficients(self):
        problem = _make_problem(constant_field(2.0), constant_field(0.0),
                                ScalarField(lambda x: np.sin(3 * x)))
        mesh = uniform_mesh(0.0, 1.0, 5)
        rng = np.random.default_rng(11)
        for x in rng.uniform(0.0, 1.0, 50):
            for i in range(mesh.n + 1):
                pv, pd = hat(mesh, i, x)
                mv, md = modified_trial(problem, mesh, i, x)
                assert abs(mv - pv) <= 1e-15
                assert abs(md - pd) <= 1e-15 * max(1.0, abs(pd))

    def test_nodal_coincidence(self):
        """psi_i(x_j) = delta_ij: the weight kills every correction at nodes."""
        problem = _make_problem(
            ScalarField(np.exp, deriv=np.exp),
            ScalarField(lambda x: x**2, deriv=lambda x: 2.0 * x),
            ScalarField(lambda x: np.cos(x)),
        )
        mesh = uniform_mesh(0.0, 1.0, 6)
        for i in range(mesh.n + 1):
            for j in range(mesh.n + 1):
                value, _ = modified_trial(problem, mesh, i, float(mesh.nodes[j]))
                assert value == pytest.approx(1.0 if i == j else 0.0, abs=1e-14)

    def test_hand_evaluated_case(self):
        # beta = e^x so beta'/beta = 1; q = 0; element [0, 0.5], left hat at 0.25:
        # psi = 0.5 - (1/2)*1*(-0.0625)*(-2) = 0.4375, psi' = -2 (w' = 0 there)
        problem = _make_problem(ScalarField(np.exp, deriv=np.exp),
                                constant_field(0.0), constant_field(1.0))
        mesh = uniform_mesh(0.0, 1.0, 2)
        value, deriv = modified_trial(problem, mesh, 0, 0.25)
        assert value == pytest.approx(0.4375, abs=1e-12)
        assert deriv == pytest.approx(-2.0, abs=1e-9)

    def test_against_sympy_oracle(self):
        """Symbolic evaluation of the corrected trial function and its slope."""
        sympy = pytest.importorskip("sympy")
        x = sympy.Symbol("x")
        beta_s = 1 + x**2
        q_s = x**2
        xl, xr = sympy.Rational(1, 2), 1  # element [0.5, 1] of the 2-element mesh
        h = xr - xl
        w_s = (x - xl) * (x - xr)
        for i, phi_s in ((1, (xr - x) / h), (2, (x - xl) / h)):
            psi_s = (phi_s
                     - sympy.Rational(1, 2) * (sympy.diff(beta_s, x) / beta_s) * w_s * sympy.diff(phi_s, x)
                     + sympy.Rational(1, 2) * (q_s / beta_s) * w_s * phi_s)
            dpsi_s = sympy.diff(psi_s, x)
            problem = _make_problem(
                ScalarField(lambda t: 1.0 + t**2, deriv=lambda t: 2.0 * t),
                ScalarField(lambda t: t**2, deriv=lambda t: 2.0 * t),
                constant_field(1.0),
            )
            mesh = uniform_mesh(0.0, 1.0, 2)
            for xv in (0.55, 0.7, 0.9):
                value, deriv = modified_trial(problem, mesh, i, xv)
                assert value == pytest.approx(float(psi_s.subs(x, xv)), rel=1e-12)
                # slope tolerance covers the FD fallback used for (beta'/beta)'
                assert deriv == pytest.approx(float(dpsi_s.subs(x, xv)), rel=1e-8)

    def test_nonpositive_beta_rejected(self):
        problem = _make_problem(ScalarField(lambda x: x - 0.5 * np.ones_like(np.asarray(x, float))),
                                constant_field(0.0), constant_field(1.0))
        mesh = uniform_mesh(0.0, 1.0, 4)
        with pytest.raises(CoercivityError):
            modified_trial(problem, mesh, 1, 0.3)


class TestBubble:
    def test_zero_source_gives_zero(self):
        problem = _make_problem(constant_field(1.0), constant_field(0.0), constant_field(0.0))
        mesh = uniform_mesh(0.0, 1.0, 4)
        for x in (0.3, 0.301, 0.42):
            assert bubble(problem, mesh, 1, x) == (0.0, 0.0)

    def test_midpoint_value(self):
        # beta = 1, f = 1 on element [0, 1]: -1/2 * w(1/2) = 0.125, slope 0
        problem = _make_problem(constant_field(1.0), constant_field(0.0), constant_field(1.0),
                                domain=(0.0, 2.0))
        mesh = uniform_mesh(0.0, 2.0, 2)
        value, deriv = bubble(problem, mesh, 0, 0.5)
        assert value == pytest.approx(0.125)
        assert deriv == pytest.approx(0.0, abs=1e-12)

    def test_endpoint_derivative(self):
        # at the left node: value 0, slope -1/2 (f/beta) w' with w' = -h_k
        problem = _make_problem(constant_field(2.0), constant_field(0.0),
                                ScalarField(lambda x: np.cos(x), deriv=lambda x: -np.sin(x)))
        mesh = uniform_mesh(0.0, 1.0, 4)
        xl = 0.25
        value, deriv = bubble(problem, mesh, 1, xl)
        assert value == 0.0
        assert deriv == pytest.approx(0.5 * (np.cos(xl) / 2.0) * 0.25, rel=1e-12)

    def test_outside_element_rejected(self):
        problem = _make_problem(constant_field(1.0), constant_field(0.0), constant_field(1.0))
        mesh = uniform_mesh(0.0, 1.0, 4)
        with pytest.raises(ValueError):
            bubble(problem, mesh, 0, 0.9)


def test_interpolation_identity_third_order():
    """max |u - u_I - w u''/2| over sample points drops at third order."""
    u, d2u = np.sin, lambda x: -np.sin(x)
    residuals = []
    sizes = (8, 16, 32, 64)
    for n in sizes:
        mesh = uniform_mesh(0.0, 1.0, n)
        nodes = mesh.nodes
        worst = 0.0
        for k in range(n):
            xs = np.linspace(nodes[k], nodes[k + 1], 12)
            ui = u(3 * nodes[k]) + (u(3 * nodes[k + 1]) - u(3 * nodes[k])) * (
                xs - nodes[k]) / (nodes[k + 1] - nodes[k])
            w = (xs - nodes[k]) * (xs - nodes[k + 1])
            res = u(3 * xs) - ui - 0.5 * w * 9.0 * d2u(3 * xs)
            worst = max(worst, float(np.max(np.abs(res))))
        residuals.append(worst)
    orders = [np.log2(a / b) for a, b in zip(residuals, residuals[1:])]
    assert min(orders) >= 2.9
