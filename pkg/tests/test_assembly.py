import numpy as np
import pytest

from slfem.assembly import apply_boundary, assemble_classical, assemble_compact
from slfem.basis import bubble, hat, modified_trial
from slfem.geometry import gauss_legendre, integrate_element, uniform_mesh
from slfem.problem import (
    BoundaryCondition,
    ProblemSpec,
    ScalarField,
    catalog_poisson,
    catalog_variable,
    constant_field,
)
from slfem.solve import thomas_solve


def _problem(beta, q, f, bc_left=None, bc_right=None):
    return ProblemSpec(
        domain=(0.0, 1.0), beta=beta, q=q, f=f,
        bc_left=bc_left or BoundaryCondition.dirichlet(),
        bc_right=bc_right or BoundaryCondition.dirichlet(),
    )


class TestClassical:
    def test_laplace_stencil(self):
        n = 8
        problem = _problem(constant_field(1.0), constant_field(0.0), constant_field(1.0))
        system = assemble_classical(problem, uniform_mesh(0.0, 1.0, n))
        h = 1.0 / n
        np.testing.assert_allclose(system.diag, 2.0 / h, rtol=1e-13)
        np.testing.assert_allclose(system.sub, -1.0 / h, rtol=1e-13)
        np.testing.assert_allclose(system.sup, -1.0 / h, rtol=1e-13)

    def test_mass_contribution(self):
        n = 8
        problem = _problem(constant_field(1.0), constant_field(1.0), constant_field(1.0))
        system = assemble_classical(problem, uniform_mesh(0.0, 1.0, n))
        h = 1.0 / n
        np.testing.assert_allclose(system.diag, 2.0 / h + 2.0 * h / 3.0, rtol=1e-13)
        np.testing.assert_allclose(system.sup, -1.0 / h + h / 6.0, rtol=1e-13)

    def test_zero_source_zero_load(self):
        problem = _problem(constant_field(2.0), constant_field(1.0), constant_field(0.0))
        system = assemble_classical(problem, uniform_mesh(0.0, 1.0, 6))
        np.testing.assert_array_equal(system.rhs, 0.0)

    def test_symmetry(self):
        problem = catalog_variable(5 * np.pi, 0.0)
        system = assemble_classical(problem, uniform_mesh(0.0, 1.0, 16))
        scale = np.max(np.abs(system.diag))
        np.testing.assert_allclose(system.sub, system.sup, atol=1e-13 * scale)

    @pytest.mark.parametrize("n", [4, 8, 16])
    def test_positive_definite_leading_minors(self, n):
        problem = catalog_variable(np.pi, 0.0)
        dense = assemble_classical(problem, uniform_mesh(0.0, 1.0, n)).dense()
        for k in range(1, dense.shape[0] + 1):
            assert np.linalg.det(dense[:k, :k]) > 0.0

    def test_deterministic(self):
        problem = catalog_poisson(5 * np.pi)
        mesh = uniform_mesh(0.0, 1.0, 32)
        a = assemble_classical(problem, mesh)
        b = assemble_classical(problem, mesh)
        for name in ("sub", "diag", "sup", "rhs"):
            np.testing.assert_array_equal(getattr(a, name), getattr(b, name))

    def test_mesh_domain_mismatch_rejected(self):
        problem = catalog_poisson(np.pi)
        with pytest.raises(ValueError):
            assemble_classical(problem, uniform_mesh(0.0, 2.0, 8))


class TestCompact:
    def test_reduces_to_classical_for_constant_coefficients(self):
        problem = _problem(constant_field(3.0), constant_field(0.0),
                           ScalarField(lambda x: np.sin(5 * np.pi * x),
                                       deriv=lambda x: 5 * np.pi * np.cos(5 * np.pi * x)))
        mesh = uniform_mesh(0.0, 1.0, 8)
        classical = assemble_classical(problem, mesh)
        compact = assemble_compact(problem, mesh)
        for name in ("sub", "diag", "sup", "rhs"):
            got, want = getattr(compact, name), getattr(classical, name)
            scale = np.max(np.abs(want)) + 1e-300
            np.testing.assert_allclose(got, want, atol=1e-13 * scale)

    def test_symmetric_despite_differing_trial_and_test_spaces(self):
        """The antisymmetric part of the trial correction integrates (q w)'
        against the constant hat Wronskian, and w vanishes at element
        endpoints, so the system is symmetric for any beta and q."""
        for problem in (
            _problem(ScalarField(np.exp, deriv=np.exp), constant_field(0.0), constant_field(1.0)),
            catalog_variable(np.pi, 0.0),
        ):
            system = assemble_compact(problem, uniform_mesh(0.0, 1.0, 4))
            scale = np.max(np.abs(system.diag))
            np.testing.assert_allclose(system.sub, system.sup, atol=1e-13 * scale)

    def test_matrix_against_direct_quadrature_oracle(self):
        """Dense assembly from the pointwise evaluators must match the bands.

        The oracle integrates beta psi_j' phi_i' + q psi_j phi_i directly with
        a 16-point rule, while assembly uses the integrated-by-parts form on 5
        points, so agreement checks both the algebra and the identity.
        """
        problem = catalog_variable(np.pi, 0.0)
        n = 6
        mesh = uniform_mesh(0.0, 1.0, n)
        system = assemble_compact(problem, mesh, apply_bc=False)
        rule = gauss_legendre(16)

        dense = np.zeros((n + 1, n + 1))
        for i in range(n + 1):
            for j in range(n + 1):
                total = 0.0
                for k in range(n):
                    a, b = mesh.element(k)

                    def integrand(x, i=i, j=j):
                        pv, pd = hat(mesh, i, x)
                        tv, td = modified_trial(problem, mesh, j, x)
                        bx = float(problem.beta.sample(x))
                        qx = float(problem.q.sample(x))
                        return bx * td * pd + qx * tv * pv

                    total += integrate_element(rule, a, b, integrand)
                dense[i, j] = total

        banded = system.dense()
        scale = np.max(np.abs(banded))
        np.testing.assert_allclose(banded, dense, atol=1e-9 * scale)
        # compact support forces tridiagonality: no fill beyond the bands
        fill = dense - np.triu(np.tril(dense, 1), -1)
        assert np.max(np.abs(fill)) <= 1e-12 * scale

    def test_load_against_direct_bubble_oracle(self):
        """rhs_i = int f phi_i - int(beta bubble' phi_i' + q bubble phi_i).

        The oracle uses the bubble evaluator's direct derivative; assembly
        moved that term to -int(beta' bubble phi_i') by parts (the weight
        vanishes at element endpoints), so this pins the identity numerically.
        """
        problem = catalog_variable(np.pi, 0.0)
        n = 6
        mesh = uniform_mesh(0.0, 1.0, n)
        system = assemble_compact(problem, mesh, apply_bc=False)
        rule = gauss_legendre(16)

        want = np.zeros(n + 1)
        for i in range(n + 1):
            total = 0.0
            for k in range(n):
                a, b = mesh.element(k)

                def integrand(x, i=i, k=k):
                    pv, pd = hat(mesh, i, x)
                    bv, bd = bubble(problem, mesh, k, x)
                    bx = float(problem.beta.sample(x))
                    qx = float(problem.q.sample(x))
                    return float(problem.f.sample(x)) * pv - bx * bd * pd - qx * bv * pv

                total += integrate_element(rule, a, b, integrand)
            want[i] = total

        scale = np.max(np.abs(want))
        np.testing.assert_allclose(system.rhs, want, atol=1e-9 * scale)


class TestApplyBoundary:
    def test_dirichlet_both_eliminates_endpoints(self):
        problem = catalog_poisson(np.pi)
        n = 8
        system = assemble_classical(problem, uniform_mesh(0.0, 1.0, n))
        assert system.m == n - 1

    def test_neumann_both_keeps_all_nodes(self):
        problem = _problem(constant_field(1.0), constant_field(1.0), constant_field(1.0),
                           bc_left=BoundaryCondition.neumann(0.0),
                           bc_right=BoundaryCondition.neumann(0.0))
        n = 8
        system = assemble_classical(problem, uniform_mesh(0.0, 1.0, n))
        assert system.m == n + 1

    def test_nonhomogeneous_dirichlet_moves_data_to_rhs(self):
        # beta = 1, q = 0, f = 0, u(0) = 2: first interior row gains 2/h
        n = 4
        problem = _problem(constant_field(1.0), constant_field(0.0), constant_field(0.0),
                           bc_left=BoundaryCondition.dirichlet(2.0))
        system = assemble_classical(problem, uniform_mesh(0.0, 1.0, n))
        h = 1.0 / n
        np.testing.assert_allclose(system.rhs, [2.0 / h, 0.0, 0.0], atol=1e-14 / h)

    def test_elimination_matches_dense_bc_rows_oracle(self):
        """Replace boundary rows with identity equations in a dense solve."""
        n = 4
        problem = _problem(
            ScalarField(lambda x: 1.0 + x, deriv=lambda x: np.ones_like(x)),
            ScalarField(lambda x: 1.0 + x**2, deriv=lambda x: 2.0 * x),
            ScalarField(lambda x: np.sin(2.0 * x), deriv=lambda x: 2.0 * np.cos(2.0 * x)),
            bc_left=BoundaryCondition.dirichlet(2.0),
            bc_right=BoundaryCondition.dirichlet(-1.0),
        )
        mesh = uniform_mesh(0.0, 1.0, n)
        full = assemble_classical(problem, mesh, apply_bc=False)
        dense = full.dense()
        rhs = full.rhs.copy()
        dense[0, :] = 0.0
        dense[0, 0] = 1.0
        rhs[0] = 2.0
        dense[-1, :] = 0.0
        dense[-1, -1] = 1.0
        rhs[-1] = -1.0
        want = np.linalg.solve(dense, rhs)

        reduced = apply_boundary(full, problem)
        got = thomas_solve(reduced)
        np.testing.assert_allclose(got, want[1:-1], rtol=1e-12)

    def test_robin_adds_diagonal_term(self):
        base = _problem(constant_field(1.0), constant_field(1.0), constant_field(1.0),
                        bc_left=BoundaryCondition.neumann(0.0),
                        bc_right=BoundaryCondition.neumann(0.0))
        robin = _problem(constant_field(1.0), constant_field(1.0), constant_field(1.0),
                         bc_left=BoundaryCondition.robin(3.0, 0.5),
                         bc_right=BoundaryCondition.neumann(0.0))
        mesh = uniform_mesh(0.0, 1.0, 4)
        s0 = assemble_classical(base, mesh)
        s1 = assemble_classical(robin, mesh)
        assert s1.diag[0] - s0.diag[0] == pytest.approx(3.0)
        assert s1.rhs[0] - s0.rhs[0] == pytest.approx(1.5)
