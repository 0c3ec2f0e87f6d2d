import math

import numpy as np
import pytest

from bubblefem import (
    BoundaryCondition,
    EnrichmentKind,
    IllPosedProblemError,
    LINEAR,
    Mesh1D,
    QUADRATIC_BUBBLE,
    SolutionField,
    SteadyProblem,
    TransientProblem,
    TransportCoefficients,
    eval_field,
    polynomial_bubble,
    uniform_mesh,
)


class TestTransportCoefficients:
    def test_stores_signed_values(self):
        c = TransportCoefficients(-0.01, 0.0, 1.0)
        assert (c.epsilon, c.kappa, c.lambda_) == (-0.01, 0.0, 1.0)

    def test_rejects_null_operator(self):
        with pytest.raises(ValueError):
            TransportCoefficients(0.0, 0.0, 0.0)

    @pytest.mark.parametrize("bad", [math.nan, math.inf])
    def test_rejects_non_finite(self, bad):
        with pytest.raises(ValueError):
            TransportCoefficients(bad, 0.0, 1.0)


class TestBoundaryCondition:
    def test_factories(self):
        assert BoundaryCondition.dirichlet(1.5).is_dirichlet
        assert not BoundaryCondition.neumann_flux(0.0).is_dirichlet

    def test_rejects_non_finite(self):
        with pytest.raises(ValueError):
            BoundaryCondition.dirichlet(math.inf)


class TestEnrichmentKind:
    def test_aliases(self):
        assert QUADRATIC_BUBBLE == polynomial_bubble(2)
        assert EnrichmentKind(3).bubble_count == 2
        assert LINEAR.bubble_count == 0

    def test_validation(self):
        with pytest.raises(ValueError):
            EnrichmentKind(0)
        with pytest.raises(ValueError):
            polynomial_bubble(1)


class TestUniformMesh:
    def test_benchmark_grid(self):
        mesh = uniform_mesh(0.0, 10.0, 50)
        assert mesh.nodes.size == 51
        # lengths equal up to round-off at the node magnitude
        assert mesh.lengths == pytest.approx(np.full(50, 0.2), abs=4 * np.spacing(10.0))

    def test_two_element_benchmark(self):
        mesh = uniform_mesh(0.0, math.pi, 2)
        assert mesh.nodes == pytest.approx([0.0, math.pi / 2, math.pi], abs=0)

    def test_single_element(self):
        assert uniform_mesh(0.0, 1.0, 1).nodes.tolist() == [0.0, 1.0]

    def test_arguments(self):
        with pytest.raises(ValueError):
            uniform_mesh(0.0, 1.0, 0)
        with pytest.raises(ValueError):
            uniform_mesh(1.0, 0.0, 4)


class TestMesh1D:
    def test_rejects_unsorted(self):
        with pytest.raises(ValueError):
            Mesh1D([0.0, 2.0, 1.0])
        with pytest.raises(ValueError):
            Mesh1D([0.0, 0.0, 1.0])
        with pytest.raises(ValueError):
            Mesh1D([1.0])

    def test_nonuniform_lengths(self):
        mesh = Mesh1D([0.0, 0.1, 0.5, 2.0])
        assert mesh.lengths == pytest.approx([0.1, 0.4, 1.5])
        assert mesh.element_index(0.05) == 0
        assert mesh.element_index(2.0) == 2
        with pytest.raises(ValueError):
            mesh.element_index(-0.1)


class TestProblems:
    def test_steady_needs_a_dirichlet_end(self):
        coeffs = TransportCoefficients(-1.0, 0.0, 1.0)
        with pytest.raises(IllPosedProblemError):
            SteadyProblem(
                coefficients=coeffs,
                domain=(0.0, 1.0),
                bc_left=BoundaryCondition.neumann_flux(0.0),
                bc_right=BoundaryCondition.neumann_flux(1.0),
            )

    def test_steady_domain_ordering(self):
        coeffs = TransportCoefficients(-1.0, 0.0, 1.0)
        with pytest.raises(ValueError):
            SteadyProblem(
                coefficients=coeffs,
                domain=(1.0, 0.0),
                bc_left=BoundaryCondition.dirichlet(0.0),
                bc_right=BoundaryCondition.dirichlet(0.0),
            )

    def test_transient_profile_must_vanish_at_ends(self):
        with pytest.raises(ValueError):
            TransientProblem(epsilon=-1.0, domain=(0.0, math.pi), initial_profile=math.cos)
        TransientProblem(epsilon=-1.0, domain=(0.0, math.pi), initial_profile=math.sin)


def two_element_field(bubble_value=None):
    mesh = uniform_mesh(0.0, math.pi, 2)
    if bubble_value is None:
        return SolutionField(mesh, [0.0, 1.0, 0.0], LINEAR)
    coeffs = np.full((2, 1), bubble_value)
    return SolutionField(mesh, [0.0, 1.0, 0.0], QUADRATIC_BUBBLE, coeffs)


class TestEvalField:
    def test_linear_interpolant(self):
        field = two_element_field()
        assert eval_field(field, math.pi / 16) == pytest.approx(0.125)

    def test_quadratic_bubble_profile(self):
        field = two_element_field(bubble_value=0.206)
        assert eval_field(field, math.pi / 16) == pytest.approx(0.180, abs=1e-3)

    def test_nodal_values_exact(self):
        field = two_element_field(bubble_value=0.73)
        for x, expected in zip(field.mesh.nodes, field.nodal_values):
            assert eval_field(field, float(x)) == expected

    def test_continuity_at_interior_nodes(self):
        field = two_element_field(bubble_value=-1.4)
        x = math.pi / 2
        left = eval_field(field, np.nextafter(x, 0.0))
        right = eval_field(field, np.nextafter(x, math.pi))
        assert left == pytest.approx(right, abs=1e-13)
        assert left == pytest.approx(field.nodal_values[1], abs=1e-13)

    def test_domain_error(self):
        field = two_element_field()
        with pytest.raises(ValueError):
            eval_field(field, -0.01)
        with pytest.raises(ValueError):
            eval_field(field, math.pi + 0.01)

    def test_shape_validation(self):
        mesh = uniform_mesh(0.0, 1.0, 2)
        with pytest.raises(ValueError):
            SolutionField(mesh, [0.0, 1.0])
        with pytest.raises(ValueError):
            SolutionField(mesh, [0.0, 1.0, 0.0], QUADRATIC_BUBBLE, np.zeros((2, 2)))
