from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from cubica.algebra import Poly, PolyMap
from cubica.connection import form_to_connection, free_connection
from cubica.cubical import SingularCube
from cubica.errors import DimensionError, UnsupportedTargetError
from cubica.forms import ClassicalForm, eval_comb, generic_pipe, pullback, theta_hat, vol
from cubica.holonomy import (
    IntegrationStep,
    boundary_functional,
    check_boundary_additivity,
    check_holonomy_additivity,
    check_integration_orders,
    check_pipe_shell,
    holonomy_cell,
    holonomy_of_pipe,
    integrate_along_pipe,
    integrate_form,
    verify_pipe_integral,
    verify_stokes,
    verify_subdivision_and_alternation,
)
from tests.oracle import to_sympy, unit_cube_integral
from tests.strategies import cubes, forms, parameters, points

X1, X2 = Poly.variable(2, 1), Poly.variable(2, 2)
X1_DX2 = ClassicalForm(2, 1, {(2,): X1})
IDENTITY_SQUARE = SingularCube.identity(2)


def all_pass(results):
    return all(result.passed for result in results)


class TestIntegrals:
    def test_x1_over_the_unit_square(self):
        result = integrate_form(ClassicalForm(2, 2, {(1, 2): X1}), IDENTITY_SQUARE)
        assert result.value == Fraction(1, 2)
        assert str(result) == "1/2"

    def test_constant_density(self):
        assert integrate_form(ClassicalForm.volume(2) * 3, IDENTITY_SQUARE).value == 3

    def test_trace_records_each_antiderivative(self):
        result = integrate_form(ClassicalForm(2, 2, {(1, 2): X1}), IDENTITY_SQUARE)
        assert result.order == (1, 2)
        assert [step.variable for step in result.trace] == [1, 2]
        assert result.trace[0].primitive == X1 * X1 * Fraction(1, 2)
        assert result.trace[0].result == Fraction(1, 2)
        assert result.replay() == result.value
        assert result.step_failures() == []

    def test_tampered_trace_does_not_replay(self):
        result = integrate_form(ClassicalForm(2, 2, {(1, 2): X1}), IDENTITY_SQUARE)
        step = result.trace[0]
        result.trace[0] = IntegrationStep(step.variable, step.integrand, step.primitive * 2, step.result)
        assert result.step_failures() == [0]
        assert result.replay() is None

    def test_wrong_bounds_are_caught(self):
        result = integrate_form(ClassicalForm(2, 2, {(1, 2): X1 * X2}), IDENTITY_SQUARE)
        last = result.trace[1]
        result.trace[1] = IntegrationStep(last.variable, last.integrand, last.primitive, last.result + 1)
        assert result.step_failures() == [1]

    def test_trace_must_follow_the_order(self):
        result = integrate_form(ClassicalForm.volume(2), IDENTITY_SQUARE)
        result.order = (2, 1)
        assert result.step_failures() == [2]

    @given(forms(2, 2, poly_degree=2), cubes(2, 2))
    def test_matches_sympy(self, omega, f):
        density = theta_hat(pullback(f.map, omega))
        xs = sympy.symbols("x1:3")
        assert integrate_form(omega, f).value == unit_cube_integral(to_sympy(density, xs), xs)

    @given(forms(3, 1), cubes(1, 3))
    def test_line_integrals(self, omega, f):
        assert check_integration_orders(omega, f).passed

    @given(forms(2, 2, poly_degree=1), cubes(2, 2))
    def test_orders_agree(self, omega, f):
        assert check_integration_orders(omega, f).passed

    def test_points(self):
        f = SingularCube(PolyMap(0, [Poly.constant(0, 2), Poly.constant(0, 3)]))
        assert integrate_form(ClassicalForm(2, 0, {(): X1 * X2}), f).value == 6

    def test_degree_must_match(self):
        with pytest.raises(DimensionError):
            integrate_form(X1_DX2, IDENTITY_SQUARE)
        with pytest.raises(DimensionError):
            integrate_form(ClassicalForm.volume(2), IDENTITY_SQUARE, order=[1, 1])


class TestSubdivisionAndAlternation:
    @given(forms(2, 2), cubes(2, 2), st.integers(min_value=1, max_value=2), parameters())
    def test_squares(self, omega, f, i, s):
        assert all_pass(verify_subdivision_and_alternation(omega, f, i, s))

    @given(forms(3, 1), cubes(1, 3), parameters())
    def test_paths(self, omega, f, s):
        assert all_pass(verify_subdivision_and_alternation(omega, f, 1, s))

    def test_reversion_flips_the_sign(self):
        omega = ClassicalForm(2, 2, {(1, 2): X1})
        assert integrate_form(omega, IDENTITY_SQUARE.reversion(1)).value == Fraction(-1, 2)


class TestStokes:
    def test_worked_example(self):
        results = {r.case: r for r in verify_stokes(X1_DX2, IDENTITY_SQUARE)}
        assert results["stokes"].passed
        assert results["stokes"].lhs == "-1/1"
        assert boundary_functional(X1_DX2, IDENTITY_SQUARE) == -1
        assert all_pass(results.values())

    @given(forms(2, 1), cubes(2, 2))
    def test_squares(self, omega, f):
        assert all_pass(verify_stokes(omega, f))

    @given(forms(3, 2, poly_degree=1), cubes(3, 3, degree=1))
    def test_cubes(self, omega, f):
        assert all_pass(verify_stokes(omega, f))

    @given(forms(2, 0, poly_degree=3), cubes(1, 2))
    def test_functions_along_paths(self, omega, f):
        assert all_pass(verify_stokes(omega, f))

    @given(forms(2, 1), cubes(2, 2), st.integers(min_value=1, max_value=2), parameters())
    def test_boundary_is_additive(self, omega, f, i, s):
        assert check_boundary_additivity(omega, f, i, s).passed

    def test_boundary_needs_one_dimension_more(self):
        with pytest.raises(DimensionError):
            boundary_functional(ClassicalForm.volume(2), IDENTITY_SQUARE)

    @given(forms(2, 1), points(2))
    def test_pipe_faces_make_up_the_formal_curvature(self, omega, base):
        assert check_pipe_shell(omega, generic_pipe(2, 2, base=base)).passed

    def test_worked_pipe_shell(self):
        result = check_pipe_shell(X1_DX2, generic_pipe(2, 2, base=[0, 0]))
        assert result.passed
        assert result.case == "pipe-shell"

    def test_pipe_shell_needs_one_dimension_more(self):
        with pytest.raises(DimensionError):
            check_pipe_shell(X1_DX2, generic_pipe(2, 1, base=[0, 0]))


class TestPipeIntegrals:
    def test_volume_form(self):
        P = generic_pipe(2, 2, base=[1, 2])
        assert integrate_along_pipe(ClassicalForm.volume(2), P).value == vol(P)

    @given(forms(2, 1, poly_degree=3), points(2))
    def test_one_forms(self, omega, base):
        assert verify_pipe_integral(omega, generic_pipe(2, 1, base=base)).passed

    @given(forms(2, 2), points(2))
    def test_two_forms(self, omega, base):
        assert verify_pipe_integral(omega, generic_pipe(2, 2, base=base)).passed

    def test_symbolic_base_is_rejected(self):
        with pytest.raises(DimensionError):
            integrate_along_pipe(X1_DX2, generic_pipe(2, 1))

    def test_point(self):
        P = generic_pipe(2, 0, base=[3, 1])
        omega = ClassicalForm(2, 0, {(): X1})
        assert integrate_along_pipe(omega, P).value == eval_comb(omega, P)


class TestHolonomy:
    @given(forms(2, 1), cubes(1, 2), parameters())
    def test_paths_compose(self, omega, f, s):
        assert check_holonomy_additivity(form_to_connection(omega), f, 1, s).passed

    @given(forms(2, 2, poly_degree=1), cubes(2, 2), st.integers(min_value=1, max_value=2), parameters())
    def test_squares_compose(self, omega, f, i, s):
        assert check_holonomy_additivity(form_to_connection(omega), f, i, s).passed

    @given(forms(2, 2), points(2))
    def test_agrees_with_the_connection_on_pipes(self, omega, base):
        connection = form_to_connection(omega)
        P = generic_pipe(2, 2, base=base)
        assert holonomy_of_pipe(connection, P) == connection(P)

    def test_cells_below_the_top_carry_no_value(self):
        connection = form_to_connection(ClassicalForm.volume(2))
        path = SingularCube(PolyMap(1, [Poly.variable(1, 1), Poly.zero(1)]))
        cell = holonomy_cell(connection, path)
        assert cell.value is None
        assert len(cell.vertices) == 2

    def test_cube_above_the_dimension(self):
        with pytest.raises(DimensionError):
            holonomy_cell(form_to_connection(X1_DX2), IDENTITY_SQUARE)

    def test_free_connection_has_no_holonomy(self):
        with pytest.raises(UnsupportedTargetError):
            holonomy_cell(free_connection(2), IDENTITY_SQUARE)
