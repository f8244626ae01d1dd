import pytest
from hypothesis import given

from cubica.algebra import Poly
from cubica.connection import (
    Connection,
    check_curvature_is_coboundary,
    check_round_trips,
    connection_to_form,
    curvature,
    formal_curvature,
    form_to_connection,
    free_connection,
    gauge_connection,
    is_flat_at,
    validate_morphism,
    verify_bianchi,
)
from cubica.cubical import Shell
from cubica.errors import CompositionError, DimensionError, UnsupportedTargetError
from cubica.forms import ClassicalForm, d_cubical, generic_pipe
from cubica.groupoid import ConstantGroupoid
from tests.strategies import forms


def all_pass(results):
    return all(result.passed for result in results)


class TestFormConnections:
    @given(forms(3, 1))
    def test_one_form_round_trip(self, omega):
        assert connection_to_form(form_to_connection(omega)) == omega
        assert all_pass(check_round_trips(omega))

    @given(forms(3, 2, poly_degree=1))
    def test_two_form_round_trip(self, omega):
        assert all_pass(check_round_trips(omega))

    @given(forms(2, 1))
    def test_is_a_morphism(self, omega):
        assert all_pass(validate_morphism(form_to_connection(omega)))

    @given(forms(3, 2, poly_degree=1))
    def test_two_form_is_a_morphism(self, omega):
        assert all_pass(validate_morphism(form_to_connection(omega)))

    def test_values_on_pipes(self):
        omega = ClassicalForm.volume(2)
        connection = form_to_connection(omega)
        P = generic_pipe(2, 2, base=[0, 0])
        cell = connection(P)
        assert cell.value == omega(P)
        assert cell.vertices == tuple(P.vertices())
        assert connection(generic_pipe(2, 1)).value is None

    def test_points_map_to_themselves(self):
        connection = form_to_connection(ClassicalForm.volume(2))
        P = generic_pipe(2, 0, base=[1, 2])
        assert connection(P) == P.base

    def test_positive_degree(self):
        with pytest.raises(DimensionError):
            form_to_connection(ClassicalForm(2, 0, {(): 1}))

    def test_pipe_above_the_dimension(self):
        connection = form_to_connection(ClassicalForm(2, 1, {(1,): 1}))
        with pytest.raises(DimensionError):
            connection(generic_pipe(2, 2))

    def test_validation_rejects_non_morphisms(self):
        M = ConstantGroupoid(1)
        with pytest.raises(CompositionError):
            Connection(1, M, lambda P: M.cell(P.vertices(), 1), 2, name="constant one", validate=True)

    def test_dimension_must_be_positive(self):
        with pytest.raises(DimensionError):
            Connection(0, ConstantGroupoid(1), lambda P: None, 2)


class TestCurvature:
    @given(forms(3, 1))
    def test_curvature_is_the_coboundary(self, omega):
        assert check_curvature_is_coboundary(form_to_connection(omega)).passed

    def test_formal_curvature_is_a_shell(self):
        connection = form_to_connection(ClassicalForm(2, 1, {(2,): 1}))
        hat = formal_curvature(connection)
        P = generic_pipe(2, 2)
        assert isinstance(hat(P), Shell)
        assert hat.dimension == 2
        assert hat(generic_pipe(2, 1)) == connection(generic_pipe(2, 1))

    def test_closed_forms_are_flat(self):
        exact = ClassicalForm(2, 1, {(1,): 1, (2,): 1})
        assert is_flat_at(form_to_connection(exact), generic_pipe(2, 2))

    def test_worked_curvature(self):
        omega = ClassicalForm(2, 1, {(2,): Poly.variable(2, 1)})
        P = generic_pipe(2, 2, base=[0, 0])
        e = P.base.context.generator
        element = curvature(form_to_connection(omega))(P).element
        assert element == d_cubical(omega)(P)
        assert element == e(1, 1) * e(2, 2) * -2

    def test_curvature_needs_one_dimension_more(self):
        kappa = curvature(form_to_connection(ClassicalForm(2, 1, {(2,): 1})))
        with pytest.raises(DimensionError):
            kappa(generic_pipe(2, 1))

    def test_free_connection_is_not_flat(self):
        connection = free_connection(2)
        kappa = curvature(connection)(generic_pipe(2, 2))
        assert not kappa.element.is_identity()
        assert kappa.element.source == kappa.element.target == kappa.base

    def test_gauge_connection_is_flat(self):
        assert is_flat_at(gauge_connection(2), generic_pipe(2, 2))

    def test_free_connection_has_no_form(self):
        with pytest.raises(UnsupportedTargetError):
            connection_to_form(free_connection(2))

    def test_free_connection_is_a_morphism(self):
        assert all_pass(validate_morphism(free_connection(2)))

    def test_free_connection_registers_generators_once(self):
        connection = free_connection(2)
        assert connection.target.edges == {}
        P = generic_pipe(2, 1, base=[0, 1])
        arrow = connection(P)
        assert len(connection.target.edges) == 1
        assert connection(P) == arrow
        assert connection(P.reversion(1)) == arrow.inverse()
        assert len(connection.target.edges) == 1
        assert connection(generic_pipe(2, 0, base=[0, 1]).degeneracy(1)).is_identity()
        assert len(connection.target.edges) == 1


class TestBianchi:
    @pytest.mark.parametrize("make", [free_connection, gauge_connection])
    def test_free_targets(self, make):
        results = verify_bianchi(make(3))
        assert [r.case for r in results] == ["cube-word", "cube-regrouped"]
        assert all_pass(results)

    @given(forms(3, 1))
    def test_one_forms(self, omega):
        assert all_pass(verify_bianchi(form_to_connection(omega)))

    @pytest.mark.slow
    def test_two_forms_in_four_dimensions(self):
        omega = ClassicalForm(4, 2, {(1, 2): Poly.variable(4, 3) * Poly.variable(4, 4)})
        assert all_pass(verify_bianchi(form_to_connection(omega)))

    def test_needs_room(self):
        with pytest.raises(DimensionError):
            verify_bianchi(free_connection(2))
