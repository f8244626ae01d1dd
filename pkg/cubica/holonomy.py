"""Exact integration of forms over polynomial cubes, and holonomy in M_n(Q).

The integral of an n-form over f: R^n -> R^m is the iterated unit integral
of the density of f*(omega).  Integrals of faces assemble into the boundary
functional, and the two sides of Stokes' theorem are compared exactly.
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations
from typing import Any, List, Optional, Sequence, Tuple, Union

from cubica.algebra import (
    Poly,
    Scalar,
    as_fraction,
    determinant,
    format_value,
    partial_derivative,
    poly_eval_in_algebra,
)
from cubica.algebra import antiderivative as poly_antiderivative
from cubica.connection import Connection, form_to_connection, formal_curvature
from cubica.cubical import Pipe, Shell, SingularCube, is_subdivision, pipe_face, subdivide
from cubica.errors import DimensionError, UnsupportedTargetError
from cubica.forms import CLASSICAL_SCALE, ClassicalForm, d_classical, eval_comb, pullback, theta_hat
from cubica.groupoid import AdditiveGroup, ConstantGroupoid, fold_value
from cubica.models import CheckResult
from cubica.weil import InfPoint, Simplex, WeilContext, WeilElement

logger = logging.getLogger(__name__)

Integrand = Union[Poly, WeilElement]


@dataclass(frozen=True)
class IntegrationStep:
    variable: int
    integrand: Integrand
    primitive: Integrand
    result: Integrand


@dataclass
class IntegralResult:
    value: Any
    integrand: Optional[Integrand] = None
    order: Tuple[int, ...] = ()
    trace: List[IntegrationStep] = field(default_factory=list)

    def step_failures(self) -> List[int]:
        """Positions of recorded steps that do not re-derive from the step before them"""
        failures = []
        current = self.integrand
        for position, step in enumerate(self.trace):
            primitive = _map_integrand(step.integrand, lambda p: poly_antiderivative(p, step.variable))
            if step.integrand != current or primitive != step.primitive:
                failures.append(position)
            elif _unit_bounds(primitive, step.variable) != step.result:
                failures.append(position)
            current = step.result
        if tuple(step.variable for step in self.trace) != self.order:
            failures.append(len(self.trace))
        return failures

    def replay(self) -> Any:
        """The value read off the recorded steps, or None when the trace does not re-derive"""
        if self.integrand is None:
            return self.value
        if self.step_failures():
            return None
        return _constant(self.trace[-1].result if self.trace else self.integrand)

    def __str__(self) -> str:
        return format_value(self.value)


def _map_integrand(integrand: Integrand, fn) -> Integrand:
    if isinstance(integrand, WeilElement):
        return integrand.map_coefficients(lambda c: fn(c) if isinstance(c, Poly) else c)
    return fn(integrand)


def _unit_bounds(primitive: Integrand, var: int) -> Integrand:
    return _map_integrand(primitive, lambda p: p.substitute(var, 1) - p.substitute(var, 0))


def _constant(integrand: Integrand) -> Any:
    if isinstance(integrand, WeilElement):
        return integrand.map_coefficients(lambda c: c.constant_value() if isinstance(c, Poly) else c)
    return integrand.constant_value()


def iterate_unit_integral(integrand: Integrand, order: Sequence[int]) -> IntegralResult:
    """Integrate over the unit cube one variable at a time, recording each antiderivative"""
    trace = []
    current = integrand
    for var in order:
        primitive = _map_integrand(current, lambda p: poly_antiderivative(p, var))
        result = _unit_bounds(primitive, var)
        trace.append(IntegrationStep(var, current, primitive, result))
        current = result
    return IntegralResult(_constant(current), integrand, tuple(order), trace)


def _order(n: int, order: Optional[Sequence[int]]) -> Tuple[int, ...]:
    order = tuple(range(1, n + 1)) if order is None else tuple(order)
    if sorted(order) != list(range(1, n + 1)):
        raise DimensionError(f"Integration order {order} is not a permutation of 1..{n}")
    return order


def integrate_form(omega: ClassicalForm, f: SingularCube, order: Optional[Sequence[int]] = None) -> IntegralResult:
    n = f.dim
    if omega.degree != n:
        raise DimensionError(f"Cannot integrate a {omega.degree}-form over a {n}-cube")
    if omega.ambient_dim != f.ambient_dim:
        raise DimensionError(f"Form on R^{omega.ambient_dim} integrated over a cube in R^{f.ambient_dim}")
    if n == 0:
        return IntegralResult(omega.coefficient(()).evaluate(list(f.corner(0))))
    density = theta_hat(pullback(f.map, omega))
    result = iterate_unit_integral(density, _order(n, order))
    logger.debug(f"Integral of {omega} over {f!r} is {format_value(result.value)}")
    return result


def pipe_map(P: Pipe) -> List[WeilElement]:
    """Components of [[x0, ..., xn]](s) = x0 + sum s_a (x_a - x0), coefficients polynomial in s"""
    n = P.dim
    xs = P.simplex.vertices
    components = []
    for j in range(P.simplex.ambient_dim):
        component = xs[0].coords[j].map_coefficients(lambda c: Poly.constant(n, c))
        for a in range(1, n + 1):
            step = (xs[a].coords[j] - xs[0].coords[j]).map_coefficients(lambda c: Poly.constant(n, c))
            component = component + step * Poly.variable(n, a)
        components.append(component)
    return components


def pipe_pullback_density(omega: ClassicalForm, P: Pipe) -> WeilElement:
    """Density of [[x0, ..., xn]]*(omega), a Weil element with coefficients polynomial in s"""
    n = P.dim
    components = pipe_map(P)
    total = components[0] * 0
    for axes, coeff in omega.terms.items():
        jacobian = [
            [components[i - 1].map_coefficients(lambda c: partial_derivative(c, a)) for i in axes]
            for a in range(1, n + 1)
        ]
        total = total + poly_eval_in_algebra(coeff, components) * determinant(jacobian)
    return total


def integrate_along_pipe(
    omega: ClassicalForm, P: Union[Pipe, Simplex], order: Optional[Sequence[int]] = None
) -> IntegralResult:
    """Integral over the pipe's affine map, with Weil-valued coefficients integrated coefficientwise"""
    P = P if isinstance(P, Pipe) else Pipe(P)
    if P.dim != omega.degree:
        raise DimensionError(f"Cannot integrate a {omega.degree}-form along a {P.dim}-pipe")
    if any(isinstance(c, Poly) for x in P.simplex.vertices for coord in x.coords for _, c in coord.term_items()):
        raise DimensionError("Pipe integrals need a rational base point")
    if P.dim == 0:
        return IntegralResult(eval_comb(omega, P))
    return iterate_unit_integral(pipe_pullback_density(omega, P), _order(P.dim, order))


# Checks on integrals


def _result(case: str, lhs: Any, rhs: Any, **witness: Any) -> CheckResult:
    passed = lhs == rhs
    if not passed:
        logger.warning(f"{case} failed: {format_value(lhs)} != {format_value(rhs)}")
    return CheckResult(
        case=case,
        passed=passed,
        lhs=format_value(lhs),
        rhs=format_value(rhs),
        witness={key: str(value) for key, value in witness.items()},
    )


def verify_subdivision_and_alternation(omega: ClassicalForm, f: SingularCube, i: int, s: Scalar) -> List[CheckResult]:
    s = as_fraction(s)
    whole = integrate_form(omega, f).value
    first, second = subdivide(f, i, s)
    parts = integrate_form(omega, first).value + integrate_form(omega, second).value
    witness = {"form": omega, "cube": f, "i": i, "s": format_value(s)}
    results = [
        _result(f"subdivision-{i}", parts, whole, **witness),
        _result(f"subdivision-faces-{i}", is_subdivision(f, first, second, i), True, **witness),
    ]
    for j in range(1, f.dim):
        swapped = integrate_form(omega, f.transposition(j)).value
        results.append(_result(f"transposition-{j}", swapped, -whole, **witness))
    for j in range(1, f.dim + 1):
        results.append(_result(f"reversion-{j}", integrate_form(omega, f.reversion(j)).value, -whole, **witness))
    return results


def check_integration_orders(omega: ClassicalForm, f: SingularCube) -> CheckResult:
    """Every order of the iterated integral gives the same value, and each trace replays"""
    results = [integrate_form(omega, f, order) for order in permutations(range(1, f.dim + 1))]
    values = {format_value(result.value) for result in results}
    replays = all(result.replay() == result.value for result in results)
    return _result("integration-orders", (len(values), replays), (1, True), form=omega, cube=f)


def verify_pipe_integral(omega: ClassicalForm, P: Union[Pipe, Simplex]) -> CheckResult:
    """The integral along an infinitesimal pipe is the value of the form on it"""
    return _result("pipe-integral", integrate_along_pipe(omega, P).value, eval_comb(omega, P), form=omega, pipe=P)


# Holonomy in M_n(Q)


def _form_of(connection: Connection) -> ClassicalForm:
    target = connection.target
    if not isinstance(target, ConstantGroupoid) or not isinstance(target.group, AdditiveGroup):
        raise UnsupportedTargetError(f"{connection.name} does not take values in M_n(Q)")
    if connection.form is None:
        raise UnsupportedTargetError(f"{connection.name} is not generated by a form")
    return connection.form


def cube_vertex(f: SingularCube, label: int) -> InfPoint:
    return InfPoint.rational(f.corner(label), WeilContext(0, f.ambient_dim))


def holonomy_cell(connection: Connection, f: SingularCube) -> Any:
    """The cell of M_n(Q) a cube is sent to: its corners, and in dimension n the integral"""
    omega = _form_of(connection)
    target: ConstantGroupoid = connection.target
    if f.dim > connection.dimension:
        raise DimensionError(f"Holonomy of a {connection.dimension}-connection on a {f.dim}-cube")
    if f.dim == 0:
        return cube_vertex(f, 0)
    vertices = [cube_vertex(f, label) for label in range(2 ** f.dim)]
    if f.dim < connection.dimension:
        return target.cell(vertices)
    return target.cell(vertices, integrate_form(omega, f).value)


def holonomy_of_pipe(connection: Connection, P: Union[Pipe, Simplex]) -> Any:
    """Holonomy along the affine map of an infinitesimal pipe; agrees with the connection"""
    omega = _form_of(connection)
    P = P if isinstance(P, Pipe) else Pipe(P)
    if P.dim == 0:
        return P.base
    if P.dim < connection.dimension:
        return connection.target.cell(P.vertices())
    return connection.target.cell(P.vertices(), integrate_along_pipe(omega, P).value)


def check_holonomy_additivity(connection: Connection, f: SingularCube, i: int, s: Scalar) -> CheckResult:
    first, second = subdivide(f, i, as_fraction(s))
    composed = connection.target.compose(holonomy_cell(connection, first), holonomy_cell(connection, second), i)
    return _result(f"holonomy-additivity-{i}", composed, holonomy_cell(connection, f), cube=f, s=format_value(s))


def boundary_functional(omega: ClassicalForm, f: SingularCube) -> Fraction:
    """sum over i of (-1)^i (integral over the upper i-face - integral over the lower i-face)"""
    if f.dim != omega.degree + 1:
        raise DimensionError(f"Boundary of a {f.dim}-cube carries {f.dim - 1}-forms, got degree {omega.degree}")
    total = Fraction(0)
    for i in range(1, f.dim + 1):
        difference = integrate_form(omega, f.face(1, i)).value - integrate_form(omega, f.face(0, i)).value
        total = total + difference if i % 2 == 0 else total - difference
    return total


def integrated_shell(omega: ClassicalForm, f: SingularCube) -> Shell:
    """The shell of holonomy cells on the faces of an (n+1)-cube"""
    connection = form_to_connection(omega)
    faces = {(alpha, i): holonomy_cell(connection, f.face(alpha, i)) for i in range(1, f.dim + 1) for alpha in (0, 1)}
    return Shell(faces)


def check_boundary_additivity(omega: ClassicalForm, f: SingularCube, i: int, s: Scalar) -> CheckResult:
    first, second = subdivide(f, i, as_fraction(s))
    parts = boundary_functional(omega, first) + boundary_functional(omega, second)
    whole = boundary_functional(omega, f)
    return _result(f"boundary-additivity-{i}", parts, whole, form=omega, cube=f, s=format_value(s))


def verify_stokes(omega: ClassicalForm, f: SingularCube) -> List[CheckResult]:
    """Integral of the coboundary over f against the signed sum over its faces"""
    lhs = integrate_form(d_classical(omega) * CLASSICAL_SCALE, f).value
    rhs = boundary_functional(omega, f)
    witness = {"form": omega, "cube": f}
    results = [_result("stokes", lhs, rhs, **witness)]
    if omega.degree >= 1:
        results.append(_result("shell-folding", fold_value(integrated_shell(omega, f)), lhs, **witness))
    return results


def check_pipe_shell(omega: ClassicalForm, P: Union[Pipe, Simplex]) -> CheckResult:
    """On an (n+1)-pipe, the holonomies along its faces are the faces of the formal curvature"""
    P = P if isinstance(P, Pipe) else Pipe(P)
    if P.dim != omega.degree + 1:
        raise DimensionError(f"A {omega.degree}-form has its formal curvature on {omega.degree + 1}-pipes, got {P.dim}")
    connection = form_to_connection(omega)
    faces = {
        (alpha, i): holonomy_of_pipe(connection, pipe_face(P, alpha, i))
        for i in range(1, P.dim + 1)
        for alpha in (0, 1)
    }
    return _result("pipe-shell", Shell(faces), formal_curvature(connection)(P), form=omega, pipe=P)
