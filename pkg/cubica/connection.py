"""Connections: maps from infinitesimal pipes into a cubical groupoid.

A connection of dimension n assigns to every k-pipe (k <= n) a k-cell of
the target, is the identity on points, and commutes with faces,
degeneracies and reversions.  Its formal curvature extends it by one
dimension into the shell groupoid; folding the formal curvature gives the
curvature.
"""
import logging
from fractions import Fraction
from math import factorial
from typing import Any, Callable, Dict, List, Optional, Union

from cubica.algebra import Poly, format_value, increasing_tuples
from cubica.cubical import Pipe, Shell, Symmetry, cell_vertex, pipe_face, pipe_symmetry
from cubica.errors import (
    CompositionError,
    DimensionError,
    ShellAdjacencyError,
    UnsupportedFoldingError,
    UnsupportedTargetError,
)
from cubica.forms import ClassicalForm, d_cubical, eval_comb, generic_pipe
from cubica.groupoid import (
    CUBE_EDGES,
    AdditiveGroup,
    Arrow,
    ConstantGroupoid,
    CrossedPart,
    CubeDiagram,
    CubicalGroupoid,
    FreeGroupoid,
    ShellGroupoid,
    cube_regrouped,
    fold_value,
    folding_cube,
    folding_square,
)
from cubica.models import CheckResult
from cubica.weil import Simplex

logger = logging.getLogger(__name__)

Rule = Callable[[Pipe], Any]


def _as_pipe(P: Union[Pipe, Simplex]) -> Pipe:
    return P if isinstance(P, Pipe) else Pipe(P)


class Connection:
    """A rule on k-pipes, 1 <= k <= dimension; points map to themselves"""

    def __init__(
        self,
        dimension: int,
        target: CubicalGroupoid,
        rule: Rule,
        ambient_dim: int,
        form: Optional[ClassicalForm] = None,
        name: str = "connection",
        validate: bool = False,
    ):
        if dimension < 1:
            raise DimensionError(f"Connections start in dimension 1, got {dimension}")
        self.dimension = dimension
        self.target = target
        self.rule = rule
        self.ambient_dim = ambient_dim
        self.form = form
        self.name = name
        if validate:
            failures = [check for check in validate_morphism(self) if not check.passed]
            if failures:
                raise CompositionError(f"{name} is not a morphism of cubical sets: {failures[0].case} fails")

    def __call__(self, P: Union[Pipe, Simplex]) -> Any:
        P = _as_pipe(P)
        if P.dim > self.dimension:
            raise DimensionError(f"{self.name} has dimension {self.dimension}, got a {P.dim}-pipe")
        if P.dim == 0:
            return P.base
        return self.rule(P)

    def __repr__(self) -> str:
        return f"Connection({self.name}, dimension {self.dimension})"


def _result(case: str, lhs: Any, rhs: Any, **witness: Any) -> CheckResult:
    passed = lhs == rhs
    if not passed:
        logger.warning(f"{case} failed: {lhs!r} != {rhs!r}")
    return CheckResult(
        case=case,
        passed=passed,
        lhs=format_value(lhs),
        rhs=format_value(rhs),
        witness={key: str(value) for key, value in witness.items()},
    )


def validate_morphism(connection: Connection, max_dim: Optional[int] = None) -> List[CheckResult]:
    """Face, degeneracy and reversion compatibility on generic pipes"""
    g = connection.target
    top = connection.dimension if max_dim is None else min(max_dim, connection.dimension)
    results = []
    for k in range(1, top + 1):
        P = generic_pipe(connection.ambient_dim, k)
        value = connection(P)
        for i in range(1, k + 1):
            for alpha in (0, 1):
                results.append(_result(
                    f"dim{k}-face-{alpha}{i}", g.face(value, alpha, i), connection(pipe_face(P, alpha, i)), pipe=P
                ))
            results.append(_result(
                f"dim{k}-reversion-{i}",
                connection(pipe_symmetry(P, Symmetry.REVERSION, i)),
                g.inverse(value, i),
                pipe=P,
            ))
        lower = generic_pipe(connection.ambient_dim, k - 1)
        for i in range(1, k + 1):
            degenerate_value = connection(pipe_symmetry(lower, Symmetry.DEGENERACY, i))
            results.append(_result(
                f"dim{k}-degeneracy-{i}", degenerate_value, g.degenerate(connection(lower), i), pipe=lower
            ))
    return results


# Connections into the constant groupoid M_n(Q)


def form_to_connection(omega: ClassicalForm) -> Connection:
    n = omega.degree
    if n < 1:
        raise DimensionError("Only forms of positive degree give connections")
    target = ConstantGroupoid(n, AdditiveGroup())

    def rule(P: Pipe) -> Any:
        vertices = P.vertices()
        if P.dim < n:
            return target.cell(vertices)
        return target.cell(vertices, eval_comb(omega, P))

    return Connection(n, target, rule, omega.ambient_dim, form=omega, name=f"connection({omega})")


def connection_to_form(connection: Connection) -> ClassicalForm:
    """Read the coefficients back off the value on the pipe based at the symbolic point"""
    target = connection.target
    if not isinstance(target, ConstantGroupoid) or not isinstance(target.group, AdditiveGroup):
        raise UnsupportedTargetError(f"{connection.name} does not take values in M_n(Q)")
    n, m = connection.dimension, connection.ambient_dim
    if target.dimension != n:
        raise UnsupportedTargetError(f"{connection.name} has dimension {n} but targets M_{target.dimension}")
    value = connection(generic_pipe(m, n)).value
    # the determinant of the generic displacements is n! times the normal monomial
    scale = Fraction(1, factorial(n))
    terms: Dict[tuple, Poly] = {}
    for axes in increasing_tuples(m, n):
        coeff = value.coefficient(tuple(zip(range(1, n + 1), axes)))
        if isinstance(coeff, Poly):
            terms[axes] = coeff * scale
        elif coeff:
            terms[axes] = Poly.constant(m, coeff * scale)
    return ClassicalForm(m, n, terms)


# Free 1-connections


def _edge_name(a: Any, b: Any) -> str:
    return f"[{a!r} -> {b!r}]"


def free_connection(ambient_dim: int) -> Connection:
    """The most general 1-connection: every non-degenerate 1-pipe is a free generator

    Generators are registered on the connection's own groupoid the first time a pipe is
    evaluated, so its edge set grows with use. Not safe to share between threads.
    """
    groupoid = FreeGroupoid({})

    def rule(P: Pipe) -> Arrow:
        x0, x1 = P.simplex.vertices
        if x0 == x1:
            groupoid.add_vertex(x0)
            return groupoid.identity(x0)
        # one generator per unordered pair, oriented by its printed form
        if repr(x0) <= repr(x1):
            return groupoid.add_edge(_edge_name(x0, x1), x0, x1)
        return groupoid.add_edge(_edge_name(x1, x0), x1, x0).inverse()

    return Connection(1, groupoid, rule, ambient_dim, name="free connection")


def gauge_connection(ambient_dim: int, hub: str = "*") -> Connection:
    """x -> y goes to g(x)^-1 g(y) for free arrows g(x): hub -> x; flat

    Like the free connection, it adds the arrows g(x) to its groupoid as points are met.
    """
    groupoid = FreeGroupoid({}, [hub])
    groupoid.hub = hub

    def potential(x: Any) -> Arrow:
        return groupoid.add_edge(f"g{x!r}", hub, x)

    def rule(P: Pipe) -> Arrow:
        x0, x1 = P.simplex.vertices
        return potential(x0).inverse().then(potential(x1))

    return Connection(1, groupoid, rule, ambient_dim, name="gauge connection")


# Curvature


def formal_curvature(connection: Connection) -> Connection:
    """Agrees with the connection up to its dimension; one dimension up, the shell of face values"""
    n = connection.dimension

    def rule(P: Pipe) -> Any:
        if P.dim <= n:
            return connection(P)
        faces = {(alpha, i): connection(pipe_face(P, alpha, i)) for i in range(1, P.dim + 1) for alpha in (0, 1)}
        try:
            return Shell(faces)
        except ShellAdjacencyError as e:
            logger.error(f"{connection.name} breaks the cubical relations on {P!r}: {e}")
            raise

    return Connection(
        n + 1,
        ShellGroupoid(connection.target),
        rule,
        connection.ambient_dim,
        form=connection.form,
        name=f"formal curvature of {connection.name}",
    )


def fold(shell: Shell, groupoid: CubicalGroupoid) -> CrossedPart:
    """Folding of a shell whose faces live in the given groupoid"""
    corner = cell_vertex(shell, 2 ** shell.dim - 1)
    if shell.dim == 2 and groupoid.dimension == 1 and not isinstance(groupoid, ConstantGroupoid):
        return CrossedPart(2, corner, folding_square(shell, groupoid))
    try:
        return CrossedPart(shell.dim, corner, fold_value(shell))
    except UnsupportedFoldingError:
        logger.error(f"No folding for {shell.dim}-shells over {type(groupoid).__name__}")
        raise


def curvature(connection: Connection) -> Callable[[Pipe], CrossedPart]:
    """Pipe of dimension n+1 -> folded formal curvature"""
    hat = formal_curvature(connection)

    def evaluate(P: Union[Pipe, Simplex]) -> CrossedPart:
        P = _as_pipe(P)
        if P.dim != connection.dimension + 1:
            raise DimensionError(f"Curvature of a {connection.dimension}-connection needs a {hat.dimension}-pipe")
        return fold(hat(P), connection.target)

    return evaluate


def is_flat_at(connection: Connection, P: Union[Pipe, Simplex]) -> bool:
    element = curvature(connection)(P).element
    if isinstance(element, Arrow):
        return element.is_identity()
    return element == 0


def cube_diagram(connection: Connection, P: Pipe) -> CubeDiagram:
    """Values of a 1-connection on the twelve edges of a 3-pipe"""
    vertices = P.vertices()
    edges = {
        key: connection(Pipe(P.simplex.rebuild([vertices[int(key[0])], vertices[int(key[1])]])))
        for key in CUBE_EDGES
    }
    return CubeDiagram(connection.target, edges)


def verify_bianchi(connection: Connection) -> List[CheckResult]:
    """Flatness of the formal curvature on the generic (n+2)-pipe"""
    n, m = connection.dimension, connection.ambient_dim
    if m < n + 2:
        raise DimensionError(f"Bianchi identity for a {n}-connection needs R^{n + 2} or more, got R^{m}")
    P = generic_pipe(m, n + 2)
    target = connection.target
    results = []
    if isinstance(target, ConstantGroupoid):
        kappa = curvature(connection)
        total = target.group.zero()
        for i in range(1, n + 3):
            difference = kappa(pipe_face(P, 1, i)).element - kappa(pipe_face(P, 0, i)).element
            total = total + difference if i % 2 == 0 else total - difference
        results.append(_result("face-curvature-sum", total, 0, connection=connection.name, pipe=P))
        nested = formal_curvature(formal_curvature(connection))(P)
        results.append(_result("nested-folding", fold_value(nested), 0, connection=connection.name, pipe=P))
        if connection.form is not None:
            squared = d_cubical(d_cubical(connection.form))(P)
            results.append(_result("coboundary-squared", squared, 0, form=connection.form))
    elif isinstance(target, FreeGroupoid) and n == 1:
        diagram = cube_diagram(connection, P)
        identity = target.identity(diagram.corners[7])
        results.append(_result("cube-word", folding_cube(diagram), identity, connection=connection.name))
        results.append(_result("cube-regrouped", cube_regrouped(diagram), identity, connection=connection.name))
    else:
        raise UnsupportedFoldingError(f"No Bianchi check for {connection.name} into {type(target).__name__}")
    return results


def check_curvature_is_coboundary(connection: Connection) -> CheckResult:
    """The folded formal curvature of a connection into M_n(Q) is the coboundary of its form"""
    n, m = connection.dimension, connection.ambient_dim
    P = generic_pipe(m, n + 1)
    omega = connection_to_form(connection)
    return _result("curvature-coboundary", curvature(connection)(P).element, d_cubical(omega)(P), form=omega)


def check_round_trips(omega: ClassicalForm) -> List[CheckResult]:
    connection = form_to_connection(omega)
    recovered = connection_to_form(connection)
    P = generic_pipe(omega.ambient_dim, omega.degree)
    again = form_to_connection(recovered)
    return [
        _result("form-round-trip", recovered, omega, form=omega),
        _result("connection-round-trip", again(P), connection(P), form=omega),
    ]
