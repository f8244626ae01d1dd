"""Differential forms: classical polynomial data and their values on infinitesimal pipes.

A k-form on R^m is stored classically as sum c_I dx_I over increasing axis
tuples I.  Its combinatorial value on a pipe P(x0; x1, ..., xk) is

    omega(P) = sum_I c_I(x0) * det((x_a - x0)_i, a = 1..k, i in I)

computed exactly in the Weil algebra of the pipe.
"""
import logging
from fractions import Fraction
from typing import Any, Callable, Dict, List, Mapping, Optional, Sequence, Tuple, Union

from cubica.algebra import (
    Poly,
    PolyMap,
    Scalar,
    as_fraction,
    determinant,
    format_value,
    increasing_tuples,
    is_scalar,
    partial_derivative,
    permutation_sign,
    poly_eval_in_algebra,
)
from cubica.cubical import Pipe, Symmetry, pipe_face, pipe_symmetry, subdivide_pipe
from cubica.errors import DimensionError
from cubica.models import CheckResult
from cubica.weil import InfPoint, Simplex, WeilElement, embed_inner, generic_simplex, symbolic_point

logger = logging.getLogger(__name__)

Axes = Tuple[int, ...]

# eval_comb(CLASSICAL_SCALE * d_classical(w), P) == d_cubical(w)(P) in every degree
CLASSICAL_SCALE = -1


class ClassicalForm:
    """sum_I c_I dx_I with polynomial coefficients in the ambient coordinates"""

    __slots__ = ("ambient_dim", "degree", "terms")

    def __init__(self, ambient_dim: int, degree: int, terms: Optional[Mapping[Sequence[int], Any]] = None):
        if ambient_dim < 1:
            raise DimensionError(f"Ambient dimension must be positive, got {ambient_dim}")
        if not 0 <= degree <= ambient_dim:
            raise DimensionError(f"No {degree}-forms on R^{ambient_dim}")
        self.ambient_dim = ambient_dim
        self.degree = degree
        collected: Dict[Axes, Poly] = {}
        for axes, coeff in (terms or {}).items():
            axes = tuple(axes)
            if len(axes) != degree:
                raise DimensionError(f"Axes {axes} for a {degree}-form")
            if any(not 1 <= i <= ambient_dim for i in axes):
                raise DimensionError(f"Axes {axes} outside 1..{ambient_dim}")
            if len(set(axes)) < degree:
                continue
            coeff = Poly.constant(ambient_dim, coeff) if is_scalar(coeff) else coeff
            if coeff.variable_count != ambient_dim:
                raise DimensionError(f"Coefficient of dx{axes} has {coeff.variable_count} variables")
            key = tuple(sorted(axes))
            if permutation_sign(axes) < 0:
                coeff = -coeff
            collected[key] = collected[key] + coeff if key in collected else coeff
        self.terms: Dict[Axes, Poly] = {axes: c for axes, c in sorted(collected.items()) if not c.is_zero()}

    @classmethod
    def zero(cls, ambient_dim: int, degree: int) -> "ClassicalForm":
        return cls(ambient_dim, degree)

    @classmethod
    def volume(cls, n: int) -> "ClassicalForm":
        return cls(n, n, {tuple(range(1, n + 1)): 1})

    @classmethod
    def monomial(cls, ambient_dim: int, axes: Sequence[int], coeff: Union[Scalar, Poly] = 1) -> "ClassicalForm":
        return cls(ambient_dim, len(axes), {tuple(axes): coeff})

    def coefficient(self, axes: Sequence[int]) -> Poly:
        axes = tuple(axes)
        key = tuple(sorted(axes))
        value = self.terms.get(key, Poly.zero(self.ambient_dim))
        return -value if permutation_sign(axes) < 0 else value

    def is_zero(self) -> bool:
        return not self.terms

    def _check(self, other: "ClassicalForm") -> None:
        if (other.ambient_dim, other.degree) != (self.ambient_dim, self.degree):
            raise DimensionError(
                f"Cannot combine a {self.degree}-form on R^{self.ambient_dim} "
                f"with a {other.degree}-form on R^{other.ambient_dim}"
            )

    def __add__(self, other: "ClassicalForm") -> "ClassicalForm":
        self._check(other)
        terms = dict(self.terms)
        for axes, coeff in other.terms.items():
            terms[axes] = terms[axes] + coeff if axes in terms else coeff
        return ClassicalForm(self.ambient_dim, self.degree, terms)

    def __neg__(self) -> "ClassicalForm":
        return ClassicalForm(self.ambient_dim, self.degree, {axes: -c for axes, c in self.terms.items()})

    def __sub__(self, other: "ClassicalForm") -> "ClassicalForm":
        return self + (-other)

    def __mul__(self, factor: Union[Scalar, Poly]) -> "ClassicalForm":
        return ClassicalForm(self.ambient_dim, self.degree, {axes: c * factor for axes, c in self.terms.items()})

    __rmul__ = __mul__

    def __call__(self, P: Union[Pipe, Simplex]) -> WeilElement:
        return eval_comb(self, P)

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, ClassicalForm):
            return NotImplemented
        return (self.ambient_dim, self.degree, self.terms) == (other.ambient_dim, other.degree, other.terms)

    def __hash__(self) -> int:
        return hash((self.ambient_dim, self.degree, tuple(self.terms.items())))

    def __repr__(self) -> str:
        return f"ClassicalForm(R^{self.ambient_dim}, {self.degree}: {self})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for axes, coeff in self.terms.items():
            wedge = "^".join(f"dx{i}" for i in axes)
            if not wedge:
                pieces.append(f"({coeff})")
            elif coeff == 1:
                pieces.append(wedge)
            else:
                pieces.append(f"({coeff})*{wedge}")
        return " + ".join(pieces)


class CubicalCochain:
    """A function on k-pipes given by a rule, such as a cubical coboundary"""

    __slots__ = ("degree", "rule", "name")

    def __init__(self, degree: int, rule: Callable[[Pipe], WeilElement], name: str = "cochain"):
        self.degree = degree
        self.rule = rule
        self.name = name

    def __call__(self, P: Union[Pipe, Simplex]) -> WeilElement:
        P = _as_pipe(P)
        if P.dim != self.degree:
            raise DimensionError(f"{self.name} has degree {self.degree}, got a {P.dim}-pipe")
        return self.rule(P)

    def __repr__(self) -> str:
        return f"CubicalCochain({self.name}, degree {self.degree})"


Cochain = Union[ClassicalForm, CubicalCochain]


def _as_pipe(P: Union[Pipe, Simplex]) -> Pipe:
    return P if isinstance(P, Pipe) else Pipe(P)


def displacement_matrix(P: Union[Pipe, Simplex], axes: Sequence[int]) -> List[List[WeilElement]]:
    """Rows (x_a - x0) restricted to the given axes"""
    xs = _as_pipe(P).simplex.vertices
    return [[(x.coords[i - 1] - xs[0].coords[i - 1]) for i in axes] for x in xs[1:]]


def eval_comb(omega: ClassicalForm, P: Union[Pipe, Simplex]) -> WeilElement:
    P = _as_pipe(P)
    if P.dim != omega.degree:
        raise DimensionError(f"A {omega.degree}-form cannot be evaluated on a {P.dim}-pipe")
    if P.simplex.ambient_dim != omega.ambient_dim:
        raise DimensionError(f"Form on R^{omega.ambient_dim} evaluated on a pipe in R^{P.simplex.ambient_dim}")
    x0 = P.base
    total = x0.context.zero()
    for axes, coeff in omega.terms.items():
        total = total + poly_eval_in_algebra(coeff, x0.coords) * determinant(displacement_matrix(P, axes))
    return total


def vol(P: Union[Pipe, Simplex]) -> WeilElement:
    P = _as_pipe(P)
    n = P.simplex.ambient_dim
    if P.dim != n:
        raise DimensionError(f"Vol needs an {n}-pipe in R^{n}, got dimension {P.dim}")
    value = determinant(displacement_matrix(P, range(1, n + 1)))
    return P.base.context.zero() + value


def theta_hat(theta: ClassicalForm) -> Poly:
    """The density of a top-degree form, theta = theta_hat * Vol"""
    if theta.degree != theta.ambient_dim:
        raise DimensionError(f"theta_hat needs a top-degree form, got degree {theta.degree} on R^{theta.ambient_dim}")
    return theta.coefficient(tuple(range(1, theta.ambient_dim + 1)))


def pullback(f: PolyMap, omega: ClassicalForm) -> ClassicalForm:
    """f*(omega) through the minors of the Jacobian of f"""
    if f.target_dim != omega.ambient_dim:
        raise DimensionError(f"Map into R^{f.target_dim} cannot pull back a form on R^{omega.ambient_dim}")
    k = omega.degree
    if k > f.source_dim:
        raise DimensionError(f"R^{f.source_dim} has no {k}-forms to pull back to")
    jacobian = f.jacobian()
    zero = Poly.zero(f.source_dim)
    terms: Dict[Axes, Poly] = {}
    for axes, coeff in omega.terms.items():
        composed = zero + poly_eval_in_algebra(coeff, f.components)
        for source_axes in increasing_tuples(f.source_dim, k):
            minor = [[jacobian[i - 1][j - 1] for j in source_axes] for i in axes]
            term = composed * (zero + determinant(minor))
            terms[source_axes] = terms[source_axes] + term if source_axes in terms else term
    return ClassicalForm(f.source_dim, k, terms)


def d_classical(omega: ClassicalForm) -> ClassicalForm:
    """sum over I, j of dc_I/dx_j dx_j ^ dx_I"""
    if omega.degree == omega.ambient_dim:
        raise DimensionError(f"No {omega.degree + 1}-forms on R^{omega.ambient_dim}")
    terms: Dict[Tuple[int, ...], Poly] = {}
    for axes, coeff in omega.terms.items():
        for j in range(1, omega.ambient_dim + 1):
            if j in axes:
                continue
            key = (j,) + axes
            derivative = partial_derivative(coeff, j)
            terms[key] = terms[key] + derivative if key in terms else derivative
    return ClassicalForm(omega.ambient_dim, omega.degree + 1, terms)


def alternating_face_sum(omega: Cochain, P: Pipe) -> WeilElement:
    """sum over i of (-1)^i (omega(upper i-face) - omega(lower i-face))"""
    total = P.base.context.zero()
    for i in range(1, P.dim + 1):
        difference = omega(pipe_face(P, 1, i)) - omega(pipe_face(P, 0, i))
        total = total + difference if i % 2 == 0 else total - difference
    return total


def d_cubical(omega: Cochain) -> CubicalCochain:
    name = getattr(omega, "name", None) or str(omega)
    return CubicalCochain(omega.degree + 1, lambda P: alternating_face_sum(omega, P), f"d({name})")


def textbook_simplicial_coboundary(omega: Cochain) -> CubicalCochain:
    """sum over j of (-1)^j omega(x0, ..., x_j omitted, ..., x_{n+1})"""

    def rule(P: Pipe) -> WeilElement:
        xs = P.simplex.vertices
        total = P.base.context.zero()
        for j in range(len(xs)):
            value = omega(Pipe(P.simplex.rebuild(xs[:j] + xs[j + 1:])))
            total = total + value if j % 2 == 0 else total - value
        return total

    return CubicalCochain(omega.degree + 1, rule, f"d_simplex({omega})")


def simplicial_coboundary(omega: Cochain) -> CubicalCochain:
    """The simplicial cochain coboundary, signed so that (n+1) d_s = d_c on n-forms"""
    textbook = textbook_simplicial_coboundary(omega)
    return CubicalCochain(textbook.degree, lambda P: -textbook(P), f"d_s({omega})")


def d_simplicial(omega: Cochain) -> CubicalCochain:
    """The cubical coboundary divided by n + 1"""
    name = getattr(omega, "name", None) or str(omega)
    scale = Fraction(1, omega.degree + 1)
    cubical = d_cubical(omega)
    return CubicalCochain(omega.degree + 1, lambda P: cubical(P) * scale, f"d_simplicial({name})")


# Generic pipes


def generic_pipe(ambient_dim: int, k: int, base: Optional[Sequence[Any]] = None, family: str = "e") -> Pipe:
    """A fully generic k-pipe, based at the symbolic point (X1, ..., Xm) unless a base is given"""
    base = symbolic_point(ambient_dim) if base is None else base
    return Pipe(generic_simplex(base, k, family=family))


def _check(case: str, lhs: Any, rhs: Any, **witness: Any) -> CheckResult:
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


def check_form_symmetries(omega: ClassicalForm) -> List[CheckResult]:
    """Sign flips under reversions and transpositions, vanishing on degenerate pipes"""
    m, k = omega.ambient_dim, omega.degree
    results = []
    if k >= 1:
        P = generic_pipe(m, k)
        value = eval_comb(omega, P)
        for i in range(1, k + 1):
            reversed_value = eval_comb(omega, pipe_symmetry(P, Symmetry.REVERSION, i))
            results.append(_check(f"reversion-{i}", reversed_value, -value, form=omega, pipe=P))
        for i in range(1, k):
            swapped_value = eval_comb(omega, pipe_symmetry(P, Symmetry.TRANSPOSITION, i))
            results.append(_check(f"transposition-{i}", swapped_value, -value, form=omega, pipe=P))
        lower = generic_pipe(m, k - 1)
        for i in range(1, k + 1):
            degenerate_value = eval_comb(omega, pipe_symmetry(lower, Symmetry.DEGENERACY, i))
            results.append(_check(f"degeneracy-{i}", degenerate_value, 0, form=omega, pipe=lower))
    return results


def check_theta_hat(theta: ClassicalForm) -> CheckResult:
    """theta(P) = theta_hat(x0) Vol(P) on the generic pipe"""
    P = generic_pipe(theta.ambient_dim, theta.degree)
    density = poly_eval_in_algebra(theta_hat(theta), P.base.coords)
    return _check("theta-hat", eval_comb(theta, P), density * vol(P), form=theta)


def check_pullback_naturality(omega: ClassicalForm, f: PolyMap) -> CheckResult:
    """(f* omega)(Q) = omega(f(Q)) on the generic pipe of the source"""
    Q = generic_pipe(f.source_dim, omega.degree)
    image = Pipe(Q.simplex.map(f))
    return _check("pullback-naturality", eval_comb(pullback(f, omega), Q), eval_comb(omega, image), form=omega, map=f)


def check_coboundary_naturality(omega: ClassicalForm, f: PolyMap) -> CheckResult:
    """d(f* omega) = f*(d omega)"""
    return _check(
        "coboundary-naturality", d_classical(pullback(f, omega)), pullback(f, d_classical(omega)), form=omega, map=f
    )


def check_coboundaries(omega: ClassicalForm) -> List[CheckResult]:
    """Cubical against classical and simplicial coboundaries, and d d = 0, on generic pipes"""
    m, n = omega.ambient_dim, omega.degree
    results = []
    if n >= m:
        return results
    P = generic_pipe(m, n + 1)
    cubical = d_cubical(omega)(P)
    results.append(
        _check("classical-coboundary", cubical, eval_comb(d_classical(omega) * CLASSICAL_SCALE, P), form=omega)
    )
    simplicial = simplicial_coboundary(omega)(P)
    results.append(_check("simplicial-coboundary", cubical, simplicial * (n + 1), form=omega))
    results.append(_check("simplicial-from-cubical", d_simplicial(omega)(P), simplicial, form=omega))
    degenerate = generic_pipe(m, n).degeneracy(1)
    results.append(_check("degenerate-coboundary", d_cubical(omega)(degenerate), 0, form=omega))
    if n + 2 <= m:
        Q = generic_pipe(m, n + 2)
        results.append(_check("coboundary-squared", d_cubical(d_cubical(omega))(Q), 0, form=omega))
    return results


def check_subdivision(omega: ClassicalForm, base: Sequence[Scalar], i: int) -> CheckResult:
    """omega(P) = omega(P') + omega(P'') for a symbolic subdivision parameter s"""
    P = generic_pipe(omega.ambient_dim, omega.degree, base=[as_fraction(c) for c in base])
    s = Poly.variable(1, 1)
    first, second = subdivide_pipe(P, i, s)
    value = eval_comb(omega, P).map_coefficients(lambda c: Poly.constant(1, c))
    return _check(f"subdivision-{i}", eval_comb(omega, first) + eval_comb(omega, second), value, form=omega)


def pipe_image_simplex(P: Pipe, Q: Pipe) -> Simplex:
    """[[x0, ..., xn]] applied to the vertices of an inner pipe Q of an independent family"""
    xs = P.simplex.vertices
    outer = P.base.context
    points = []
    for y in Q.simplex.vertices:
        coords = []
        for j in range(P.simplex.ambient_dim):
            value = xs[0].coords[j]
            for b in range(1, P.dim + 1):
                value = value + (xs[b].coords[j] - xs[0].coords[j]) * embed_inner(y.coords[b - 1], outer)
            coords.append(value)
        points.append(InfPoint(outer, coords))
    return Simplex(points)


def check_pipe_pullback(
    omega: ClassicalForm, base: Sequence[Scalar], inner_base: Optional[Sequence[Scalar]] = None
) -> CheckResult:
    """[[x0, ..., xn]]*(omega) = omega(P) Vol, tested on a generic inner pipe"""
    n = omega.degree
    if n == 0:
        raise DimensionError("The pipe map of a point has no volume to compare with")
    P = generic_pipe(omega.ambient_dim, n, base=[as_fraction(c) for c in base])
    inner_base = [Fraction(0)] * n if inner_base is None else [as_fraction(c) for c in inner_base]
    Q = generic_pipe(n, n, base=inner_base, family="d")
    lhs = eval_comb(omega, pipe_image_simplex(P, Q))
    rhs = eval_comb(omega, P) * embed_inner(vol(Q), P.base.context)
    return _check("pipe-pullback", lhs, rhs, form=omega, base=list(base))

