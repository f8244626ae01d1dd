"""First-neighbourhood nilpotent algebra and infinitesimal simplices.

The algebra W(n, m) is generated over a coefficient ring by symbols e[a, i]
(slot a in 1..n, coordinate i in 1..m) subject to

    e[a, i] * e[a, j] = 0
    e[a, i] * e[b, j] = -e[b, i] * e[a, j]      (a != b)

so a monomial survives only with distinct slots and distinct coordinates, and
its normal form lists slots and coordinates both increasing, the sign being
the parity of the coordinate permutation.  Coefficients are rationals, or any
commutative ring element supporting +, *, == 0 (polynomials, or elements of a
second, independent Weil context for tensor extensions).
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Any, Dict, Iterator, List, Mapping, Optional, Sequence, Tuple

from cubica.algebra import Poly, PolyMap, Scalar, as_fraction, is_scalar, permutation_sign
from cubica.errors import AffineViolationError, ContextMismatchError, DimensionError, NeighbourError

logger = logging.getLogger(__name__)

Monomial = Tuple[Tuple[int, int], ...]
ONE: Monomial = ()


@dataclass(frozen=True)
class WeilContext:
    simplex_slots: int
    coord_count: int
    # distinguishes independent generator families with equal shape
    family: str = "e"

    def __post_init__(self):
        if self.simplex_slots < 0:
            raise DimensionError(f"Negative slot count {self.simplex_slots}")
        if self.coord_count < 1:
            raise DimensionError(f"Coordinate count must be at least 1, got {self.coord_count}")

    def generator(self, slot: int, coord: int) -> "WeilElement":
        if not (1 <= slot <= self.simplex_slots and 1 <= coord <= self.coord_count):
            raise DimensionError(f"No generator {self.family}[{slot},{coord}] in {self}")
        return WeilElement._raw(self, {((slot, coord),): Fraction(1)})

    def constant(self, value: Any) -> "WeilElement":
        return WeilElement._raw(self, {ONE: value} if not _is_zero(value) else {})

    def zero(self) -> "WeilElement":
        return WeilElement._raw(self, {})

    def one(self) -> "WeilElement":
        return self.constant(Fraction(1))

    def monomials(self, degree: int) -> List[Monomial]:
        """Normal monomials of a given degree"""
        return [
            tuple(zip(slots, coords))
            for slots in combinations(range(1, self.simplex_slots + 1), degree)
            for coords in combinations(range(1, self.coord_count + 1), degree)
        ]

    def dimension(self, degree: int) -> int:
        return len(self.monomials(degree))


def _is_zero(value: Any) -> bool:
    return value == 0


@lru_cache(maxsize=None)
def _monomial_product(left: Monomial, right: Monomial) -> Tuple[int, Monomial]:
    pairs = left + right
    slots = [a for a, _ in pairs]
    coords = [i for _, i in pairs]
    if len(set(slots)) < len(slots) or len(set(coords)) < len(coords):
        return 0, ONE
    ordered = sorted(pairs)
    coords_by_slot = [i for _, i in ordered]
    sign = permutation_sign(coords_by_slot)
    return sign, tuple(zip((a for a, _ in ordered), sorted(coords_by_slot)))


def normalize_monomial(pairs: Sequence[Tuple[int, int]]) -> Tuple[int, Monomial]:
    """Sign and normal form of a product of generators (sign 0 if it vanishes)"""
    return _monomial_product(tuple(tuple(p) for p in pairs), ONE)


class WeilElement:
    __slots__ = ("context", "_terms")

    def __init__(self, context: WeilContext, terms: Optional[Mapping[Sequence[Tuple[int, int]], Any]] = None):
        self.context = context
        collected: Dict[Monomial, Any] = {}
        for raw, coeff in (terms or {}).items():
            for slot, coord in raw:
                if not (1 <= slot <= context.simplex_slots and 1 <= coord <= context.coord_count):
                    raise DimensionError(f"Generator [{slot},{coord}] is outside {context}")
            sign, monomial = normalize_monomial(raw)
            if sign == 0:
                continue
            coeff = as_fraction(coeff) if is_scalar(coeff) else coeff
            signed = coeff if sign > 0 else -coeff
            collected[monomial] = collected[monomial] + signed if monomial in collected else signed
        self._terms = {m: c for m, c in collected.items() if not _is_zero(c)}

    @classmethod
    def _raw(cls, context: WeilContext, terms: Dict[Monomial, Any]) -> "WeilElement":
        element = cls.__new__(cls)
        element.context = context
        element._terms = {m: c for m, c in terms.items() if not _is_zero(c)}
        return element

    @property
    def base(self) -> Any:
        return self._terms.get(ONE, Fraction(0))

    @property
    def nilpotent_terms(self) -> Dict[Monomial, Any]:
        return {m: c for m, c in self._terms.items() if m}

    def coefficient(self, monomial: Sequence[Tuple[int, int]]) -> Any:
        sign, normal = normalize_monomial(monomial)
        if sign == 0:
            return Fraction(0)
        value = self._terms.get(normal, Fraction(0))
        return value if sign > 0 else -value

    def term_items(self) -> List[Tuple[Monomial, Any]]:
        return sorted(self._terms.items(), key=lambda item: (len(item[0]), item[0]))

    def degree(self) -> int:
        return max((len(m) for m in self._terms), default=0)

    def is_zero(self) -> bool:
        return not self._terms

    def map_coefficients(self, fn) -> "WeilElement":
        return WeilElement._raw(self.context, {m: fn(c) for m, c in self._terms.items()})

    def _coerce(self, other: Any) -> Optional["WeilElement"]:
        if isinstance(other, WeilElement):
            if other.context != self.context:
                raise ContextMismatchError(f"Cannot combine elements of {self.context} and {other.context}")
            return other
        if is_scalar(other) or isinstance(other, Poly):
            return self.context.constant(other)
        return None

    def __add__(self, other: Any) -> "WeilElement":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        terms = dict(self._terms)
        for m, c in other._terms.items():
            terms[m] = terms[m] + c if m in terms else c
        return WeilElement._raw(self.context, terms)

    __radd__ = __add__

    def __neg__(self) -> "WeilElement":
        return WeilElement._raw(self.context, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other: Any) -> "WeilElement":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: Any) -> "WeilElement":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other: Any) -> "WeilElement":
        if is_scalar(other) or isinstance(other, Poly):
            return WeilElement._raw(self.context, {m: c * other for m, c in self._terms.items()})
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return weil_mul(self, other)

    def __rmul__(self, other: Any) -> "WeilElement":
        if is_scalar(other) or isinstance(other, Poly):
            return WeilElement._raw(self.context, {m: other * c for m, c in self._terms.items()})
        return NotImplemented

    def __pow__(self, exponent: int) -> "WeilElement":
        if exponent < 0:
            raise ValueError("Negative powers are not supported")
        result = self.context.one()
        for _ in range(exponent):
            result = weil_mul(result, self)
            if result.is_zero():
                break
        return result

    def __eq__(self, other: Any) -> bool:
        if isinstance(other, WeilElement):
            return self.context == other.context and self._terms == other._terms
        if is_scalar(other) or isinstance(other, Poly):
            if other == 0:
                return not self._terms
            return set(self._terms) == {ONE} and self._terms[ONE] == other
        return NotImplemented

    def __hash__(self) -> int:
        if not self._terms:
            return hash(0)
        if set(self._terms) == {ONE}:
            return hash(self._terms[ONE])
        return hash((self.context, frozenset(self._terms.items())))

    def __repr__(self) -> str:
        return f"WeilElement({self})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        pieces = []
        for monomial, coeff in self.term_items():
            if not monomial:
                pieces.append(f"({coeff})")
                continue
            symbol = "*".join(f"{self.context.family}[{a},{i}]" for a, i in monomial)
            pieces.append(symbol if coeff == 1 else f"({coeff})*{symbol}")
        return " + ".join(pieces)


def weil_mul(u: WeilElement, v: WeilElement) -> WeilElement:
    if u.context != v.context:
        raise ContextMismatchError(f"Cannot multiply elements of {u.context} and {v.context}")
    terms: Dict[Monomial, Any] = {}
    for m1, c1 in u._terms.items():
        for m2, c2 in v._terms.items():
            sign, monomial = _monomial_product(m1, m2)
            if sign == 0:
                continue
            product = c1 * c2
            if sign < 0:
                product = -product
            terms[monomial] = terms[monomial] + product if monomial in terms else product
    return WeilElement._raw(u.context, terms)


def embed_outer(element: WeilElement, inner: WeilContext) -> WeilElement:
    """Same element with each coefficient promoted to a constant of the inner family"""
    return element.map_coefficients(inner.constant)


def embed_inner(element: WeilElement, outer: WeilContext) -> WeilElement:
    """An inner element as an outer constant"""
    if element.context == outer:
        raise ContextMismatchError("Tensor factors must be independent generator families")
    return outer.constant(element)


class InfPoint:
    """A point of coordinate space with Weil-algebra coordinates"""

    __slots__ = ("context", "coords")

    def __init__(self, context: WeilContext, coords: Sequence[Any]):
        self.context = context
        lifted = []
        for value in coords:
            if isinstance(value, WeilElement):
                if value.context != context:
                    raise ContextMismatchError(f"Coordinate from {value.context} in a point of {context}")
                lifted.append(value)
            else:
                lifted.append(context.constant(value))
        self.coords: Tuple[WeilElement, ...] = tuple(lifted)

    @classmethod
    def rational(cls, values: Sequence[Scalar], context: Optional[WeilContext] = None) -> "InfPoint":
        context = context or WeilContext(0, max(len(values), 1))
        return cls(context, [as_fraction(v) for v in values])

    @property
    def dimension(self) -> int:
        return len(self.coords)

    def base(self) -> Tuple[Any, ...]:
        return tuple(c.base for c in self.coords)

    def _check(self, other: "InfPoint") -> None:
        if other.context != self.context:
            raise ContextMismatchError(f"Points from {self.context} and {other.context}")
        if other.dimension != self.dimension:
            raise DimensionError(f"Points of dimension {self.dimension} and {other.dimension}")

    def __add__(self, other: "InfPoint") -> "InfPoint":
        if not isinstance(other, InfPoint):
            return NotImplemented
        self._check(other)
        return InfPoint(self.context, [a + b for a, b in zip(self.coords, other.coords)])

    def __sub__(self, other: "InfPoint") -> "InfPoint":
        if not isinstance(other, InfPoint):
            return NotImplemented
        self._check(other)
        return InfPoint(self.context, [a - b for a, b in zip(self.coords, other.coords)])

    def __neg__(self) -> "InfPoint":
        return InfPoint(self.context, [-c for c in self.coords])

    def __mul__(self, factor: Any) -> "InfPoint":
        if isinstance(factor, InfPoint):
            return NotImplemented
        return InfPoint(self.context, [c * factor for c in self.coords])

    __rmul__ = __mul__

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, InfPoint):
            return NotImplemented
        return self.context == other.context and self.coords == other.coords

    def __hash__(self) -> int:
        return hash(self.coords)

    def __repr__(self) -> str:
        return "(" + ", ".join(str(c) for c in self.coords) + ")"


class Simplex:
    """An ordered tuple of points (x0, x1, ..., xn) in one context"""

    __slots__ = ("vertices",)

    def __init__(self, vertices: Sequence[InfPoint]):
        if not vertices:
            raise DimensionError("A simplex needs at least one vertex")
        first = vertices[0]
        for vertex in vertices[1:]:
            first._check(vertex)
        self.vertices: Tuple[InfPoint, ...] = tuple(vertices)

    @classmethod
    def from_rational(cls, points: Sequence[Sequence[Scalar]]) -> "Simplex":
        context = WeilContext(0, max(len(points[0]), 1))
        return cls([InfPoint.rational(p, context) for p in points])

    @property
    def dim(self) -> int:
        return len(self.vertices) - 1

    @property
    def context(self) -> WeilContext:
        return self.vertices[0].context

    @property
    def ambient_dim(self) -> int:
        return self.vertices[0].dimension

    def rebuild(self, vertices: Sequence[InfPoint]) -> "Simplex":
        """A simplex of the same kind; used by derived constructions that preserve neighbours"""
        simplex = self.__class__.__new__(self.__class__)
        Simplex.__init__(simplex, vertices)
        return simplex

    def neighbour_failures(self) -> List[Tuple[int, int, int, int]]:
        failures = []
        for a, b in combinations(range(len(self.vertices)), 2):
            difference = (self.vertices[a] - self.vertices[b]).coords
            for i in range(len(difference)):
                for j in range(i, len(difference)):
                    if not (difference[i] * difference[j]).is_zero():
                        failures.append((a, b, i + 1, j + 1))
        return failures

    def is_infinitesimal(self) -> bool:
        return not self.neighbour_failures()

    def affine_combination(self, coeffs: Sequence[Any]) -> InfPoint:
        return affine_combination(self, coeffs)

    def pipe_vertices(self) -> Tuple[InfPoint, ...]:
        return pipe_vertices(self)

    def map(self, f: PolyMap) -> "Simplex":
        return self.rebuild([apply_poly_map(f, x) for x in self.vertices])

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, Simplex):
            return NotImplemented
        return self.vertices == other.vertices

    def __hash__(self) -> int:
        return hash(self.vertices)

    def __iter__(self) -> Iterator[InfPoint]:
        return iter(self.vertices)

    def __repr__(self) -> str:
        if not self.vertices[1:]:
            return f"P({self.vertices[0]!r})"
        return f"P({self.vertices[0]!r}; " + ", ".join(repr(v) for v in self.vertices[1:]) + ")"


class InfSimplex(Simplex):
    """A simplex whose vertices are pairwise first-order neighbours"""

    __slots__ = ()

    def __init__(self, vertices: Sequence[InfPoint], validate: bool = True):
        super().__init__(vertices)
        if validate:
            failures = self.neighbour_failures()
            if failures:
                a, b, i, j = failures[0]
                difference = (self.vertices[a] - self.vertices[b]).coords
                raise NeighbourError(
                    f"Vertices x{a} and x{b} are not neighbours: coordinates {i},{j} of their difference "
                    f"multiply to {difference[i - 1] * difference[j - 1]}"
                )


def generic_simplex(p: Sequence[Any], n: int, scales: Optional[Sequence[Scalar]] = None,
                    family: str = "e") -> InfSimplex:
    """x0 = p and x_a = p + t_a * e[a, .]; base coordinates may be rationals or polynomials"""
    m = len(p)
    context = WeilContext(n, m, family)
    scales = [Fraction(1)] * n if scales is None else [as_fraction(t) for t in scales]
    if len(scales) != n:
        raise DimensionError(f"{len(scales)} scales for {n} displacement slots")
    base = [value if isinstance(value, Poly) else as_fraction(value) for value in p]
    vertices = [InfPoint(context, base)]
    for a in range(1, n + 1):
        vertices.append(InfPoint(context, [
            context.constant(base[i - 1]) + context.generator(a, i) * scales[a - 1] for i in range(1, m + 1)
        ]))
    return InfSimplex(vertices, validate=False)


def symbolic_point(m: int) -> Tuple[Poly, ...]:
    """The point (X1, ..., Xm) with polynomial coordinates"""
    return tuple(Poly.variable(m, i) for i in range(1, m + 1))


def affine_combination(s: Simplex, coeffs: Sequence[Any]) -> InfPoint:
    if len(coeffs) != len(s.vertices):
        raise DimensionError(f"{len(coeffs)} coefficients for {len(s.vertices)} vertices")
    coeffs = [as_fraction(c) if is_scalar(c) else c for c in coeffs]
    total = coeffs[0]
    for c in coeffs[1:]:
        total = total + c
    if not total == 1:
        raise AffineViolationError(f"Affine coefficients sum to {total}, not 1")
    result = s.vertices[0] * coeffs[0]
    for c, vertex in zip(coeffs[1:], s.vertices[1:]):
        result = result + vertex * c
    return result


def apply_poly_map(f: PolyMap, x: InfPoint) -> InfPoint:
    if f.source_dim != x.dimension:
        raise DimensionError(f"Map from R^{f.source_dim} applied to a point of R^{x.dimension}")
    return InfPoint(x.context, f.evaluate(x.coords))


def subset_vertex(s: Simplex, label: int) -> InfPoint:
    """x0 + sum over h in H of (x_h - x0), H read off the bits of the label"""
    x0 = s.vertices[0]
    point = x0
    for h in range(1, s.dim + 1):
        if label >> (h - 1) & 1:
            point = point + (s.vertices[h] - x0)
    return point


def pipe_vertices(s: Simplex) -> Tuple[InfPoint, ...]:
    """The 2^n vertices of P(x0; x1, ..., xn), indexed by binary label"""
    return tuple(subset_vertex(s, label) for label in range(2 ** s.dim))

