"""Exact rational polynomials and polynomial maps.

Everything here is immutable.  Variables are numbered from 1 (x1, x2, ...)
in every public signature; exponent tuples are positional.
"""
from fractions import Fraction
from itertools import combinations
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from cubica.errors import DimensionError

Exponents = Tuple[int, ...]
Scalar = Union[int, Fraction]


def as_fraction(value: Any) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int) and not isinstance(value, bool):
        return Fraction(value)
    raise TypeError(f"Expected an exact rational, got {type(value).__name__}")


def is_scalar(value: Any) -> bool:
    return isinstance(value, (int, Fraction)) and not isinstance(value, bool)


def format_rational(value: Scalar) -> str:
    """Render as "p/q" with q > 0"""
    value = as_fraction(value)
    return f"{value.numerator}/{value.denominator}"


def format_value(value: Any) -> str:
    """Exact text for a rational, polynomial or Weil value"""
    return format_rational(value) if is_scalar(value) else str(value)


def permutation_sign(sequence: Sequence[int]) -> int:
    """Sign of the permutation that sorts a sequence of distinct integers"""
    inversions = 0
    for a in range(len(sequence)):
        for b in range(a + 1, len(sequence)):
            if sequence[a] > sequence[b]:
                inversions += 1
    return -1 if inversions % 2 else 1


def determinant(matrix: Sequence[Sequence[Any]]) -> Any:
    """Laplace expansion along the first row, valid over any commutative ring"""
    size = len(matrix)
    if size == 0:
        return Fraction(1)
    if any(len(row) != size for row in matrix):
        raise DimensionError(f"Determinant needs a square matrix, got {size} rows")
    if size == 1:
        return matrix[0][0]
    total = None
    for column in range(size):
        minor = [row[:column] + row[column + 1:] for row in (list(r) for r in matrix[1:])]
        term = matrix[0][column] * determinant(minor)
        if column % 2:
            term = -term
        total = term if total is None else total + term
    return total


class Poly:
    """Sparse multivariate polynomial with rational coefficients"""

    __slots__ = ("variable_count", "_terms")

    def __init__(self, variable_count: int, terms: Optional[Mapping[Exponents, Scalar]] = None):
        if variable_count < 0:
            raise DimensionError(f"Negative variable count {variable_count}")
        self.variable_count = variable_count
        cleaned: Dict[Exponents, Fraction] = {}
        for exps, coeff in (terms or {}).items():
            exps = tuple(exps)
            if len(exps) != variable_count or any(e < 0 for e in exps):
                raise DimensionError(f"Exponent tuple {exps} does not fit {variable_count} variables")
            coeff = as_fraction(coeff)
            if coeff:
                cleaned[exps] = cleaned.get(exps, Fraction(0)) + coeff
                if not cleaned[exps]:
                    del cleaned[exps]
        self._terms = cleaned

    @classmethod
    def zero(cls, variable_count: int) -> "Poly":
        return cls(variable_count)

    @classmethod
    def constant(cls, variable_count: int, value: Scalar) -> "Poly":
        return cls(variable_count, {(0,) * variable_count: value})

    @classmethod
    def variable(cls, variable_count: int, var: int) -> "Poly":
        _check_var(variable_count, var)
        exps = tuple(1 if k == var - 1 else 0 for k in range(variable_count))
        return cls(variable_count, {exps: 1})

    @classmethod
    def _raw(cls, variable_count: int, terms: Dict[Exponents, Fraction]) -> "Poly":
        poly = cls.__new__(cls)
        poly.variable_count = variable_count
        poly._terms = {e: c for e, c in terms.items() if c}
        return poly

    # Inspection

    def term_items(self) -> List[Tuple[Exponents, Fraction]]:
        """Terms in graded lexicographic order, highest first"""
        return sorted(self._terms.items(), key=lambda item: (sum(item[0]), item[0]), reverse=True)

    def coefficient(self, exps: Exponents) -> Fraction:
        return self._terms.get(tuple(exps), Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(not any(exps) for exps in self._terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"Polynomial {self} is not constant")
        return self._terms.get((0,) * self.variable_count, Fraction(0))

    def degree(self) -> int:
        return max((sum(exps) for exps in self._terms), default=0)

    # Arithmetic

    def _coerce(self, other: Any) -> Optional["Poly"]:
        if isinstance(other, Poly):
            if other.variable_count != self.variable_count:
                raise DimensionError(
                    f"Polynomials in {self.variable_count} and {other.variable_count} variables"
                )
            return other
        if is_scalar(other):
            return Poly.constant(self.variable_count, other)
        return None

    def __add__(self, other: Any) -> "Poly":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        terms = dict(self._terms)
        for exps, coeff in other._terms.items():
            terms[exps] = terms.get(exps, Fraction(0)) + coeff
        return Poly._raw(self.variable_count, terms)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly._raw(self.variable_count, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other: Any) -> "Poly":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: Any) -> "Poly":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other: Any) -> "Poly":
        if is_scalar(other):
            factor = as_fraction(other)
            return Poly._raw(self.variable_count, {e: c * factor for e, c in self._terms.items()})
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        terms: Dict[Exponents, Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                exps = tuple(a + b for a, b in zip(e1, e2))
                terms[exps] = terms.get(exps, Fraction(0)) + c1 * c2
        return Poly._raw(self.variable_count, terms)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "Poly":
        if exponent < 0:
            raise ValueError("Negative powers are not polynomials")
        result = Poly.constant(self.variable_count, 1)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __eq__(self, other: Any) -> bool:
        if isinstance(other, Poly):
            return self.variable_count == other.variable_count and self._terms == other._terms
        if is_scalar(other):
            return self.is_constant() and self.constant_value() == other
        return NotImplemented

    def __hash__(self) -> int:
        if self.is_constant():
            return hash(self.constant_value())
        return hash((self.variable_count, frozenset(self._terms.items())))

    # Calculus

    def partial_derivative(self, var: int) -> "Poly":
        return partial_derivative(self, var)

    def antiderivative(self, var: int) -> "Poly":
        return antiderivative(self, var)

    def substitute(self, var: int, value: Scalar) -> "Poly":
        """Fix one variable to a rational value; the variable count is kept"""
        _check_var(self.variable_count, var)
        value = as_fraction(value)
        index = var - 1
        terms: Dict[Exponents, Fraction] = {}
        for exps, coeff in self._terms.items():
            reduced = exps[:index] + (0,) + exps[index + 1:]
            terms[reduced] = terms.get(reduced, Fraction(0)) + coeff * value ** exps[index]
        return Poly._raw(self.variable_count, terms)

    def evaluate(self, point: Sequence[Any]) -> Any:
        return poly_eval_in_algebra(self, point)

    def __repr__(self) -> str:
        return f"Poly({self.variable_count}, {self})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        pieces = []
        for exps, coeff in self.term_items():
            factors = [f"x{k + 1}" if e == 1 else f"x{k + 1}^{e}" for k, e in enumerate(exps) if e]
            if not factors:
                pieces.append(str(coeff))
            elif coeff == 1:
                pieces.append("*".join(factors))
            elif coeff == -1:
                pieces.append("-" + "*".join(factors))
            else:
                pieces.append(f"{coeff}*" + "*".join(factors))
        return " + ".join(pieces).replace("+ -", "- ")


def _check_var(variable_count: int, var: int) -> None:
    if not 1 <= var <= variable_count:
        raise DimensionError(f"Variable x{var} out of range for {variable_count} variables")


def poly_eval_in_algebra(p: Poly, point: Sequence[Any]) -> Any:
    """Substitute elements of a commutative unital Q-algebra for the variables"""
    if len(point) != p.variable_count:
        raise DimensionError(f"Point of length {len(point)} for {p.variable_count} variables")
    total = point[0] * 0 if point else Fraction(0)
    powers: Dict[Tuple[int, int], Any] = {}
    for exps, coeff in p.term_items():
        value: Any = coeff
        for index, e in enumerate(exps):
            if e:
                key = (index, e)
                if key not in powers:
                    powers[key] = point[index] ** e
                value = value * powers[key]
        total = total + value
    return total


def partial_derivative(p: Poly, var: int) -> Poly:
    _check_var(p.variable_count, var)
    index = var - 1
    terms: Dict[Exponents, Fraction] = {}
    for exps, coeff in p._terms.items():
        e = exps[index]
        if e:
            lowered = exps[:index] + (e - 1,) + exps[index + 1:]
            terms[lowered] = terms.get(lowered, Fraction(0)) + coeff * e
    return Poly._raw(p.variable_count, terms)


def antiderivative(p: Poly, var: int) -> Poly:
    """Antiderivative in one variable, constant of integration fixed to 0"""
    _check_var(p.variable_count, var)
    index = var - 1
    terms: Dict[Exponents, Fraction] = {}
    for exps, coeff in p._terms.items():
        e = exps[index]
        raised = exps[:index] + (e + 1,) + exps[index + 1:]
        terms[raised] = coeff / (e + 1)
    return Poly._raw(p.variable_count, terms)


def unit_interval_integral(p: Poly, var: int) -> Poly:
    """Integrate over 0 <= x_var <= 1, leaving a polynomial free of x_var"""
    primitive = antiderivative(p, var)
    return primitive.substitute(var, 1) - primitive.substitute(var, 0)


def iterated_unit_integral(p: Poly, order: Optional[Iterable[int]] = None) -> Fraction:
    order = list(range(1, p.variable_count + 1)) if order is None else list(order)
    if sorted(order) != list(range(1, p.variable_count + 1)):
        raise DimensionError(f"Integration order {order} is not a permutation of the variables")
    for var in order:
        p = unit_interval_integral(p, var)
    return p.constant_value()


class PolyMap:
    """Polynomial map R^source_dim -> R^target_dim"""

    __slots__ = ("source_dim", "target_dim", "components")

    def __init__(self, source_dim: int, components: Sequence[Poly]):
        for index, component in enumerate(components):
            if component.variable_count != source_dim:
                raise DimensionError(
                    f"Component {index + 1} has {component.variable_count} variables, expected {source_dim}"
                )
        self.source_dim = source_dim
        self.target_dim = len(components)
        self.components: Tuple[Poly, ...] = tuple(components)

    @classmethod
    def identity(cls, dim: int) -> "PolyMap":
        return cls(dim, [Poly.variable(dim, k) for k in range(1, dim + 1)])

    @classmethod
    def affine(cls, offset: Sequence[Scalar], columns: Sequence[Sequence[Scalar]]) -> "PolyMap":
        """t -> offset + sum_a t_a * columns[a]"""
        source_dim = len(columns)
        components = []
        for j, base in enumerate(offset):
            component = Poly.constant(source_dim, base)
            for a, column in enumerate(columns):
                component = component + Poly.variable(source_dim, a + 1) * as_fraction(column[j])
            components.append(component)
        return cls(source_dim, components)

    @classmethod
    def from_simplex(cls, points: Sequence[Sequence[Scalar]]) -> "PolyMap":
        """The affine map [[x0, ..., xn]](s) = (1 - sum s_a) x0 + sum s_a x_a"""
        if not points:
            raise DimensionError("A simplex needs at least one vertex")
        base = [as_fraction(c) for c in points[0]]
        columns = []
        for vertex in points[1:]:
            if len(vertex) != len(base):
                raise DimensionError("Simplex vertices live in different dimensions")
            columns.append([as_fraction(c) - b for c, b in zip(vertex, base)])
        return cls.affine(base, columns)

    def evaluate(self, point: Sequence[Any]) -> Tuple[Any, ...]:
        if len(point) != self.source_dim:
            raise DimensionError(f"Point of length {len(point)} for a map from R^{self.source_dim}")
        return tuple(poly_eval_in_algebra(component, point) for component in self.components)

    __call__ = evaluate

    def jacobian(self) -> Tuple[Tuple[Poly, ...], ...]:
        """Rows indexed by target coordinate, columns by source variable"""
        return tuple(
            tuple(partial_derivative(component, var) for var in range(1, self.source_dim + 1))
            for component in self.components
        )

    def degree(self) -> int:
        return max((c.degree() for c in self.components), default=0)

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, PolyMap):
            return NotImplemented
        return self.source_dim == other.source_dim and self.components == other.components

    def __hash__(self) -> int:
        return hash((self.source_dim, self.components))

    def __repr__(self) -> str:
        body = ", ".join(str(c) for c in self.components)
        return f"PolyMap(R^{self.source_dim} -> R^{self.target_dim}: ({body}))"


def compose_maps(g: PolyMap, f: PolyMap) -> PolyMap:
    """g after f"""
    if f.target_dim != g.source_dim:
        raise DimensionError(f"Cannot compose R^{g.source_dim} -> ... after ... -> R^{f.target_dim}")
    zero = Poly.zero(f.source_dim)
    return PolyMap(f.source_dim, [zero + poly_eval_in_algebra(c, f.components) for c in g.components])


def increasing_tuples(count: int, size: int) -> List[Tuple[int, ...]]:
    """Strictly increasing 1-based index tuples of the given size"""
    return list(combinations(range(1, count + 1), size))
