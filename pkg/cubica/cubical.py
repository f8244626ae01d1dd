"""Cubical structure on infinitesimal pipes and polynomial singular cubes.

Directions are numbered from 1.  Vertex labels of a k-cube are integers in
[0, 2^k) whose bit (h - 1) is the coordinate in direction h.
"""
import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, List, Mapping, Tuple

from cubica.algebra import Poly, PolyMap, Scalar, as_fraction, compose_maps, is_scalar
from cubica.errors import DimensionError, IndexRangeError, ShellAdjacencyError
from cubica.weil import InfPoint, Simplex, pipe_vertices

logger = logging.getLogger(__name__)

FaceKey = Tuple[int, int]


class Cell(ABC):
    """A cell of a cubical set: has a dimension and face operators"""

    @property
    @abstractmethod
    def dim(self) -> int:
        """Dimension of the cell"""
        pass

    @abstractmethod
    def face(self, alpha: int, i: int) -> Any:
        """The face in direction i at end alpha"""
        pass


def cell_dim(cell: Any) -> int:
    """Anything that is not a Cell counts as a 0-cell (a point or vertex name)"""
    return cell.dim if isinstance(cell, Cell) else 0


def check_face_index(dim: int, alpha: int, i: int) -> None:
    if alpha not in (0, 1):
        raise IndexRangeError(f"Face end must be 0 or 1, got {alpha}")
    if not 1 <= i <= dim:
        raise IndexRangeError(f"Face direction {i} out of range for a {dim}-cell")


def check_index(kind: str, i: int, low: int, high: int) -> None:
    if not low <= i <= high:
        raise IndexRangeError(f"{kind} index {i} outside {low}..{high}")


def insert_bit(label: int, i: int, alpha: int) -> int:
    """Insert bit alpha at direction i (bit position i - 1)"""
    low = label & ((1 << (i - 1)) - 1)
    high = label >> (i - 1)
    return low | (alpha << (i - 1)) | (high << i)


def delete_bit(label: int, i: int) -> int:
    low = label & ((1 << (i - 1)) - 1)
    high = label >> i
    return low | (high << (i - 1))


def face_labels(dim: int, alpha: int, i: int) -> List[int]:
    """Labels of the vertices of face (alpha, i), in the face's own label order"""
    return [insert_bit(label, i, alpha) for label in range(2 ** (dim - 1))]


def cell_vertex(cell: Any, label: int) -> Any:
    while cell_dim(cell) > 0:
        cell = cell.face(label & 1, 1)
        label >>= 1
    return cell


def cell_vertices(cell: Any) -> Tuple[Any, ...]:
    return tuple(cell_vertex(cell, label) for label in range(2 ** cell_dim(cell)))


class Symmetry(str, Enum):
    DEGENERACY = "degeneracy"
    TRANSPOSITION = "transposition"
    REVERSION = "reversion"


# Infinitesimal (and affine) parallelepipeda


class Pipe(Cell):
    """The parallelepipedum P(x0; x1, ..., xn) spanned by a simplex"""

    __slots__ = ("simplex",)

    def __init__(self, simplex: Simplex):
        self.simplex = simplex

    @classmethod
    def from_rational(cls, points) -> "Pipe":
        return cls(Simplex.from_rational(points))

    @property
    def dim(self) -> int:
        return self.simplex.dim

    @property
    def base(self) -> InfPoint:
        return self.simplex.vertices[0]

    def vertices(self) -> Tuple[InfPoint, ...]:
        return pipe_vertices(self.simplex)

    def face(self, alpha: int, i: int) -> Any:
        face = pipe_face(self, alpha, i)
        return face.base if face.dim == 0 else face

    def degeneracy(self, i: int) -> "Pipe":
        return pipe_symmetry(self, Symmetry.DEGENERACY, i)

    def transposition(self, i: int) -> "Pipe":
        return pipe_symmetry(self, Symmetry.TRANSPOSITION, i)

    def reversion(self, i: int) -> "Pipe":
        return pipe_symmetry(self, Symmetry.REVERSION, i)

    def to_cube(self) -> "SingularCube":
        """[[x0, ..., xn]] for a pipe with rational vertices"""
        points = []
        for vertex in self.simplex.vertices:
            if any(c.nilpotent_terms for c in vertex.coords):
                raise DimensionError("Only pipes with rational vertices have a polynomial affine map")
            points.append([c.base for c in vertex.coords])
        return SingularCube(PolyMap.from_simplex(points))

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, Pipe):
            return NotImplemented
        return self.simplex == other.simplex

    def __hash__(self) -> int:
        return hash(self.simplex)

    def __repr__(self) -> str:
        return repr(self.simplex)


def _as_pipe(P: Any) -> Pipe:
    return P if isinstance(P, Pipe) else Pipe(P)


def pipe_face(P: Pipe, alpha: int, i: int) -> Pipe:
    """Omit x_i (alpha = 0), or move the base to x_i (alpha = 1)"""
    P = _as_pipe(P)
    check_face_index(P.dim, alpha, i)
    xs = P.simplex.vertices
    if alpha == 0:
        vertices = xs[:i] + xs[i + 1:]
    else:
        x0, xi = xs[0], xs[i]
        vertices = (xi,) + tuple(xs[a] - x0 + xi for a in range(1, len(xs)) if a != i)
    return Pipe(P.simplex.rebuild(vertices))


def pipe_symmetry(P: Pipe, kind: Symmetry, i: int) -> Pipe:
    P = _as_pipe(P)
    kind = Symmetry(kind)
    xs = P.simplex.vertices
    n = P.dim
    if kind is Symmetry.DEGENERACY:
        check_index("Degeneracy", i, 1, n + 1)
        vertices = xs[:i] + (xs[0],) + xs[i:]
    elif kind is Symmetry.TRANSPOSITION:
        check_index("Transposition", i, 1, n - 1)
        vertices = xs[:i] + (xs[i + 1], xs[i]) + xs[i + 2:]
    else:
        check_index("Reversion", i, 1, n)
        x0, xi = xs[0], xs[i]
        vertices = (xi,) + tuple(x0 if a == i else xs[a] - x0 + xi for a in range(1, n + 1))
    return Pipe(P.simplex.rebuild(vertices))


def subdivide_pipe(P: Pipe, i: int, s: Any) -> Tuple[Pipe, Pipe]:
    """Split P at parameter s in direction i; s may be a rational or a polynomial"""
    P = _as_pipe(P)
    check_index("Subdivision", i, 1, P.dim)
    s = as_fraction(s) if is_scalar(s) else s
    xs = P.simplex.vertices
    x0, xi = xs[0], xs[i]
    ys = x0 + (xi - x0) * s
    first = xs[:i] + (ys,) + xs[i + 1:]
    shift = ys - x0
    second = (ys,) + tuple(xi if a == i else xs[a] + shift for a in range(1, P.dim + 1))
    return Pipe(P.simplex.rebuild(first)), Pipe(P.simplex.rebuild(second))


# Polynomial singular cubes


def _coordinate_map(source_dim: int, images) -> PolyMap:
    return PolyMap(source_dim, list(images))


def face_inclusion(k: int, alpha: int, i: int) -> PolyMap:
    """R^(k-1) -> R^k putting alpha in slot i"""
    t = [Poly.variable(k - 1, j) for j in range(1, k)]
    return _coordinate_map(k - 1, t[:i - 1] + [Poly.constant(k - 1, alpha)] + t[i - 1:])


def degeneracy_projection(k: int, i: int) -> PolyMap:
    """R^(k+1) -> R^k forgetting coordinate i"""
    return _coordinate_map(k + 1, [Poly.variable(k + 1, j) for j in range(1, k + 2) if j != i])


def transposition_map(k: int, i: int) -> PolyMap:
    t = [Poly.variable(k, j) for j in range(1, k + 1)]
    t[i - 1], t[i] = t[i], t[i - 1]
    return _coordinate_map(k, t)


def reversion_map(k: int, i: int) -> PolyMap:
    t = [Poly.variable(k, j) for j in range(1, k + 1)]
    t[i - 1] = 1 - t[i - 1]
    return _coordinate_map(k, t)


def subdivision_maps(k: int, i: int, s: Scalar) -> Tuple[PolyMap, PolyMap]:
    """h: t_i -> s t_i and k: t_i -> s + t_i (1 - s)"""
    s = as_fraction(s)
    t = [Poly.variable(k, j) for j in range(1, k + 1)]
    lower, upper = list(t), list(t)
    lower[i - 1] = t[i - 1] * s
    upper[i - 1] = t[i - 1] * (1 - s) + s
    return _coordinate_map(k, lower), _coordinate_map(k, upper)


class SingularCube(Cell):
    """A polynomial map f: R^k -> R^m viewed as a k-cube"""

    __slots__ = ("map",)

    def __init__(self, map: PolyMap):
        self.map = map

    @classmethod
    def identity(cls, k: int) -> "SingularCube":
        return cls(PolyMap.identity(k))

    @classmethod
    def from_simplex(cls, points) -> "SingularCube":
        return cls(PolyMap.from_simplex(points))

    @property
    def dim(self) -> int:
        return self.map.source_dim

    @property
    def ambient_dim(self) -> int:
        return self.map.target_dim

    def precompose(self, g: PolyMap) -> "SingularCube":
        return SingularCube(compose_maps(self.map, g))

    def face(self, alpha: int, i: int) -> "SingularCube":
        check_face_index(self.dim, alpha, i)
        return self.precompose(face_inclusion(self.dim, alpha, i))

    def degeneracy(self, i: int) -> "SingularCube":
        check_index("Degeneracy", i, 1, self.dim + 1)
        return self.precompose(degeneracy_projection(self.dim, i))

    def transposition(self, i: int) -> "SingularCube":
        check_index("Transposition", i, 1, self.dim - 1)
        return self.precompose(transposition_map(self.dim, i))

    def reversion(self, i: int) -> "SingularCube":
        check_index("Reversion", i, 1, self.dim)
        return self.precompose(reversion_map(self.dim, i))

    def corner(self, label: int) -> Tuple[Fraction, ...]:
        point = [Fraction((label >> (h - 1)) & 1) for h in range(1, self.dim + 1)]
        return tuple(c.constant_value() if isinstance(c, Poly) else c for c in self.map.evaluate(point))

    def corners(self) -> Tuple[Tuple[Fraction, ...], ...]:
        return tuple(self.corner(label) for label in range(2 ** self.dim))

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, SingularCube):
            return NotImplemented
        return self.map == other.map

    def __hash__(self) -> int:
        return hash(self.map)

    def __repr__(self) -> str:
        return f"SingularCube({self.map!r})"


@dataclass(frozen=True)
class CubeOp:
    kind: str
    index: int
    alpha: int = 0


def cube_structure(f: SingularCube, op: CubeOp) -> SingularCube:
    if op.kind == "face":
        return f.face(op.alpha, op.index)
    if op.kind == Symmetry.DEGENERACY.value:
        return f.degeneracy(op.index)
    if op.kind == Symmetry.TRANSPOSITION.value:
        return f.transposition(op.index)
    if op.kind == Symmetry.REVERSION.value:
        return f.reversion(op.index)
    raise ValueError(f"Unknown cube operation {op.kind}")


def subdivide(f: SingularCube, i: int, s: Scalar) -> Tuple[SingularCube, SingularCube]:
    check_index("Subdivision", i, 1, f.dim)
    lower, upper = subdivision_maps(f.dim, i, s)
    return f.precompose(lower), f.precompose(upper)


def is_subdivision(f: Cell, first: Cell, second: Cell, i: int) -> bool:
    """The face identities a subdivision in direction i must satisfy"""
    return (
        first.face(1, i) == second.face(0, i)
        and first.face(0, i) == f.face(0, i)
        and second.face(1, i) == f.face(1, i)
    )


# Shells


class Shell(Cell):
    """A family of 2(n+1) n-cells whose boundaries match up"""

    __slots__ = ("_faces", "_dim")

    def __init__(self, faces: Mapping[FaceKey, Any], validate: bool = True):
        count = len(faces)
        if count < 2 or count % 2:
            raise DimensionError(f"A shell needs an even, positive number of faces, got {count}")
        dim = count // 2
        expected = {(alpha, i) for alpha in (0, 1) for i in range(1, dim + 1)}
        if set(faces) != expected:
            raise DimensionError(f"Shell faces must be indexed by {sorted(expected)}")
        dims = {cell_dim(cell) for cell in faces.values()}
        if dims != {dim - 1}:
            raise DimensionError(f"Faces of a {dim}-shell must all be {dim - 1}-cells, got dimensions {dims}")
        self._faces: Dict[FaceKey, Any] = dict(faces)
        self._dim = dim
        if validate:
            failures = self.adjacency_failures()
            if failures:
                raise ShellAdjacencyError(f"Shell faces do not match up at {failures[0]}")

    @property
    def dim(self) -> int:
        return self._dim

    @property
    def faces(self) -> Dict[FaceKey, Any]:
        return dict(self._faces)

    def face(self, alpha: int, i: int) -> Any:
        check_face_index(self._dim, alpha, i)
        return self._faces[(alpha, i)]

    def adjacency_failures(self) -> List[Tuple[int, int, int, int]]:
        """(alpha, i, beta, j) with i < j where the two ways to reach a codimension-2 face differ"""
        failures = []
        if self._dim < 2:
            return failures
        for j in range(2, self._dim + 1):
            for i in range(1, j):
                for alpha in (0, 1):
                    for beta in (0, 1):
                        left = self._faces[(beta, j)].face(alpha, i)
                        right = self._faces[(alpha, i)].face(beta, j - 1)
                        if left != right:
                            failures.append((alpha, i, beta, j))
        return failures

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, Shell):
            return NotImplemented
        return self._faces == other._faces

    def __hash__(self) -> int:
        return hash(tuple(sorted((k, hash(v)) for k, v in self._faces.items())))

    def __repr__(self) -> str:
        body = ", ".join(f"{alpha}{i}: {self._faces[(alpha, i)]!r}" for alpha, i in sorted(self._faces))
        return f"Shell[{self._dim}]({body})"


def boundary_shell(c: Cell) -> Shell:
    faces = {(alpha, i): c.face(alpha, i) for i in range(1, c.dim + 1) for alpha in (0, 1)}
    try:
        return Shell(faces)
    except ShellAdjacencyError as e:
        logger.error(f"Face operators of {c!r} violate the cubical relations: {e}")
        raise

