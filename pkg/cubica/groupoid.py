"""Groupoids and cubical groupoids.

Composition of arrows is written diagrammatically: `x.then(y)` (or
`groupoid.compose(x, y, 1)`) first follows x, then y.  In dimension n a
cubical groupoid has compositions +_i for 1 <= i <= n, with x +_i y defined
when the upper i-face of x equals the lower i-face of y.
"""
import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Dict, Hashable, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from cubica.algebra import as_fraction, is_scalar
from cubica.cubical import (
    Cell,
    Pipe,
    Shell,
    Symmetry,
    cell_dim,
    cell_vertex,
    check_face_index,
    check_index,
    delete_bit,
    face_labels,
    insert_bit,
    pipe_face,
    pipe_symmetry,
)
from cubica.errors import CompositionError, DimensionError, IndexRangeError, UnsupportedFoldingError
from cubica.weil import InfPoint, Simplex

logger = logging.getLogger(__name__)

Letter = Tuple[str, int]


def parse_direction(direction: Union[str, int]) -> int:
    if direction in ("+", 1):
        return 1
    if direction in ("-", "−", -1):
        return -1
    raise CompositionError(f"Unknown letter direction {direction!r}")


# Value groups, written additively


class ValueGroup(ABC):
    """A group in additive notation (not necessarily commutative)"""

    is_abelian: bool = True

    @abstractmethod
    def zero(self) -> Any:
        """Neutral element"""
        pass

    @abstractmethod
    def add(self, a: Any, b: Any) -> Any:
        """a + b"""
        pass

    @abstractmethod
    def neg(self, a: Any) -> Any:
        """-a"""
        pass

    def sub(self, a: Any, b: Any) -> Any:
        return self.add(a, self.neg(b))

    def total(self, values: Iterable[Any]) -> Any:
        result = self.zero()
        for value in values:
            result = self.add(result, value)
        return result


class AdditiveGroup(ValueGroup):
    """Rationals, or Weil-algebra values, under addition"""

    def zero(self) -> Any:
        return Fraction(0)

    def add(self, a: Any, b: Any) -> Any:
        return a + b

    def neg(self, a: Any) -> Any:
        return -a

    def __eq__(self, other: Any) -> bool:
        return isinstance(other, AdditiveGroup)

    def __hash__(self) -> int:
        return hash("AdditiveGroup")


class FreeAbelianGroup(ValueGroup):
    """Elements are sorted tuples of (generator, nonzero integer)"""

    def __init__(self, generators: Iterable[str] = ()):
        self.generators = tuple(generators)

    def generator(self, name: str) -> Tuple[Tuple[str, int], ...]:
        return ((name, 1),)

    def zero(self) -> Tuple[Tuple[str, int], ...]:
        return ()

    def add(self, a, b):
        counts: Dict[str, int] = dict(a)
        for name, k in b:
            counts[name] = counts.get(name, 0) + k
        return tuple(sorted((name, k) for name, k in counts.items() if k))

    def neg(self, a):
        return tuple((name, -k) for name, k in a)

    def __eq__(self, other: Any) -> bool:
        return isinstance(other, FreeAbelianGroup)

    def __hash__(self) -> int:
        return hash("FreeAbelianGroup")


class FreeGroup(ValueGroup):
    """Free group on named generators: endo-arrows of a one-vertex free groupoid"""

    is_abelian = False

    def __init__(self, generators: Iterable[str]):
        self.groupoid = FreeGroupoid.bouquet(generators)

    def generator(self, name: str) -> "Arrow":
        return self.groupoid.arrow(name)

    def word(self, letters: Sequence[Tuple[str, Union[str, int]]]) -> "Arrow":
        return self.groupoid.word_reduce(letters, source=self.groupoid.hub)

    def zero(self) -> "Arrow":
        return self.groupoid.identity(self.groupoid.hub)

    def add(self, a: "Arrow", b: "Arrow") -> "Arrow":
        return a.then(b)

    def neg(self, a: "Arrow") -> "Arrow":
        return a.inverse()

    def __eq__(self, other: Any) -> bool:
        return isinstance(other, FreeGroup) and other.groupoid == self.groupoid

    def __hash__(self) -> int:
        return hash(self.groupoid)


# Cubical groupoids


class CubicalGroupoid(ABC):
    """Handle for the compositions, inverses and degeneracies of a family of cells"""

    dimension: int = 1

    @abstractmethod
    def compose(self, x: Any, y: Any, i: int) -> Any:
        """x +_i y"""
        pass

    @abstractmethod
    def inverse(self, x: Any, i: int) -> Any:
        """-_i x"""
        pass

    @abstractmethod
    def degenerate(self, c: Any, i: int) -> Any:
        """epsilon_i c, one dimension up"""
        pass

    def face(self, x: Any, alpha: int, i: int) -> Any:
        return x.face(alpha, i)

    def identity_at(self, x: Any, i: int, alpha: int = 1) -> Any:
        """The identity for +_i on the alpha side of x"""
        return self.degenerate(self.face(x, alpha, i), i)

    def compose_all(self, cells: Sequence[Any], i: int) -> Any:
        if not cells:
            raise CompositionError("Nothing to compose")
        result = cells[0]
        for cell in cells[1:]:
            result = self.compose(result, cell, i)
        return result

    def totally_degenerate(self, vertex: Any, dim: int) -> Any:
        cell = vertex
        for _ in range(dim):
            cell = self.degenerate(cell, 1)
        return cell

    def is_totally_degenerate(self, cell: Any) -> bool:
        dim = cell_dim(cell)
        return cell == self.totally_degenerate(cell_vertex(cell, 0), dim)


class Arrow(Cell):
    """An arrow of a free groupoid, stored as a freely reduced word"""

    __slots__ = ("groupoid", "source", "target", "word")

    def __init__(self, groupoid: "FreeGroupoid", source: Hashable, target: Hashable, word: Tuple[Letter, ...]):
        self.groupoid = groupoid
        self.source = source
        self.target = target
        self.word = tuple(word)

    @property
    def dim(self) -> int:
        return 1

    def face(self, alpha: int, i: int) -> Hashable:
        check_face_index(1, alpha, i)
        return self.target if alpha else self.source

    def is_identity(self) -> bool:
        return not self.word

    def then(self, other: "Arrow") -> "Arrow":
        return self.groupoid.compose(self, other, 1)

    def inverse(self) -> "Arrow":
        return self.groupoid.inverse(self, 1)

    def letters(self) -> List[List[str]]:
        return [[edge, "+" if sign > 0 else "-"] for edge, sign in self.word]

    def __mul__(self, other: "Arrow") -> "Arrow":
        return self.then(other)

    def __invert__(self) -> "Arrow":
        return self.inverse()

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, Arrow):
            return NotImplemented
        return (self.source, self.target, self.word) == (other.source, other.target, other.word) and (
            self.groupoid is other.groupoid or self.groupoid == other.groupoid
        )

    def __hash__(self) -> int:
        return hash((self.source, self.target, self.word))

    def __repr__(self) -> str:
        if not self.word:
            return f"id_{self.source}"
        return ".".join(edge if sign > 0 else f"{edge}^-1" for edge, sign in self.word)


class FreeGroupoid(CubicalGroupoid):
    """Free groupoid on a directed graph"""

    dimension = 1

    def __init__(self, edges: Mapping[str, Tuple[Hashable, Hashable]], vertices: Iterable[Hashable] = ()):
        self.edges: Dict[str, Tuple[Hashable, Hashable]] = dict(edges)
        found = set(vertices)
        for source, target in self.edges.values():
            found.update((source, target))
        self.vertices = frozenset(found)
        self.hub: Optional[Hashable] = None

    @classmethod
    def bouquet(cls, generators: Iterable[str], vertex: Hashable = "*") -> "FreeGroupoid":
        groupoid = cls({name: (vertex, vertex) for name in generators}, [vertex])
        groupoid.hub = vertex
        return groupoid

    def add_vertex(self, vertex: Hashable) -> None:
        self.vertices = self.vertices | {vertex}

    def add_edge(self, name: str, source: Hashable, target: Hashable) -> Arrow:
        if name in self.edges and self.edges[name] != (source, target):
            raise CompositionError(f"Edge {name!r} already joins {self.edges[name]}")
        self.edges[name] = (source, target)
        self.vertices = self.vertices | {source, target}
        return self.arrow(name)

    def letter_ends(self, letter: Letter) -> Tuple[Hashable, Hashable]:
        edge, sign = letter
        if edge not in self.edges:
            raise CompositionError(f"Unknown edge {edge!r}")
        source, target = self.edges[edge]
        return (source, target) if sign > 0 else (target, source)

    def arrow(self, edge: str) -> Arrow:
        source, target = self.letter_ends((edge, 1))
        return Arrow(self, source, target, ((edge, 1),))

    def identity(self, vertex: Hashable) -> Arrow:
        if vertex not in self.vertices:
            raise CompositionError(f"Unknown vertex {vertex!r}")
        return Arrow(self, vertex, vertex, ())

    def word_reduce(self, word: Iterable[Tuple[str, Union[str, int]]], source: Optional[Hashable] = None) -> Arrow:
        letters = [(edge, parse_direction(direction)) for edge, direction in word]
        if not letters and source is None:
            raise CompositionError("An empty word needs an explicit source vertex")
        current = self.letter_ends(letters[0])[0] if source is None else source
        start = current
        stack: List[Letter] = []
        for position, letter in enumerate(letters):
            begin, end = self.letter_ends(letter)
            if begin != current:
                raise CompositionError(f"Letter {position} ({letter[0]}) starts at {begin!r}, expected {current!r}")
            current = end
            if stack and stack[-1] == (letter[0], -letter[1]):
                stack.pop()
            else:
                stack.append(letter)
        return Arrow(self, start, current, tuple(stack))

    def compose(self, x: Arrow, y: Arrow, i: int = 1) -> Arrow:
        check_index("Composition", i, 1, 1)
        if x.target != y.source:
            raise CompositionError(f"Cannot compose {x!r} ending at {x.target!r} with {y!r} starting at {y.source!r}")
        return self.word_reduce(x.word + y.word, source=x.source)

    def inverse(self, x: Arrow, i: int = 1) -> Arrow:
        check_index("Inverse", i, 1, 1)
        return Arrow(self, x.target, x.source, tuple((edge, -sign) for edge, sign in reversed(x.word)))

    def degenerate(self, c: Hashable, i: int = 1) -> Arrow:
        check_index("Degeneracy", i, 1, 1)
        return self.identity(c)

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, FreeGroupoid):
            return NotImplemented
        return self.edges == other.edges and self.vertices == other.vertices

    def __hash__(self) -> int:
        return hash(frozenset(self.edges.items()))


def word_reduce(groupoid: FreeGroupoid, word, source: Optional[Hashable] = None) -> Arrow:
    return groupoid.word_reduce(word, source)


# Parallelepipeda in a group


class GroupPipe(Cell):
    """P(x0; x1, ..., xn) for group elements, vertices x_H = x_h1 - x0 + x_h2 - ... - x0 + x_hk"""

    __slots__ = ("group", "points")

    def __init__(self, group: ValueGroup, points: Sequence[Any]):
        if not points:
            raise DimensionError("A group parallelepipedum needs a base element")
        self.group = group
        self.points = tuple(points)

    @property
    def dim(self) -> int:
        return len(self.points) - 1

    def subset_vertex(self, members: Sequence[int]) -> Any:
        members = sorted(members)
        if not members:
            return self.points[0]
        x0 = self.group.neg(self.points[0])
        value = self.points[members[0]]
        for h in members[1:]:
            value = self.group.add(self.group.add(value, x0), self.points[h])
        return value

    def vertex(self, label: int) -> Any:
        return self.subset_vertex([h for h in range(1, self.dim + 1) if label >> (h - 1) & 1])

    def vertices(self) -> Tuple[Any, ...]:
        return tuple(self.vertex(label) for label in range(2 ** self.dim))

    def face_pipe(self, alpha: int, i: int) -> "GroupPipe":
        check_face_index(self.dim, alpha, i)
        if alpha == 0:
            return GroupPipe(self.group, self.points[:i] + self.points[i + 1:])
        others = [self.subset_vertex([a, i]) for a in range(1, self.dim + 1) if a != i]
        return GroupPipe(self.group, [self.points[i]] + others)

    def face(self, alpha: int, i: int) -> Any:
        face = self.face_pipe(alpha, i)
        return face.points[0] if face.dim == 0 else face

    def degeneracy(self, i: int) -> "GroupPipe":
        check_index("Degeneracy", i, 1, self.dim + 1)
        return GroupPipe(self.group, self.points[:i] + (self.points[0],) + self.points[i:])

    def transposition(self, i: int) -> "GroupPipe":
        check_index("Transposition", i, 1, self.dim - 1)
        p = self.points
        return GroupPipe(self.group, p[:i] + (p[i + 1], p[i]) + p[i + 2:])

    def reversion(self, i: int) -> "GroupPipe":
        check_index("Reversion", i, 1, self.dim)
        x0, xi = self.points[0], self.points[i]
        shifted = [
            x0 if a == i else self.group.add(self.group.add(self.points[a], self.group.neg(x0)), xi)
            for a in range(1, self.dim + 1)
        ]
        return GroupPipe(self.group, [xi] + shifted)

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, GroupPipe):
            return NotImplemented
        return self.points == other.points

    def __hash__(self) -> int:
        return hash(self.points)

    def __repr__(self) -> str:
        return f"P({self.points[0]!r}; " + ", ".join(repr(p) for p in self.points[1:]) + ")"


def group_pipe_vertices(group: ValueGroup, points: Sequence[Any]) -> GroupPipe:
    return GroupPipe(group, points)


def transposition_counterexample(group: ValueGroup, x: Any, y: Any, z: Any) -> Tuple[GroupPipe, GroupPipe]:
    """The upper 1-face of sigma_1 P(x; y, z) next to the upper 2-face of P(x; y, z)"""
    P = GroupPipe(group, [x, y, z])
    return P.transposition(1).face_pipe(1, 1), P.face_pipe(1, 2)


def _pipe_points(P: Any) -> Tuple[Any, ...]:
    return P.simplex.vertices if isinstance(P, Pipe) else P.points


def _pipe_rebuild(P: Any, points: Sequence[Any]) -> Any:
    if isinstance(P, Pipe):
        return Pipe(P.simplex.rebuild(points))
    return GroupPipe(P.group, points)


def _pipe_face(P: Any, alpha: int, i: int) -> Any:
    return pipe_face(P, alpha, i) if isinstance(P, Pipe) else P.face_pipe(alpha, i)


def pipe_compose(P: Any, Q: Any, i: int) -> Any:
    """P +_i Q = (x0; x1, ..., x'_i, ..., xn) when the upper i-face of P is the lower i-face of Q"""
    if P.dim != Q.dim:
        raise CompositionError(f"Cannot compose a {P.dim}-pipe with a {Q.dim}-pipe")
    check_index("Composition", i, 1, P.dim)
    if _pipe_face(P, 1, i) != _pipe_face(Q, 0, i):
        raise CompositionError(f"Upper {i}-face of {P!r} differs from lower {i}-face of {Q!r}")
    points = _pipe_points(P)
    return _pipe_rebuild(P, points[:i] + (_pipe_points(Q)[i],) + points[i + 1:])


def _as_point_pipe(c: Any) -> Pipe:
    if isinstance(c, Pipe):
        return c
    if isinstance(c, InfPoint):
        return Pipe(Simplex([c]))
    raise DimensionError(f"Expected a pipe or a point, got {type(c).__name__}")


def pipe_filler(lower: Any, upper: Any, i: int) -> Optional[Pipe]:
    """The only pipe that can have `lower`, `upper` as its i-faces, or None if there is none"""
    lower, upper = _as_point_pipe(lower), _as_point_pipe(upper)
    check_index("Filler", i, 1, lower.dim + 1)
    points = lower.simplex.vertices
    candidate = Pipe(lower.simplex.rebuild(points[:i] + (upper.base,) + points[i:]))
    return candidate if pipe_face(candidate, 1, i) == upper else None


class PipeGroupoid(CubicalGroupoid):
    """Affine (or group) parallelepipeda with their compositions"""

    dimension = 4

    def __init__(self, group: Optional[ValueGroup] = None):
        self.group = group

    def compose(self, x: Any, y: Any, i: int) -> Any:
        return pipe_compose(x, y, i)

    def inverse(self, x: Any, i: int) -> Any:
        return x.reversion(i)

    def degenerate(self, c: Any, i: int) -> Any:
        if isinstance(c, (Pipe, GroupPipe)):
            return c.degeneracy(i)
        if self.group is not None:
            return GroupPipe(self.group, [c]).degeneracy(i)
        return pipe_symmetry(_as_point_pipe(c), Symmetry.DEGENERACY, i)


# The constant groupoid M_n(A)


class ConstantCell(Cell):
    """A k-cell of M_n(A): 2^k vertices, plus a value of A when k = n"""

    __slots__ = ("groupoid", "vertices", "value")

    def __init__(self, groupoid: "ConstantGroupoid", vertices: Sequence[Hashable], value: Any = None):
        self.groupoid = groupoid
        self.vertices = tuple(vertices)
        self.value = value

    @property
    def dim(self) -> int:
        return len(self.vertices).bit_length() - 1

    def face(self, alpha: int, i: int) -> Any:
        return self.groupoid.face(self, alpha, i)

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, ConstantCell):
            return NotImplemented
        return self.vertices == other.vertices and self.value == other.value

    def __hash__(self) -> int:
        return hash(self.vertices)

    def __repr__(self) -> str:
        suffix = "" if self.value is None else f" | {self.value}"
        return f"M[{', '.join(repr(v) for v in self.vertices)}{suffix}]"


class ConstantGroupoid(CubicalGroupoid):
    """Codiscrete in dimensions below n, with a value group A in dimension n"""

    def __init__(self, n: int, group: Optional[ValueGroup] = None):
        if n < 1:
            raise DimensionError("The constant groupoid needs n >= 1")
        group = group or AdditiveGroup()
        if n > 1 and not group.is_abelian:
            raise DimensionError("A non-commutative value group is only allowed for n = 1")
        self.dimension = n
        self.group = group

    def cell(self, vertices: Sequence[Hashable], value: Any = None) -> ConstantCell:
        count = len(vertices)
        k = count.bit_length() - 1
        if count < 2 or 2 ** k != count:
            raise DimensionError(f"A cell needs 2^k vertices with k >= 1, got {count}")
        if k > self.dimension:
            raise DimensionError(f"M_{self.dimension} has no {k}-cells")
        if k == self.dimension and value is None:
            raise DimensionError(f"A top-dimensional cell of M_{self.dimension} needs a value")
        if k < self.dimension and value is not None:
            raise DimensionError(f"Only {self.dimension}-cells carry values")
        if is_scalar(value):
            value = as_fraction(value)
        return ConstantCell(self, vertices, value)

    def face(self, x: ConstantCell, alpha: int, i: int) -> Any:
        check_face_index(x.dim, alpha, i)
        vertices = [x.vertices[label] for label in face_labels(x.dim, alpha, i)]
        if len(vertices) == 1:
            return vertices[0]
        return ConstantCell(self, vertices)

    def compose(self, x: ConstantCell, y: ConstantCell, i: int) -> ConstantCell:
        if x.dim != y.dim:
            raise CompositionError(f"Cannot compose a {x.dim}-cell with a {y.dim}-cell")
        check_index("Composition", i, 1, x.dim)
        if self.face(x, 1, i) != self.face(y, 0, i):
            raise CompositionError(f"Upper {i}-face of {x!r} differs from lower {i}-face of {y!r}")
        bit = 1 << (i - 1)
        vertices = [(y if label & bit else x).vertices[label] for label in range(len(x.vertices))]
        value = None if x.value is None else self.group.add(x.value, y.value)
        return ConstantCell(self, vertices, value)

    def inverse(self, x: ConstantCell, i: int) -> ConstantCell:
        check_index("Inverse", i, 1, x.dim)
        bit = 1 << (i - 1)
        vertices = [x.vertices[label ^ bit] for label in range(len(x.vertices))]
        value = None if x.value is None else self.group.neg(x.value)
        return ConstantCell(self, vertices, value)

    def _vertex_list(self, c: Any) -> List[Hashable]:
        return list(c.vertices) if isinstance(c, ConstantCell) else [c]

    def degenerate(self, c: Any, i: int) -> ConstantCell:
        source = self._vertex_list(c)
        k = len(source).bit_length() - 1
        check_index("Degeneracy", i, 1, k + 1)
        if k + 1 > self.dimension:
            raise DimensionError(f"M_{self.dimension} has no {k + 1}-cells")
        vertices = [source[delete_bit(label, i)] for label in range(2 ** (k + 1))]
        value = self.group.zero() if k + 1 == self.dimension else None
        return ConstantCell(self, vertices, value)

    def connection(self, c: Any, i: int) -> ConstantCell:
        """The extra degeneracy gamma_i: folds directions i, i+1 by taking the larger coordinate"""
        source = self._vertex_list(c)
        k = len(source).bit_length() - 1
        check_index("Connection", i, 1, k)
        if k + 1 > self.dimension:
            raise DimensionError(f"M_{self.dimension} has no {k + 1}-cells")
        vertices = []
        for label in range(2 ** (k + 1)):
            folded = (label >> (i - 1) & 1) | (label >> i & 1)
            reduced = delete_bit(label, i + 1)
            vertices.append(source[insert_bit(delete_bit(reduced, i), i, folded)])
        value = self.group.zero() if k + 1 == self.dimension else None
        return ConstantCell(self, vertices, value)


# Shell groupoids G' and G''


def shell_compose(x: Shell, y: Shell, i: int, base: CubicalGroupoid) -> Shell:
    check_index("Composition", i, 1, x.dim)
    if x.dim != y.dim:
        raise CompositionError(f"Cannot compose a {x.dim}-shell with a {y.dim}-shell")
    if x.face(1, i) != y.face(0, i):
        raise CompositionError(f"Shells do not meet along direction {i}")
    faces = {(0, i): x.face(0, i), (1, i): y.face(1, i)}
    for j in range(1, x.dim + 1):
        if j == i:
            continue
        shifted = i - 1 if j < i else i
        for alpha in (0, 1):
            faces[(alpha, j)] = base.compose(x.face(alpha, j), y.face(alpha, j), shifted)
    return Shell(faces)


def shell_inverse(x: Shell, i: int, base: CubicalGroupoid) -> Shell:
    check_index("Inverse", i, 1, x.dim)
    faces = {(0, i): x.face(1, i), (1, i): x.face(0, i)}
    for j in range(1, x.dim + 1):
        if j != i:
            shifted = i - 1 if j < i else i
            for alpha in (0, 1):
                faces[(alpha, j)] = base.inverse(x.face(alpha, j), shifted)
    return Shell(faces)


def shell_degenerate(c: Any, i: int, base: CubicalGroupoid) -> Shell:
    n = cell_dim(c)
    check_index("Degeneracy", i, 1, n + 1)
    faces = {}
    for j in range(1, n + 2):
        for alpha in (0, 1):
            if j == i:
                faces[(alpha, j)] = c
            elif j < i:
                faces[(alpha, j)] = base.degenerate(base.face(c, alpha, j), i - 1)
            else:
                faces[(alpha, j)] = base.degenerate(base.face(c, alpha, j - 1), i)
    return Shell(faces)


class ShellGroupoid(CubicalGroupoid):
    """G': agrees with G up to its dimension n, with all shells as (n+1)-cells"""

    def __init__(self, base: CubicalGroupoid):
        self.base = base
        self.dimension = base.dimension + 1

    def compose(self, x: Any, y: Any, i: int) -> Any:
        if isinstance(x, Shell) and x.dim == self.dimension:
            return shell_compose(x, y, i, self.base)
        return self.base.compose(x, y, i)

    def inverse(self, x: Any, i: int) -> Any:
        if isinstance(x, Shell) and x.dim == self.dimension:
            return shell_inverse(x, i, self.base)
        return self.base.inverse(x, i)

    def degenerate(self, c: Any, i: int) -> Any:
        if cell_dim(c) == self.base.dimension:
            return shell_degenerate(c, i, self.base)
        return self.base.degenerate(c, i)

    def face(self, x: Any, alpha: int, i: int) -> Any:
        return x.face(alpha, i)


# Foldings


def bsh_gamma(g: Any, groupoid: CubicalGroupoid) -> Shell:
    """The square with g on both faces through the initial vertex and identities on the other two"""
    end = groupoid.face(g, 1, 1)
    identity = groupoid.degenerate(end, 1)
    return Shell({(0, 1): g, (0, 2): g, (1, 1): identity, (1, 2): identity})


def folding_square(sh: Shell, groupoid: CubicalGroupoid) -> Any:
    """Cyclic composite u -> y -> x -> z -> u of a square.

    Faces: (0,2) is x -> y, (1,1) is y -> u, (0,1) is x -> z, (1,2) is z -> u.
    """
    if sh.dim != 2:
        raise UnsupportedFoldingError(f"Square folding needs a 2-shell, got dimension {sh.dim}")
    bottom, right = sh.face(0, 2), sh.face(1, 1)
    left, top = sh.face(0, 1), sh.face(1, 2)
    return groupoid.compose_all([groupoid.inverse(right, 1), groupoid.inverse(bottom, 1), left, top], 1)


def square_from_edges(edge: Callable[[Hashable, Hashable], Any], corners: Sequence[Hashable]) -> Shell:
    """A 2-shell from four corners in label order and a rule giving the arrow between two corners"""
    faces = {}
    for alpha in (0, 1):
        for i in (1, 2):
            lo, hi = (corners[label] for label in face_labels(2, alpha, i))
            faces[(alpha, i)] = edge(lo, hi)
    return Shell(faces)


CUBE_EDGES = ("01", "02", "04", "13", "15", "23", "26", "37", "45", "46", "57", "67")
CUBE_WORD = (
    "76 64 45 57 75 54 40 01 15 57 75 51 13 37 73 31 10 02 23 37 73 32 26 67 76 62 20 04 46 67"
).split()
# (x, y, z) for each face square, x its initial corner; the fourth corner is x ^ y ^ z
CUBE_FACES = ((4, 6, 5), (0, 4, 1), (1, 5, 3), (0, 1, 2), (2, 3, 6), (0, 2, 4))
CUBE_CONJUGATORS = (None, "57", None, "37", None, "67")


class CubeDiagram:
    """Twelve arrows on the edges of the 3-cube, keyed "01", "02", ..."""

    def __init__(self, groupoid: CubicalGroupoid, edges: Mapping[str, Any]):
        if set(edges) != set(CUBE_EDGES):
            missing = sorted(set(CUBE_EDGES) - set(edges))
            extra = sorted(set(edges) - set(CUBE_EDGES))
            raise CompositionError(f"Cube diagram edges must be {CUBE_EDGES}; missing {missing}, unexpected {extra}")
        self.groupoid = groupoid
        self.edges = dict(edges)
        self.corners: Dict[int, Hashable] = {}
        for key in CUBE_EDGES:
            arrow = self.edges[key]
            for label, end in ((int(key[0]), groupoid.face(arrow, 0, 1)), (int(key[1]), groupoid.face(arrow, 1, 1))):
                if label in self.corners and self.corners[label] != end:
                    raise CompositionError(
                        f"Edge {key} puts {end!r} at corner {label}, which already is {self.corners[label]!r}"
                    )
                self.corners[label] = end

    def step(self, token: str) -> Any:
        if token in self.edges:
            return self.edges[token]
        reverse = token[::-1]
        if reverse in self.edges:
            return self.groupoid.inverse(self.edges[reverse], 1)
        raise CompositionError(f"No cube edge joins corners {token[0]} and {token[1]}")

    def evaluate(self, tokens: Sequence[str]) -> Any:
        return self.groupoid.compose_all([self.step(token) for token in tokens], 1)

    def arrow(self, a: int, b: int) -> Any:
        return self.step(f"{a}{b}")

    def face_curvature(self, x: int, y: int, z: int) -> Any:
        u = x ^ y ^ z
        return self.evaluate([f"{u}{y}", f"{y}{x}", f"{x}{z}", f"{z}{u}"])

    def face_square(self, alpha: int, i: int) -> Shell:
        corners = face_labels(3, alpha, i)
        return square_from_edges(lambda a, b: self.arrow(a, b), corners)

    def to_shell(self) -> Shell:
        return Shell({(alpha, i): self.face_square(alpha, i) for alpha in (0, 1) for i in (1, 2, 3)})


def folding_cube(diagram: CubeDiagram) -> Any:
    """The thirty-letter composite around the cube, an endo-arrow at corner 7"""
    return diagram.evaluate(CUBE_WORD)


def cube_regrouped(diagram: CubeDiagram) -> Any:
    """Product of the six face curvatures, conjugated to corner 7 where needed"""
    g = diagram.groupoid
    pieces = []
    for (x, y, z), conjugator in zip(CUBE_FACES, CUBE_CONJUGATORS):
        curvature = diagram.face_curvature(x, y, z)
        if conjugator is not None:
            path = diagram.step(conjugator)
            curvature = g.compose_all([g.inverse(path, 1), curvature, path], 1)
        pieces.append(curvature)
    return g.compose_all(pieces, 1)


def generic_cube_diagram() -> CubeDiagram:
    groupoid = FreeGroupoid({key: (key[0], key[1]) for key in CUBE_EDGES})
    return CubeDiagram(groupoid, {key: groupoid.arrow(key) for key in CUBE_EDGES})


def verify_cube_word() -> bool:
    diagram = generic_cube_diagram()
    identity = diagram.groupoid.identity("7")
    folded = folding_cube(diagram)
    regrouped = cube_regrouped(diagram)
    logger.debug(f"Cube word reduces to {folded!r}, regrouped product to {regrouped!r}")
    return folded == identity and regrouped == identity


def _value_group(cell: Any) -> ValueGroup:
    while isinstance(cell, Shell):
        cell = cell.face(0, 1)
    if isinstance(cell, ConstantCell):
        return cell.groupoid.group
    raise UnsupportedFoldingError(f"No additive folding for cells of type {type(cell).__name__}")


def fold_value(cell: Any) -> Any:
    """Value of a top cell of M_n(A), or the alternating face sum of a shell of such"""
    if isinstance(cell, ConstantCell):
        if cell.value is None:
            raise UnsupportedFoldingError(f"{cell!r} is below the top dimension and carries no value")
        return cell.value
    if not isinstance(cell, Shell):
        raise UnsupportedFoldingError(f"No additive folding for cells of type {type(cell).__name__}")
    group = _value_group(cell)
    if not group.is_abelian:
        raise UnsupportedFoldingError("The alternating face sum needs an abelian value group")
    total = group.zero()
    for i in range(1, cell.dim + 1):
        difference = group.sub(fold_value(cell.face(1, i)), fold_value(cell.face(0, i)))
        total = group.add(total, difference if i % 2 == 0 else group.neg(difference))
    return total


def folding_additive(sh: Shell) -> Tuple[Any, Any]:
    """(last vertex, sum over i of (-1)^i (a1_i - a0_i))"""
    return cell_vertex(sh, 2 ** sh.dim - 1), fold_value(sh)


# Crossed parts


@dataclass(frozen=True)
class CrossedPart:
    level: int
    base: Hashable
    element: Any
    boundary: Any = None


def in_crossed_part(groupoid: CubicalGroupoid, cell: Any) -> bool:
    dim = cell_dim(cell)
    for i in range(1, dim + 1):
        for alpha in (0, 1):
            if (alpha, i) == (0, 1):
                continue
            if not groupoid.is_totally_degenerate(groupoid.face(cell, alpha, i)):
                return False
    return True


def crossed_extract(groupoid: CubicalGroupoid, cells: Iterable[Any], k: int) -> List[CrossedPart]:
    if k < 2:
        raise IndexRangeError("Crossed parts start at level 2")
    parts = []
    for cell in cells:
        if cell_dim(cell) == k and in_crossed_part(groupoid, cell):
            parts.append(CrossedPart(k, cell_vertex(cell, 2 ** k - 1), cell, groupoid.face(cell, 0, 1)))
    return parts


def boundary_squared_trivial(groupoid: CubicalGroupoid, part: CrossedPart) -> bool:
    if part.level < 3:
        return True
    return groupoid.is_totally_degenerate(groupoid.face(part.boundary, 0, 1))


def check_crossed_boundaries(groupoid: CubicalGroupoid, cells: Iterable[Any], k: int) -> bool:
    """Each crossed k-part has its boundary in the crossed part one level down, and boundary twice is trivial"""
    parts = crossed_extract(groupoid, cells, k)
    for part in parts:
        if k >= 3 and not in_crossed_part(groupoid, part.boundary):
            logger.warning(f"Boundary of {part.element!r} leaves the crossed part")
            return False
        if not boundary_squared_trivial(groupoid, part):
            logger.warning(f"Boundary twice of {part.element!r} is not trivial")
            return False
    logger.debug(f"Checked {len(parts)} crossed {k}-parts")
    return True


def check_crossed_trivial(n: int = 1) -> bool:
    """Every 3-cell of G'' for a free 1-groupoid G lying in the crossed part is totally degenerate"""
    if n != 1:
        raise UnsupportedFoldingError("Crossed triviality is only constructed for n = 1")
    parent = list(range(8))

    def find(v: int) -> int:
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    forced = set()
    for i in (1, 2, 3):
        for alpha in (0, 1):
            if (alpha, i) == (0, 1):
                continue
            corners = set(face_labels(3, alpha, i))
            for key in CUBE_EDGES:
                a, b = int(key[0]), int(key[1])
                if a in corners and b in corners:
                    forced.add(key)
                    parent[find(a)] = find(b)
    free = [key for key in CUBE_EDGES if key not in forced]
    merged = len({find(v) for v in range(8)}) == 1
    logger.debug(f"Edges left unconstrained: {free}, corners merged: {merged}")
    if not merged:
        return False

    # realise the most general such cube and check its remaining face
    groupoid = FreeGroupoid.bouquet(free, vertex="v")
    arrows = {key: groupoid.arrow(key) if key in free else groupoid.identity("v") for key in CUBE_EDGES}
    diagram = CubeDiagram(groupoid, arrows)
    squares = ShellGroupoid(groupoid)
    cubes = ShellGroupoid(squares)
    cube = diagram.to_shell()
    if not in_crossed_part(cubes, cube):
        return False
    return squares.is_totally_degenerate(cube.face(0, 1)) and folding_square(cube.face(0, 1), groupoid).is_identity()
