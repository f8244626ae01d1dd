from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from cubica.algebra import Poly, PolyMap
from cubica.cubical import (
    CubeOp,
    Pipe,
    Shell,
    SingularCube,
    Symmetry,
    boundary_shell,
    cube_structure,
    face_labels,
    is_subdivision,
    pipe_face,
    pipe_symmetry,
    subdivide,
    subdivide_pipe,
)
from cubica.errors import DimensionError, IndexRangeError, ShellAdjacencyError
from cubica.forms import generic_pipe
from cubica.groupoid import pipe_compose, pipe_filler
from cubica.weil import InfPoint
from tests.strategies import cubes, parameters, rational_pipes


def square(x1, x2) -> SingularCube:
    return SingularCube(PolyMap(2, [x1, x2]))


def degenerate_pipe(P: Pipe, i: int) -> Pipe:
    return pipe_symmetry(P, Symmetry.DEGENERACY, i)


class TestLabels:
    def test_face_labels(self):
        assert face_labels(2, 0, 1) == [0, 2]
        assert face_labels(2, 1, 1) == [1, 3]
        assert face_labels(3, 1, 3) == [4, 5, 6, 7]

    def test_corners_follow_bits(self):
        f = SingularCube.identity(3)
        assert f.corner(5) == (1, 0, 1)
        assert f.corners()[3] == (1, 1, 0)


class TestPipeRelations:
    @pytest.mark.parametrize("k", [1, 2, 3, 4])
    def test_boundary_shell_of_generic_pipe(self, k):
        assert boundary_shell(generic_pipe(k, k)).adjacency_failures() == []

    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_faces_of_degeneracies(self, k):
        P = generic_pipe(3, k)
        for i in range(1, k + 2):
            for alpha in (0, 1):
                assert pipe_face(pipe_symmetry(P, Symmetry.DEGENERACY, i), alpha, i) == P

    @pytest.mark.parametrize("k", [1, 2])
    def test_faces_of_degeneracies_in_other_directions(self, k):
        P = generic_pipe(3, k)
        for i in range(1, k + 2):
            raised = degenerate_pipe(P, i)
            for j in range(1, k + 2):
                for alpha in (0, 1):
                    if j < i:
                        assert pipe_face(raised, alpha, j) == degenerate_pipe(pipe_face(P, alpha, j), i - 1)
                    elif j > i:
                        assert pipe_face(raised, alpha, j) == degenerate_pipe(pipe_face(P, alpha, j - 1), i)

    @pytest.mark.parametrize("k", [0, 1, 2])
    def test_degeneracies_commute_past_each_other(self, k):
        P = generic_pipe(3, k)
        for i in range(1, k + 2):
            for j in range(1, i + 1):
                assert degenerate_pipe(degenerate_pipe(P, i), j) == degenerate_pipe(degenerate_pipe(P, j), i + 1)

    @given(rational_pipes(2, 3))
    def test_reversion_swaps_faces(self, P):
        for i in range(1, 4):
            flipped = P.reversion(i)
            assert flipped.reversion(i) == P
            assert pipe_face(flipped, 0, i) == pipe_face(P, 1, i)
            assert pipe_face(flipped, 1, i) == pipe_face(P, 0, i)

    @given(rational_pipes(3, 3))
    def test_transposition_moves_faces(self, P):
        for i in (1, 2):
            swapped = P.transposition(i)
            assert swapped.transposition(i) == P
            for alpha in (0, 1):
                assert pipe_face(swapped, alpha, i) == pipe_face(P, alpha, i + 1)

    def test_face_index_range(self):
        with pytest.raises(IndexRangeError):
            pipe_face(generic_pipe(2, 2), 0, 3)
        with pytest.raises(IndexRangeError):
            pipe_face(generic_pipe(2, 2), 2, 1)

    def test_vertex_face_is_a_point(self):
        P = generic_pipe(2, 1, base=[1, 1])
        assert isinstance(P.face(1, 1), InfPoint)


class TestPipeSubdivision:
    @given(rational_pipes(2, 2), parameters(), st.integers(min_value=1, max_value=2))
    def test_recomposition(self, P, s, i):
        first, second = subdivide_pipe(P, i, s)
        assert is_subdivision(P, first, second, i)
        assert pipe_compose(first, second, i) == P

    def test_subdivided_pipe_stays_infinitesimal(self):
        first, second = subdivide_pipe(generic_pipe(2, 2, base=[0, 1]), 1, Fraction(1, 3))
        assert first.simplex.is_infinitesimal()
        assert second.simplex.is_infinitesimal()

    def test_symbolic_parameter(self):
        P = generic_pipe(2, 1, base=[0, 0])
        s = Poly.variable(1, 1)
        first, _ = subdivide_pipe(P, 1, s)
        assert first.simplex.vertices[1].coords[0].coefficient(((1, 1),)) == s

    @given(rational_pipes(2, 2), st.integers(min_value=1, max_value=2))
    def test_filler_recovers_the_pipe(self, P, i):
        assert pipe_filler(pipe_face(P, 0, i), pipe_face(P, 1, i), i) == P

    def test_filler_rejects_non_parallel_faces(self):
        P = generic_pipe(2, 2, base=[0, 0])
        other = generic_pipe(2, 2, base=[1, 0])
        assert pipe_filler(pipe_face(P, 0, 1), pipe_face(other, 1, 2), 1) is None


class TestSingularCubes:
    def test_worked_subdivision_of_the_square(self):
        x1, x2 = Poly.variable(2, 1), Poly.variable(2, 2)
        first, second = subdivide(SingularCube.identity(2), 1, Fraction(1, 2))
        assert first == square(x1 * Fraction(1, 2), x2)
        assert second == square(x1 * Fraction(1, 2) + Fraction(1, 2), x2)

    def test_faces(self):
        t = Poly.variable(1, 1)
        f = SingularCube.identity(2)
        assert f.face(1, 1) == SingularCube(PolyMap(1, [Poly.constant(1, 1), t]))
        assert f.face(0, 2) == SingularCube(PolyMap(1, [t, Poly.zero(1)]))

    @given(cubes(2, 3), parameters(), st.integers(min_value=1, max_value=2))
    def test_subdivision_faces(self, f, s, i):
        first, second = subdivide(f, i, s)
        assert is_subdivision(f, first, second, i)

    @given(cubes(3, 2), parameters(), st.integers(min_value=1, max_value=3))
    def test_faces_of_subdivisions_subdivide(self, f, s, i):
        first, second = subdivide(f, i, s)
        for j in range(1, 4):
            if j == i:
                continue
            shifted = i - 1 if j < i else i
            for alpha in (0, 1):
                assert is_subdivision(f.face(alpha, j), first.face(alpha, j), second.face(alpha, j), shifted)

    @given(cubes(2, 2))
    def test_symmetries(self, f):
        assert f.transposition(1).transposition(1) == f
        for i in (1, 2):
            assert f.reversion(i).reversion(i) == f
            assert f.reversion(i).face(0, i) == f.face(1, i)
        for i in (1, 2, 3):
            assert f.degeneracy(i).face(1, i) == f

    @given(cubes(2, 2))
    def test_faces_of_degeneracies_in_other_directions(self, f):
        for i in (1, 2, 3):
            for j in (1, 2, 3):
                for alpha in (0, 1):
                    if j < i:
                        assert f.degeneracy(i).face(alpha, j) == f.face(alpha, j).degeneracy(i - 1)
                    elif j > i:
                        assert f.degeneracy(i).face(alpha, j) == f.face(alpha, j - 1).degeneracy(i)

    @given(cubes(1, 3))
    def test_degeneracies_commute_past_each_other(self, f):
        for i in (1, 2):
            for j in range(1, i + 1):
                assert f.degeneracy(i).degeneracy(j) == f.degeneracy(j).degeneracy(i + 1)

    @given(cubes(3, 2, degree=3))
    def test_boundary_shell(self, f):
        assert boundary_shell(f).adjacency_failures() == []

    def test_cube_structure_dispatch(self):
        f = SingularCube.identity(2)
        assert cube_structure(f, CubeOp("face", 2, 1)) == f.face(1, 2)
        assert cube_structure(f, CubeOp("reversion", 1)) == f.reversion(1)
        with pytest.raises(ValueError):
            cube_structure(f, CubeOp("twist", 1))

    def test_subdivision_index(self):
        with pytest.raises(IndexRangeError):
            subdivide(SingularCube.identity(2), 3, Fraction(1, 2))

    def test_pipe_to_cube(self):
        P = Pipe.from_rational([[0, 0], [1, 0], [0, 1]])
        assert P.to_cube() == SingularCube.identity(2)


class TestShells:
    def test_mismatched_faces(self):
        t = Poly.variable(1, 1)
        f = SingularCube.identity(2)
        faces = {key: f.face(*key) for key in ((0, 1), (1, 1), (0, 2), (1, 2))}
        faces[(1, 2)] = SingularCube(PolyMap(1, [t, Poly.constant(1, 2)]))
        with pytest.raises(ShellAdjacencyError):
            Shell(faces)
        assert Shell(faces, validate=False).adjacency_failures()

    def test_face_count(self):
        with pytest.raises(DimensionError):
            Shell({(0, 1): SingularCube.identity(1)})
