from fractions import Fraction
from itertools import combinations

from hypothesis import strategies as st

from cubica.algebra import Poly, PolyMap
from cubica.cubical import SingularCube
from cubica.forms import ClassicalForm, generic_pipe
from cubica.groupoid import FreeGroupoid


def rationals(bound: int = 6, max_denominator: int = 4):
    return st.builds(
        Fraction,
        st.integers(min_value=-bound, max_value=bound),
        st.integers(min_value=1, max_value=max_denominator),
    )


def exponents(variable_count: int, degree: int):
    return st.lists(
        st.integers(min_value=0, max_value=degree), min_size=variable_count, max_size=variable_count
    ).filter(lambda exps: sum(exps) <= degree)


def polys(variable_count: int, degree: int = 2, max_terms: int = 3):
    return st.dictionaries(
        exponents(variable_count, degree).map(tuple), rationals(), max_size=max_terms
    ).map(lambda terms: Poly(variable_count, terms))


@st.composite
def forms(draw, ambient_dim: int, degree: int, poly_degree: int = 2):
    terms = {}
    for axes in combinations(range(1, ambient_dim + 1), degree):
        if draw(st.booleans()):
            terms[axes] = draw(polys(ambient_dim, poly_degree))
    return ClassicalForm(ambient_dim, degree, terms)


def poly_maps(source_dim: int, target_dim: int, degree: int = 2):
    return st.lists(
        polys(source_dim, degree), min_size=target_dim, max_size=target_dim
    ).map(lambda components: PolyMap(source_dim, components))


def cubes(k: int, ambient_dim: int, degree: int = 2):
    return poly_maps(k, ambient_dim, degree).map(SingularCube)


def points(dim: int):
    return st.lists(rationals(), min_size=dim, max_size=dim)


def rational_pipes(ambient_dim: int, k: int):
    """Generic k-pipes at a rational base point"""
    return points(ambient_dim).map(lambda base: generic_pipe(ambient_dim, k, base=base))


def parameters():
    return st.sampled_from([Fraction(0), Fraction(1), Fraction(1, 2), Fraction(-1), Fraction(2)]) | rationals(3)


GENERATORS = ("a", "b", "c")


def words(max_size: int = 8):
    """Words over a one-vertex free groupoid on a, b, c"""
    return st.lists(st.tuples(st.sampled_from(GENERATORS), st.sampled_from(["+", "-"])), max_size=max_size)


def bouquet() -> FreeGroupoid:
    return FreeGroupoid.bouquet(GENERATORS)
