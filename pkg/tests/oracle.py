"""sympy counterparts of cubica values, used as an independent oracle"""
from fractions import Fraction

import sympy

from cubica.algebra import Poly, PolyMap


def symbols(count: int):
    return sympy.symbols(f"x1:{count + 1}")


def to_sympy(p: Poly, xs=None):
    xs = symbols(p.variable_count) if xs is None else xs
    expr = sympy.Integer(0)
    for exps, coeff in p.term_items():
        term = sympy.Rational(coeff.numerator, coeff.denominator)
        for x, e in zip(xs, exps):
            term *= x ** e
        expr += term
    return sympy.expand(expr)


def to_fraction(value) -> Fraction:
    value = sympy.Rational(value)
    return Fraction(int(value.p), int(value.q))


def unit_cube_integral(expr, xs) -> Fraction:
    for x in xs:
        expr = sympy.integrate(expr, (x, 0, 1))
    return to_fraction(expr)


def jacobian(f: PolyMap):
    xs = symbols(f.source_dim)
    return sympy.Matrix([to_sympy(c, xs) for c in f.components]).jacobian(xs), xs
