"""Conversion between the JSON file schemas and core values."""
import json
import logging
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Type, TypeVar

from pydantic import BaseModel, ValidationError

from cubica.algebra import Poly, PolyMap, format_rational, format_value, is_scalar
from cubica.cubical import Pipe, SingularCube
from cubica.errors import CubicaError, ParseError
from cubica.forms import ClassicalForm
from cubica.groupoid import CUBE_EDGES, AdditiveGroup, Arrow, ConstantGroupoid, CubeDiagram, FreeGroupoid
from cubica.models import (
    CubeFile,
    EdgesFile,
    FormFile,
    FormTermModel,
    NilTermModel,
    PipeFile,
    PointModel,
    TermModel,
    WeilElementModel,
    WordModel,
)
from cubica.weil import InfPoint, WeilElement, generic_simplex

logger = logging.getLogger(__name__)

M = TypeVar("M", bound=BaseModel)


def parse_rational(text: str) -> Fraction:
    return Fraction(text.strip())


def load_json(path: str) -> Any:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise ParseError(path, "file", f"cannot read: {e.strerror}", e)
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(path, f"line {e.lineno} column {e.colno}", e.msg, e)


def validate(model: Type[M], data: Any, path: str) -> M:
    try:
        return model.model_validate(data)
    except ValidationError as e:
        first = e.errors()[0]
        location = "/".join(str(part) for part in first["loc"]) or "$"
        raise ParseError(path, location, first["msg"], e)


# Polynomials


def poly_from_terms(terms: List[TermModel], variable_count: int) -> Poly:
    collected: Dict[tuple, Fraction] = {}
    for term in terms:
        exps = tuple(term.exps)
        if len(exps) != variable_count:
            raise ValueError(f"exponents {list(exps)} do not fit {variable_count} variables")
        collected[exps] = collected.get(exps, Fraction(0)) + parse_rational(term.coeff)
    return Poly(variable_count, collected)


def poly_to_terms(p: Poly) -> List[TermModel]:
    return [TermModel(coeff=format_rational(c), exps=list(exps)) for exps, c in p.term_items()]


# Forms, cubes and pipes


def form_from_model(model: FormFile) -> ClassicalForm:
    terms: Dict[tuple, Poly] = {}
    for term in model.terms:
        axes = tuple(term.axes)
        if list(axes) != sorted(set(axes)):
            raise ValueError(f"axes {list(axes)} must be strictly increasing")
        poly = poly_from_terms(term.poly, model.dim)
        terms[axes] = terms[axes] + poly if axes in terms else poly
    return ClassicalForm(model.dim, model.degree, terms)


def form_to_model(omega: ClassicalForm) -> FormFile:
    return FormFile(
        dim=omega.ambient_dim,
        degree=omega.degree,
        terms=[FormTermModel(axes=list(axes), poly=poly_to_terms(c)) for axes, c in omega.terms.items()],
    )


def cube_from_model(model: CubeFile) -> SingularCube:
    if len(model.components) != model.dim_out:
        raise ValueError(f"{len(model.components)} components for a map into R^{model.dim_out}")
    return SingularCube(PolyMap(model.dim_in, [poly_from_terms(c, model.dim_in) for c in model.components]))


def cube_to_model(f: SingularCube) -> CubeFile:
    return CubeFile(dim_in=f.dim, dim_out=f.ambient_dim, components=[poly_to_terms(c) for c in f.map.components])


def pipe_from_model(model: PipeFile) -> Pipe:
    base = [parse_rational(c) for c in model.base]
    scales = None if model.displacements == "symbolic" else [parse_rational(t) for t in model.displacements.scaled]
    return Pipe(generic_simplex(base, model.dim, scales))


def diagram_from_model(model: EdgesFile) -> CubeDiagram:
    """Free generators named by the labels, or rational values when abelian"""
    if set(model.edges) != set(CUBE_EDGES):
        raise ValueError(f"edges must be exactly {', '.join(CUBE_EDGES)}")
    if model.abelian:
        groupoid = ConstantGroupoid(1, AdditiveGroup())
        cells = {key: groupoid.cell([key[0], key[1]], parse_rational(label)) for key, label in model.edges.items()}
        return CubeDiagram(groupoid, cells)
    labels = list(model.edges.values())
    if len(set(labels)) != len(labels):
        raise ValueError("edge labels of a free cube diagram must be distinct")
    groupoid = FreeGroupoid({label: (key[0], key[1]) for key, label in model.edges.items()})
    return CubeDiagram(groupoid, {key: groupoid.arrow(label) for key, label in model.edges.items()})


def _load(model: Type[M], builder, path: str):
    data = validate(model, load_json(path), path)
    try:
        return builder(data)
    except (ValueError, CubicaError) as e:
        raise ParseError(path, "$", str(e), e)


def load_form(path: str) -> ClassicalForm:
    return _load(FormFile, form_from_model, path)


def load_cube(path: str) -> SingularCube:
    return _load(CubeFile, cube_from_model, path)


def load_pipe(path: str) -> Pipe:
    return _load(PipeFile, pipe_from_model, path)


def load_diagram(path: str) -> CubeDiagram:
    return _load(EdgesFile, diagram_from_model, path)


# Output values


def _nil_terms(element: WeilElement) -> List[NilTermModel]:
    return [
        NilTermModel(monomial=[list(pair) for pair in monomial], coeff=format_value(c))
        for monomial, c in element.term_items()
        if monomial
    ]


def weil_to_model(value: Any) -> WeilElementModel:
    if isinstance(value, WeilElement):
        return WeilElementModel(base=[format_value(value.base)], nil=_nil_terms(value))
    if is_scalar(value):
        return WeilElementModel(base=[format_rational(value)], nil=[])
    raise TypeError(f"Cannot serialize {type(value).__name__} as a Weil element")


def point_to_model(x: InfPoint) -> PointModel:
    return PointModel(base=[format_value(c.base) for c in x.coords], nil=[_nil_terms(c) for c in x.coords])


def pipe_to_model(P: Pipe) -> List[PointModel]:
    return [point_to_model(vertex) for vertex in P.simplex.vertices]


def arrow_to_model(arrow: Arrow) -> WordModel:
    return WordModel(source=str(arrow.source), target=str(arrow.target), letters=arrow.letters())


def dump(model: BaseModel) -> str:
    return model.model_dump_json(indent=2, by_alias=True)
