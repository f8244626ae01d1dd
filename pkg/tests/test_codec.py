import json
from fractions import Fraction

import pytest

from cubica.algebra import Poly
from cubica.codec import (
    cube_to_model,
    dump,
    form_to_model,
    load_cube,
    load_diagram,
    load_form,
    load_pipe,
    parse_rational,
    pipe_to_model,
    point_to_model,
    validate,
    weil_to_model,
)
from cubica.cubical import SingularCube
from cubica.errors import ParseError
from cubica.forms import ClassicalForm, generic_pipe
from cubica.groupoid import ConstantGroupoid, FreeGroupoid
from cubica.models import FormFile, SuiteConfig


def write_json(path, data) -> str:
    path.write_text(json.dumps(data), encoding="utf-8")
    return str(path)


class TestLoading:
    def test_form(self, fixtures_dir):
        omega = load_form(str(fixtures_dir / "x1dx1^dx2.json"))
        assert omega == ClassicalForm(2, 2, {(1, 2): Poly.variable(2, 1)})

    def test_coefficients_are_reduced(self, fixtures_dir):
        omega = load_form(str(fixtures_dir / "x1dx2.json"))
        assert omega.coefficient((2,)) == Poly.variable(2, 1)

    def test_quadratic_form(self, fixtures_dir):
        omega = load_form(str(fixtures_dir / "quadratic_1form.json"))
        x1, x2, x3 = (Poly.variable(3, i) for i in (1, 2, 3))
        assert omega.coefficient((1,)) == x2 * x2
        assert omega.coefficient((3,)) == x1 * x3 * Fraction(-2, 3)

    def test_cube(self, fixtures_dir):
        assert load_cube(str(fixtures_dir / "id2.json")) == SingularCube.identity(2)

    def test_pipe(self, fixtures_dir):
        assert load_pipe(str(fixtures_dir / "pipe2.json")) == generic_pipe(2, 2, base=[1, 2])

    def test_scaled_pipe(self, tmp_path):
        path = write_json(tmp_path / "pipe.json", {"base": ["0"], "dim": 1, "displacements": {"scaled": ["3"]}})
        P = load_pipe(path)
        assert P.simplex.vertices[1].coords[0] == P.base.context.generator(1, 1) * 3

    def test_free_diagram(self, fixtures_dir):
        diagram = load_diagram(str(fixtures_dir / "generic_cube.json"))
        assert isinstance(diagram.groupoid, FreeGroupoid)
        assert repr(diagram.edges["01"]) == "a"

    def test_abelian_diagram(self, fixtures_dir):
        diagram = load_diagram(str(fixtures_dir / "abelian_cube.json"))
        assert isinstance(diagram.groupoid, ConstantGroupoid)
        assert diagram.edges["23"].value == Fraction(7, 3)


class TestErrors:
    def test_bad_rational_location(self, fixtures_dir):
        with pytest.raises(ParseError) as info:
            load_form(str(fixtures_dir / "bad_rational.json"))
        assert info.value.location == "terms/0/poly/0/coeff"

    def test_truncated_json(self, fixtures_dir):
        with pytest.raises(ParseError) as info:
            load_form(str(fixtures_dir / "truncated.json"))
        assert info.value.location.startswith("line ")

    def test_missing_file(self, tmp_path):
        with pytest.raises(ParseError) as info:
            load_form(str(tmp_path / "absent.json"))
        assert info.value.location == "file"

    def test_axes_must_increase(self, tmp_path):
        data = {"dim": 2, "degree": 2, "terms": [{"axes": [2, 1], "poly": [{"coeff": "1", "exps": [0, 0]}]}]}
        with pytest.raises(ParseError) as info:
            load_form(write_json(tmp_path / "form.json", data))
        assert info.value.location == "$"

    def test_exponent_count(self, tmp_path):
        data = {"dim": 2, "degree": 1, "terms": [{"axes": [1], "poly": [{"coeff": "1", "exps": [1]}]}]}
        with pytest.raises(ParseError):
            load_form(write_json(tmp_path / "form.json", data))

    def test_diagram_needs_every_edge(self, tmp_path):
        with pytest.raises(ParseError):
            load_diagram(write_json(tmp_path / "edges.json", {"edges": {"01": "a"}}))

    def test_free_labels_must_differ(self, tmp_path):
        edges = {key: "a" for key in ("01", "02", "04", "13", "15", "23", "26", "37", "45", "46", "57", "67")}
        with pytest.raises(ParseError):
            load_diagram(write_json(tmp_path / "edges.json", {"edges": edges}))

    def test_validate_reports_the_field(self):
        with pytest.raises(ParseError) as info:
            validate(SuiteConfig, {"suite": "forms", "max_dimension": 7}, "command line")
        assert info.value.location == "max_dimension"
        assert info.value.path == "command line"


class TestOutput:
    def test_form_round_trip(self, fixtures_dir):
        omega = load_form(str(fixtures_dir / "quadratic_1form.json"))
        again = FormFile.model_validate(json.loads(dump(form_to_model(omega))))
        assert again == form_to_model(omega)

    def test_cube_model(self):
        model = cube_to_model(SingularCube.identity(2))
        assert model.dim_in == model.dim_out == 2
        assert model.components[0][0].exps == [1, 0]

    def test_weil_element(self):
        P = generic_pipe(2, 1, base=[0, 0])
        model = weil_to_model(P.base.context.generator(1, 2) * Fraction(1, 2))
        assert model.base == ["0/1"]
        assert model.nil[0].coeff == "1/2"
        assert model.nil[0].monomial == [[1, 2]]
        assert json.loads(dump(model)) == {"base": ["0/1"], "nil": [{"monomial": [[1, 2]], "coeff": "1/2"}]}

    def test_point(self):
        P = generic_pipe(2, 1, base=[1, 2])
        model = point_to_model(P.simplex.vertices[1])
        assert model.base == ["1/1", "2/1"]
        assert [[term.monomial for term in terms] for terms in model.nil] == [[[[1, 1]]], [[[1, 2]]]]
        assert len(pipe_to_model(P)) == 2

    def test_scalars(self):
        assert weil_to_model(Fraction(3)).base == ["3/1"]
        assert weil_to_model(Fraction(3)).nil == []
        with pytest.raises(TypeError):
            weil_to_model("three")

    def test_parse_rational(self):
        assert parse_rational(" -4/6 ") == Fraction(-2, 3)
