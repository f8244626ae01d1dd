import random

import pytest

from cubica.cubical import SingularCube
from cubica.forms import generic_pipe
from cubica.models import SuiteConfig
from cubica.suites import (
    SUITES,
    cube_identities,
    groupoid_identities,
    numeric_cube_word,
    pipe_identities,
    random_form,
    random_parameter,
    run_suite,
    subdivision_identities,
)


def config(suite: str, **overrides) -> SuiteConfig:
    values = {"suite": suite, "trials": 2, "seed": 7, "max_dimension": 2}
    values.update(overrides)
    return SuiteConfig(**values)


class TestSuites:
    @pytest.mark.parametrize("suite", sorted(SUITES))
    def test_passes(self, suite):
        report = run_suite(config(suite))
        assert report.checks
        assert report.passed, [check.case for check in report.failures()]

    @pytest.mark.parametrize("suite", ["identities", "forms", "holonomy"])
    def test_same_seed_same_report(self, suite):
        assert run_suite(config(suite)).to_json() == run_suite(config(suite)).to_json()

    def test_report_metadata(self):
        report = run_suite(config("stokes", trials=0))
        assert (report.suite, report.seed, report.trials) == ("stokes", 7, 0)
        assert {check.case for check in report.checks} >= {"worked/stokes", "worked/shell-folding"}

    def test_case_ids_are_sorted(self):
        cases = [check.case for check in run_suite(config("holonomy", trials=3)).checks]
        assert cases == sorted(cases)
        assert "orders/002" in cases

    def test_unknown_suite(self):
        with pytest.raises(KeyError):
            run_suite(config("curvature"))

    def test_input_forms(self, fixtures_dir):
        inputs = [str(fixtures_dir / "quadratic_1form.json"), str(fixtures_dir / "x1dx2.json")]
        for suite in ("forms", "stokes", "bianchi", "holonomy"):
            report = run_suite(config(suite, trials=0, inputs=inputs))
            assert report.passed
            cases = [check.case for check in report.checks]
            assert any(case.startswith("input/quadratic_1form/") for case in cases)


class TestIdentityPieces:
    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_pipe_identities(self, k):
        assert all(check.passed for check in pipe_identities(generic_pipe(k, k)))

    def test_symmetry_relations_on_three_pipes(self):
        cases = {check.case for check in pipe_identities(generic_pipe(3, 3))}
        assert {"braid-1", "reversion-3-commutes-with-transposition-1"} <= cases
        assert {"face-02-of-degeneracy-1", "face-11-of-degeneracy-3", "degeneracy-1-of-degeneracy-2"} <= cases

    def test_cube_identities_cover_mixed_degeneracies(self):
        results = cube_identities(SingularCube.identity(2))
        cases = {check.case for check in results}
        assert {"face-03-of-degeneracy-1", "degeneracy-2-of-degeneracy-2"} <= cases
        assert all(check.passed for check in results)

    def test_subdivision_identities(self):
        rng = random.Random(0)
        P = generic_pipe(2, 2, base=[1, -1])
        assert all(check.passed for check in subdivision_identities(P, 2, random_parameter(rng)))

    def test_numeric_cube_word(self):
        assert numeric_cube_word(random.Random(3)).passed

    def test_groupoid_identities(self):
        results = {check.case: check for check in groupoid_identities()}
        assert results["transposition-counterexample"].passed
        assert all(check.passed for check in results.values())

    def test_random_forms_are_reproducible(self):
        assert random_form(random.Random(5), 3, 2) == random_form(random.Random(5), 3, 2)
