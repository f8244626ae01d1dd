"""Seeded verification suites.

Every suite takes a SuiteConfig and returns a Report whose checks are
sorted by case id, so equal (inputs, seed) give identical output.
"""
import logging
import random
from fractions import Fraction
from itertools import combinations
from pathlib import Path
from typing import Any, Callable, Dict, List, Tuple

from cubica.algebra import Poly, PolyMap, format_value
from cubica.codec import load_form
from cubica.connection import (
    check_curvature_is_coboundary,
    check_round_trips,
    form_to_connection,
    free_connection,
    gauge_connection,
    is_flat_at,
    validate_morphism,
    verify_bianchi as connection_bianchi,
)
from cubica.cubical import (
    Pipe,
    Shell,
    SingularCube,
    Symmetry,
    boundary_shell,
    is_subdivision,
    pipe_face,
    pipe_symmetry,
    subdivide,
    subdivide_pipe,
)
from cubica.forms import (
    ClassicalForm,
    check_coboundaries,
    check_coboundary_naturality,
    check_form_symmetries,
    check_pipe_pullback,
    check_pullback_naturality,
    check_subdivision,
    check_theta_hat,
    generic_pipe,
)
from cubica.groupoid import (
    CUBE_EDGES,
    AdditiveGroup,
    ConstantGroupoid,
    CubeDiagram,
    FreeGroup,
    PipeGroupoid,
    ShellGroupoid,
    bsh_gamma,
    check_crossed_boundaries,
    check_crossed_trivial,
    folding_cube,
    folding_square,
    pipe_filler,
    transposition_counterexample,
    verify_cube_word,
)
from cubica.holonomy import (
    check_boundary_additivity,
    check_holonomy_additivity,
    check_integration_orders,
    check_pipe_shell,
    holonomy_of_pipe,
    verify_pipe_integral,
    verify_stokes as holonomy_stokes,
    verify_subdivision_and_alternation,
)
from cubica.models import CheckResult, Report, SuiteConfig

logger = logging.getLogger(__name__)

SPECIAL_PARAMETERS = (Fraction(0), Fraction(1), Fraction(1, 2), Fraction(-1), Fraction(2))


# Random data


def random_rational(rng: random.Random, bound: int = 5) -> Fraction:
    return Fraction(rng.randint(-bound, bound), rng.randint(1, 3))


def random_poly(rng: random.Random, variable_count: int, degree: int, terms: int = 3) -> Poly:
    collected: Dict[tuple, Fraction] = {}
    for _ in range(terms):
        total = rng.randint(0, degree)
        exps = [0] * variable_count
        for _ in range(total):
            exps[rng.randrange(variable_count)] += 1
        collected[tuple(exps)] = random_rational(rng)
    return Poly(variable_count, collected)


def random_form(rng: random.Random, ambient_dim: int, degree: int, poly_degree: int = 3) -> ClassicalForm:
    terms = {}
    for axes in combinations(range(1, ambient_dim + 1), degree):
        if rng.random() < 0.7 or not terms:
            terms[axes] = random_poly(rng, ambient_dim, poly_degree, terms=2)
    return ClassicalForm(ambient_dim, degree, terms)


def random_map(rng: random.Random, source_dim: int, target_dim: int, degree: int = 2) -> PolyMap:
    return PolyMap(source_dim, [random_poly(rng, source_dim, degree) for _ in range(target_dim)])


def random_cube(rng: random.Random, k: int, ambient_dim: int, degree: int = 2) -> SingularCube:
    return SingularCube(random_map(rng, k, ambient_dim, degree))


def random_parameter(rng: random.Random) -> Fraction:
    if rng.random() < 0.5:
        return rng.choice(SPECIAL_PARAMETERS)
    return random_rational(rng, 3)


# Helpers


def check(case: str, lhs: Any, rhs: Any, **witness: Any) -> CheckResult:
    passed = lhs == rhs
    if not passed:
        logger.warning(f"{case} failed: {format_value(lhs)} != {format_value(rhs)}")
    return CheckResult(
        case=case,
        passed=passed,
        lhs=format_value(lhs),
        rhs=format_value(rhs),
        witness={key: str(value) for key, value in witness.items()},
    )


def prefixed(prefix: str, results: List[CheckResult]) -> List[CheckResult]:
    return [result.model_copy(update={"case": f"{prefix}/{result.case}"}) for result in results]


def new_report(config: SuiteConfig) -> Report:
    return Report(suite=config.suite, seed=config.seed, trials=config.trials)


def input_forms(config: SuiteConfig) -> List[Tuple[str, ClassicalForm]]:
    return [(Path(path).stem, load_form(path)) for path in config.inputs]


def finish(report: Report) -> Report:
    report.finalize()
    failed = len(report.failures())
    logger.info(
        f"Suite {report.suite}: {len(report.checks) - failed} passed, {failed} failed "
        f"(seed {report.seed}, {report.trials} trials)"
    )
    return report


# Cubical identities


def degeneracy_relations(x: Any, face: Callable, degeneracy: Callable, **witness: Any) -> List[CheckResult]:
    """Faces of degeneracies in other directions, and degeneracies of degeneracies"""
    k = x.dim
    results = []
    for i in range(1, k + 2):
        raised = degeneracy(x, i)
        for j in range(1, k + 2):
            if j == i:
                continue
            for alpha in (0, 1):
                if j < i:
                    expected = degeneracy(face(x, alpha, j), i - 1)
                else:
                    expected = degeneracy(face(x, alpha, j - 1), i)
                results.append(check(f"face-{alpha}{j}-of-degeneracy-{i}", face(raised, alpha, j), expected, **witness))
        for j in range(1, i + 1):
            twice = degeneracy(degeneracy(x, j), i + 1)
            results.append(check(f"degeneracy-{j}-of-degeneracy-{i}", degeneracy(raised, j), twice, **witness))
    return results


def pipe_degeneracy(P: Pipe, i: int) -> Pipe:
    return pipe_symmetry(P, Symmetry.DEGENERACY, i)


def pipe_identities(P: Pipe) -> List[CheckResult]:
    n = P.dim
    pipes = PipeGroupoid()
    results = []
    shell = boundary_shell(P)
    results.append(check("shell-adjacency", shell.adjacency_failures(), [], pipe=P))
    for i in range(1, n + 2):
        raised = pipe_symmetry(P, Symmetry.DEGENERACY, i)
        for alpha in (0, 1):
            results.append(check(f"face-{alpha}{i}-of-degeneracy-{i}", pipe_face(raised, alpha, i), P, pipe=P))
    results.extend(degeneracy_relations(P, pipe_face, pipe_degeneracy, pipe=P))
    for i in range(1, n):
        swapped = pipe_symmetry(P, Symmetry.TRANSPOSITION, i)
        results.append(check(f"transposition-{i}-involution", pipe_symmetry(swapped, Symmetry.TRANSPOSITION, i), P))
        for alpha in (0, 1):
            results.append(check(
                f"face-{alpha}{i}-of-transposition-{i}", pipe_face(swapped, alpha, i), pipe_face(P, alpha, i + 1)
            ))
    for i in range(1, n - 1):
        results.append(check(
            f"braid-{i}",
            P.transposition(i).transposition(i + 1).transposition(i),
            P.transposition(i + 1).transposition(i).transposition(i + 1),
        ))
    for i in range(1, n):
        for j in range(1, n + 1):
            if j in (i, i + 1):
                continue
            results.append(check(
                f"reversion-{j}-commutes-with-transposition-{i}",
                P.reversion(j).transposition(i),
                P.transposition(i).reversion(j),
            ))
    for i in range(1, n + 1):
        flipped = pipe_symmetry(P, Symmetry.REVERSION, i)
        results.append(check(f"reversion-{i}-involution", pipe_symmetry(flipped, Symmetry.REVERSION, i), P))
        for alpha in (0, 1):
            results.append(check(
                f"face-{alpha}{i}-of-reversion-{i}", pipe_face(flipped, alpha, i), pipe_face(P, 1 - alpha, i)
            ))
        results.append(check(
            f"inverse-{i}", pipes.compose(P, pipes.inverse(P, i), i), pipes.degenerate(pipe_face(P, 0, i), i), pipe=P
        ))
        results.append(check(
            f"filler-{i}", pipe_filler(pipe_face(P, 0, i), pipe_face(P, 1, i), i), P, pipe=P
        ))
    return results


def subdivision_identities(P: Pipe, i: int, s: Fraction) -> List[CheckResult]:
    first, second = subdivide_pipe(P, i, s)
    witness = {"pipe": P, "i": i, "s": format_value(s)}
    return [
        check(f"pipe-subdivision-faces-{i}", is_subdivision(P, first, second, i), True, **witness),
        check(f"pipe-recomposition-{i}", PipeGroupoid().compose_all([first, second], i), P, **witness),
    ]


def cube_identities(f: SingularCube) -> List[CheckResult]:
    k = f.dim
    results = [check("shell-adjacency", boundary_shell(f).adjacency_failures(), [], cube=f)]
    for i in range(1, k + 2):
        raised = f.degeneracy(i)
        for alpha in (0, 1):
            results.append(check(f"face-{alpha}{i}-of-degeneracy-{i}", raised.face(alpha, i), f, cube=f))
    results.extend(degeneracy_relations(f, lambda g, alpha, j: g.face(alpha, j), lambda g, j: g.degeneracy(j), cube=f))
    for i in range(1, k):
        results.append(check(f"transposition-{i}-involution", f.transposition(i).transposition(i), f, cube=f))
    for i in range(1, k - 1):
        results.append(check(
            f"braid-{i}",
            f.transposition(i).transposition(i + 1).transposition(i),
            f.transposition(i + 1).transposition(i).transposition(i + 1),
            cube=f,
        ))
    for i in range(1, k + 1):
        results.append(check(f"reversion-{i}-involution", f.reversion(i).reversion(i), f, cube=f))
        for alpha in (0, 1):
            results.append(check(
                f"face-{alpha}{i}-of-reversion-{i}", f.reversion(i).face(alpha, i), f.face(1 - alpha, i), cube=f
            ))
    return results


def numeric_cube_word(rng: random.Random) -> CheckResult:
    groupoid = ConstantGroupoid(1, AdditiveGroup())
    values = {key: random_rational(rng) for key in CUBE_EDGES}
    diagram = CubeDiagram(groupoid, {key: groupoid.cell([key[0], key[1]], v) for key, v in values.items()})
    folded = folding_cube(diagram)
    return check("numeric-cube-word", folded.value, 0, edges={k: format_value(v) for k, v in values.items()})


def crossed_cube(squares: ConstantGroupoid, value: Any, vertex: str = "v") -> Shell:
    """A 3-shell at one vertex with value on its lower 1-face and flat squares elsewhere"""
    flat = squares.totally_degenerate(vertex, 2)
    faces = {(alpha, i): flat for alpha in (0, 1) for i in (1, 2, 3)}
    faces[(0, 1)] = squares.cell([vertex] * 4, value)
    return Shell(faces)


def groupoid_identities() -> List[CheckResult]:
    results = [
        check("cube-word", verify_cube_word(), True),
        check("crossed-triviality", check_crossed_trivial(1), True),
    ]
    group = FreeGroup(["x", "y", "z"])
    x, y, z = (group.generator(name) for name in ("x", "y", "z"))
    left, right = transposition_counterexample(group, x, y, z)
    results.append(check("transposition-counterexample", left == right, False, left=left, right=right))
    free = group.groupoid
    results.append(check("bsh-gamma-folding", folding_square(bsh_gamma(x, free), free).is_identity(), True))
    squares = ConstantGroupoid(2)
    cubes = [crossed_cube(squares, Fraction(3)), ShellGroupoid(squares).totally_degenerate("v", 3)]
    results.append(check("crossed-boundaries-shells", check_crossed_boundaries(ShellGroupoid(squares), cubes, 3), True))
    top = ConstantGroupoid(3)
    cells = [top.cell(["v"] * 8, 2), top.cell(list("abcdefgh"), 1)]
    results.append(check("crossed-boundaries-constant", check_crossed_boundaries(top, cells, 3), True))
    constant = ConstantGroupoid(3, AdditiveGroup())
    square = constant.cell(["a", "b", "c", "d"])
    for i in (1, 2):
        gamma = constant.connection(square, i)
        results.append(check(f"constant-gamma-{i}-lower", (gamma.face(0, i), gamma.face(0, i + 1)), (square, square)))
        upper = constant.degenerate(constant.face(square, 1, i), i)
        results.append(check(f"constant-gamma-{i}-upper", (gamma.face(1, i), gamma.face(1, i + 1)), (upper, upper)))
    return results


def verify_identities(config: SuiteConfig) -> Report:
    rng = random.Random(config.seed)
    report = new_report(config)
    for k in range(1, config.max_dimension + 1):
        P = generic_pipe(k, k)
        report.extend(prefixed(f"pipe{k}", pipe_identities(P)))
        for i in range(1, k + 1):
            for s in SPECIAL_PARAMETERS:
                report.extend(prefixed(f"pipe{k}/s={format_value(s)}", subdivision_identities(P, i, s)))
    for trial in range(config.trials):
        k = rng.randint(1, min(3, config.max_dimension))
        f = random_cube(rng, k, rng.randint(1, 3), rng.randint(1, 3))
        report.extend(prefixed(f"cube/{trial:03d}", cube_identities(f)))
        i, s = rng.randint(1, k), random_parameter(rng)
        first, second = subdivide(f, i, s)
        report.add(check(f"cube/{trial:03d}/subdivision-faces", is_subdivision(f, first, second, i), True, cube=f))
        report.add(numeric_cube_word(rng).model_copy(update={"case": f"cube-word/{trial:03d}"}))
    report.extend(prefixed("groupoid", groupoid_identities()))
    return finish(report)


# Bianchi identity


def verify_bianchi(config: SuiteConfig) -> Report:
    rng = random.Random(config.seed)
    report = new_report(config)
    for trial in range(config.trials):
        omega = random_form(rng, 3, 1, rng.randint(1, 3))
        report.extend(prefixed(f"form/{trial:03d}", connection_bianchi(form_to_connection(omega))))
    for name, omega in input_forms(config):
        if omega.degree < 1 or omega.ambient_dim < omega.degree + 2:
            logger.warning(f"Skipping {name}: a {omega.degree}-form on R^{omega.ambient_dim} has no Bianchi check")
            continue
        report.extend(prefixed(f"input/{name}", connection_bianchi(form_to_connection(omega))))
    free = free_connection(3)
    report.extend(prefixed("free", connection_bianchi(free)))
    square = generic_pipe(3, 2)
    report.add(check("free/curvature-nontrivial", is_flat_at(free, square), False, pipe=square))
    gauge = gauge_connection(3)
    report.extend(prefixed("gauge", connection_bianchi(gauge)))
    report.add(check("gauge/flat", is_flat_at(gauge, square), True, pipe=square))
    report.extend(prefixed("free/morphism", validate_morphism(free)))
    return finish(report)


# Forms


def verify_forms(config: SuiteConfig) -> Report:
    rng = random.Random(config.seed)
    report = new_report(config)
    top = min(3, config.max_dimension)
    for trial in range(config.trials):
        tag = f"{trial:03d}"
        n = rng.randint(1, top)
        theta = random_form(rng, n, n, 2)
        report.add(check_theta_hat(theta).model_copy(update={"case": f"theta/{tag}"}))
        base = [random_rational(rng) for _ in range(n)]
        report.add(check_pipe_pullback(theta, base).model_copy(update={"case": f"pipe-pullback/{tag}"}))
        m = rng.randint(min(2, top), top)
        k = rng.randint(1, m)
        omega = random_form(rng, m, k, 2)
        report.extend(prefixed(f"symmetries/{tag}", check_form_symmetries(omega)))
        if k < m and k + 1 <= config.max_dimension:
            report.extend(prefixed(f"coboundary/{tag}", check_coboundaries(omega)))
        i = rng.randint(1, k)
        report.add(check_subdivision(omega, [random_rational(rng) for _ in range(m)], i).model_copy(
            update={"case": f"subdivision/{tag}"}
        ))
        f = random_map(rng, rng.randint(k, top), m, 2)
        report.add(check_pullback_naturality(omega, f).model_copy(update={"case": f"naturality/{tag}"}))
        if k < m and k + 1 <= f.source_dim:
            report.add(check_coboundary_naturality(omega, f).model_copy(update={"case": f"d-naturality/{tag}"}))
        report.extend(prefixed(f"round-trip/{tag}", check_round_trips(omega)))
        if k <= 2 and k < m:
            connection = form_to_connection(omega)
            report.add(check_curvature_is_coboundary(connection).model_copy(update={"case": f"curvature/{tag}"}))
            report.extend(prefixed(f"morphism/{tag}", validate_morphism(connection, max_dim=2)))
    for name, omega in input_forms(config):
        report.extend(prefixed(f"input/{name}/symmetries", check_form_symmetries(omega)))
        report.extend(prefixed(f"input/{name}/coboundary", check_coboundaries(omega)))
        if omega.degree >= 1:
            report.extend(prefixed(f"input/{name}/round-trip", check_round_trips(omega)))
    return finish(report)


# Integration and Stokes


WORKED_FORM = ClassicalForm(2, 1, {(2,): Poly.variable(2, 1)})


def verify_stokes(config: SuiteConfig) -> Report:
    rng = random.Random(config.seed)
    report = new_report(config)
    report.extend(prefixed("worked", holonomy_stokes(WORKED_FORM, SingularCube.identity(2))))
    cases = [(1, trial) for trial in range(config.trials)] + [(2, trial) for trial in range(config.trials // 2)]
    for n, trial in cases:
        tag = f"n{n}/{trial:03d}"
        omega = random_form(rng, n + 1, n, 3)
        f = random_cube(rng, n + 1, n + 1, rng.randint(1, 2))
        report.extend(prefixed(tag, holonomy_stokes(omega, f)))
        i, s = rng.randint(1, n + 1), random_parameter(rng)
        report.add(check_boundary_additivity(omega, f, i, s).model_copy(update={"case": f"{tag}/boundary-additivity"}))
        if n == 1:
            P = generic_pipe(2, 2, base=[random_rational(rng) for _ in range(2)])
            report.add(check_pipe_shell(omega, P).model_copy(update={"case": f"{tag}/pipe-shell"}))
    for name, omega in input_forms(config):
        n = omega.degree
        if omega.ambient_dim <= n:
            logger.warning(f"Skipping {name}: a top-degree form has no coboundary to integrate")
            continue
        if omega.ambient_dim == n + 1:
            f = SingularCube.identity(n + 1)
        else:
            f = random_cube(rng, n + 1, omega.ambient_dim, 2)
        report.extend(prefixed(f"input/{name}", holonomy_stokes(omega, f)))
    return finish(report)


def verify_holonomy(config: SuiteConfig) -> Report:
    rng = random.Random(config.seed)
    report = new_report(config)
    for trial in range(config.trials):
        tag = f"{trial:03d}"
        n = rng.randint(1, 2)
        omega = random_form(rng, n, n, 3)
        f = random_cube(rng, n, n, rng.randint(1, 3))
        i, s = rng.randint(1, n), random_parameter(rng)
        report.extend(prefixed(f"integral/{tag}", verify_subdivision_and_alternation(omega, f, i, s)))
        report.add(check_integration_orders(omega, f).model_copy(update={"case": f"orders/{tag}"}))
        connection = form_to_connection(omega)
        report.add(check_holonomy_additivity(connection, f, i, s).model_copy(update={"case": f"additivity/{tag}"}))
        m = rng.randint(n, 2)
        pipe_form = random_form(rng, m, n, 2)
        P = generic_pipe(m, n, base=[random_rational(rng) for _ in range(m)])
        report.add(verify_pipe_integral(pipe_form, P).model_copy(update={"case": f"pipe-integral/{tag}"}))
        report.add(check(
            f"pipe-holonomy/{tag}", holonomy_of_pipe(form_to_connection(pipe_form), P),
            form_to_connection(pipe_form)(P), form=pipe_form, pipe=P,
        ))
    for name, omega in input_forms(config):
        P = generic_pipe(omega.ambient_dim, omega.degree, base=[Fraction(0)] * omega.ambient_dim)
        report.add(verify_pipe_integral(omega, P).model_copy(update={"case": f"input/{name}/pipe-integral"}))
    return finish(report)


SUITES: Dict[str, Callable[[SuiteConfig], Report]] = {
    "identities": verify_identities,
    "bianchi": verify_bianchi,
    "forms": verify_forms,
    "stokes": verify_stokes,
    "holonomy": verify_holonomy,
}


def run_suite(config: SuiteConfig) -> Report:
    if config.suite not in SUITES:
        raise KeyError(f"Unknown suite {config.suite!r}; choose from {', '.join(SUITES)}")
    logger.info(f"Running suite {config.suite} with seed {config.seed}")
    return SUITES[config.suite](config)
