import argparse
import logging

from cubica.algebra import format_value
from cubica.codec import dump, load_cube, load_form, load_pipe, weil_to_model
from cubica.commands import EXIT_OK
from cubica.forms import eval_comb
from cubica.holonomy import integrate_form

logger = logging.getLogger(__name__)


def register(subparsers) -> None:
    evaluate = subparsers.add_parser("eval", help="Evaluate a value on an infinitesimal cell")
    targets = evaluate.add_subparsers(dest="target", required=True)
    form = targets.add_parser("form", help="Value of a form on an infinitesimal pipe, as a Weil element")
    form.add_argument("--form", required=True)
    form.add_argument("--pipe", required=True)
    form.set_defaults(handler=handle_eval_form)

    integrate = subparsers.add_parser("integrate", help="Exact integral of an n-form over a polynomial n-cube")
    integrate.add_argument("--form", required=True)
    integrate.add_argument("--cube", required=True)
    integrate.add_argument("--order", type=int, nargs="+", default=None, help="Variable order, e.g. 2 1")
    integrate.add_argument("--trace", action="store_true", help="Print every antiderivative step")
    integrate.set_defaults(handler=handle_integrate)


def handle_eval_form(args: argparse.Namespace) -> int:
    omega = load_form(args.form)
    P = load_pipe(args.pipe)
    value = eval_comb(omega, P)
    logger.info(f"{omega} on {P!r} is {value}")
    print(dump(weil_to_model(value)))
    return EXIT_OK


def handle_integrate(args: argparse.Namespace) -> int:
    omega = load_form(args.form)
    f = load_cube(args.cube)
    result = integrate_form(omega, f, args.order)
    if args.trace:
        print(f"integrand: {format_value(result.integrand)}")
        for step in result.trace:
            print(f"x{step.variable}: {step.primitive} -> {format_value(step.result)}")
    print(format_value(result.value))
    return EXIT_OK
