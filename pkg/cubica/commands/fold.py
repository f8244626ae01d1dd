import argparse
import logging

from cubica.algebra import format_value
from cubica.codec import arrow_to_model, dump, load_diagram
from cubica.commands import EXIT_OK
from cubica.groupoid import Arrow, cube_regrouped, folding_cube

logger = logging.getLogger(__name__)


def register(subparsers) -> None:
    fold = subparsers.add_parser("fold", help="Fold a diagram into a single cell")
    shapes = fold.add_subparsers(dest="shape", required=True)
    cube = shapes.add_parser("cube", help="Thirty-letter folding of a labeled cube diagram")
    cube.add_argument("--edges", required=True)
    cube.add_argument("--regrouped", action="store_true", help="Fold as a product of face curvatures instead")
    cube.add_argument("--json", action="store_true", help="Print a free folding as a word document")
    cube.set_defaults(handler=handle_fold_cube)


def handle_fold_cube(args: argparse.Namespace) -> int:
    diagram = load_diagram(args.edges)
    folded = cube_regrouped(diagram) if args.regrouped else folding_cube(diagram)
    if isinstance(folded, Arrow):
        print(dump(arrow_to_model(folded)) if args.json else repr(folded))
    else:
        print(format_value(folded.value))
    logger.info(f"Folded cube diagram from {args.edges}")
    return EXIT_OK
