import argparse
import logging

from cubica.algebra import format_rational
from cubica.codec import cube_to_model, dump, load_cube, load_pipe, parse_rational, pipe_to_model
from cubica.commands import EXIT_OK
from cubica.cubical import subdivide, subdivide_pipe
from cubica.errors import ParseError
from cubica.models import SubdivisionModel

logger = logging.getLogger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser("subdivide", help="Split a cube or an infinitesimal pipe at s in direction i")
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--cube")
    source.add_argument("--pipe")
    parser.add_argument("-i", "--direction", type=int, required=True)
    parser.add_argument("-s", "--parameter", default="1/2")
    parser.set_defaults(handler=handle_subdivide)


def handle_subdivide(args: argparse.Namespace) -> int:
    try:
        s = parse_rational(args.parameter)
    except (ValueError, ZeroDivisionError) as e:
        raise ParseError("command line", "parameter", f"{args.parameter!r} is not a rational", e)

    if args.cube:
        first, second = subdivide(load_cube(args.cube), args.direction, s)
        halves = cube_to_model(first), cube_to_model(second)
    else:
        first, second = subdivide_pipe(load_pipe(args.pipe), args.direction, s)
        halves = pipe_to_model(first), pipe_to_model(second)

    logger.info(f"Subdivided in direction {args.direction} at {format_rational(s)}")
    model = SubdivisionModel(direction=args.direction, parameter=format_rational(s), first=halves[0], second=halves[1])
    print(dump(model))
    return EXIT_OK
