import argparse
import logging
import sys
from typing import Optional, Sequence

from pydantic import ValidationError

from .cli import render_error, run
from .config import get_settings
from .errors import AFGroupoidError, UsageError, create_error_report, setup_logging

logger = logging.getLogger(__name__)

EXIT_INPUT_ERROR = 2


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--porcelain", action="store_true", help="stable key=value output")
    common.add_argument("-v", "--verbose", action="count", default=0, help="log to stderr")

    parser = argparse.ArgumentParser(
        prog="afgroupoid",
        description="AF-группоиды, диаграммы Браттели и размерностные группы",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    validate = commands.add_parser("validate", parents=[common], help="check a diagram file")
    validate.add_argument("diagram")

    k0 = commands.add_parser("k0", parents=[common], help="reconstruct K_0 from the generators")
    k0.add_argument("diagram")
    k0.add_argument("--levels", type=int, required=True)

    eq = commands.add_parser("eq", parents=[common], help="decide equality of two elements")
    eq.add_argument("diagram")
    eq.add_argument("--a", required=True, metavar="LEVEL:[v1,...]")
    eq.add_argument("--b", required=True, metavar="LEVEL:[v1,...]")
    eq.add_argument("--horizon", type=int)

    pos = commands.add_parser("pos", parents=[common], help="decide positivity of an element")
    pos.add_argument("diagram")
    pos.add_argument("--e", dest="element", required=True, metavar="LEVEL:[v1,...]")
    pos.add_argument("--horizon", type=int)

    check_af = commands.add_parser(
        "check-af", parents=[common], help="search for a non-AF certificate"
    )
    check_af.add_argument("target", help="'odometer' or a diagram file")
    check_af.add_argument("--base", type=int, default=2)
    check_af.add_argument("--word-len", dest="word_len", type=int)
    check_af.add_argument("--depth", type=int)
    check_af.add_argument("--levels", type=int)

    gicar = commands.add_parser("gicar", parents=[common], help="GICAR lemma and cone checks")
    gicar.add_argument("--lemma", type=int, metavar="N")
    gicar.add_argument("--cone", type=int, metavar="N")
    gicar.add_argument("--beta")
    gicar.add_argument("--phi", type=int, metavar="N")
    gicar.add_argument("--alpha")

    dual = commands.add_parser("dual", parents=[common], help="dual system of a scale")
    dual.add_argument("--scale", required=True, metavar="u1,u2,...")
    dual.add_argument("--depth", type=int, required=True)
    dual.add_argument("--verify", action="store_true")
    dual.add_argument("--repeat", action="store_true", help="repeat the last ratio")
    dual.add_argument("--horizon", type=int)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    settings = get_settings(args)
    setup_logging(settings.log_level)
    flags = {k: v for k, v in vars(args).items() if k not in ("command", "porcelain", "verbose")}
    try:
        report = run(args.command, flags, settings)
    except AFGroupoidError as exc:
        logger.info("%s failed: %s", args.command, exc.detail)
        sys.stderr.write(render_error(create_error_report(exc, args.command), settings.porcelain))
        return EXIT_INPUT_ERROR
    except ValidationError as exc:
        detail = "; ".join(error["msg"] for error in exc.errors())
        error = create_error_report(UsageError(detail), args.command)
        sys.stderr.write(render_error(error, settings.porcelain))
        return EXIT_INPUT_ERROR
    except Exception as exc:
        logger.exception("unexpected error in %s", args.command)
        sys.stderr.write(render_error(create_error_report(exc, args.command), settings.porcelain))
        return EXIT_INPUT_ERROR
    sys.stdout.write(report.render(settings.porcelain))
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
