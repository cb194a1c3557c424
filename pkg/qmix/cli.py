# -*- coding: utf-8 -*-

"""
Copyright (c) 2026 The qmix authors under the MIT License.
To view the license and requirements when distributing this software, please
view the LICENSE file at the root of the repository.
"""

import argparse
import asyncio
import json
import logging
import sys

from .errors import NotPrimitiveError, QMixError, SpecError
from .qmix import QMix, REPRODUCE_TARGETS, SKIPPABLE

__all__ = ("main", "build_parser", "load_spec")

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_SPEC = 1
EXIT_NOT_PRIMITIVE = 2
EXIT_VIOLATED = 3


class _Parser(argparse.ArgumentParser):
    """Reports usage errors as one JSON object and exit code 1."""

    def error(self, message):
        _report({"error": "bad_arguments", "message": message})
        self.exit(EXIT_SPEC)


def _report(payload):
    sys.stderr.write(json.dumps(payload, sort_keys=True) + "\n")


def _skip_list(text):
    items = {item.strip() for item in text.split(",") if item.strip()}
    unknown = items - SKIPPABLE
    if unknown:
        raise argparse.ArgumentTypeError(
            f"unknown sub-analysis {sorted(unknown)}, expected some of "
            f"{sorted(SKIPPABLE)}")
    return items


def _dims(text):
    try:
        dims = [int(item) for item in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected integers, got {text!r}")
    if any(d < 2 for d in dims):
        raise argparse.ArgumentTypeError("dimensions must be >= 2")
    return dims


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None,
                        help="seed of every random draw; a logged random "
                             "seed when omitted")
    common.add_argument("--restarts", type=int, default=24)
    common.add_argument("--max-evals", type=int, default=2000)
    common.add_argument("--probes", type=int, default=100)
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("-v", "--verbose", action="count", default=0)
    common.add_argument("-q", "--quiet", action="store_true")

    parser = _Parser(prog="qmix", description="Spectral gap, Log-Sobolev "
                     "and mixing analysis of quantum Markov semigroups")
    commands = parser.add_subparsers(dest="command", parser_class=_Parser)
    commands.required = True

    analyze = commands.add_parser("analyze", parents=[common],
                                  help="full analysis report of a generator")
    analyze.add_argument("spec", help="generator JSON file, - for stdin")
    analyze.add_argument("--out", default=None,
                         help="report path, stdout when omitted")
    analyze.add_argument("--skip", type=_skip_list, default=set())

    mixing = commands.add_parser("mixing", parents=[common],
                                 help="mixing bound curves as CSV")
    mixing.add_argument("spec")
    mixing.add_argument("--epsilon", type=float, default=0.01)
    mixing.add_argument("--t-max", type=float, default=None)
    mixing.add_argument("--grid-n", type=int, default=201)
    mixing.add_argument("--out", default="mixing.csv")

    reproduce = commands.add_parser("reproduce", parents=[common],
                                    help="run a reference experiment")
    reproduce.add_argument("target", choices=REPRODUCE_TARGETS)
    reproduce.add_argument("--enlarged", action="store_true",
                           help="tensor_qubit: add the three qubit case")

    scan = commands.add_parser("scan", parents=[common],
                               help="stream a regularity scan as JSON lines")
    scan.add_argument("--dims", type=_dims, default=[2, 3])
    scan.add_argument("--n", type=int, default=100)
    scan.add_argument("--out", default="scan.jsonl")
    scan.set_defaults(probes=10)
    return parser


def load_spec(path):
    """Reads a generator JSON document. Decoding errors become
    :class:`qmix.errors.SpecError` with the failing line."""

    if path == "-":
        text = sys.stdin.read()
    else:
        try:
            with open(path, "r", encoding="utf-8") as handle:
                text = handle.read()
        except OSError as exc:
            raise SpecError(f"cannot read {path}: {exc.strerror}")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(exc.msg, line=exc.lineno)


def _dump(payload, path):
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(text)


async def _analyze(api, args):
    report = await api.analyze(load_spec(args.spec))
    _dump(report.to_dict(), args.out)
    if report.violated:
        logger.warning("partial order verdict violated")
        return EXIT_VIOLATED
    return EXIT_OK


async def _mixing(api, args):
    result = await api.mixing(load_spec(args.spec), args.epsilon, args.t_max,
                              args.grid_n)
    with open(args.out, "w", newline="") as handle:
        result["curve"].to_csv(handle)
    _dump({"epsilon": args.epsilon, "mixing_time": result["mixing_time"],
           "crossing": result["crossing"]}, None)
    return EXIT_OK


async def _reproduce(api, args):
    result = await api.reproduce(args.target, enlarged=args.enlarged)
    _dump(result, None)
    return EXIT_OK if result["passed"] else EXIT_VIOLATED


async def _scan(api, args):
    summary = await api.scan(args.dims, args.n, args.out, probes=args.probes)
    _dump(summary, None)
    return EXIT_VIOLATED if summary["falsified"] else EXIT_OK


COMMANDS = {"analyze": _analyze, "mixing": _mixing,
            "reproduce": _reproduce, "scan": _scan}


def _configure_logging(args):
    if args.quiet:
        level = logging.ERROR
    else:
        level = (logging.WARNING, logging.INFO,
                 logging.DEBUG)[min(args.verbose, 2)]
    logging.basicConfig(level=level, stream=sys.stderr,
                        format="%(asctime)s %(levelname)s %(name)s: "
                               "%(message)s")


def main(argv=None):
    """Entry point of the ``qmix`` command. Returns the exit code."""

    args = build_parser().parse_args(argv)
    _configure_logging(args)
    try:
        api = QMix(seed=args.seed, restarts=args.restarts,
                   max_evals=args.max_evals, probes=args.probes,
                   jobs=args.jobs, skip=getattr(args, "skip", ()))
        return asyncio.run(COMMANDS[args.command](api, args))
    except NotPrimitiveError as exc:
        _report(exc.to_dict())
        return EXIT_NOT_PRIMITIVE
    except SpecError as exc:
        _report(exc.to_dict())
        return EXIT_SPEC
    except QMixError as exc:
        _report(exc.to_dict())
        return EXIT_VIOLATED
    except (OSError, ValueError) as exc:
        _report({"error": type(exc).__name__, "message": str(exc)})
        return EXIT_SPEC
