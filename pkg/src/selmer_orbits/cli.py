"""Command-line entry point.

    selmer-orbits ffcount --n 1 --p 5 --poly 0,1
    selmer-orbits padic shape --p 7 --poly 0,1
    selmer-orbits descent orbit --curve 0,1 --points "(2,3)" --p 5 --prec 6

Exit codes: 0 success, 2 validation error, 3 infeasible parameters,
4 unsupported input.
"""

from __future__ import annotations

import argparse
import sys

from .errors import Infeasible, Unsupported, ValidationError
from .harness import ExperimentConfig, run, write_report


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.replace(" ", "").split(",") if x != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _globals() -> argparse.ArgumentParser:
    g = argparse.ArgumentParser(add_help=False)
    g.add_argument("--n", type=int, default=1, help="genus")
    g.add_argument("--X", type=int, default=None, help="height bound")
    g.add_argument("--p", type=_int_list, default=[], help="prime or comma-separated primes")
    g.add_argument("--prec", type=int, default=6, help="p-adic precision k")
    g.add_argument("--workers", type=int, default=1)
    g.add_argument("--out", default=None, help="write the report here as well as to stdout")
    g.add_argument("--cache-dir", default=None)
    g.add_argument("--format", choices=("json", "csv"), default="json")
    g.add_argument("--sample-cap", type=int, default=None)
    g.add_argument("--timing", action="store_true", help="include wall time (breaks byte-identical reruns)")
    return g


def build_parser() -> argparse.ArgumentParser:
    g = _globals()
    parser = argparse.ArgumentParser(prog="selmer-orbits", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="subcommand", required=True)
    sub.add_parser("enumerate", parents=[g], help="curve counts by height")
    sub.add_parser("ffcensus", parents=[g], help="orbit census over F_p for every separable f")
    s = sub.add_parser("ffcount", parents=[g], help="census of one fiber over F_p")
    s.add_argument("--poly", type=_int_list, default=None, help="c2,...,c_(2n+1)")
    s = sub.add_parser("descent", parents=[g], help="divisor-to-orbit certificates")
    s.add_argument("action", nargs="?", choices=("batch", "orbit"), default="batch")
    s.add_argument("--curve", type=_int_list, default=None)
    s.add_argument("--points", default=None, help='e.g. "(0,1),(2,3)"')
    s.add_argument("--input", default=None, help="JSON file of curves and points")
    s.add_argument("--search-bound", type=int, default=0, help="scan |x| <= bound for integral points")
    s = sub.add_parser("chabauty", parents=[g], help="3-adic Strassmann bounds")
    s.add_argument("--curve", type=_int_list, default=None)
    s = sub.add_parser("localmass", parents=[g], help="local mass ratios and their product")
    s.add_argument("--curve", type=_int_list, default=None)
    sub.add_parser("lemmacheck", parents=[g], help="weight identities and the combinatorial lemma")
    s = sub.add_parser("orbit", parents=[g], help="distinguished or nilpotent representatives")
    s.add_argument("--kind", choices=("distinguished", "regular", "subregular"), default="distinguished")
    s.add_argument("--poly", type=_int_list, default=None)
    s.add_argument("--d", type=int, default=1, help="scalar for the subregular nilpotent")
    s = sub.add_parser("padic", parents=[g], help="factor shapes, Chabauty, local ideal census")
    s.add_argument("action", choices=("shape", "chabauty", "census"))
    s.add_argument("--poly", type=_int_list, default=None)
    s.add_argument("--curve", type=_int_list, default=None)
    s.add_argument("--points", default=None)
    return parser


def config_from_args(ns: argparse.Namespace) -> ExperimentConfig:
    data = {k: v for k, v in vars(ns).items() if v is not None}
    if "action" in data and data["action"] == "batch":
        data.pop("action")
    return ExperimentConfig.from_dict(data)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        cfg = config_from_args(ns)
        rep = run(cfg)
        sys.stdout.write(write_report(rep, cfg))
    except Infeasible as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return 3
    except Unsupported as exc:
        print(f"unsupported: {exc}", file=sys.stderr)
        return 4
    except (ValidationError, ValueError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
