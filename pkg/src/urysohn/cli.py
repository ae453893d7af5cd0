"""Command-line entry point: ``urysohn study ...``."""
import argparse
import json
import sys
from dataclasses import asdict

from .errors import ConfigurationError, UrysohnError
from .study import FORMATS, StudyConfig, emit, has_failures, run_study

EXIT_OK, EXIT_USAGE, EXIT_DNF = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _int_list(text):
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _name_list(text):
    return tuple(x.strip().replace("-", "_") for x in text.split(",") if x.strip())


def build_parser():
    parser = _Parser(prog="urysohn", description="Discrete projection solvers for Urysohn equations.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    study = sub.add_parser("study", help="run a mesh-refinement study and print an error table")
    study.add_argument("--config", help="JSON file with StudyConfig keys; flags override it")
    study.add_argument("--problem")
    study.add_argument("--degree", type=int)
    study.add_argument("--n", dest="n_values", type=_int_list, metavar="N1,N2,...")
    study.add_argument("--m-exponent", type=int, help="quadrature panels m = n**a")
    study.add_argument("--m-exponent-modified", type=int, help="override a for the modified pair")
    study.add_argument("--rho", type=int, help="Gauss points per panel")
    study.add_argument("--tol", type=float, help="Newton residual tolerance (sup norm)")
    study.add_argument("--max-iter", type=int)
    study.add_argument("--grid-size", type=int, help="uniform points in the error grid")
    study.add_argument("--methods", type=_name_list, metavar="M1,M2,...")
    study.add_argument("--format", choices=FORMATS)
    study.add_argument("--timings", action="store_true", default=None,
                       help="record wall times (output is then not reproducible)")
    study.add_argument("--out", help="output file (default: stdout)")
    return parser


def load_config(args):
    data = {}
    if args.config:
        try:
            with open(args.config) as fh:
                data = json.load(fh)
        except (OSError, ValueError) as exc:
            raise ConfigurationError(f"cannot read config {args.config}: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigurationError("config file must hold a JSON object")
    for key in asdict(StudyConfig()):
        value = getattr(args, key, None)
        if value is not None:
            data[key] = value
    return StudyConfig.from_mapping(data)


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args)
        rows = run_study(cfg)
    except (ConfigurationError, UrysohnError, TypeError) as exc:
        print(f"urysohn: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = emit(rows, cfg.format)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_DNF if has_failures(rows) else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
