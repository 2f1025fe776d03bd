"""Command-line harness.

Subcommands: nodes, proj-frac, proj-gen, rates, verify.  Output is UTF-8 CSV
with '#'-prefixed provenance lines (config echo and version, no timestamps);
figure commands render a PNG alongside the CSV unless --no-plot is given.

Exit codes: 0 success, 1 validation error, 2 numerical failure,
3 verify-suite failure.
"""

import argparse
import sys

from . import csvio, experiments
from .errors import ConvergenceError, EvaluationError
from .experiments import RunConfig
from .special import TEST_FUNCTION_IDS

__all__ = ["main", "build_parser"]


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; the CLI contract wants 1
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(1)


def _float_list(text):
    try:
        return tuple(float(v) for v in text.split(",") if v != "")
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a comma list of reals: {text!r}") \
            from exc


def _add_common(p):
    p.add_argument("--theta", type=_float_list, default=(),
                   help="comma list of theta values")
    p.add_argument("--sigma", type=_float_list, default=(),
                   help="comma list of sigma values")
    p.add_argument("--beta", type=_float_list, default=(),
                   help="comma list of beta values")
    p.add_argument("--gamma", type=_float_list, default=(),
                   help="comma list of gamma values")
    p.add_argument("--m-min", type=int, default=4)
    p.add_argument("--m-max", type=int, default=64)
    p.add_argument("--m-step", type=int, default=4)
    p.add_argument("--oversample", type=int, default=None,
                   help="error/coefficient rule node count "
                        "(default max(256, 4M+64))")
    p.add_argument("--function", action="append", default=[],
                   choices=sorted(TEST_FUNCTION_IDS),
                   help="restrict to one test function (repeatable)")
    p.add_argument("--out", type=str, default=None, help="output CSV path")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--no-plot", dest="plot", action="store_false",
                   help="skip the PNG next to the CSV")


def build_parser():
    parser = _Parser(prog="fraclag",
                     description="fractional Laguerre experiment harness")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, doc in (("nodes", "mapped node distributions"),
                      ("proj-frac", "fractional projection error curves"),
                      ("proj-gen", "generalized projection error curves"),
                      ("rates", "algebraic-rate slopes vs prediction"),
                      ("verify", "run the full property suite")):
        p = sub.add_parser(name, help=doc)
        _add_common(p)
    return parser


def _config_from_args(args):
    if args.command == "nodes" and args.m_max == 64:
        m_max = 80
    else:
        m_max = args.m_max
    return RunConfig(command=args.command, thetas=args.theta,
                     sigmas=args.sigma, betas=args.beta, gammas=args.gamma,
                     m_min=args.m_min, m_max=m_max, m_step=args.m_step,
                     oversample=args.oversample,
                     functions=tuple(args.function), out=args.out,
                     threads=max(1, args.threads), plot=args.plot)


def _emit(config, header, rows, render=None):
    text = csvio.render_csv(config.command, config.header_items(), header, rows)
    if config.out:
        csvio.write_csv(config.out, text)
        print(f"wrote {config.out} ({len(rows)} rows)")
        if config.plot and render is not None:
            from . import plotting
            png = plotting.figure_path(config.out)
            render(png)
            print(f"wrote {png}")
    else:
        sys.stdout.write(text)


def _run_verify(config):
    from .verification import run_all_suites
    results = run_all_suites(threads=config.threads)
    header = ("suite", "passed", "max_residual", "tolerance", "checks")
    rows = [(r.suite, r.passed, r.max_residual, r.tolerance, r.checks)
            for r in results]
    text = csvio.render_csv("verify", config.header_items(), header, rows)
    if config.out:
        csvio.write_csv(config.out, text)
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print(f"{status} {r.suite}: max residual {r.max_residual:.3e} "
              f"(tolerance {csvio.format_value(r.tolerance)}, "
              f"{r.checks} checks)")
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} suites passed")
    return 3 if failed else 0


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        config = _config_from_args(args)
        if args.command == "verify":
            return _run_verify(config)
        if args.command == "nodes":
            header, rows, _ = experiments.cmd_nodes(config)
            def render(png, _rows=rows):
                from . import plotting
                plotting.render_nodes(_rows, png)
            _emit(config, header, rows, render)
            return 0
        if args.command == "proj-frac":
            header, rows, curves = experiments.cmd_proj_frac(config)
            def render(png, _curves=curves):
                from . import plotting
                plotting.render_curves(_curves, png, "fractional projection")
            _emit(config, header, rows, render)
            return 0
        if args.command == "proj-gen":
            header, rows, curves = experiments.cmd_proj_gen(config)
            def render(png, _curves=curves):
                from . import plotting
                plotting.render_curves(_curves, png, "generalized projection")
            _emit(config, header, rows, render)
            return 0
        if args.command == "rates":
            header, rows, curves = experiments.cmd_rates(config)
            def render(png, _curves=curves):
                from . import plotting
                plotting.render_rates(_curves, png)
            _emit(config, header, rows, render)
            return 0
        raise ValueError(f"unknown command {args.command!r}")
    except (ValueError, TypeError) as exc:
        print(f"fraclag: validation error: {exc}", file=sys.stderr)
        return 1
    except (ConvergenceError, EvaluationError) as exc:
        print(f"fraclag: numerical failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
