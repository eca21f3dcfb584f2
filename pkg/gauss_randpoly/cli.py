#!/usr/bin/env python3
"""Command-line front end: eval, limits, converge and oracle.

Exit codes: 0 success, 1 oracle mismatch, 2 usage or domain error,
3 numeric failure (precision exhausted, vanishing denominator).
"""
import argparse
import itertools
import logging
import sys
from collections import defaultdict
from fractions import Fraction
from math import comb

import mpmath
import pandas as pd

from gauss_randpoly import __version__
from gauss_randpoly.asymptotics import (BranchKind, Parity, conjectured_limit, curve_l1,
                                        curve_l2, limit_real, scaled_branch, scaled_limit,
                                        tangency_y_squared, y_star_squared)
from gauss_randpoly.config import DEFAULT_N_MAX, MAX_ISSERLIS_ORDER, SIGNIFICANT_DIGITS
from gauss_randpoly.convergence import (StudyConfig, StudyMode, fixed_point_scan,
                                        positivity_series, run_study, sign_audit, write_frame)
from gauss_randpoly.errors import (DomainError, GaussRandpolyError, PoleError,
                                   PrecisionInsufficientError, UnsupportedOrderError)
from gauss_randpoly.exact import (eval_exact, eval_float, expected_polynomial,
                                  parse_complex_rational, to_rational)
from gauss_randpoly.moments import (closed_form_moment, isserlis_moment, mc_expected_polynomial,
                                    product_second_moment)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_USAGE = 2
EXIT_NUMERIC = 3

DEFAULT_SIGMA2_LIST = ["1/4", "1/2", "1", "3/2", "2", "4"]
MC_Z_SCORE_LIMIT = 4.0


def _rational(text):
    try:
        return to_rational(text)
    except DomainError as err:
        raise argparse.ArgumentTypeError(str(err))


def _complex_rational(text):
    try:
        return parse_complex_rational(text)
    except DomainError as err:
        raise argparse.ArgumentTypeError(str(err))


def _format_number(value):
    text = mpmath.nstr(value, SIGNIFICANT_DIGITS)
    # integral reals print bare, as in the exact path
    return text[:-2] if text.endswith(".0") else text


def _emit(frame, args):
    text = write_frame(frame, args.output, args.format)
    if not args.output:
        sys.stdout.write(text)


def _grid(start, stop, points):
    if points < 1:
        raise DomainError(f"points must be >= 1, got {points}")
    if stop < start:
        raise DomainError(f"grid stop {stop} is below start {start}")
    if points == 1:
        return [start]
    step = (stop - start) / (points - 1)
    return [start + i * step for i in range(points)]


def cmd_eval(args):
    """Prints E_N at one point: exact by default, interval arithmetic with --bits."""
    if args.bits is not None:
        value = eval_float(args.n, args.z2, args.sigma2, args.bits)
        text = _format_number(value.real if value.imag == 0 else value)
    else:
        value = eval_exact(args.n, args.z2, args.sigma2)
        if args.exact:
            text = str(value)
        else:
            with mpmath.workprec(53 + 4 * args.n):
                re_part = mpmath.mpf(value.re.numerator) / value.re.denominator
                im_part = mpmath.mpf(value.im.numerator) / value.im.denominator
                text = _format_number(re_part if value.is_real else mpmath.mpc(re_part, im_part))
    print(text)
    return EXIT_OK


def _limit_rows(args):
    rows = []
    values = _grid(args.start, args.stop, args.points)
    if args.mode == "curves":
        sigma2_list = [s * s for s in args.sigma] if args.sigma else args.sigma2
        for sigma2, y2 in itertools.product(sigma2_list, values):
            # L₂ touches L₁ at tangency_y2 and meets -L₁ at y_star2
            markers = {"tangency_y2": tangency_y_squared(sigma2),
                       "y_star2": y_star_squared(sigma2)}
            rows.append({"y2": y2, "sigma2": sigma2, "value": curve_l1(y2),
                         "branch": BranchKind.SYMMETRIC.value, "sign": 1, **markers})
            if sigma2 != 1:
                rows.append({"y2": y2, "sigma2": sigma2, "value": curve_l2(y2, sigma2),
                             "branch": BranchKind.BROKEN.value, "sign": 1, **markers})
        return rows
    for sigma2, x in itertools.product(args.sigma2, values):
        if sigma2 <= 0 and args.mode in ("real", "scaled"):
            raise DomainError(f"sigma2 must be > 0, got {sigma2}")
        if args.mode == "real":
            curve = limit_real(x, sigma2)
            rows.append({"z2": x, "sigma2": sigma2, "value": curve.value,
                         "branch": str(curve.branch), "sign": curve.branch.sign})
        elif args.mode == "scaled":
            branch = scaled_branch(sigma2)
            rows.append({"z2": x, "sigma2": sigma2, "value": scaled_limit(x, sigma2).real,
                         "branch": str(branch), "sign": branch.sign})
        else:
            parity = Parity.EVEN if args.mode == "imag-even" else Parity.ODD
            curve = conjectured_limit(x, sigma2, parity)
            rows.append({"y2": x, "sigma2": sigma2, "value": curve.value,
                         "branch": str(curve.branch), "sign": curve.branch.sign})
    return rows


def cmd_limits(args):
    """Tabulates limit curves over a one-dimensional grid for each variance."""
    if not args.sigma2 and not (args.mode == "curves" and args.sigma):
        raise DomainError("give --sigma2 (or --sigma in curves mode)")
    index_to_row = dict(enumerate(_limit_rows(args)))
    frame = pd.DataFrame.from_dict(index_to_row, orient="index")
    _emit(frame, args)
    return EXIT_OK


def _threshold_frame(sign_changes, sigma2):
    """Rows for the odd-N sign changes, next to the predicted y*² and 3 - 2σ²."""
    index_to_row = defaultdict(dict)
    index = 0
    for N, locations in sorted(sign_changes.items()):
        for y2 in locations:
            index_to_row[index] = {
                "N": N, "parity": Parity.ODD.value, "y2": y2, "sigma2": float(sigma2),
                "sign": 0, "violation": False, "kind": "threshold",
                "y_star2": y_star_squared(float(sigma2)),
                "tangency_y2": tangency_y_squared(float(sigma2)),
            }
            index += 1
    return pd.DataFrame.from_dict(index_to_row, orient="index")


def _study_frame(args):
    study = args.study
    if study in ("nthroot", "scaled"):
        n_max = args.nmax or DEFAULT_N_MAX
        cfg = StudyConfig(N_max=n_max,
                          grid=list(itertools.product(args.z2, args.sigma2)),
                          mode=StudyMode.NTH_ROOT if study == "nthroot" else StudyMode.SCALED_RATIO,
                          precision_bits=args.bits, exact=not args.float_path,
                          n_values=args.n_values, workers=args.workers)
        return run_study(cfg)
    if study == "sign":
        cfg = StudyConfig(N_max=args.nmax or 12, n_values=args.n_values)
        y2_grid = args.y2 or [Fraction(i, 4) for i in range(17)]
        frames = []
        for sigma2 in args.sigma2:
            frame = sign_audit(cfg, sigma2, y2_grid)
            frames.append(frame.assign(kind="grid"))
            thresholds = _threshold_frame(frame.attrs["sign_changes"], sigma2)
            if not thresholds.empty:
                frames.append(thresholds)
        return pd.concat(frames, ignore_index=True)
    if study == "fixedpoint":
        y2 = args.y2[0] if args.y2 else Fraction(2)
        sigma_grid = args.sigma or _grid(0.5, 2.0, 31)
        return fixed_point_scan(sigma_grid, y2, args.nmax or 10)
    series = positivity_series(args.k, args.z2[0], args.sigma2[0], args.j_max)
    index_to_row = defaultdict(dict)
    for j, (term, partial) in enumerate(zip(series.terms, series.partial_sums)):
        index_to_row[j] = {"j": j, "term": term, "partial_sum": partial,
                           "exact": series.exact_value, "gap": series.exact_value - partial,
                           "j0_lower_bound": series.j0_lower_bound,
                           "j0_product_form": series.j0_product_form}
    return pd.DataFrame.from_dict(index_to_row, orient="index")


def cmd_converge(args):
    """Runs one convergence study and writes its table."""
    if args.study in ("nthroot", "scaled") and not (args.z2 and args.sigma2):
        raise DomainError("--z2 and --sigma2 are required for this study")
    if args.study == "sign" and not args.sigma2:
        raise DomainError("--sigma2 is required for the sign study")
    if args.study == "appb" and not (args.k and args.z2 and args.sigma2):
        raise DomainError("--k, --z2 and --sigma2 are required for the appb study")
    _emit(_study_frame(args), args)
    return EXIT_OK


def _exact_checks(n_max, sigma2_list):
    index_to_row = defaultdict(dict)
    index = 0
    for N in range(1, n_max + 1):
        poly = expected_polynomial(N)
        for sigma2 in sigma2_list:
            in_z2 = poly.substitute_y(sigma2)
            for j in range(N + 1):
                n = N - j
                coefficient = in_z2.coefficient(j) / comb(N, j)
                via_pairings = isserlis_moment(N, n, sigma2)
                via_sum = closed_form_moment(N, n, sigma2)
                index_to_row[index] = {
                    "check": "moment", "N": N, "n": n, "sigma2": str(sigma2),
                    "isserlis": str(via_pairings), "closed_form": str(via_sum),
                    "coefficient": str(coefficient),
                    "ok": via_pairings == via_sum == coefficient,
                }
                index += 1
            for z2 in (Fraction(1, 3), Fraction(-2)):
                direct = eval_exact(N, z2, sigma2)
                expanded = poly.evaluate(z2, sigma2)
                index_to_row[index] = {
                    "check": "evaluation", "N": N, "sigma2": str(sigma2), "z2": str(z2),
                    "closed_form": str(direct), "coefficient": str(expanded),
                    "ok": direct == expanded,
                }
                index += 1
    return index_to_row, index


def cmd_oracle(args):
    """Cross-checks the independent moment oracles against the closed form."""
    if args.n_max > MAX_ISSERLIS_ORDER:
        raise UnsupportedOrderError(args.n_max, MAX_ISSERLIS_ORDER)
    if args.n_max < 1:
        raise DomainError(f"--n-max must be >= 1, got {args.n_max}")
    index_to_row, index = _exact_checks(args.n_max, args.sigma2_list)
    if args.mc:
        for N, sigma2, z2 in itertools.product(range(1, args.n_max + 1), args.sigma2_list,
                                               args.z2):
            exact_mean = eval_exact(N, z2, sigma2).re
            reference = float(exact_mean)
            estimate = mc_expected_polynomial(N, float(z2), sigma2, args.samples, args.seed,
                                              workers=args.workers)
            second_moment = product_second_moment(N, z2, sigma2)
            z_score = estimate.z_score(exact_mean, second_moment)
            index_to_row[index] = {
                "check": "monte_carlo", "N": N, "sigma2": str(sigma2), "z2": str(z2),
                "reference": reference, "estimate": estimate.mean, "stderr": estimate.stderr,
                "exact_stderr": estimate.exact_stderr(exact_mean, second_moment),
                "z_score": z_score, "seed": args.seed, "ok": abs(z_score) < MC_Z_SCORE_LIMIT,
            }
            if abs(z_score) >= MC_Z_SCORE_LIMIT:
                logger.warning("Monte Carlo z-score %.2f at N=%d sigma2=%s z2=%s",
                               z_score, N, sigma2, z2)
            index += 1
    frame = pd.DataFrame.from_dict(index_to_row, orient="index")
    _emit(frame, args)
    exact_rows = frame[frame["check"] != "monte_carlo"]
    mismatches = int((~exact_rows["ok"].astype(bool)).sum())
    if mismatches:
        logger.error("%d exact oracle mismatches", mismatches)
        return EXIT_MISMATCH
    logger.info("all %d exact checks passed", len(exact_rows))
    return EXIT_OK


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="count", default=0,
                        help="more logging (-v info, -vv debug)")
    common.add_argument("--output", help="write the table to this file instead of stdout")
    common.add_argument("--format", choices=["csv", "json"], default="csv")

    parser = argparse.ArgumentParser(
        prog="gauss_randpoly",
        description="Expected Gaussian random polynomials: exact values, limits and studies.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    evaluate = commands.add_parser("eval", parents=[common], help="evaluate E_N at one point")
    evaluate.add_argument("--n", type=int, required=True)
    evaluate.add_argument("--z2", type=_complex_rational, required=True,
                          help='z² as a real number or "a+bi"')
    evaluate.add_argument("--sigma2", type=_rational, required=True)
    evaluate.add_argument("--exact", action="store_true", help='print the exact "p/q" value')
    evaluate.add_argument("--bits", type=int, help="use interval arithmetic at this precision")
    evaluate.set_defaults(handler=cmd_eval)

    limits = commands.add_parser("limits", parents=[common], help="tabulate limit curves")
    limits.add_argument("--mode", choices=["real", "imag-even", "imag-odd", "scaled", "curves"],
                        required=True)
    limits.add_argument("--sigma2", type=float, nargs="+", default=[])
    limits.add_argument("--sigma", type=float, nargs="+", default=[],
                        help="σ values for curves mode")
    limits.add_argument("--start", type=float, default=0.0, help="first z² (or y²)")
    limits.add_argument("--stop", type=float, default=4.0, help="last z² (or y²)")
    limits.add_argument("--points", type=int, default=41)
    limits.set_defaults(handler=cmd_limits)

    converge = commands.add_parser("converge", parents=[common], help="run a convergence study")
    converge.add_argument("--study", choices=["nthroot", "scaled", "sign", "fixedpoint", "appb"],
                          required=True)
    converge.add_argument("--nmax", type=int)
    converge.add_argument("--n-values", type=int, nargs="+")
    converge.add_argument("--z2", type=_rational, nargs="+", default=[])
    converge.add_argument("--sigma2", type=_rational, nargs="+", default=[])
    converge.add_argument("--y2", type=_rational, nargs="+", default=[])
    converge.add_argument("--sigma", type=float, nargs="+", default=[])
    converge.add_argument("--k", type=int)
    converge.add_argument("--j-max", type=int, default=60)
    converge.add_argument("--bits", type=int)
    converge.add_argument("--float", dest="float_path", action="store_true",
                          help="interval arithmetic instead of exact evaluation")
    converge.add_argument("--workers", type=int, default=1)
    converge.set_defaults(handler=cmd_converge)

    oracle = commands.add_parser("oracle", parents=[common], help="cross-check moment oracles")
    oracle.add_argument("--n-max", type=int, default=8)
    oracle.add_argument("--sigma2-list", type=_rational, nargs="+",
                        default=[to_rational(s) for s in DEFAULT_SIGMA2_LIST])
    oracle.add_argument("--mc", action="store_true", help="add Monte Carlo z-scores")
    oracle.add_argument("--samples", type=int, default=1_000_000)
    oracle.add_argument("--seed", type=int, default=42)
    oracle.add_argument("--z2", type=_rational, nargs="+",
                        default=[Fraction(1), Fraction(-1, 2)])
    oracle.add_argument("--workers", type=int, default=1)
    oracle.set_defaults(handler=cmd_oracle)
    return parser


def main(argv=None):
    """
    Entry point of the ``gauss_randpoly`` console script.

    Args:
        argv(list): arguments without the program name; sys.argv[1:] by default

    Returns:
        int: the exit code
    """
    parser = build_parser()
    args = parser.parse_args(argv)
    level = logging.WARNING - 10 * min(args.verbose, 2)
    logging.basicConfig(level=level, stream=sys.stderr,
                        format="%(asctime)s %(name)s %(levelname)s: %(message)s")
    logger.info("gauss_randpoly %s: %s", __version__, args.command)
    try:
        return args.handler(args)
    except (PrecisionInsufficientError, PoleError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_NUMERIC
    except DomainError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except GaussRandpolyError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
