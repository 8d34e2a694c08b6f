"""Command-line driver.

Subcommands: gen, emaf, threshold, naf, spread, moments, bench.
Exit codes: 0 success, 2 usage/config error, 1 runtime error.  Errors print
a one-line cause on stderr; no partial output files are left behind on
validation failures (parse, validate, then execute).
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import gridio
from .bench import ESTIMATORS, MCConfig, run_bench
from .emaf import compute_emaf, to_db
from .moments import (
    ma_analytic_autocorr,
    ma_analytic_spectrum,
    ma_dual_time_table,
    naf_for_process,
    prop1_moments,
    prop2_moments,
    prop3_moments,
    um_modulation_spectrum,
    underspread_relation,
    underspread_variance,
)
from .sigcore import (
    AnalyticWhiteNoise,
    ChirpInNoise,
    MovingAverage,
    DEFAULT_MA_WEIGHTS,
    TimeVaryingMA,
    UniformlyModulated,
    generate,
)
from .spread import indicator, lag_band, total_spread
from .thresholding import ThresholdConfig, make_partition, threshold_with_details

__all__ = ["main"]

PROCESS_NAMES = ("chirp", "ma", "um", "tvma", "noise")

# Which threshold methods a grid from each process may be fed to.
_METHOD_BLOCKLIST = {
    "lbteaf": {"ma", "um", "tvma"},
    "lteaf": {"chirp"},
}


class UsageError(Exception):
    pass


def _parse_weights(text: str) -> tuple:
    try:
        return tuple(float(w) for w in text.split(","))
    except ValueError as exc:
        raise UsageError(f"bad weights list: {exc}") from None


def _build_process(args) -> object:
    name = args.process
    if name == "chirp":
        return ChirpInNoise(args.alpha, args.beta, args.noise_psd)
    if name == "ma":
        return MovingAverage(_parse_weights(args.weights), args.xi_var)
    if name == "um":
        return UniformlyModulated(args.f0)
    if name == "tvma":
        return TimeVaryingMA(_parse_weights(args.weights), args.f0)
    if name == "noise":
        return AnalyticWhiteNoise(args.noise_psd)
    raise UsageError(f"unknown process {name!r}")


def _add_process_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--process", choices=PROCESS_NAMES, default="ma")
    p.add_argument("--n", type=int, default=256)
    p.add_argument("--alpha", type=float, default=0.1)
    p.add_argument("--beta", type=float, default=9.0196e-4)
    p.add_argument("--noise-psd", type=float, default=0.6, dest="noise_psd")
    p.add_argument("--weights", default=",".join(str(w) for w in DEFAULT_MA_WEIGHTS))
    p.add_argument("--xi-var", type=float, default=1.0, dest="xi_var")
    p.add_argument("--f0", type=float, default=None)


def _default_f0(args) -> None:
    if args.f0 is None:
        args.f0 = 0.09 if args.process == "um" else 0.042


def _cmd_gen(args) -> int:
    _default_f0(args)
    spec = _build_process(args)
    x = generate(spec, args.n, args.seed)
    gridio.write_signal(args.output, x, process=args.process)
    return 0


def _cmd_emaf(args) -> int:
    x, process = gridio.load_signal(args.input)
    grid = compute_emaf(x)
    gridio.write_grid(args.output, grid, process=process)
    if args.db:
        gridio.write_real_grid(args.db, to_db(grid, "amplitude"), grid.n)
    return 0


def _cmd_threshold(args) -> int:
    grid, process = gridio.load_grid(args.input)
    if grid.kind != "raw":
        raise UsageError(f"thresholding needs a raw grid, got kind={grid.kind}")
    if process and args.process is None:
        args.process = process
    if args.process and args.process in _METHOD_BLOCKLIST.get(args.method, ()):  # pairing
        raise UsageError(
            f"method {args.method} is not defined for {args.process} grids"
        )
    cfg = ThresholdConfig(args.c, args.regions, args.rim, args.method)
    cfg.validate()
    part = make_partition(grid.n, args.regions)
    est, meta = threshold_with_details(grid, cfg, part)
    gridio.write_grid(args.output, est, process=args.process)
    if args.meta:
        with open(args.meta, "w") as fh:
            json.dump(meta, fh, indent=2)
            fh.write("\n")
    return 0


def _cmd_naf(args) -> int:
    _default_f0(args)
    spec = _build_process(args)
    ref = naf_for_process(spec, args.n)
    gridio.write_grid(args.output, ref.grid, process=args.process)
    if args.mask:
        gridio.write_mask(args.mask, ref.support_mask, args.n)
    return 0


def _cmd_spread(args) -> int:
    grid, _ = gridio.load_grid(args.input)
    mask = indicator(grid)
    region = "all" if args.tau is None else lag_band(grid.n, args.tau)
    report = total_spread(mask, region)
    if args.tau is not None:
        report = type(report)(
            report.total_spread,
            report.nonzero_cells,
            report.region_cells,
            f"tau={args.tau}",
        )
    payload = json.dumps(report.to_dict(), indent=2)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(payload + "\n")
    else:
        print(payload)
    return 0


def _cmd_moments(args) -> int:
    _default_f0(args)
    n, nu, tau = args.n, args.nu, args.tau
    if args.prop == "1":
        spec = ChirpInNoise(args.alpha, args.beta, 0.0)
        spec.validate(n)
        t = np.arange(n)
        g = np.exp(1j * np.pi * (2 * args.alpha * t + args.beta * t * t))
        triple = prop1_moments(g, args.noise_psd, nu, tau, n)
        result = {"mean": triple.mean, "variance": triple.variance, "relation": triple.relation}
    elif args.prop == "2":
        weights = _parse_weights(args.weights)
        auto = {tau: 2.0 * ma_analytic_autocorr(weights, args.xi_var, tau)}
        spectrum = ma_analytic_spectrum(weights, args.xi_var)
        triple = prop2_moments(auto, spectrum, nu, tau, n)
        result = {"mean": triple.mean, "variance": triple.variance, "relation": triple.relation}
    elif args.prop == "3":
        sigma = um_modulation_spectrum(args.f0, n)
        triple = prop3_moments(sigma, nu, tau, n)
        result = {"mean": triple.mean, "variance": triple.variance, "relation": triple.relation}
    else:  # thm1
        weights = _parse_weights(args.weights)
        table = ma_dual_time_table(weights, args.xi_var, n, args.t_spread)
        result = {
            "variance": underspread_variance(table, args.t_spread, nu, tau),
            "relation": underspread_relation(table, args.t_spread, nu, tau),
        }
    payload = {
        "prop": args.prop,
        "nu": nu,
        "tau": tau,
        "n": n,
    }
    for key, value in result.items():
        if isinstance(value, complex):
            payload[key] = {"re": value.real, "im": value.imag}
        else:
            payload[key] = value
    text = json.dumps(payload, indent=2)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0


def _load_bench_config(path) -> dict:
    """Flat key = value config file; # starts a comment, values are ints,
    floats, quoted strings, bare words or comma lists in brackets."""

    def parse_scalar(token: str):
        token = token.strip()
        if token.startswith('"') and token.endswith('"'):
            return token[1:-1]
        for caster in (int, float):
            try:
                return caster(token)
            except ValueError:
                continue
        return token

    out = {}
    with open(path) as fh:
        for raw_line in fh:
            line = raw_line.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise UsageError(f"bad config line: {raw_line.strip()!r}")
            value = value.strip()
            if value.startswith("[") and value.endswith("]"):
                items = [parse_scalar(v) for v in value[1:-1].split(",") if v.strip()]
                out[key.strip()] = items
            else:
                out[key.strip()] = parse_scalar(value)
    return out


def _cmd_bench(args) -> int:
    cfg_file = _load_bench_config(args.config) if args.config else {}

    def pick(flag_value, key, default):
        if flag_value is not None:
            return flag_value
        return cfg_file.get(key, default)

    process_name = pick(args.process, "process", "ma")
    ns = argparse.Namespace(
        process=process_name,
        alpha=pick(args.alpha, "alpha", 0.1),
        beta=pick(args.beta, "beta", 9.0196e-4),
        noise_psd=pick(args.noise_psd, "noise_psd", 0.6),
        weights=pick(args.weights, "weights", ",".join(str(w) for w in DEFAULT_MA_WEIGHTS)),
        xi_var=pick(args.xi_var, "xi_var", 1.0),
        f0=pick(args.f0, "f0", None),
        n=int(pick(args.n, "n", 256)),
    )
    if isinstance(ns.weights, list):
        ns.weights = ",".join(str(w) for w in ns.weights)
    _default_f0(ns)
    spec = _build_process(ns)

    estimators = pick(args.estimators, "estimators", "emaf,teaf")
    if isinstance(estimators, str):
        estimators = tuple(e.strip() for e in estimators.split(",") if e.strip())
    else:
        estimators = tuple(estimators)
    for est in estimators:
        if est not in ESTIMATORS:
            raise UsageError(f"unknown estimator {est!r}")

    threshold = ThresholdConfig(
        c_exponent=float(pick(args.c, "c", 1.0)),
        region_count=int(pick(args.regions, "regions", 8)),
        rim_fraction=float(pick(args.rim, "rim", 0.1)),
    )
    mc = MCConfig(
        process=spec,
        n=ns.n,
        trials=int(pick(args.trials, "trials", 500)),
        base_seed=int(pick(args.seed, "seed", 0)),
        estimators=estimators,
        threshold=threshold,
    )
    try:
        mc.validate()
    except ValueError as exc:
        raise UsageError(str(exc)) from None

    report = run_bench(mc, threads=args.threads)
    with open(args.output, "w") as fh:
        json.dump(report.to_dict(), fh, indent=2)
        fh.write("\n")
    if args.mse_grids:
        os.makedirs(args.mse_grids, exist_ok=True)
        for name, stats in report.per_estimator.items():
            gridio.write_real_grid(
                os.path.join(args.mse_grids, f"mse_{name}.csv"), stats.mse_grid, mc.n
            )
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="afkit",
        description="Ambiguity-function estimation: generation, thresholding, "
        "moments, spread and Monte Carlo benchmarks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a process realization")
    _add_process_flags(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("emaf", help="empirical ambiguity function of a signal file")
    p.add_argument("-i", "--input", required=True)
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--db", default=None, help="also write an amplitude-dB grid")
    p.set_defaults(func=_cmd_emaf)

    p = sub.add_parser("threshold", help="hard-threshold a raw grid")
    p.add_argument("-i", "--input", required=True)
    p.add_argument("--method", choices=("teaf", "lteaf", "lbteaf"), default="teaf")
    p.add_argument("--c", type=float, default=1.0)
    p.add_argument("--regions", type=int, default=8)
    p.add_argument("--rim", type=float, default=0.1)
    p.add_argument("--process", choices=PROCESS_NAMES, default=None)
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--meta", default=None, help="JSON sidecar with estimator details")
    p.set_defaults(func=_cmd_threshold)

    p = sub.add_parser("naf", help="reference (expected, support-limited) grid")
    _add_process_flags(p)
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--mask", default=None, help="also write the support mask CSV")
    p.set_defaults(func=_cmd_naf)

    p = sub.add_parser("spread", help="total spread of a thresholded/reference grid")
    p.add_argument("-i", "--input", required=True)
    p.add_argument("--tau", type=int, default=None, help="restrict to one lag row")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=_cmd_spread)

    p = sub.add_parser("moments", help="closed-form EMAF moments at one cell")
    p.add_argument("--prop", choices=("1", "2", "3", "thm1"), required=True)
    p.add_argument("--nu", type=float, required=True)
    p.add_argument("--tau", type=int, required=True)
    _add_process_flags(p)
    p.add_argument("--t-spread", type=int, default=12, dest="t_spread")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=_cmd_moments)

    p = sub.add_parser("bench", help="Monte Carlo MSE/spread benchmark")
    p.add_argument("--config", default=None, help="flat key = value config file")
    p.add_argument("--process", choices=PROCESS_NAMES, default=None)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--estimators", default=None, help="comma list from emaf,teaf,lteaf,lbteaf")
    p.add_argument("--c", type=float, default=None)
    p.add_argument("--regions", type=int, default=None)
    p.add_argument("--rim", type=float, default=None)
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--beta", type=float, default=None)
    p.add_argument("--noise-psd", type=float, default=None, dest="noise_psd")
    p.add_argument("--weights", default=None)
    p.add_argument("--xi-var", type=float, default=None, dest="xi_var")
    p.add_argument("--f0", type=float, default=None)
    p.add_argument(
        "--threads",
        type=int,
        default=int(os.environ.get("AFKIT_THREADS", "1")),
        help="worker processes; never changes numeric output",
    )
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--mse-grids", default=None, help="directory for per-cell MSE CSVs")
    p.set_defaults(func=_cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"afkit: {exc}", file=sys.stderr)
        return 2
    except gridio.FileFormatError as exc:
        print(f"afkit: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        # Parameter/invariant violations from inner modules are user input
        # problems at this level.
        print(f"afkit: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # IO failures and other runtime errors
        print(f"afkit: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
