"""``discord-lab`` command line interface.

Exit codes: 0 success, 2 invalid input or configuration, 3 a scenario
validator failed.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from . import __version__
from .covariance import read_covariance, validate_physicality, write_covariance
from .errors import ConfigError, DiscordLabError
from .estimator import DEFAULT_RESAMPLES, measures_with_errors
from .measures import base_for_units, measure_report
from .sampler import read_samples, sample, write_samples
from .scenarios import NAMED, run_config, run_named, write_outcome
from .states import (
    SqueezerSpec,
    split_thermal,
    tmsv,
    tmsv_from_photons,
    split_thermal_from_photons,
    two_mode_from_squeezers,
)

EXIT_INPUT = 2
EXIT_VALIDATOR = 3


class CommandError(Exception):
    def __init__(self, message, code=EXIT_INPUT):
        super().__init__(message)
        self.code = code


def _csv_line(values) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="").writerow(values)
    return buf.getvalue()


def _load_state(path, tol):
    try:
        sigma = read_covariance(path, tol=tol)
    except OSError as exc:
        raise CommandError(f"cannot read covariance file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise CommandError(f"covariance file is not valid JSON: {exc}") from exc
    except DiscordLabError as exc:
        raise CommandError(f"physicality: {exc}") from exc
    verdict = validate_physicality(sigma)
    if not verdict:
        raise CommandError(verdict.reason)
    return sigma


def _report_csv_row(report) -> str:
    return _csv_line([repr(v) if isinstance(v, float) else v for v in report.csv_fields()])


def cmd_measure(args) -> int:
    sigma = _load_state(args.file, args.tol)
    report = measure_report(sigma, base_for_units(args.units))
    if args.format == "csv":
        print(_report_csv_row(report))
    else:
        print(json.dumps(report.to_dict(), indent=2))
    return 0


def cmd_state(args) -> int:
    kind = args.kind
    if kind == "squeezers":
        sigma = two_mode_from_squeezers(SqueezerSpec(args.squeezing_db, args.antisqueezing_db))
    elif kind == "tmsv":
        sigma = tmsv_from_photons(args.photons) if args.photons is not None else tmsv(args.r)
    else:
        sigma = (
            split_thermal_from_photons(args.photons) if args.photons is not None else split_thermal(args.modulation)
        )
    if args.out:
        write_covariance(sigma, args.out)
    else:
        print(json.dumps(sigma.to_dict(), indent=2))
    return 0


def cmd_sample(args) -> int:
    sigma = _load_state(args.file, args.tol)
    samples = sample(sigma, args.n, args.seed)
    sidecar = write_samples(samples, args.out)
    info = {"samples": args.out, "sidecar": sidecar, "n": samples.n, "seed": args.seed}
    if args.format == "csv":
        print(_csv_line([args.out, sidecar, samples.n, args.seed]))
    else:
        print(json.dumps(info, indent=2))
    return 0


def cmd_estimate(args) -> int:
    try:
        samples = read_samples(args.file)
    except OSError as exc:
        raise CommandError(f"cannot read samples: {exc}") from exc
    except ValueError as exc:
        # numpy parse failures and discord_lab errors alike; keep the class name visible
        raise CommandError(f"{type(exc).__name__}: {exc}") from exc
    est = measures_with_errors(samples, args.resamples, args.seed, base_for_units(args.units))
    if args.format == "csv":
        row = []
        for key in ("I", "J", "D", "E_N"):
            row += [repr(est.to_dict()[key]["value"]), repr(est.sigma[key])]
        row += [str(est.value.separable).lower(), est.value.branch]
        print(_csv_line(row))
    else:
        print(json.dumps(est.to_dict(), indent=2))
    return 0


def _scenario_mode(args):
    if args.n is None:
        return None
    if args.seed is None:
        raise CommandError("--seed is required for sampled scenarios (--n given)")
    return {"kind": "sampled", "n": args.n, "seed": args.seed, "resamples": args.resamples}


def cmd_scenario(args) -> int:
    mode = _scenario_mode(args)
    if args.target in NAMED:
        outcome = run_named(args.target, mode=mode, units=args.units)
    else:
        try:
            with open(args.target) as fh:
                config = json.load(fh)
        except OSError as exc:
            raise CommandError(f"cannot read scenario config {args.target!r}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise CommandError(f"scenario config is not valid JSON: {exc}") from exc
        if mode is not None:
            config["mode"] = mode
        elif config.get("mode", {}).get("kind") == "sampled" and args.seed is not None:
            config["mode"]["seed"] = args.seed
        config.setdefault("units", args.units)
        outcome = run_config(config)
    files = write_outcome(outcome, args.out)
    if not args.no_plot:
        from .plotting import render_outcome

        files.append(render_outcome(outcome, args.out))
    if args.format == "json":
        print(json.dumps({"scenario": outcome.name, "validators": outcome.validators, "files": files}, indent=2))
    else:
        print(outcome.summary() if outcome.validators else f"{outcome.name}: no validators")
    return 0 if outcome.passed else EXIT_VALIDATOR


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="discord-lab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, tol=True):
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--units", choices=("bits", "nats"), default="bits")
        if tol:
            p.add_argument("--tol", type=float, default=1e-9, help="standard-form tolerance for 4x4 inputs")

    p = sub.add_parser("measure", help="all correlation measures of a covariance file")
    p.add_argument("file")
    common(p)
    p.set_defaults(func=cmd_measure)

    p = sub.add_parser("state", help="write a covariance file for one of the built-in state families")
    p.add_argument("kind", choices=("squeezers", "tmsv", "split_thermal"))
    p.add_argument("--squeezing-db", type=float, default=3.2)
    p.add_argument("--antisqueezing-db", type=float, default=6.7)
    p.add_argument("--r", type=float, default=0.5)
    p.add_argument("--modulation", type=float, default=2.0)
    p.add_argument("--photons", type=float, default=None, help="total mean photon number (tmsv, split_thermal)")
    p.add_argument("--out")
    p.set_defaults(func=cmd_state)

    p = sub.add_parser("sample", help="draw synthetic quadrature records")
    p.add_argument("file")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    common(p)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("estimate", help="measures with bootstrap error bars from a sample file")
    p.add_argument("file")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--resamples", type=int, default=DEFAULT_RESAMPLES)
    common(p, tol=False)
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("scenario", help=f"run a built-in scenario ({', '.join(NAMED)}) or a JSON config")
    p.add_argument("target")
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--n", type=int, help="switch to sampled mode with n draws per point")
    p.add_argument("--resamples", type=int, default=DEFAULT_RESAMPLES)
    p.add_argument("--format", choices=("json", "csv"), default="csv")
    p.add_argument("--units", choices=("bits", "nats"), default="bits")
    p.add_argument("--no-plot", action="store_true", help="skip the matplotlib figure")
    p.set_defaults(func=cmd_scenario)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CommandError as exc:
        print(f"discord-lab: error: {exc}", file=sys.stderr)
        return exc.code
    except ConfigError as exc:
        print(f"discord-lab: config error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except DiscordLabError as exc:
        print(f"discord-lab: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"discord-lab: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
