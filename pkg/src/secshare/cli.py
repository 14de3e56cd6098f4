"""Command-line front end: config parsing, subcommands, CSV emission.

Every output carries a manifest as ``# key: value`` comment lines so a run
can be reproduced from its own file.  Exit codes: 0 success, 2 infeasible
QoS, 64 usage, 70 numerical convergence failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .errors import ConfigError, ConvergenceError, DomainError, InfeasibleError
from .metrics import asr_asymptotic, average_secrecy_rate, secrecy_outage, sop_asymptotic
from .model import NetworkConfig, watts_to_dbm
from .montecarlo import default_radius, estimate
from .optimize import SweepSpec, antenna_gap, optimal_mu, sweep
from .power import max_permissive_power, pu_outage, resolve_power
from .sirdist import cdf_sir_eve, cdf_sir_su

EXIT_OK = 0
EXIT_INFEASIBLE = 2
EXIT_USAGE = 64
EXIT_NO_CONVERGENCE = 70


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse default exits 2; the contract wants 64
        raise _UsageError(message)


def _load_config(path: str) -> NetworkConfig:
    return NetworkConfig.from_json(path)


def _manifest_lines(cfg: NetworkConfig, command: str, *, route: str,
                    p_s: float | None = None, seed: int | None = None,
                    snapshots: int | None = None, radius: float | None = None,
                    wall_time: float = 0.0) -> list[str]:
    lines = [
        f"# secshare: {__version__}",
        f"# command: {command}",
        f"# config: {json.dumps(cfg.to_dict(), sort_keys=True)}",
        f"# route: {route}",
    ]
    if p_s is not None:
        lines.append(f"# resolved_p_s_w: {p_s!r}")
    if seed is not None:
        lines.append(f"# seed: {seed}")
    if snapshots is not None:
        lines.append(f"# snapshots: {snapshots}")
    if radius is not None:
        lines.append(f"# radius_m: {radius!r}")
    lines.append(f"# wall_time_s: {wall_time:.3f}")
    return lines


def _emit(lines: list[str], out: str | None) -> None:
    text = "\n".join(lines) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def read_manifest_csv(path: str | Path) -> tuple[dict, list[dict]]:
    """Parse a secshare CSV back into (manifest, rows)."""
    manifest: dict = {}
    rows: list[dict] = []
    header: list[str] | None = None
    for line in Path(path).read_text().splitlines():
        if not line.strip():
            continue
        if line.startswith("#"):
            key, _, value = line[1:].partition(":")
            manifest[key.strip()] = value.strip()
            continue
        cells = line.split(",")
        if header is None:
            header = cells
            continue
        rows.append(dict(zip(header, cells)))
    if "config" in manifest:
        manifest["config"] = json.loads(manifest["config"])
    return manifest, rows


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def _cmd_power_region(args) -> int:
    cfg = _load_config(args.config)
    region = max_permissive_power(cfg)
    print(f"theta: {region.theta:.6e}")
    print(f"branch: {region.binding_branch.value}")
    if not region.feasible:
        print("infeasible: primary QoS violated for every secondary power")
        return EXIT_INFEASIBLE
    print(f"feasible: yes")
    print(f"p_s_max_w: {region.p_s_max:.6e}")
    print(f"p_s_max_dbm: {watts_to_dbm(region.p_s_max):.4f}")
    return EXIT_OK


def _metric_rows(cfg, args, metric: str):
    """(header, row, route, mc_bits) for one asr/sop evaluation."""
    rate = getattr(args, "rate", None)
    analytic = None
    route = "asymptotic" if args.asymptotic else "exact"
    if not args.mc or args.compare:
        if metric == "asr":
            analytic = asr_asymptotic(cfg) if args.asymptotic else average_secrecy_rate(cfg)
        else:
            analytic = (sop_asymptotic(cfg, r_s=rate) if args.asymptotic
                        else secrecy_outage(cfg, r_s=rate))
        route = analytic.route.value
    mc = None
    if args.mc or args.compare:
        mc = estimate(metric, cfg, args.snapshots, args.seed,
                      r_s=rate, radius=args.radius)
    if analytic is not None and mc is not None:
        delta = abs(analytic.value - mc.mean)
        rel = delta / abs(analytic.value) if analytic.value else math.inf
        header = "metric,analytic,mc_mean,mc_std_error,abs_delta,rel_delta,qos_violated"
        row = (f"{metric},{analytic.value!r},{mc.mean!r},{mc.std_error!r},"
               f"{delta!r},{rel!r},{analytic.qos_violated}")
    elif mc is not None:
        header = "metric,value,std_error,n"
        row = f"{metric},{mc.mean!r},{mc.std_error!r},{mc.n}"
    else:
        header = "metric,value,quadrature_error,qos_violated"
        row = f"{metric},{analytic.value!r},{analytic.quadrature_error!r},{analytic.qos_violated}"
    return header, row, route, mc


def _cmd_metric(args, metric: str) -> int:
    if args.mc and args.asymptotic:
        raise _UsageError("--mc and --asymptotic are mutually exclusive")
    if args.mc and args.compare:
        raise _UsageError("--compare already runs the Monte Carlo side; drop --mc")
    cfg = _load_config(args.config)
    t0 = time.perf_counter()
    p_s, _, _ = resolve_power(cfg)
    header, row, route, mc = _metric_rows(cfg, args, metric)
    wall = time.perf_counter() - t0
    lines = _manifest_lines(
        cfg, metric, route=route if not args.mc else "montecarlo", p_s=p_s,
        seed=args.seed if (args.mc or args.compare) else None,
        snapshots=args.snapshots if (args.mc or args.compare) else None,
        radius=(mc.radius_m if mc is not None else None),
        wall_time=wall,
    )
    _emit(lines + [header, row], args.out)
    return EXIT_OK


def _parse_vary(text: str) -> tuple[str, list[float]]:
    name, _, rng = text.partition("=")
    parts = rng.split(":")
    if not name or len(parts) != 3:
        raise _UsageError("--vary expects name=start:stop:step")
    try:
        start, stop, step = (float(p) for p in parts)
    except ValueError as exc:
        raise _UsageError(f"bad --vary range: {exc}") from exc
    if step <= 0 or stop < start:
        raise _UsageError("--vary needs stop >= start and step > 0")
    values = list(np.arange(start, stop + step * 0.5, step))
    return name.strip(), values


def _cmd_sweep(args) -> int:
    cfg = _load_config(args.config)
    axis, values = _parse_vary(args.vary)
    try:
        spec = SweepSpec(axis=axis, values=tuple(values), metric=args.metric,
                         route=args.route, snapshots=args.snapshots, seed=args.seed)
    except (DomainError, ValueError) as exc:
        raise _UsageError(str(exc)) from exc
    t0 = time.perf_counter()
    rows = sweep(cfg, spec)
    wall = time.perf_counter() - t0
    lines = _manifest_lines(
        cfg, f"sweep:{args.metric}", route=args.route,
        seed=args.seed if args.route == "montecarlo" else None,
        snapshots=args.snapshots if args.route == "montecarlo" else None,
        wall_time=wall,
    )
    lines.append(f"# vary: {args.vary}")
    lines.append("axis_value,metric_value,stderr,qos_violated,error")
    for r in rows:
        stderr = "" if r.std_error is None else repr(r.std_error)
        err = r.error or ""
        lines.append(f"{r.axis_value!r},{r.metric_value!r},{stderr},{r.qos_violated},{err}")
    _emit(lines, args.out)
    return EXIT_OK


def _cmd_optimize_mu(args) -> int:
    cfg = _load_config(args.config)
    mu_star, asr_star = optimal_mu(cfg, grid_step=args.grid_step, refine_tol=args.refine_tol)
    print(f"mu_star: {mu_star:.3f}")
    print(f"asr_star_bits: {asr_star:.6f}")
    return EXIT_OK


def _cmd_antenna_gap(args) -> int:
    cfg_a = _load_config(args.config_a)
    cfg_b = _load_config(args.config_b)
    result = antenna_gap(cfg_a, cfg_b, args.target)
    print(f"n_a: {result.n_a if result.n_a is not None else 'unreachable'}")
    print(f"n_b: {result.n_b if result.n_b is not None else 'unreachable'}")
    if result.gap is None:
        print("gap: undefined (target unreachable on at least one side)")
        return EXIT_INFEASIBLE
    print(f"gap: {result.gap}")
    return EXIT_OK


def _cmd_mc_validate(args) -> int:
    cfg = _load_config(args.config)
    p_s, _, _ = resolve_power(cfg)
    t0 = time.perf_counter()
    lines_data = []
    if args.metric in ("cdf_su", "cdf_eve"):
        grid = [float(g) for g in args.gamma_grid.split(",")]
        ests = estimate(args.metric, cfg, args.snapshots, args.seed,
                        gamma_grid=grid, radius=args.radius)
        closed = cdf_sir_su if args.metric == "cdf_su" else cdf_sir_eve
        lines_data.append("gamma,analytic,mc_mean,mc_std_error,abs_delta")
        for g, est in zip(grid, ests):
            a = closed(g, cfg, p_s=p_s)
            lines_data.append(f"{g!r},{a!r},{est.mean!r},{est.std_error!r},{abs(a - est.mean)!r}")
        radius = ests[0].radius_m
    else:
        if args.metric == "asr":
            a = average_secrecy_rate(cfg).value
        elif args.metric == "sop":
            a = secrecy_outage(cfg, r_s=args.rate).value
        else:
            a = pu_outage(cfg, p_s)
        est = estimate(args.metric, cfg, args.snapshots, args.seed,
                       r_s=args.rate, p_s=p_s, radius=args.radius)
        lines_data.append("metric,analytic,mc_mean,mc_std_error,abs_delta")
        lines_data.append(f"{args.metric},{a!r},{est.mean!r},{est.std_error!r},{abs(a - est.mean)!r}")
        radius = est.radius_m
    wall = time.perf_counter() - t0
    lines = _manifest_lines(cfg, f"mc-validate:{args.metric}", route="montecarlo",
                            p_s=p_s, seed=args.seed, snapshots=args.snapshots,
                            radius=radius, wall_time=wall)
    _emit(lines + lines_data, args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------

def _add_mc_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--mc", action="store_true", help="estimate by Monte Carlo instead of the closed form")
    p.add_argument("--compare", action="store_true", help="run both routes and print their deltas")
    p.add_argument("--snapshots", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--radius", type=float, default=None, help="disk truncation radius in metres")
    p.add_argument("--out", default=None, help="write CSV here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="secshare", description=__doc__)
    parser.add_argument("--version", action="version", version=f"secshare {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("power-region", help="maximum permissive secondary transmit power")
    p.add_argument("config")
    p.set_defaults(func=_cmd_power_region)

    for metric in ("asr", "sop"):
        p = sub.add_parser(metric, help=f"{'average secrecy rate' if metric == 'asr' else 'secrecy outage probability'}")
        p.add_argument("config")
        p.add_argument("--asymptotic", action="store_true", help="large-antenna-array route")
        if metric == "sop":
            p.add_argument("--rate", type=float, default=None, help="target secrecy rate in bits")
        _add_mc_flags(p)
        p.set_defaults(func=lambda a, m=metric: _cmd_metric(a, m))

    p = sub.add_parser("sweep", help="evaluate a metric along one parameter axis")
    p.add_argument("config")
    p.add_argument("--vary", required=True, help="name=start:stop:step")
    p.add_argument("--metric", required=True, choices=["asr", "sop", "p_s_max", "pu_outage"])
    p.add_argument("--route", default="exact", choices=["exact", "asymptotic", "montecarlo"])
    p.add_argument("--snapshots", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("optimize-mu", help="power-allocation factor maximizing the secrecy rate")
    p.add_argument("config")
    p.add_argument("--grid-step", type=float, default=0.02)
    p.add_argument("--refine-tol", type=float, default=1e-3)
    p.set_defaults(func=_cmd_optimize_mu)

    p = sub.add_parser("antenna-gap", help="antennas needed to restore a target secrecy rate")
    p.add_argument("config_a")
    p.add_argument("config_b")
    p.add_argument("--target", type=float, required=True)
    p.set_defaults(func=_cmd_antenna_gap)

    p = sub.add_parser("mc-validate", help="closed form vs Monte Carlo oracle")
    p.add_argument("config")
    p.add_argument("--metric", required=True,
                   choices=["asr", "sop", "cdf_su", "cdf_eve", "pu_outage"])
    p.add_argument("--gamma-grid", default="0.1,1,10")
    p.add_argument("--rate", type=float, default=None)
    p.add_argument("--snapshots", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--radius", type=float, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_mc_validate)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InfeasibleError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except ConvergenceError as exc:
        print(f"convergence failure: {exc}", file=sys.stderr)
        return EXIT_NO_CONVERGENCE


if __name__ == "__main__":
    sys.exit(main())
