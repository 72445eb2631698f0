"""Command line front end: config parsing, runs, and CSV serialization.

Subcommands:
    sweep      run the Monte Carlo tradeoff sweep and write CSVs + manifest
    slot       run a single drop and dump per-node SINRs, rates and powers
    validate   check a config and print derived quantities

Output CSV schema (version sweep-v1), one file per (mode, direction) and,
for the reverse direction, per power-control iteration count:

    K,kappa_db,macro_sum_mean,macro_sum_stderr,femto_sum_mean,femto_sum_stderr,n_drops

Floats are serialized with 17 significant digits so a rerun with the same
config and seed produces byte-identical files.  Every output directory
also gets a manifest.json recording the full config snapshot, seed, tool
version and file inventory, which is sufficient to reproduce the run.

Exit codes: 0 success, 1 config/validation error, 2 runtime failure.
"""

from __future__ import annotations

import argparse
import configparser
import json
import os
import sys
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from . import __version__
from .channel import Scenario, draw_realization
from .engine import (SweepConfig, TradeoffCurve, calibrate_p0, drop_rng,
                     pareto_boundary, run_dl_slot, run_ul_slot, sweep)
from .geometry import build_layout
from .scheduler import MODES, draw_schedule

CSV_SCHEMA = "sweep-v1"
SWEEP_HEADER = ("K,kappa_db,macro_sum_mean,macro_sum_stderr,"
                "femto_sum_mean,femto_sum_stderr,n_drops")
THREADS_ENV = "FEMTOSIM_THREADS"


class ConfigError(Exception):
    """Invalid configuration; carries one message per offending field."""

    def __init__(self, problems):
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


@dataclass
class RunManifest:
    """Reproduction record written next to every output set.

    The config snapshot plus the seed fully determine every output number;
    the inventory lists the files the run produced.
    """

    command: str
    seed: int
    config: dict
    outputs: list[str]
    duration_seconds: float
    parameters: dict = field(default_factory=dict)
    tool: str = "femtosim"
    version: str = __version__
    csv_schema: str = CSV_SCHEMA

    def write(self, directory: str) -> None:
        with open(os.path.join(directory, "manifest.json"), "w") as fh:
            json.dump(asdict(self), fh, indent=2, sort_keys=True)
            fh.write("\n")


DEFAULT_CONFIG = {
    "layout": {
        "cell_side_m": "1000.0",
        "femto_grid_order": "25",
        "femto_radius_m": "10.0",
        "pathloss_3db_distance_m": "50.0",
        "pathloss_exponent": "3.5",
        "wall_loss_db": "5.0",
    },
    "radio": {
        "macro_antennas": "8",
        "femto_antennas": "5",
        "cell_edge_snr_db": "10.0",
        "femto_peak_power_db": "30.0",
        "macro_ut_population": "100",
        "interference_cutoff_m": "",
    },
    "sweep": {
        "kappa_db_min": "-30.0",
        "kappa_db_max": "30.0",
        "kappa_db_points": "30",
        "k_values": "1, 2, 3, 4, 5, 6, 7, 8",
        "modes": "colocated, uniform",
        "n_drops": "1000",
        "pc_iterations": "6",
        "seed": "20260809",
    },
}


def fmt(x: float) -> str:
    """17-significant-digit decimal serialization (round-trip exact)."""
    if np.isneginf(x):
        return "-Infinity"
    if np.isposinf(x):
        return "Infinity"
    return format(float(x), ".17g")


def kappa_to_db(kappa: float) -> float:
    return float(10.0 * np.log10(kappa)) if kappa > 0 else float("-inf")


def read_config(path: str | None) -> configparser.ConfigParser:
    """Load the INI config, layering the file (if any) over defaults."""
    parser = configparser.ConfigParser()
    parser.read_dict(DEFAULT_CONFIG)
    if path is not None:
        if not os.path.exists(path):
            raise ConfigError([f"config file not found: {path}"])
        try:
            with open(path) as fh:
                parser.read_file(fh)
        except configparser.Error as exc:
            raise ConfigError([f"config file {path}: {exc}"])
    return parser


def _get(parser, section, key, conv, problems):
    raw = parser.get(section, key, fallback=DEFAULT_CONFIG[section][key])
    try:
        return conv(raw)
    except ValueError:
        problems.append(f"[{section}] {key}: cannot parse {raw!r}")
        return None


def _int_list(raw: str):
    return tuple(int(tok) for tok in raw.replace(",", " ").split())


def _str_list(raw: str):
    return tuple(tok.strip() for tok in raw.split(",") if tok.strip())


def build_run(parser: configparser.ConfigParser,
              seed_override: int | None = None) -> tuple[Scenario, SweepConfig]:
    """Construct the scenario and sweep config, validating all fields."""
    problems: list[str] = []
    g = lambda s, k, conv=float: _get(parser, s, k, conv, problems)

    side = g("layout", "cell_side_m")
    order = g("layout", "femto_grid_order", int)
    radius = g("layout", "femto_radius_m")
    delta = g("layout", "pathloss_3db_distance_m")
    alpha = g("layout", "pathloss_exponent")
    wall = g("layout", "wall_loss_db")
    m_ant = g("radio", "macro_antennas", int)
    l_ant = g("radio", "femto_antennas", int)
    edge_snr = g("radio", "cell_edge_snr_db")
    peak_db = g("radio", "femto_peak_power_db")
    population = g("radio", "macro_ut_population", int)
    cutoff = g("radio", "interference_cutoff_m",
               lambda raw: float(raw) if raw.strip() else None)
    k_values = g("sweep", "k_values", _int_list)
    modes = g("sweep", "modes", _str_list)
    n_drops = g("sweep", "n_drops", int)
    pc_iters = g("sweep", "pc_iterations", _int_list)
    seed = g("sweep", "seed", int)
    if parser.has_option("sweep", "kappa_db_list"):
        kappa_db = g("sweep", "kappa_db_list",
                     lambda raw: tuple(float(t) for t in raw.replace(",", " ").split()))
        kappa_grid = None if kappa_db is None else \
            10.0 ** (np.asarray(kappa_db) / 10.0)
    else:
        lo = g("sweep", "kappa_db_min")
        hi = g("sweep", "kappa_db_max")
        npts = g("sweep", "kappa_db_points", int)
        kappa_grid = None
        if None not in (lo, hi, npts):
            if npts < 1:
                problems.append("[sweep] kappa_db_points: must be at least 1")
            elif hi < lo:
                problems.append("[sweep] kappa_db_max: must be >= kappa_db_min")
            else:
                kappa_grid = 10.0 ** (np.linspace(lo, hi, npts) / 10.0)
    if problems:
        raise ConfigError(problems)

    try:
        layout = build_layout(femto_grid_order=order, cell_side=side,
                              femto_radius=radius, pathloss_3db_distance=delta,
                              pathloss_exponent=alpha, wall_absorption_db=wall)
    except ValueError as exc:
        raise ConfigError([f"[layout] {exc}"])
    try:
        scenario = Scenario(layout=layout, macro_antennas=m_ant,
                            femto_antennas=l_ant,
                            macro_power=calibrate_p0(layout, edge_snr),
                            femto_peak_power=10.0 ** (peak_db / 10.0),
                            population=population,
                            interference_cutoff=cutoff)
    except ValueError as exc:
        raise ConfigError([f"[radio] {exc}"])
    for k in k_values:
        if not 1 <= k <= m_ant:
            problems.append(f"[sweep] k_values: K={k} outside [1, {m_ant}]")
    for mode in modes:
        if mode not in MODES:
            problems.append(f"[sweep] modes: unknown mode {mode!r}")
    if n_drops < 1:
        problems.append("[sweep] n_drops: must be at least 1")
    if any(n < 0 for n in pc_iters):
        problems.append("[sweep] pc_iterations: must be nonnegative")
    if problems:
        raise ConfigError(problems)
    cfg = SweepConfig(kappa_grid=kappa_grid, k_values=k_values, modes=modes,
                      n_drops=n_drops, pc_iterations=pc_iters,
                      seed=seed if seed_override is None else seed_override)
    return scenario, cfg


def config_snapshot(parser: configparser.ConfigParser) -> dict:
    return {section: dict(parser[section]) for section in parser.sections()}


def _write_curve_csv(path: str, curves: list[TradeoffCurve]) -> None:
    with open(path, "w") as fh:
        fh.write(SWEEP_HEADER + "\n")
        for curve in curves:
            for p in curve.points:
                fh.write(",".join([
                    str(p.K), fmt(kappa_to_db(p.kappa)), fmt(p.macro_mean),
                    fmt(p.macro_se), fmt(p.femto_mean), fmt(p.femto_se),
                    str(p.n_drops)]) + "\n")


def resolve_threads(flag_value: int | None) -> int:
    if flag_value is not None:
        return max(1, flag_value)
    env = os.environ.get(THREADS_ENV)
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return 1


def cmd_sweep(args) -> int:
    parser = read_config(args.config)
    scenario, cfg = build_run(parser, args.seed)
    os.makedirs(args.out, exist_ok=True)
    threads = resolve_threads(args.threads)
    started = time.time()
    progress = None
    if not args.quiet:
        progress = lambda done, total: print(
            f"drops {done}/{total}", file=sys.stderr, flush=True)
    curves = sweep(scenario, cfg, workers=threads, progress=progress)
    outputs = []
    for mode in cfg.modes:
        dl = [c for c in curves if c.mode == mode and c.direction == "dl"]
        name = f"sweep_{mode}_dl.csv"
        _write_curve_csv(os.path.join(args.out, name), dl)
        outputs.append(name)
        name = f"pareto_{mode}_dl.csv"
        _write_curve_csv(os.path.join(args.out, name), [pareto_boundary(dl)])
        outputs.append(name)
        for n_it in cfg.pc_iterations:
            ul = [c for c in curves if c.mode == mode and c.direction == "ul"
                  and c.n_iter == n_it]
            name = f"sweep_{mode}_ul_iter{n_it}.csv"
            _write_curve_csv(os.path.join(args.out, name), ul)
            outputs.append(name)
            name = f"pareto_{mode}_ul_iter{n_it}.csv"
            _write_curve_csv(os.path.join(args.out, name), [pareto_boundary(ul)])
            outputs.append(name)
    RunManifest(command="sweep", seed=cfg.seed, config=config_snapshot(parser),
                outputs=outputs, duration_seconds=round(time.time() - started, 3),
                parameters={"threads": threads}).write(args.out)
    if not args.quiet:
        print(f"wrote {len(outputs)} CSV files + manifest.json to {args.out}")
    return 0


def cmd_slot(args) -> int:
    parser = read_config(args.config)
    scenario, cfg = build_run(parser, args.seed)
    kappa = 10.0 ** (args.kappa_db / 10.0) if args.kappa_db is not None else 0.0
    if args.K > scenario.macro_antennas:
        raise ConfigError([f"K={args.K} exceeds macro antennas "
                           f"{scenario.macro_antennas}"])
    n_iter = args.n_iter if args.n_iter is not None else max(cfg.pc_iterations)
    started = time.time()
    rng = drop_rng(cfg.seed, args.mode, args.K, 0)
    schedule = draw_schedule(scenario, args.mode, args.K, rng)
    real = draw_realization(scenario, schedule, rng)
    dl = run_dl_slot(scenario, schedule, real, kappa)
    ul = run_ul_slot(scenario, schedule, real, dl, n_iter)
    os.makedirs(args.out, exist_ok=True)

    macro_path = os.path.join(args.out, "slot_macro.csv")
    with open(macro_path, "w") as fh:
        fh.write("user,x_m,y_m,power_dl,sinr_dl,rate_dl,power_ul,sinr_ul,rate_ul\n")
        for k in range(args.K):
            fh.write(",".join([
                str(k), fmt(schedule.macro_positions[k, 0]),
                fmt(schedule.macro_positions[k, 1]),
                fmt(dl.powers.macro_primal_per_user),
                fmt(dl.macro_sinrs[k]), fmt(dl.macro_rates[k]),
                fmt(ul.powers.macro_dual[k]),
                fmt(ul.macro_sinrs[k]), fmt(ul.macro_rates[k])]) + "\n")

    femto_path = os.path.join(args.out, "slot_femto.csv")
    with open(femto_path, "w") as fh:
        fh.write("femto,x_m,y_m,power_ul,sinr_ul,rate_ul,power_dl,sinr_dl,rate_dl\n")
        for f in range(scenario.layout.n_femtocells):
            fh.write(",".join([
                str(f), fmt(schedule.femto_ut_positions[f, 0]),
                fmt(schedule.femto_ut_positions[f, 1]),
                fmt(dl.powers.femto_primal[f]),
                fmt(dl.femto_sinrs[f]), fmt(dl.femto_rates[f]),
                fmt(ul.powers.femto_dual[f]),
                fmt(ul.femto_sinrs[f]), fmt(ul.femto_rates[f])]) + "\n")

    outputs = ["slot_macro.csv", "slot_femto.csv"]
    if args.trace:
        trace_path = os.path.join(args.out, "trace.csv")
        with open(trace_path, "w") as fh:
            fh.write("iteration,node_type,node_id,power,sinr\n")
            for entry in ul.powers.trace:
                for f in range(scenario.layout.n_femtocells):
                    fh.write(f"{entry.iteration},femto,{f},"
                             f"{fmt(entry.femto_powers[f])},"
                             f"{fmt(entry.femto_sinrs[f])}\n")
                for k in range(args.K):
                    fh.write(f"{entry.iteration},macro,{k},"
                             f"{fmt(entry.macro_powers[k])},"
                             f"{fmt(entry.macro_sinrs[k])}\n")
        outputs.append("trace.csv")
    RunManifest(command="slot", seed=cfg.seed, config=config_snapshot(parser),
                outputs=outputs, duration_seconds=round(time.time() - started, 3),
                parameters={"mode": args.mode, "K": args.K,
                            "kappa_db": args.kappa_db, "n_iter": n_iter}
                ).write(args.out)
    if not args.quiet:
        print(f"wrote {', '.join(outputs)} to {args.out}")
    return 0


def cmd_validate(args) -> int:
    parser = read_config(args.config)
    scenario, cfg = build_run(parser)
    layout = scenario.layout
    p0_db = 10.0 * np.log10(scenario.macro_power)
    print(f"femtocells: {layout.n_femtocells}")
    if layout.femto_grid_order:
        print(f"femto spacing: {layout.cell_side / layout.femto_grid_order:g} m")
    print(f"macro power (noise-normalized): {scenario.macro_power:.6g} "
          f"({p0_db:.2f} dB)")
    print(f"femto peak power: {scenario.femto_peak_power:.6g} "
          f"({10.0 * np.log10(scenario.femto_peak_power):.2f} dB)")
    print(f"kappa grid: {len(cfg.kappa_grid)} points, "
          f"{kappa_to_db(cfg.kappa_grid[0]):.1f} .. "
          f"{kappa_to_db(cfg.kappa_grid[-1]):.1f} dB")
    print(f"K values: {list(cfg.k_values)}; modes: {list(cfg.modes)}; "
          f"n_drops: {cfg.n_drops}")
    print("config OK")
    return 0


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(
        prog="femtosim",
        description="Macrocell MU-MIMO / cognitive femtocell tradeoff simulator")
    ap.add_argument("--quiet", action="store_true", help="suppress progress output")
    sub = ap.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=None,
                        help="INI config file (defaults are built in)")
    common.add_argument("--seed", type=int, default=None,
                        help="override the config seed")

    sp = sub.add_parser("sweep", parents=[common],
                        help="run the Monte Carlo tradeoff sweep")
    sp.add_argument("--out", required=True, help="output directory")
    sp.add_argument("--threads", type=int, default=None,
                    help=f"worker processes (or ${THREADS_ENV})")
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("slot", parents=[common],
                        help="run one drop and dump per-node details")
    sp.add_argument("--out", required=True, help="output directory")
    sp.add_argument("--K", type=int, required=True, help="scheduled macro users")
    sp.add_argument("--kappa-db", type=float, default=None,
                    help="interference temperature in dB (omit for kappa=0)")
    sp.add_argument("--mode", default="colocated", choices=MODES)
    sp.add_argument("--n-iter", type=int, default=None,
                    help="power-control iterations (default from config)")
    sp.add_argument("--trace", action="store_true",
                    help="also write the power-control iteration trace")
    sp.set_defaults(func=cmd_slot)

    sp = sub.add_parser("validate", parents=[common],
                        help="validate a config and print derived quantities")
    sp.set_defaults(func=cmd_validate)

    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        for problem in exc.problems:
            print(f"config error: {problem}", file=sys.stderr)
        return 1
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"runtime error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
