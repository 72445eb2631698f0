"""Drop orchestration: slots, sweeps, and tradeoff aggregation.

One Monte Carlo *drop* draws a schedule and a channel realization, runs
the forward slot (macro-DL / femto-UL) and, from the same realization and
beamformers, the reverse slot (macro-UL / femto-DL) with iterative power
control.  Sweeps repeat drops over a grid of interference temperatures
and macro user counts and aggregate the per-slot sum rates into tradeoff
curves.  Within a drop the channel realization is shared across the whole
temperature grid (common random numbers): the fading does not depend on
the temperature, and the reuse both cuts the dominant cost and makes
curves smooth in kappa.

Reproducibility: every drop derives its generator from the master seed
and its (mode, K, drop index) coordinates, so results are independent of
scheduling order and worker count.
"""

from __future__ import annotations

import concurrent.futures
from dataclasses import dataclass, field

import numpy as np

from .beamforming import (BeamformerSet, duality_swap,
                          femto_interference_covariances, lzfb_precoders)
from .channel import ChannelRealization, Scenario, draw_realization
from .geometry import Layout, build_layout, pathloss_from_distance
from .linalg import RankDeficientError
from .powercontrol import (PowerAllocation, SinrTargets,
                           interference_temperature_powers, run_power_control)
from .scheduler import MODES, ScheduleDecision, draw_schedule
from .sinr import evaluate_macro_dl_sinrs, rate

# Bounded retries for degenerate fading draws; i.i.d. Rayleigh matrices
# are almost surely well conditioned, so one draw nearly always suffices.
_MAX_REDRAWS = 32


@dataclass
class SlotResult:
    """Rates, SINRs and powers of one simulated slot direction."""

    direction: str                    # "dl" (macro-DL/femto-UL) or "ul"
    kappa: float
    macro_rates: np.ndarray
    femto_rates: np.ndarray
    macro_sinrs: np.ndarray
    femto_sinrs: np.ndarray
    powers: PowerAllocation
    beamformers: BeamformerSet | None = None

    @property
    def macro_sum(self) -> float:
        return float(np.sum(self.macro_rates))

    @property
    def femto_sum(self) -> float:
        return float(np.sum(self.femto_rates))


@dataclass
class SweepConfig:
    """Grid and drop counts of one tradeoff sweep."""

    kappa_grid: np.ndarray
    k_values: tuple[int, ...] = (1, 2, 3, 4, 5, 6, 7, 8)
    modes: tuple[str, ...] = ("colocated", "uniform")
    n_drops: int = 1000
    pc_iterations: tuple[int, ...] = (6,)
    seed: int = 0

    def __post_init__(self):
        self.kappa_grid = np.asarray(self.kappa_grid, dtype=float)
        if self.n_drops < 1:
            raise ValueError("n_drops must be at least 1")
        if np.any(self.kappa_grid < 0):
            raise ValueError("interference temperatures must be nonnegative")
        for mode in self.modes:
            if mode not in MODES:
                raise ValueError(f"unknown mode {mode!r}")
        if any(n < 0 for n in self.pc_iterations):
            raise ValueError("pc_iterations must be nonnegative")


@dataclass
class TradeoffPoint:
    """Mean sum throughputs at one grid point, with standard errors."""

    kappa: float
    macro_mean: float
    macro_se: float
    femto_mean: float
    femto_se: float
    n_drops: int
    K: int


@dataclass
class TradeoffCurve:
    """Aggregated tradeoff points for one (mode, direction, K, n_iter)."""

    mode: str
    direction: str
    K: int | None
    n_iter: int | None
    points: list[TradeoffPoint] = field(default_factory=list)


def default_kappa_grid(n_points: int = 30, low_db: float = -30.0,
                       high_db: float = 30.0) -> np.ndarray:
    """Log-spaced interference temperature grid (linear values)."""
    return 10.0 ** (np.linspace(low_db, high_db, n_points) / 10.0)


def calibrate_p0(layout: Layout, target_edge_snr_db: float) -> float:
    """Macro-BS power giving the target interference-free SNR at the cell edge.

    The edge reference point sits at torus distance side/2 from the
    macro-BS and is treated as an outdoor point (no wall factor).
    """
    g_edge = float(pathloss_from_distance(layout.cell_side / 2.0, 0, layout))
    return 10.0 ** (target_edge_snr_db / 10.0) / g_edge


def default_scenario(**overrides) -> Scenario:
    """The default full-scale scenario: 25x25 femto grid in a 1 km cell."""
    layout = build_layout(femto_grid_order=25, cell_side=1000.0,
                          femto_radius=10.0, pathloss_3db_distance=50.0,
                          pathloss_exponent=3.5, wall_absorption_db=5.0)
    params = dict(layout=layout, macro_antennas=8, femto_antennas=5,
                  macro_power=calibrate_p0(layout, 10.0),
                  femto_peak_power=10.0 ** 3.0, population=100)
    params.update(overrides)
    return Scenario(**params)


def _normalize_rows(x: np.ndarray) -> np.ndarray:
    """Unit-norm rows with the phase convention of beamforming.align_phase."""
    norms = np.linalg.norm(x, axis=1, keepdims=True)
    out = x / norms
    if x.shape[0]:
        piv = out[np.arange(x.shape[0]), np.argmax(np.abs(out), axis=1)]
        out = out * (piv.conj() / np.abs(piv))[:, None]
    return out


def _forward_slot(scenario: Scenario, real: ChannelRealization, kappa: float,
                  v: np.ndarray) -> SlotResult:
    """Forward slot for precomputed zero-forcing precoders."""
    femto_powers = interference_temperature_powers(
        kappa, scenario.femto_peak_power, real.macro_positions,
        real.femto_ut_positions, scenario.layout)
    f2 = real.h_cross.shape[0]
    if f2:
        sigma = femto_interference_covariances(real, scenario, femto_powers, v)
        idx = np.arange(f2)
        h_own = np.sqrt(real.gains.femto_bs_femto_ut[idx, idx])[:, None] \
            * real.h_cross[idx, idx]
        solved = np.linalg.solve(sigma, h_own[:, :, None])[:, :, 0]
        u = _normalize_rows(solved)
        femto_sinrs = femto_powers * np.einsum("fl,fl->f", h_own.conj(), solved).real
    else:
        u = np.zeros((0, scenario.femto_antennas), dtype=complex)
        femto_sinrs = np.zeros(0)
    bf = BeamformerSet(v=v, u=u, swapped=False)
    macro_sinrs = evaluate_macro_dl_sinrs(real, bf, femto_powers, scenario)
    powers = PowerAllocation(femto_primal=femto_powers,
                             macro_primal_per_user=scenario.macro_power / v.shape[0])
    return SlotResult(direction="dl", kappa=kappa,
                      macro_rates=rate(macro_sinrs), femto_rates=rate(femto_sinrs),
                      macro_sinrs=macro_sinrs, femto_sinrs=femto_sinrs,
                      powers=powers, beamformers=bf)


def run_dl_slot(scenario: Scenario, schedule: ScheduleDecision,
                real: ChannelRealization, kappa: float) -> SlotResult:
    """Simulate the forward (macro-DL / femto-UL) slot of one drop.

    Raises RankDeficientError on a degenerate fading draw; drop drivers
    resample the realization (see :func:`run_drop`).
    """
    v = lzfb_precoders(real.h_mc.T)
    return _forward_slot(scenario, real, kappa, v)


def run_ul_slot(scenario: Scenario, schedule: ScheduleDecision,
                real: ChannelRealization, primal_result: SlotResult,
                n_iter: int, enforce_peaks: bool = True) -> SlotResult:
    """Simulate the reverse (macro-UL / femto-DL) slot of one drop.

    Consumes the forward slot's realization, beamformers and achieved
    SINRs (as targets), runs ``n_iter`` power-control updates, and rates
    the slot at the SINRs achieved by the final powers.
    """
    targets = SinrTargets(femto=primal_result.femto_sinrs,
                          macro=primal_result.macro_sinrs,
                          kappa=primal_result.kappa)
    swapped = duality_swap(primal_result.beamformers)
    alloc = run_power_control(targets, swapped, real, scenario, n_iter,
                              enforce_peaks=enforce_peaks)
    last = alloc.trace[-1]
    return SlotResult(direction="ul", kappa=primal_result.kappa,
                      macro_rates=rate(last.macro_sinrs),
                      femto_rates=rate(last.femto_sinrs),
                      macro_sinrs=last.macro_sinrs, femto_sinrs=last.femto_sinrs,
                      powers=alloc, beamformers=swapped)


def drop_rng(seed: int, mode: str, K: int, drop_index: int) -> np.random.Generator:
    """Deterministic per-drop generator, independent of execution order.

    SFC64 is used for draw speed; the reproducibility contract is the
    (seed, mode, K, drop) coordinates, not the generator algorithm.
    """
    mode_idx = MODES.index(mode)
    return np.random.Generator(np.random.SFC64(
        np.random.SeedSequence(entropy=(seed, mode_idx, K, drop_index))))


def run_drop(scenario: Scenario, mode: str, K: int,
             rng: np.random.Generator) -> tuple[ScheduleDecision, ChannelRealization, np.ndarray]:
    """Draw one drop's schedule, realization and precoders, with redraws."""
    schedule = draw_schedule(scenario, mode, K, rng)
    for _ in range(_MAX_REDRAWS):
        real = draw_realization(scenario, schedule, rng)
        try:
            return schedule, real, lzfb_precoders(real.h_mc.T)
        except RankDeficientError:
            continue
    raise RuntimeError("persistent rank-deficient fading draws")


def _drop_sums(scenario: Scenario, mode: str, K: int, drop_index: int,
               kappa_grid: np.ndarray, pc_iterations: tuple[int, ...],
               seed: int) -> np.ndarray:
    """Per-kappa sum rates of one drop.

    Returns an array of shape (n_kappa, 2 + 2 * len(pc_iterations)):
    forward macro and femto sums, then reverse sums per iteration count.
    The reverse slot is evaluated once at max(pc_iterations) and read off
    the trace at each requested iterate, which matches running the
    iteration to each count separately.
    """
    rng = drop_rng(seed, mode, K, drop_index)
    schedule, real, v = run_drop(scenario, mode, K, rng)
    n_iter_max = max(pc_iterations) if pc_iterations else 0
    out = np.empty((len(kappa_grid), 2 + 2 * len(pc_iterations)))
    for i, kappa in enumerate(kappa_grid):
        dl = _forward_slot(scenario, real, float(kappa), v)
        out[i, 0] = dl.macro_sum
        out[i, 1] = dl.femto_sum
        if pc_iterations:
            targets = SinrTargets(femto=dl.femto_sinrs, macro=dl.macro_sinrs,
                                  kappa=float(kappa))
            alloc = run_power_control(targets, duality_swap(dl.beamformers),
                                      real, scenario, n_iter_max)
            for j, n_it in enumerate(pc_iterations):
                entry = alloc.trace[n_it]
                out[i, 2 + 2 * j] = float(np.sum(rate(entry.macro_sinrs)))
                out[i, 3 + 2 * j] = float(np.sum(rate(entry.femto_sinrs)))
    return out


def sweep(scenario: Scenario, cfg: SweepConfig, workers: int = 1,
          progress=None) -> list[TradeoffCurve]:
    """Run the full Monte Carlo sweep and aggregate tradeoff curves.

    Returns one forward-direction curve per (mode, K) and one reverse
    curve per (mode, K, n_iter).  Deterministic for a fixed config seed,
    independent of ``workers``.  ``progress``, when given, is called as
    progress(done_drops, total_drops).
    """
    curves: list[TradeoffCurve] = []
    total = len(cfg.modes) * len(cfg.k_values) * cfg.n_drops
    done = 0
    for mode in cfg.modes:
        for k in cfg.k_values:
            if k > scenario.macro_antennas:
                raise ValueError(f"K={k} exceeds macro antenna count")
            args = [(scenario, mode, k, i, cfg.kappa_grid, cfg.pc_iterations,
                     cfg.seed) for i in range(cfg.n_drops)]
            if workers > 1:
                with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as ex:
                    sums = list(ex.map(_drop_sums_star, args, chunksize=4))
            else:
                sums = [_drop_sums(*a) for a in args]
            done += cfg.n_drops
            if progress is not None:
                progress(done, total)
            stack = np.stack(sums)        # (n_drops, n_kappa, n_cols)
            mean = stack.mean(axis=0)
            se = stack.std(axis=0, ddof=1) / np.sqrt(cfg.n_drops) \
                if cfg.n_drops > 1 else np.zeros_like(mean)
            curves.append(_curve(mode, "dl", k, None, cfg, mean[:, 0], se[:, 0],
                                 mean[:, 1], se[:, 1]))
            for j, n_it in enumerate(cfg.pc_iterations):
                curves.append(_curve(mode, "ul", k, n_it, cfg,
                                     mean[:, 2 + 2 * j], se[:, 2 + 2 * j],
                                     mean[:, 3 + 2 * j], se[:, 3 + 2 * j]))
    return curves


def _drop_sums_star(args):
    return _drop_sums(*args)


def _curve(mode, direction, k, n_iter, cfg, macro_mean, macro_se,
           femto_mean, femto_se) -> TradeoffCurve:
    points = [TradeoffPoint(kappa=float(kp), macro_mean=float(mm),
                            macro_se=float(ms), femto_mean=float(fm),
                            femto_se=float(fs), n_drops=cfg.n_drops, K=k)
              for kp, mm, ms, fm, fs in zip(cfg.kappa_grid, macro_mean,
                                            macro_se, femto_mean, femto_se)]
    return TradeoffCurve(mode=mode, direction=direction, K=k, n_iter=n_iter,
                         points=points)


def pareto_boundary(curves: list[TradeoffCurve]) -> TradeoffCurve:
    """Non-dominated (macro, femto) points across curves sharing a grid.

    A point is kept unless some other point is at least as good on both
    axes and strictly better on one.  The result is sorted by decreasing
    macro throughput, giving the upper-right staircase.
    """
    if not curves:
        raise ValueError("at least one curve is required")
    head = curves[0]
    for c in curves[1:]:
        if (c.mode, c.direction, c.n_iter) != (head.mode, head.direction, head.n_iter):
            raise ValueError("curves must share mode, direction and n_iter")
    pts = [p for c in curves for p in c.points]
    kept = []
    seen = set()
    for p in pts:
        key = (p.macro_mean, p.femto_mean)
        if key in seen:
            continue
        dominated = any(
            q.macro_mean >= p.macro_mean and q.femto_mean >= p.femto_mean
            and (q.macro_mean > p.macro_mean or q.femto_mean > p.femto_mean)
            for q in pts)
        if not dominated:
            kept.append(p)
            seen.add(key)
    kept.sort(key=lambda p: (-p.macro_mean, p.femto_mean))
    return TradeoffCurve(mode=head.mode, direction=head.direction, K=None,
                         n_iter=head.n_iter, points=kept)


def find_operating_point(curve: TradeoffCurve, macro_min: float,
                         femto_min: float) -> dict:
    """Check whether some grid point clears both throughput floors.

    Returns a report with the best candidate point and, when no point
    qualifies, which axis failed at the nearest miss.
    """
    qualifying = [p for p in curve.points
                  if p.macro_mean >= macro_min and p.femto_mean >= femto_min]
    if qualifying:
        best = max(qualifying, key=lambda p: p.macro_mean + p.femto_mean)
        return {"met": True, "point": best, "failed_axis": None}
    # nearest miss: maximize the worse of the two normalized margins
    def score(p):
        return min(p.macro_mean / macro_min, p.femto_mean / femto_min)
    best = max(curve.points, key=score)
    failed = []
    if best.macro_mean < macro_min:
        failed.append("macro")
    if best.femto_mean < femto_min:
        failed.append("femto")
    return {"met": False, "point": best, "failed_axis": "+".join(failed)}
