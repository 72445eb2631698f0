"""Per-slot fading draws and assembled link gains.

One :class:`ChannelRealization` holds the small-scale fading of every link
in the network for a single slot.  Both slot directions consume the same
realization (TDD reciprocity), so nothing is redrawn between the forward
and the reverse slot.  All fading entries are i.i.d. CN(0, 1): two real
Gaussians of variance 1/2 per component.

Link naming convention, used throughout:

    h_mc[k]         (M,)    macro-BS array  <->  macro user k
    H_f0[f]         (M, L)  macro-BS array  <->  femto-BS f array
    h_cross[f, j]   (L,)    femto-BS f array <-> femto user j  (j == f is the
                            own channel of cell f)
    h_kf[k, f]      scalar  macro user k    <->  femto user f
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .geometry import Layout, pathloss_from_distance, torus_distance_matrix
from .scheduler import ScheduleDecision


@dataclass
class Scenario:
    """Immutable simulation scenario: geometry, antennas, power budgets.

    Powers are linear and noise-normalized (receiver noise power is 1).
    ``population`` is the nominal macro user pool size; scheduling draws
    fresh positions each slot, which is distributionally equivalent to
    sampling K-subsets of a large uniform population, so it is recorded
    for documentation only.  ``interference_cutoff`` optionally zeroes
    femto-to-femto cross gains beyond the given torus distance (meters);
    the default keeps exact bookkeeping over all femtocells.
    """

    layout: Layout
    macro_antennas: int
    femto_antennas: int
    macro_power: float
    femto_peak_power: float
    population: int = 100
    interference_cutoff: float | None = None

    def __post_init__(self):
        if self.macro_antennas < 1 or self.femto_antennas < 1:
            raise ValueError("antenna counts must be at least 1")
        if self.macro_power <= 0 or self.femto_peak_power <= 0:
            raise ValueError("power budgets must be strictly positive")
        if self.population < 1:
            raise ValueError("population must be at least 1")


@dataclass
class LinkGains:
    """Pathloss gains for every link class of one scheduled slot.

    Wall counts are fixed by the node classes: the macro-BS is an outdoor
    tower, macro users are outdoor by scheduling, femto users and femto
    base stations are indoor in their own cell.  The femto-side tables are
    None on macro-only realizations.
    """

    macro_bs_ut: np.ndarray     # (K,)     macro-BS <-> macro user, 0 walls
    macro_ut_femto_ut: np.ndarray  # (K, F2) macro user <-> femto user, 1 wall
    macro_bs_femto_bs: np.ndarray | None  # (F2,) macro-BS <-> femto-BS, 1 wall
    femto_bs_femto_ut: np.ndarray | None  # (F2, F2) femto-BS f <-> femto user j,
    #                                       0 walls on the diagonal, 2 off it


def build_link_gains(scenario: Scenario, schedule: ScheduleDecision,
                     links: str = "all") -> LinkGains:
    """Deterministic large-scale gains for all links of one schedule."""
    layout = scenario.layout
    side = layout.cell_side
    wall = layout.wall_attenuation
    centers = layout.femto_centers
    macro = schedule.macro_positions
    futs = schedule.femto_ut_positions
    origin = np.zeros((1, 2))

    d_mc = torus_distance_matrix(macro, origin, side)[:, 0]
    g_mc = pathloss_from_distance(d_mc, 0, layout)

    d_mf = torus_distance_matrix(macro, futs, side)
    g_mf = wall * pathloss_from_distance(d_mf, 0, layout)

    if links == "macro":
        return LinkGains(macro_bs_ut=g_mc, macro_ut_femto_ut=g_mf,
                         macro_bs_femto_bs=None, femto_bs_femto_ut=None)

    d_f0 = torus_distance_matrix(centers, origin, side)[:, 0]
    g_f0 = wall * pathloss_from_distance(d_f0, 0, layout)

    d_ff = torus_distance_matrix(centers, futs, side)
    g_ff = wall ** 2 * pathloss_from_distance(d_ff, 0, layout)
    f2 = layout.n_femtocells
    if f2:
        own = np.arange(f2)
        g_ff[own, own] = pathloss_from_distance(d_ff[own, own], 0, layout)
        if scenario.interference_cutoff is not None:
            far = d_ff > scenario.interference_cutoff
            far[own, own] = False
            g_ff[far] = 0.0

    return LinkGains(macro_bs_ut=g_mc, macro_ut_femto_ut=g_mf,
                     macro_bs_femto_bs=g_f0, femto_bs_femto_ut=g_ff)


@dataclass
class ChannelRealization:
    """One slot's fading for every link, plus the schedule's positions.

    ``h_cross_conj`` and ``h_cross_t`` cache the conjugate and the
    transposed-contiguous views of the largest array; both slot directions
    and every interference-temperature value reuse them.
    """

    h_mc: np.ndarray      # (K, M)
    H_f0: np.ndarray      # (F2, M, L)
    h_cross: np.ndarray   # (F2, F2, L)
    h_kf: np.ndarray      # (K, F2)
    macro_positions: np.ndarray
    femto_ut_positions: np.ndarray
    gains: LinkGains

    @cached_property
    def h_cross_conj(self) -> np.ndarray:
        return self.h_cross.conj()

    @cached_property
    def h_cross_t(self) -> np.ndarray:
        """(F2, L, F2) contiguous transpose of h_cross."""
        return np.ascontiguousarray(self.h_cross.transpose(0, 2, 1))


def complex_normal(rng: np.random.Generator, shape) -> np.ndarray:
    """i.i.d. CN(0, 1) samples: E|h|^2 = 1."""
    if isinstance(shape, int):
        shape = (shape,)
    z = rng.standard_normal(tuple(shape) + (2,))
    return z.view(complex)[..., 0] * np.sqrt(0.5)


def draw_realization(scenario: Scenario, schedule: ScheduleDecision,
                     rng: np.random.Generator,
                     links: str = "all") -> ChannelRealization:
    """Draw all small-scale fading for one slot.

    The draw order (macro-BS user vectors, macro-user-to-femto-user
    scalars, macro-to-femto matrices, femto cross vectors) is fixed so a
    given (seed, schedule) pair reproduces bit-identical realizations.
    ``links="macro"`` draws only the first two groups, which is enough to
    evaluate the macro tier; because they lead the stream, their values
    match the full draw exactly.
    """
    if links not in ("all", "macro"):
        raise ValueError(f"unknown links selector {links!r}")
    k = schedule.K
    m = scenario.macro_antennas
    l_ant = scenario.femto_antennas
    f2 = scenario.layout.n_femtocells
    h_mc = complex_normal(rng, (k, m))
    h_kf = complex_normal(rng, (k, f2))
    if links == "macro":
        h_f0 = np.zeros((0, m, l_ant), dtype=complex)
        h_cross = np.zeros((0, 0, l_ant), dtype=complex)
    else:
        h_f0 = complex_normal(rng, (f2, m, l_ant))
        h_cross = complex_normal(rng, (f2, f2, l_ant))
    return ChannelRealization(
        h_mc=h_mc, H_f0=h_f0, h_cross=h_cross, h_kf=h_kf,
        macro_positions=schedule.macro_positions,
        femto_ut_positions=schedule.femto_ut_positions,
        gains=build_link_gains(scenario, schedule, links))


def link_gain(real: ChannelRealization, scenario: Scenario, link: tuple):
    """Effective coefficient(s) sqrt(g) * fading for one named link.

    Supported link ids:
        ("macro_ut", k)        -> (M,) vector, macro-BS <-> macro user k
        ("femto_bs", f)        -> (M, L) matrix, macro-BS <-> femto-BS f
        ("femto", f, j)        -> (L,) vector, femto-BS f <-> femto user j
        ("macro_femto", k, f)  -> scalar, macro user k <-> femto user f
    """
    g = real.gains
    kind = link[0]
    if kind == "macro_ut":
        (_, k) = link
        return np.sqrt(g.macro_bs_ut[k]) * real.h_mc[k]
    if kind == "femto_bs":
        (_, f) = link
        return np.sqrt(g.macro_bs_femto_bs[f]) * real.H_f0[f]
    if kind == "femto":
        (_, f, j) = link
        return np.sqrt(g.femto_bs_femto_ut[f, j]) * real.h_cross[f, j]
    if kind == "macro_femto":
        (_, k, f) = link
        return np.sqrt(g.macro_ut_femto_ut[k, f]) * real.h_kf[k, f]
    raise ValueError(f"unknown link id {link!r}")
