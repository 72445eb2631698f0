"""Macro user placement and per-slot scheduling decisions.

Two scheduling modes exist.  In ``uniform`` mode the K served macro users
are dropped independently and uniformly over the cell, rejection-sampled
until outdoor.  In ``colocated`` mode a single outdoor anchor is drawn and
all K users share it: identical pathloss to every node, independent
small-scale fading.  Every femtocell also gets one active user, placed
uniformly inside its disk.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import Layout, torus_distance_matrix, wrap_coordinates

MODES = ("colocated", "uniform")

# Rejection sampling is drawn in fixed-size batches for determinism; the
# outdoor fraction is ~0.8 at default parameters so this never runs long.
_BATCH = 128
_MAX_ATTEMPTS = 10 ** 6


@dataclass(frozen=True)
class ScheduleDecision:
    """One slot's scheduled macro users and active femto users.

    ``macro_positions`` is (K, 2), all outdoor.  ``femto_ut_positions`` is
    (F2, 2) with user f inside femtocell f's disk.
    """

    mode: str
    K: int
    macro_positions: np.ndarray
    femto_ut_positions: np.ndarray


def _is_outdoor(points: np.ndarray, layout: Layout) -> np.ndarray:
    """Boolean mask of rows of (N, 2) lying outside every femto disk."""
    if layout.n_femtocells == 0:
        return np.ones(points.shape[0], dtype=bool)
    d = torus_distance_matrix(points, layout.femto_centers, layout.cell_side)
    return d.min(axis=1) > layout.femto_radius


def draw_outdoor_points(layout: Layout, n: int, rng: np.random.Generator) -> np.ndarray:
    """Draw n i.i.d. points uniform over the outdoor area of the cell."""
    side = layout.cell_side
    out = np.empty((n, 2))
    got = 0
    attempts = 0
    while got < n:
        cand = rng.uniform(-side / 2.0, side / 2.0, size=(_BATCH, 2))
        keep = cand[_is_outdoor(cand, layout)]
        take = min(n - got, keep.shape[0])
        out[got:got + take] = keep[:take]
        got += take
        attempts += _BATCH
        if attempts > _MAX_ATTEMPTS:
            raise RuntimeError("outdoor rejection sampling did not terminate")
    return out


def _draw_femto_users(layout: Layout, rng: np.random.Generator) -> np.ndarray:
    """One user per femtocell, uniform over its disk."""
    f2 = layout.n_femtocells
    radius = layout.femto_radius * np.sqrt(rng.uniform(size=f2))
    angle = rng.uniform(0.0, 2.0 * np.pi, size=f2)
    offset = np.column_stack([radius * np.cos(angle), radius * np.sin(angle)])
    return wrap_coordinates(layout.femto_centers + offset, layout.cell_side)


def draw_schedule(scenario, mode: str, K: int, rng: np.random.Generator) -> ScheduleDecision:
    """Draw one slot's schedule for the given mode and macro user count."""
    if mode not in MODES:
        raise ValueError(f"unknown scheduling mode {mode!r}; expected one of {MODES}")
    if not 1 <= K <= scenario.macro_antennas:
        raise ValueError(f"K must be in [1, {scenario.macro_antennas}], got {K}")
    layout = scenario.layout
    if mode == "colocated":
        anchor = draw_outdoor_points(layout, 1, rng)
        macro = np.repeat(anchor, K, axis=0)
    else:
        macro = draw_outdoor_points(layout, K, rng)
    femto = _draw_femto_users(layout, rng)
    return ScheduleDecision(mode=mode, K=K, macro_positions=macro,
                            femto_ut_positions=femto)
