"""Shared builders for small, fast test instances."""

from __future__ import annotations

import numpy as np

from femtosim import (Layout, Scenario, build_layout, calibrate_p0,
                      draw_realization, draw_schedule)
from femtosim.engine import drop_rng, run_dl_slot


def tiny_scenario(f_grid: int = 2, m_ant: int = 4, l_ant: int = 3,
                  side: float = 200.0, edge_snr_db: float = 10.0,
                  peak_db: float = 30.0) -> Scenario:
    """A small grid scenario that runs a full drop in milliseconds."""
    layout = build_layout(femto_grid_order=f_grid, cell_side=side,
                          femto_radius=10.0, pathloss_3db_distance=50.0,
                          pathloss_exponent=3.5, wall_absorption_db=5.0)
    return Scenario(layout=layout, macro_antennas=m_ant, femto_antennas=l_ant,
                    macro_power=calibrate_p0(layout, edge_snr_db),
                    femto_peak_power=10.0 ** (peak_db / 10.0))


def custom_scenario(centers, side: float = 400.0, m_ant: int = 3,
                    l_ant: int = 3, edge_snr_db: float = 10.0,
                    peak_db: float = 30.0) -> Scenario:
    """Scenario over hand-picked femto centers (grid order left unset)."""
    layout = Layout(cell_side=side, femto_grid_order=None,
                    femto_centers=np.asarray(centers, dtype=float),
                    femto_radius=10.0, pathloss_3db_distance=50.0,
                    pathloss_exponent=3.5, wall_absorption_db=5.0)
    return Scenario(layout=layout, macro_antennas=m_ant, femto_antennas=l_ant,
                    macro_power=calibrate_p0(layout, edge_snr_db),
                    femto_peak_power=10.0 ** (peak_db / 10.0))


def draw_drop(scenario: Scenario, mode: str, K: int, seed: int):
    """Schedule plus realization from one deterministic drop stream."""
    rng = drop_rng(seed, mode, K, 0)
    schedule = draw_schedule(scenario, mode, K, rng)
    real = draw_realization(scenario, schedule, rng)
    return schedule, real


def forward_drop(scenario: Scenario, mode: str, K: int, kappa: float, seed: int):
    """One forward slot on a fresh drop; returns (schedule, real, result)."""
    schedule, real = draw_drop(scenario, mode, K, seed)
    return schedule, real, run_dl_slot(scenario, schedule, real, kappa)
