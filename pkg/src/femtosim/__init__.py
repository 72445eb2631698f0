"""Monte Carlo simulator for macrocell MU-MIMO / cognitive femtocell coexistence.

Computes the achievable throughput tradeoff between macrocell spatial
multiplexing and aggregate femtocell throughput, in both slot directions,
using zero-forcing precoding, MMSE reception, interference-temperature
power control, and duality-based iterative power control.
"""

__version__ = "0.1.0"

from .beamforming import (BeamformerSet, duality_swap, lzfb_precoders,
                          mmse_receiver)
from .channel import ChannelRealization, Scenario, draw_realization, link_gain
from .engine import (SlotResult, SweepConfig, TradeoffCurve, TradeoffPoint,
                     calibrate_p0, default_kappa_grid, default_scenario,
                     pareto_boundary, run_dl_slot, run_ul_slot, sweep)
from .geometry import (Layout, Position, build_layout, locate, pathloss,
                       torus_distance, wall_count)
from .powercontrol import (PowerAllocation, SinrTargets,
                           interference_temperature_powers, run_power_control,
                           yfm_step)
from .scheduler import ScheduleDecision, draw_schedule
from .sinr import rate, sinr_femto_dl, sinr_femto_ul, sinr_macro_dl, sinr_macro_ul

__all__ = [
    "BeamformerSet", "ChannelRealization", "Layout", "Position",
    "PowerAllocation", "Scenario", "ScheduleDecision", "SinrTargets",
    "SlotResult", "SweepConfig", "TradeoffCurve", "TradeoffPoint",
    "build_layout", "calibrate_p0", "default_kappa_grid", "default_scenario",
    "draw_realization", "draw_schedule", "duality_swap",
    "interference_temperature_powers", "link_gain", "locate", "lzfb_precoders",
    "mmse_receiver", "pareto_boundary", "pathloss", "rate", "run_dl_slot",
    "run_power_control", "run_ul_slot", "sinr_femto_dl", "sinr_femto_ul",
    "sinr_macro_dl", "sinr_macro_ul", "sweep", "torus_distance", "wall_count",
    "yfm_step",
]
