"""Interference-temperature power setting and iterative dual power control.

Forward slot: femto user f transmits at

    P_f = min(kappa / max_k g(k, f), P1)

so the interference it lands on any scheduled macro user stays below the
temperature kappa, subject to the peak power P1.

Reverse slot: femto-BS and macro-user transmit powers are found by the
classic distributed fixed-point iteration

    Q <- Q * target / achieved_SINR(Q)

run synchronously over all nodes (Jacobi style) from the initialization
Q_macro = P0/K, Q_femto = P_f, with each update clipped to the node's
peak (P0/K for macro users, P1 for femto base stations).  Targets are the
SINRs achieved on the forward slot; for feasible targets with inactive
peaks the iteration converges to powers whose total equals the forward
slot's total transmit power.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .beamforming import BeamformerSet
from .channel import ChannelRealization, Scenario
from .geometry import Layout, pathloss_from_distance, torus_distance_matrix
from .sinr import DualLinkGains, dual_link_gains, evaluate_dual_sinrs


@dataclass
class SinrTargets:
    """Reverse-slot SINR targets: the forward slot's achieved SINRs."""

    femto: np.ndarray
    macro: np.ndarray
    kappa: float

    def __post_init__(self):
        if np.any(self.femto < 0) or np.any(self.macro < 0):
            raise ValueError("SINR targets must be nonnegative")


@dataclass
class TraceEntry:
    """Powers after update n and the SINRs achieved at those powers."""

    iteration: int
    femto_powers: np.ndarray
    macro_powers: np.ndarray
    femto_sinrs: np.ndarray
    macro_sinrs: np.ndarray


@dataclass
class PowerAllocation:
    """Forward powers, reverse powers, and the full iteration trace."""

    femto_primal: np.ndarray
    macro_primal_per_user: float
    femto_dual: np.ndarray = field(default_factory=lambda: np.zeros(0))
    macro_dual: np.ndarray = field(default_factory=lambda: np.zeros(0))
    trace: list[TraceEntry] = field(default_factory=list)


def interference_temperature_powers(kappa: float, peak_power: float,
                                    macro_positions: np.ndarray,
                                    femto_ut_positions: np.ndarray,
                                    layout: Layout) -> np.ndarray:
    """Forward-slot femto user powers under the temperature rule.

    g(k, f) is the pathloss between scheduled macro user k (outdoor) and
    femto user f (indoor), i.e. one wall.
    """
    if kappa < 0:
        raise ValueError("interference temperature must be nonnegative")
    macro_positions = np.asarray(macro_positions, dtype=float).reshape(-1, 2)
    if macro_positions.shape[0] < 1:
        raise ValueError("at least one scheduled macro user is required")
    if femto_ut_positions.shape[0] == 0:
        return np.zeros(0)
    d = torus_distance_matrix(macro_positions, femto_ut_positions, layout.cell_side)
    g = layout.wall_attenuation * pathloss_from_distance(d, 0, layout)
    worst = g.max(axis=0)
    return np.minimum(kappa / worst, peak_power)


def _step(q_femto: np.ndarray, q_macro: np.ndarray, targets: SinrTargets,
          gains: DualLinkGains, femto_peak: float, macro_peak: float,
          enforce_peaks: bool) -> tuple[np.ndarray, np.ndarray]:
    """One synchronous power update with division guards and peak clips."""
    sinr_f, sinr_k = evaluate_dual_sinrs(gains, q_femto, q_macro)

    def update(q, sinr, target, peak):
        new = np.empty_like(q)
        zero_target = target == 0.0
        dead = (~zero_target) & (sinr == 0.0)
        live = (~zero_target) & (~dead)
        new[zero_target] = 0.0
        new[dead] = peak if enforce_peaks else q[dead]
        new[live] = q[live] * target[live] / sinr[live]
        if enforce_peaks:
            np.minimum(new, peak, out=new)
        return new

    return (update(q_femto, sinr_f, targets.femto, femto_peak),
            update(q_macro, sinr_k, targets.macro, macro_peak))


def yfm_step(current: tuple[np.ndarray, np.ndarray], targets: SinrTargets,
             bf: BeamformerSet, real: ChannelRealization, scenario: Scenario,
             enforce_peaks: bool = True) -> tuple[np.ndarray, np.ndarray]:
    """One distributed power-control update on the reverse slot.

    ``current`` is (femto powers, macro powers); returns the updated pair.
    Nodes with a zero target go straight to zero power; a node whose
    achieved SINR is zero against a positive target saturates at its peak.
    """
    q_femto, q_macro = current
    gains = dual_link_gains(real, bf, scenario)
    k = bf.v.shape[0]
    return _step(np.asarray(q_femto, dtype=float), np.asarray(q_macro, dtype=float),
                 targets, gains, scenario.femto_peak_power,
                 scenario.macro_power / k, enforce_peaks)


def run_power_control(targets: SinrTargets, bf: BeamformerSet,
                      real: ChannelRealization, scenario: Scenario,
                      n_iter: int, enforce_peaks: bool = True) -> PowerAllocation:
    """Iterate the reverse-slot power control from the standard start.

    Initialization: macro users at P0/K, femto base stations at their
    forward-slot powers (recomputed from the temperature rule at
    ``targets.kappa``).  The trace records the initialization and every
    subsequent iterate together with the SINRs achieved at it, so entry n
    holds the state after n updates and the trace has n_iter + 1 entries.

    ``enforce_peaks=False`` runs the unconstrained iteration, which for
    feasible targets converges to the exact reverse-slot fixed point.
    """
    if n_iter < 0:
        raise ValueError("n_iter must be nonnegative")
    k = bf.v.shape[0]
    macro_peak = scenario.macro_power / k
    primal = interference_temperature_powers(
        targets.kappa, scenario.femto_peak_power, real.macro_positions,
        real.femto_ut_positions, scenario.layout)
    gains = dual_link_gains(real, bf, scenario)

    q_femto = primal.copy()
    q_macro = np.full(k, macro_peak)
    trace = []
    for n in range(n_iter + 1):
        if n > 0:
            q_femto, q_macro = _step(q_femto, q_macro, targets, gains,
                                     scenario.femto_peak_power, macro_peak,
                                     enforce_peaks)
        sinr_f, sinr_k = evaluate_dual_sinrs(gains, q_femto, q_macro)
        trace.append(TraceEntry(iteration=n, femto_powers=q_femto.copy(),
                                macro_powers=q_macro.copy(),
                                femto_sinrs=sinr_f, macro_sinrs=sinr_k))
    return PowerAllocation(femto_primal=primal,
                           macro_primal_per_user=macro_peak,
                           femto_dual=q_femto.copy(),
                           macro_dual=q_macro.copy(),
                           trace=trace)
