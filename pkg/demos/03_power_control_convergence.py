"""Convergence of the distributed reverse-slot power control.

Shows how the achieved reverse SINRs approach their forward-slot targets
iteration by iteration, and how the total transmit power approaches the
forward total (sum-power duality) once peaks stop binding.
"""

import numpy as np

from femtosim import (Scenario, build_layout, calibrate_p0, draw_realization,
                      draw_schedule, run_dl_slot, run_power_control, SinrTargets)
from femtosim.beamforming import duality_swap
from femtosim.engine import drop_rng


def main():
    layout = build_layout(femto_grid_order=5, cell_side=1000.0, femto_radius=10.0)
    scenario = Scenario(layout=layout, macro_antennas=8, femto_antennas=5,
                        macro_power=calibrate_p0(layout, 10.0),
                        femto_peak_power=1000.0)
    kappa = 10.0 ** (-15.0 / 10.0)
    rng = drop_rng(seed=7, mode="colocated", K=6, drop_index=0)
    schedule = draw_schedule(scenario, "colocated", 6, rng)
    real = draw_realization(scenario, schedule, rng)
    dl = run_dl_slot(scenario, schedule, real, kappa)

    targets = SinrTargets(femto=dl.femto_sinrs, macro=dl.macro_sinrs, kappa=kappa)
    alloc = run_power_control(targets, duality_swap(dl.beamformers), real,
                              scenario, n_iter=30)
    t_all = np.concatenate([targets.femto, targets.macro])
    forward_total = np.sum(alloc.femto_primal) + scenario.macro_power

    print("iter   worst |SINR/target - 1|   total reverse power")
    for entry in alloc.trace:
        if entry.iteration in (0, 1, 2, 3, 6, 10, 20, 30):
            achieved = np.concatenate([entry.femto_sinrs, entry.macro_sinrs])
            worst = np.max(np.abs(achieved - t_all) / t_all)
            total = np.sum(entry.femto_powers) + np.sum(entry.macro_powers)
            print(f"{entry.iteration:4d}   {worst:22.3e}   {total:12.4f}")
    print(f"forward-slot total power:         {forward_total:12.4f}")
    print("\nthe region is already accurate after a handful of iterations;")
    print("peak clipping keeps every power within its cap at every step")


if __name__ == "__main__":
    main()
