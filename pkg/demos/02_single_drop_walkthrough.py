"""One Monte Carlo drop, step by step, on a reduced 5x5 grid.

Draws a schedule and a channel realization, runs the forward slot
(macro-DL with zero-forcing, femto-UL with MMSE reception under the
interference-temperature rule), then the reverse slot via duality and
iterative power control, and prints the per-tier outcomes.
"""

import numpy as np

from femtosim import (Scenario, build_layout, calibrate_p0, draw_realization,
                      draw_schedule, run_dl_slot, run_ul_slot)
from femtosim.engine import drop_rng


def main():
    layout = build_layout(femto_grid_order=5, cell_side=1000.0, femto_radius=10.0)
    scenario = Scenario(layout=layout, macro_antennas=8, femto_antennas=5,
                        macro_power=calibrate_p0(layout, 10.0),
                        femto_peak_power=1000.0)
    mode, k_users, kappa_db = "colocated", 4, -15.0
    kappa = 10.0 ** (kappa_db / 10.0)

    rng = drop_rng(seed=42, mode=mode, K=k_users, drop_index=0)
    schedule = draw_schedule(scenario, mode, k_users, rng)
    print(f"anchor position: ({schedule.macro_positions[0, 0]:.1f}, "
          f"{schedule.macro_positions[0, 1]:.1f}) m, {k_users} colocated users")

    real = draw_realization(scenario, schedule, rng)
    dl = run_dl_slot(scenario, schedule, real, kappa)
    p = dl.powers.femto_primal
    print(f"\nforward slot at kappa = {kappa_db:+.0f} dB:")
    print(f"  femto powers: min {p.min():.3g}, median {np.median(p):.3g}, "
          f"max {p.max():.3g} (peak {scenario.femto_peak_power:g})")
    print(f"  macro user rates: {np.round(dl.macro_rates, 2)} bit/s/Hz "
          f"(sum {dl.macro_sum:.2f})")
    print(f"  femto sum rate: {dl.femto_sum:.1f} bit/s/Hz over "
          f"{layout.n_femtocells} cells")

    ul = run_ul_slot(scenario, schedule, real, dl, n_iter=6)
    print("\nreverse slot (same realization and vectors, 6 power iterations):")
    print(f"  macro user rates: {np.round(ul.macro_rates, 2)} bit/s/Hz "
          f"(sum {ul.macro_sum:.2f})")
    print(f"  femto sum rate: {ul.femto_sum:.1f} bit/s/Hz")
    fwd = np.sum(dl.powers.femto_primal) + scenario.macro_power
    rev = np.sum(ul.powers.femto_dual) + np.sum(ul.powers.macro_dual)
    print(f"  total transmit power, forward {fwd:.4g} vs reverse {rev:.4g}")


if __name__ == "__main__":
    main()
