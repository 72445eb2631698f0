"""A reduced tradeoff sweep: kappa grid, K values, and the Pareto boundary.

Runs the full sweep machinery on a 5x5 grid with a handful of drops and
prints the forward tradeoff points plus the boundary supremized over K.
For the full-scale version use the CLI:

    python -m femtosim sweep --out results/
"""

import numpy as np

from femtosim import (Scenario, SweepConfig, build_layout, calibrate_p0,
                      pareto_boundary, sweep)


def main():
    layout = build_layout(femto_grid_order=5, cell_side=1000.0, femto_radius=10.0)
    scenario = Scenario(layout=layout, macro_antennas=8, femto_antennas=5,
                        macro_power=calibrate_p0(layout, 10.0),
                        femto_peak_power=1000.0)
    cfg = SweepConfig(kappa_grid=10.0 ** (np.linspace(-30, 0, 7) / 10.0),
                      k_values=(2, 4, 6), modes=("colocated",),
                      n_drops=40, pc_iterations=(6,), seed=2026)
    curves = sweep(scenario, cfg)

    forward = [c for c in curves if c.direction == "dl"]
    for curve in forward:
        print(f"\nK = {curve.K} (forward slot):")
        for p in curve.points:
            print(f"  kappa {10 * np.log10(p.kappa):+6.1f} dB   "
                  f"macro {p.macro_mean:6.2f} +- {p.macro_se:4.2f}   "
                  f"femto {p.femto_mean:7.1f} +- {p.femto_se:4.1f}")

    boundary = pareto_boundary(forward)
    print("\nPareto boundary over K (macro desc, femto asc):")
    for p in boundary.points:
        print(f"  K={p.K}  kappa {10 * np.log10(p.kappa):+6.1f} dB   "
              f"({p.macro_mean:6.2f}, {p.femto_mean:7.1f})")


if __name__ == "__main__":
    main()
