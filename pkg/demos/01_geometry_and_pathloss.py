"""Layout, torus distances and the wall/pathloss model.

Builds the default 25x25 femtocell grid in a 1 km cell and walks through
the large-scale gain model: breakpoint behavior, wall attenuation, and the
macro power calibration that fixes the interference-free cell-edge SNR.
"""

import numpy as np

from femtosim import build_layout, calibrate_p0, locate, pathloss
from femtosim.geometry import Position


def main():
    layout = build_layout(femto_grid_order=25, cell_side=1000.0,
                          femto_radius=10.0, pathloss_3db_distance=50.0,
                          pathloss_exponent=3.5, wall_absorption_db=5.0)
    print(f"femtocells: {layout.n_femtocells} "
          f"(grid spacing {layout.cell_side / layout.femto_grid_order:g} m, "
          f"disk radius {layout.femto_radius:g} m)")

    bs = Position(0.0, 0.0, None)
    print("\noutdoor pathloss vs distance (no walls):")
    for d in (0.0, 25.0, 50.0, 100.0, 250.0, 500.0):
        g = pathloss(bs, Position(d, 0.0, None), layout)
        print(f"  d = {d:5.0f} m   g = {g:.6g}   ({10 * np.log10(g):7.2f} dB)")

    print("\nwall effect at 50 m:")
    outdoor = pathloss(bs, Position(50.0, 0.0, None), layout)
    one_wall = pathloss(Position(0.0, 0.0, 0), Position(50.0, 0.0, None), layout)
    two_walls = pathloss(Position(0.0, 0.0, 0), Position(50.0, 0.0, 1), layout)
    for name, g in (("outdoor-outdoor", outdoor), ("one wall", one_wall),
                    ("two walls", two_walls)):
        print(f"  {name:16s} g = {g:.6g}")

    # indoor tagging is geometric: within a disk means inside that femtocell
    inside = locate(layout, *(layout.femto_centers[0] + [3.0, 0.0]))
    outside = locate(layout, *(layout.femto_centers[0] + [15.0, 0.0]))
    print(f"\n3 m from a femto center  -> indoor cell {inside.indoor_cell}")
    print(f"15 m from a femto center -> outdoor ({outside.indoor_cell})")

    p0 = calibrate_p0(layout, 10.0)
    print(f"\nmacro power for 10 dB cell-edge SNR: {p0:.4g} "
          f"({10 * np.log10(p0):.2f} dB above noise)")


if __name__ == "__main__":
    main()
