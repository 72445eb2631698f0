"""Cell layout, torus distances, wall counting, and distance pathloss.

All geometry lives on a square cell with wrap-around (torus) distances so
that edge effects vanish.  Distances are in meters, matching the scale of
the default simulation parameters.  The large-scale gain between two
points a, b is

    g(a, b) = w^n(a,b) / (1 + (d(a,b)/delta)^alpha)

with d the torus distance, n the number of walls crossed (0, 1 or 2),
w the linear wall attenuation, delta the 3 dB breakpoint distance and
alpha the pathloss exponent.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True, eq=False)
class Layout:
    """Immutable description of the cell geometry and pathloss constants.

    ``femto_centers`` is an (F2, 2) array of disk centers.  Layouts built
    by :func:`build_layout` place them on the regular grid; tests may
    construct layouts with hand-picked centers, in which case
    ``femto_grid_order`` is None.
    """

    cell_side: float
    femto_grid_order: int | None
    femto_centers: np.ndarray
    femto_radius: float
    pathloss_3db_distance: float
    pathloss_exponent: float
    wall_absorption_db: float

    def __post_init__(self):
        for name in ("cell_side", "femto_radius", "pathloss_3db_distance",
                     "pathloss_exponent", "wall_absorption_db"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be strictly positive")
        centers = np.atleast_2d(np.asarray(self.femto_centers, dtype=float))
        if centers.size == 0:
            centers = centers.reshape(0, 2)
        if centers.shape[1] != 2:
            raise ValueError("femto_centers must be an (F2, 2) array")
        object.__setattr__(self, "femto_centers", centers)

    @property
    def n_femtocells(self) -> int:
        return self.femto_centers.shape[0]

    @property
    def wall_attenuation(self) -> float:
        """Linear per-wall power attenuation factor (<= 1)."""
        return 10.0 ** (-self.wall_absorption_db / 10.0)


@dataclass(frozen=True)
class Position:
    """A point in the cell, tagged with the femtocell it lies in (if any)."""

    x: float
    y: float
    indoor_cell: int | None = None


def wrap_coordinates(xy: np.ndarray, side: float) -> np.ndarray:
    """Map coordinates into the fundamental square [-side/2, side/2)."""
    return np.mod(np.asarray(xy, dtype=float) + side / 2.0, side) - side / 2.0


def torus_displacement(delta: np.ndarray, side: float) -> np.ndarray:
    """Shortest wrap-around displacement for raw coordinate differences."""
    return np.mod(np.asarray(delta, dtype=float) + side / 2.0, side) - side / 2.0


def torus_distance(a: Position, b: Position, side: float) -> float:
    """Distance between two points modulo the centered square (torus)."""
    dx = torus_displacement(np.array([a.x - b.x, a.y - b.y]), side)
    return float(np.hypot(dx[0], dx[1]))


def torus_distance_matrix(pts_a: np.ndarray, pts_b: np.ndarray, side: float) -> np.ndarray:
    """Pairwise torus distances between rows of (Na, 2) and (Nb, 2) arrays."""
    pts_a = np.asarray(pts_a, dtype=float).reshape(-1, 2)
    pts_b = np.asarray(pts_b, dtype=float).reshape(-1, 2)
    diff = pts_a[:, None, :] - pts_b[None, :, :]
    diff = torus_displacement(diff, side)
    return np.hypot(diff[..., 0], diff[..., 1])


def locate(layout: Layout, x: float, y: float) -> Position:
    """Wrap coordinates and resolve the indoor tag against the femto disks.

    A point is indoor when its torus distance to some femto center is at
    most the femto radius (boundary counts as indoor).
    """
    xy = wrap_coordinates(np.array([x, y]), layout.cell_side)
    cell = None
    if layout.n_femtocells:
        d = torus_distance_matrix(xy[None, :], layout.femto_centers, layout.cell_side)[0]
        nearest = int(np.argmin(d))
        if d[nearest] <= layout.femto_radius:
            cell = nearest
    return Position(float(xy[0]), float(xy[1]), cell)


def wall_count(a: Position, b: Position) -> int:
    """Number of walls between two positions: 0, 1 or 2.

    Both outdoor or both inside the same femtocell: 0.  Exactly one
    indoor: 1.  Indoor in different femtocells: 2.
    """
    if a.indoor_cell is None and b.indoor_cell is None:
        return 0
    if a.indoor_cell is None or b.indoor_cell is None:
        return 1
    return 0 if a.indoor_cell == b.indoor_cell else 2


def pathloss_from_distance(dist: np.ndarray, walls: np.ndarray, layout: Layout) -> np.ndarray:
    """Vectorized gain  w^walls / (1 + (d/delta)^alpha)."""
    dist = np.asarray(dist, dtype=float)
    ratio = dist / layout.pathloss_3db_distance
    return layout.wall_attenuation ** np.asarray(walls) / (1.0 + ratio ** layout.pathloss_exponent)


def pathloss(a: Position, b: Position, layout: Layout) -> float:
    """Large-scale linear power gain between two positions; always in (0, 1]."""
    d = torus_distance(a, b, layout.cell_side)
    n = wall_count(a, b)
    return float(pathloss_from_distance(np.array(d), np.array(n), layout))


def build_layout(femto_grid_order: int,
                 cell_side: float,
                 femto_radius: float,
                 pathloss_3db_distance: float = 50.0,
                 pathloss_exponent: float = 3.5,
                 wall_absorption_db: float = 5.0) -> Layout:
    """Construct the regular F x F femtocell grid layout.

    Centers sit at ((2i - F + 1) / (2F) * side, (2j - F + 1) / (2F) * side)
    for i, j in [0, F); the disks must be pairwise disjoint, which requires
    2 * femto_radius < side / F.  ``femto_grid_order = 0`` is allowed and
    produces a layout with no femtocells.
    """
    if femto_grid_order < 0:
        raise ValueError("femto_grid_order must be nonnegative")
    if femto_grid_order > 0 and 2.0 * femto_radius >= cell_side / femto_grid_order:
        raise ValueError(
            f"femto disks would overlap: need 2*r < side/F, got "
            f"2*{femto_radius} >= {cell_side}/{femto_grid_order}")
    f = femto_grid_order
    if f == 0:
        centers = np.zeros((0, 2))
    else:
        coords = (2.0 * np.arange(f) - f + 1.0) / (2.0 * f) * cell_side
        xx, yy = np.meshgrid(coords, coords, indexing="ij")
        centers = np.column_stack([xx.ravel(), yy.ravel()])
    return Layout(cell_side=cell_side,
                  femto_grid_order=f,
                  femto_centers=centers,
                  femto_radius=femto_radius,
                  pathloss_3db_distance=pathloss_3db_distance,
                  pathloss_exponent=pathloss_exponent,
                  wall_absorption_db=wall_absorption_db)
