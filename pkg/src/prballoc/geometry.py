"""Hexagonal cell layout and uniform in-cell user placement.

The network is a center cell surrounded by one ring of six neighbors,
all transmitting on the same band (frequency reuse one).  Each cell owns
the regular hexagon whose apothem is half the inter-site distance, so
the seven hexagons tile the plane with no overlap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .rng import substream
from .units import dbm_to_watts

SQRT3 = math.sqrt(3.0)

_PLACEMENT_STREAM = 11


class ConfigurationError(ValueError):
    """A scenario parameter is outside the supported domain."""


@dataclass(frozen=True)
class CellTopology:
    """Cell positions plus the radio constants shared by every cell."""

    positions: np.ndarray        # (num_cells, 2) cell centers, meters
    inter_site_distance: float   # meters
    total_power_w: np.ndarray    # (num_cells,) downlink power budget, watts
    num_prbs: int
    system_bandwidth: float      # Hz

    def __post_init__(self):
        self.positions.setflags(write=False)
        self.total_power_w.setflags(write=False)

    @property
    def num_cells(self) -> int:
        return self.positions.shape[0]

    @property
    def prb_bandwidth(self) -> float:
        """Bandwidth of one resource block: the system band split evenly."""
        return self.system_bandwidth / self.num_prbs

    @property
    def hex_apothem(self) -> float:
        return self.inter_site_distance / 2.0


@dataclass(frozen=True)
class UserPopulation:
    """One drop of users: serving cell, position and rate demand per user.

    User ids are the row indices ``0..num_users-1``, assigned cell by cell.
    """

    serving_cell: np.ndarray    # (num_users,) int
    positions: np.ndarray       # (num_users, 2) meters
    target_rate: np.ndarray     # (num_users,) bit/s

    def __post_init__(self):
        self.serving_cell.setflags(write=False)
        self.positions.setflags(write=False)
        self.target_rate.setflags(write=False)

    @property
    def num_users(self) -> int:
        return self.serving_cell.shape[0]

    def users_in_cell(self, cell: int) -> np.ndarray:
        return np.flatnonzero(self.serving_cell == cell)


def hexagon_vertices(center: np.ndarray, apothem: float) -> np.ndarray:
    """Corners of the cell hexagon, counter-clockwise."""
    circumradius = 2.0 * apothem / SQRT3
    angles = np.deg2rad(30.0 + 60.0 * np.arange(6))
    corners = circumradius * np.stack([np.cos(angles), np.sin(angles)], axis=1)
    return np.asarray(center, dtype=float) + corners


def points_in_hexagon(points: np.ndarray, center: np.ndarray, apothem: float) -> np.ndarray:
    """Membership test for the hexagon with flat sides facing the neighbors.

    A point belongs to the hexagon iff its projection on each of the three
    neighbor axes (0, 60 and 120 degrees) stays within the apothem.
    """
    rel = np.atleast_2d(points) - np.asarray(center, dtype=float)
    angles = np.deg2rad([0.0, 60.0, 120.0])
    axes = np.stack([np.cos(angles), np.sin(angles)], axis=1)  # (3, 2)
    proj = rel @ axes.T
    return np.all(np.abs(proj) <= apothem, axis=1)


def build_hex_grid(
    inter_site_distance: float,
    num_cells: int = 7,
    *,
    total_power_dbm: float = 43.0,
    num_prbs: int = 24,
    system_bandwidth_hz: float = 5e6,
) -> CellTopology:
    """Build the cell layout: one center cell plus, optionally, six neighbors.

    Only ``num_cells`` of 1 (isolated cell, no interference) and 7 (default
    ring) are supported; other values raise :class:`ConfigurationError`.
    """
    if num_cells not in (1, 7):
        raise ConfigurationError(f"unsupported number of cells: {num_cells} (use 1 or 7)")
    if inter_site_distance <= 0:
        raise ConfigurationError("inter-site distance must be positive")
    if num_prbs < 1:
        raise ConfigurationError("need at least one PRB")
    if system_bandwidth_hz <= 0:
        raise ConfigurationError("system bandwidth must be positive")

    centers = [(0.0, 0.0)]
    if num_cells == 7:
        for k in range(6):
            theta = math.radians(60.0 * k)
            centers.append((inter_site_distance * math.cos(theta),
                            inter_site_distance * math.sin(theta)))
    power_w = np.full(num_cells, dbm_to_watts(total_power_dbm))
    return CellTopology(
        positions=np.asarray(centers, dtype=float),
        inter_site_distance=float(inter_site_distance),
        total_power_w=power_w,
        num_prbs=int(num_prbs),
        system_bandwidth=float(system_bandwidth_hz),
    )


def drop_users(
    topology: CellTopology,
    users_per_cell: int,
    rng_seed: int,
    *,
    target_rate_bps: float = 768e3,
) -> UserPopulation:
    """Place ``users_per_cell`` users uniformly inside every cell hexagon.

    Positions are rejection-sampled from the hexagon bounding box.  Each
    (cell, slot) pair owns its substream, so enlarging the population keeps
    the positions of already-existing users unchanged.
    """
    if users_per_cell < 1:
        raise ConfigurationError("users_per_cell must be at least 1")
    if target_rate_bps <= 0:
        raise ConfigurationError("target rate must be positive")

    apothem = topology.hex_apothem
    circumradius = 2.0 * apothem / SQRT3
    cells = []
    coords = []
    for cell in range(topology.num_cells):
        center = topology.positions[cell]
        for slot in range(users_per_cell):
            rng = substream(rng_seed, _PLACEMENT_STREAM, cell, slot)
            while True:
                candidate = rng.uniform(-circumradius, circumradius, size=2)
                if points_in_hexagon(candidate, np.zeros(2), apothem)[0]:
                    break
            cells.append(cell)
            coords.append(center + candidate)
    return UserPopulation(
        serving_cell=np.asarray(cells, dtype=np.int64),
        positions=np.asarray(coords, dtype=float),
        target_rate=np.full(len(cells), float(target_rate_bps)),
    )
