"""Link gains, transmit powers and per-PRB achievable rates.

Gains are frozen for the lifetime of a drop: the macro pathloss model
``128.1 + 37.6 log10(d_km)`` dB, one log-normal shadowing draw per
(user, base-station) link and an independent unit-mean exponential
(Rayleigh power) fading coefficient per (user, PRB, base station).

A user's achievable rate on a PRB is the Shannon rate over the PRB
bandwidth with all other cells' transmissions on that PRB as noise-like
interference.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import CellTopology, UserPopulation
from .rng import substream

_SHADOWING_STREAM = 12
_FADING_STREAM = 13

LOG2 = math.log(2.0)

#: Minimum link distance; shorter distances are clamped before the pathloss.
MIN_DISTANCE_M = 1.0


@dataclass(frozen=True)
class ChannelTensor:
    """Linear power gains per (user, PRB, base station) plus noise power."""

    gain: np.ndarray      # (num_users, num_prbs, num_cells), linear
    noise_power: float    # watts per PRB (receiver noise over one PRB)

    def __post_init__(self):
        self.gain.setflags(write=False)

    def own_gain(self, population: UserPopulation) -> np.ndarray:
        """Serving-link gain, shape (num_users, num_prbs)."""
        users = np.arange(self.gain.shape[0])
        return self.gain[users, :, population.serving_cell]


@dataclass(frozen=True)
class PowerMap:
    """Per (cell, PRB) transmit power in watts."""

    power: np.ndarray     # (num_cells, num_prbs)

    def __post_init__(self):
        self.power.setflags(write=False)

    def validate(self, topology: CellTopology) -> None:
        if np.any(self.power < 0):
            raise ValueError("negative transmit power")
        budget = topology.total_power_w * (1.0 + 1e-9)
        if np.any(self.power.sum(axis=1) > budget):
            raise ValueError("per-cell power budget exceeded")

    def replace_rows(self, rows: dict[int, np.ndarray]) -> "PowerMap":
        new = self.power.copy()
        for cell, row in rows.items():
            new[cell] = row
        return PowerMap(power=new)


@dataclass(frozen=True)
class RateTable:
    """Achievable rate and interference per (user, PRB) for fixed powers."""

    rate: np.ndarray            # (num_users, num_prbs) bit/s
    interference: np.ndarray    # (num_users, num_prbs) watts

    def __post_init__(self):
        self.rate.setflags(write=False)
        self.interference.setflags(write=False)


def pathloss_db(distance_km: float | np.ndarray,
                intercept_db: float = 128.1,
                slope_db_per_decade: float = 37.6) -> float | np.ndarray:
    """Macro-cell pathloss in dB as a function of distance in kilometers."""
    return intercept_db + slope_db_per_decade * np.log10(distance_km)


def noise_power_per_prb(prb_bandwidth_hz: float,
                        noise_psd_dbm_per_hz: float = -174.0,
                        noise_figure_db: float = 9.0) -> float:
    """Thermal noise plus receiver noise figure integrated over one PRB."""
    dbm = noise_psd_dbm_per_hz + 10.0 * math.log10(prb_bandwidth_hz) + noise_figure_db
    return 10.0 ** ((dbm - 30.0) / 10.0)


def draw_channel(
    topology: CellTopology,
    population: UserPopulation,
    rng_seed: int,
    *,
    pathloss_intercept_db: float = 128.1,
    pathloss_slope_db_per_decade: float = 37.6,
    shadow_std_db: float = 8.0,
    noise_psd_dbm_per_hz: float = -174.0,
    noise_figure_db: float = 9.0,
) -> ChannelTensor:
    """Draw one frozen channel realization for the whole population.

    Shadowing is one draw per (user, base station), shared by all PRBs of
    the link; fast fading is i.i.d. per PRB.  Both use per-user substreams
    keyed by (cell, slot), so the realization of a given user does not
    depend on how many other users exist.
    """
    num_users = population.num_users
    num_prbs = topology.num_prbs
    num_cells = topology.num_cells

    dist = np.linalg.norm(
        population.positions[:, None, :] - topology.positions[None, :, :], axis=2
    )
    dist = np.maximum(dist, MIN_DISTANCE_M)
    pl_db = pathloss_db(dist / 1000.0, pathloss_intercept_db, pathloss_slope_db_per_decade)
    base_gain = 10.0 ** (-pl_db / 10.0)                      # (users, cells)

    gain = np.empty((num_users, num_prbs, num_cells))
    slot_counter: dict[int, int] = {}
    for u in range(num_users):
        cell = int(population.serving_cell[u])
        slot = slot_counter.get(cell, 0)
        slot_counter[cell] = slot + 1
        shadow_db = substream(rng_seed, _SHADOWING_STREAM, cell, slot).normal(
            0.0, shadow_std_db, size=num_cells
        )
        fading = substream(rng_seed, _FADING_STREAM, cell, slot).exponential(
            1.0, size=(num_prbs, num_cells)
        )
        gain[u] = base_gain[u] * 10.0 ** (shadow_db / 10.0) * fading

    noise = noise_power_per_prb(
        topology.prb_bandwidth, noise_psd_dbm_per_hz, noise_figure_db
    )
    return ChannelTensor(gain=gain, noise_power=noise)


def uniform_power(topology: CellTopology) -> PowerMap:
    """Spread each cell's budget evenly over its PRBs."""
    per_prb = topology.total_power_w / topology.num_prbs
    power = np.tile(per_prb[:, None], (1, topology.num_prbs))
    return PowerMap(power=power)


def compute_rates(
    topology: CellTopology,
    population: UserPopulation,
    channel: ChannelTensor,
    powers: PowerMap,
) -> RateTable:
    """Per-PRB interference and Shannon rate for every user.

    The interference seen by a user on a PRB sums the received powers from
    all cells except its serving one; the rate is
    ``B log2(1 + p h / (I + noise))`` with the serving cell's power and gain.
    """
    p = powers.power                                        # (cells, prbs)
    rx = channel.gain * p.T[None, :, :]                     # (users, prbs, cells)
    users = np.arange(population.num_users)
    own_rx = rx[users, :, population.serving_cell]          # (users, prbs)

    other = rx.copy()
    other[users, :, population.serving_cell] = 0.0
    interference = other.sum(axis=2)

    bandwidth = topology.prb_bandwidth
    snr = own_rx / (interference + channel.noise_power)
    rate = bandwidth * np.log1p(snr) / LOG2
    return RateTable(rate=rate, interference=interference)
