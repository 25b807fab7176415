"""Per-PRB SINR, effective SINR and achievable rate.

Three scheduling modes decide who shares a PRB with whom:

``paper-literal``
    every UE of a cell is on every PRB; the intra-cell sum runs over all
    other UEs of the serving cell; the rate divides the band by the cell's
    UE count.
``orthogonal``
    round-robin FDM inside a cell, so no intra-cell interference; same
    rate division as above.
``per-beam``
    one UE per active CSI-RS direction is on every PRB; UEs sharing a
    direction split its resources round-robin.  Intra-cell interference
    comes from the other active directions.

Inter-cell interference is the time-averaged transmission of every other
loaded cell on the same carrier.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameterError

MODES = ("paper-literal", "orthogonal", "per-beam")
N_LAYERS = 2


@dataclass
class PrbAllocation:
    ue_id: int
    cell: int
    prb_set: np.ndarray
    power_w: np.ndarray  # (layers, len(prb_set))


@dataclass
class LinkResult:
    ue_id: int
    sinr: np.ndarray  # (layers, prb groups), linear
    sinr_eff: np.ndarray  # (layers,)
    rate_bps: float


def split_power(tx_power_w: float, n_prb: int, n_scheduled_layers: int) -> float:
    if n_prb < 1 or n_scheduled_layers < 1:
        raise InvalidParameterError("PRB and layer counts must be >= 1")
    return tx_power_w / (n_prb * n_scheduled_layers)


def capacity(x):
    return np.log2(1.0 + np.asarray(x, dtype=float))


def effective_sinr(sinrs, weights=None) -> float | np.ndarray:
    """Capacity-domain average over the last axis: C^-1(mean C(sinr))."""
    s = np.asarray(sinrs, dtype=float)
    if s.shape[-1] == 0:
        raise InvalidParameterError("effective SINR needs at least one PRB")
    c = np.average(capacity(s), axis=-1, weights=weights)
    eff = np.exp2(c) - 1.0
    # the round trip through log2/exp2 can stray an ulp outside [min, max]
    eff = np.clip(eff, s.min(axis=-1), s.max(axis=-1))
    return float(eff) if np.ndim(eff) == 0 else eff


def ue_rate(n_prb: int, prb_bandwidth_hz: float, n_ue, sinr_eff_layers) -> np.ndarray | float:
    """Sum over layers of (N_PRB B_PRB / N_UE) log2(1 + sinr)."""
    n_ue = np.asarray(n_ue, dtype=float)
    if np.any(n_ue < 1):
        raise InvalidParameterError("N_UE must be >= 1")
    r = np.sum(capacity(sinr_eff_layers), axis=-1) * n_prb * prb_bandwidth_hz / n_ue
    return float(r) if np.ndim(r) == 0 else r


@dataclass
class CellTx:
    """What a cell transmits on one PRB of one layer, averaged over time."""

    weight: np.ndarray  # (n_directions,) watts radiated through each direction
    signal_power: float  # power of one UE's stream when it is scheduled
    n_ue: np.ndarray  # (n_served,) rate divisor of each served UE
    counts: np.ndarray  # (n_directions,) served UEs on each direction


def cell_transmission(directions: np.ndarray, n_directions: int, tx_power_w: float, n_prb: int,
                      mode: str) -> CellTx:
    """Power bookkeeping for a cell serving UEs on the given CSI-RS ``directions``."""
    if mode not in MODES:
        raise InvalidParameterError(f"unknown scheduling mode {mode!r}; expected one of {MODES}")
    directions = np.asarray(directions, dtype=int)
    n = len(directions)
    counts = np.bincount(directions, minlength=n_directions).astype(float)
    if n == 0:
        return CellTx(np.zeros(n_directions), 0.0, np.zeros(0), counts)
    if mode == "paper-literal":
        p = split_power(tx_power_w, n_prb, N_LAYERS * n)
        return CellTx(counts * p, p, np.full(n, float(n)), counts)
    if mode == "orthogonal":
        p = split_power(tx_power_w, n_prb, N_LAYERS)
        return CellTx(counts / n * p, p, np.full(n, float(n)), counts)
    active = counts > 0
    p = split_power(tx_power_w, n_prb, N_LAYERS * int(active.sum()))
    return CellTx(active * p, p, counts[directions], counts)


class SinrAccumulator:
    """Streams cells one at a time and builds per-PRB-group SINRs for every UE.

    ``serving`` and ``direction`` give each UE's serving cell and CSI-RS
    direction; ``carrier`` groups cells that interfere with each other.
    Both layers see the same gain (panel 2 is a 90 degree rotation of
    panel 1), so one value per layer pair is tracked.
    """

    def __init__(self, serving: np.ndarray, direction: np.ndarray, carrier: np.ndarray,
                 noise_w: np.ndarray, mode: str, n_groups: int = 1):
        self.serving = np.asarray(serving, dtype=int)
        self.direction = np.asarray(direction, dtype=int)
        self.carrier = np.asarray(carrier)
        self.noise = np.asarray(noise_w, dtype=float)
        self.mode = mode
        n_ue = len(self.serving)
        self.signal = np.zeros((n_groups, n_ue))
        self.intra = np.zeros((n_groups, n_ue))
        self.inter = np.zeros((n_groups, n_ue))
        self.n_ue = np.ones(n_ue)

    def add_cell(self, c: int, beta: np.ndarray, gains: np.ndarray, tx: CellTx) -> None:
        """Add cell ``c``; ``beta`` (n_ue,) large-scale gains, ``gains`` (groups, n_ue, dirs)."""
        served = np.flatnonzero(self.serving == c)
        if len(served):
            self.n_ue[served] = tx.n_ue
        if not tx.weight.any():
            return
        rx = beta[None, :] * (gains @ tx.weight)  # total received power from c
        same = self.carrier[self.serving] == self.carrier[c]
        other = same & (self.serving != c)
        self.inter[:, other] += rx[:, other]
        if len(served):
            d_own = self.direction[served]
            g_served = gains[:, served, :]
            g_own = np.take_along_axis(g_served, d_own[None, :, None], axis=2)[..., 0]
            self.signal[:, served] = beta[served][None, :] * g_own * tx.signal_power
            if self.mode != "orthogonal":
                # everything the cell radiates except the UE's own stream
                w = np.broadcast_to(tx.weight, (len(served), len(tx.weight))).copy()
                rows = np.arange(len(served))
                if self.mode == "paper-literal":
                    w[rows, d_own] = (tx.counts[d_own] - 1.0) * tx.signal_power
                else:
                    w[rows, d_own] = 0.0
                self.intra[:, served] = beta[served][None, :] * np.einsum("gsd,sd->gs", g_served, w)

    def sinr(self) -> np.ndarray:
        """(groups, n_ue) linear SINR, identical for both layers."""
        return self.signal / (self.intra + self.inter + self.noise[None, :])


def sinr_matrix(beta: np.ndarray, gains: list[np.ndarray], serving: np.ndarray, direction: np.ndarray,
                tx_power_w: np.ndarray, n_prb: np.ndarray, carrier: np.ndarray, noise_w: np.ndarray,
                mode: str = "paper-literal") -> tuple[np.ndarray, np.ndarray]:
    """Whole-network SINR for small instances held fully in memory.

    ``beta`` (n_ue, n_cells); ``gains[c]`` (groups, n_ue, n_dirs_c).
    Returns (sinr (groups, n_ue), n_ue divisor per UE).
    """
    acc = SinrAccumulator(serving, direction, carrier, noise_w, mode, gains[0].shape[0])
    for c, g in enumerate(gains):
        tx = cell_transmission(np.asarray(direction)[np.asarray(serving) == c], g.shape[-1],
                               float(tx_power_w[c]), int(n_prb[c]), mode)
        acc.add_cell(c, beta[:, c], g, tx)
    return acc.sinr(), acc.n_ue
