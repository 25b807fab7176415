"""SSB RSRP measurement, cell association, priority reselection, CSI-RS beam choice."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .beamforming import Codebook, codebook_gains, layer_codewords
from .errors import NoCoverageError

DEFAULT_PRIORITY = {"4G": 0, "5G": 1, "6G": 2}
DEFAULT_THRESHOLDS = {"4G": -math.inf, "5G": -110.0, "6G": -108.0}


@dataclass(frozen=True)
class RsrpMeasurement:
    ue_id: int
    cell_id: int
    beam_index: int
    rsrp_dbm: float
    technology: str
    priority: int


@dataclass
class ReselectionPolicy:
    priority: dict[str, int] = field(default_factory=lambda: dict(DEFAULT_PRIORITY))
    threshold_dbm: dict[str, float] = field(default_factory=lambda: dict(DEFAULT_THRESHOLDS))
    enabled: bool = True

    def threshold_for_priority(self, prio: int) -> float:
        for tech, p in self.priority.items():
            if p == prio:
                return self.threshold_dbm.get(tech, -math.inf)
        return -math.inf


@dataclass
class AssociationState:
    ue_id: int
    serving_cell: int
    serving_ssb_beam: int
    rsrp_dbm: float
    technology: str = ""
    serving_csirs_beam: int = -1
    layer_count: int = 2


@dataclass
class BeamAssignment:
    ue_id: int
    ssb_beam: int
    csirs_beam: int
    w_layer1: np.ndarray = field(repr=False)
    w_layer2: np.ndarray = field(repr=False)


def ssb_power_per_re(tx_power_w: float, n_prb: int) -> float:
    """SSB power per resource element: the cell PSD spread over 12 subcarriers per PRB."""
    return tx_power_w / (12.0 * n_prb)


def watt_to_dbm(p) -> np.ndarray:
    with np.errstate(divide="ignore"):
        return 10.0 * np.log10(np.asarray(p, dtype=float)) + 30.0


def measure_rsrp(ue_id: int, cell, beta_linear: float, h: np.ndarray,
                 codebook: Codebook | None = None, p_ssb_w: float | None = None) -> list[RsrpMeasurement]:
    """One RSRP per SSB beam of ``cell``; ``h`` is the single-panel channel (N,) or (groups, N).

    Multiple PRB groups are averaged in the linear domain.
    """
    cb = codebook if codebook is not None else cell.ssb
    p = ssb_power_per_re(cell.tx_power_watt, cell.n_prb) if p_ssb_w is None else p_ssb_w
    g = codebook_gains(np.atleast_2d(h), cb).mean(axis=0)
    rsrp = watt_to_dbm(beta_linear * g * p)
    return [RsrpMeasurement(ue_id, cell.id, s, float(r), cell.technology, cell.priority)
            for s, r in enumerate(rsrp)]


def choose_serving(best_rsrp_dbm: np.ndarray, cell_priority: np.ndarray,
                   policy: ReselectionPolicy | None) -> np.ndarray:
    """Serving cell index for each UE from its best-beam RSRP per cell.

    ``best_rsrp_dbm`` is (n_ue, n_cells).  Without reselection the
    strongest cell wins, ties going to the lowest index.  With it, the
    highest-priority layer whose best cell clears the layer threshold is
    chosen and its strongest cell serves.  If no prioritised layer
    qualifies, the strongest cell of the unthresholded layers serves; only
    when there is none does the overall strongest cell serve.
    """
    r = np.atleast_2d(np.asarray(best_rsrp_dbm, dtype=float))
    if r.shape[1] == 0:
        raise NoCoverageError("no cells to associate with")
    strongest = np.argmax(r, axis=1)
    if policy is None or not policy.enabled:
        return strongest
    prio = np.asarray(cell_priority)
    out = strongest.copy()
    free = np.array([policy.threshold_for_priority(int(p)) == -math.inf or p <= 0 for p in prio])
    if free.any():
        cols = np.flatnonzero(free)
        out = cols[np.argmax(r[:, cols], axis=1)]
    decided = np.zeros(len(r), dtype=bool)
    for p in sorted({int(x) for x in prio if x > 0}, reverse=True):
        cols = np.flatnonzero(prio == p)
        best = r[:, cols].max(axis=1)
        ok = (best >= policy.threshold_for_priority(p)) & ~decided
        out[ok] = cols[np.argmax(r[ok][:, cols], axis=1)]
        decided |= ok
    return out


def _measurement_matrix(measurements: Sequence[RsrpMeasurement]):
    if not measurements:
        raise NoCoverageError("no RSRP measurements")
    cells = sorted({m.cell_id for m in measurements})
    col = {c: i for i, c in enumerate(cells)}
    n_beams = max(m.beam_index for m in measurements) + 1
    r = np.full((len(cells), n_beams), -np.inf)
    prio = np.zeros(len(cells), dtype=int)
    tech = [""] * len(cells)
    for m in measurements:
        r[col[m.cell_id], m.beam_index] = m.rsrp_dbm
        prio[col[m.cell_id]] = m.priority
        tech[col[m.cell_id]] = m.technology
    return cells, r, prio, tech


def _state(ue_id, cells, r, tech, k) -> AssociationState:
    beam = int(np.argmax(r[k]))
    return AssociationState(ue_id=ue_id, serving_cell=cells[k], serving_ssb_beam=beam,
                            rsrp_dbm=float(r[k, beam]), technology=tech[k])


def associate_strongest(measurements: Sequence[RsrpMeasurement]) -> AssociationState:
    cells, r, prio, tech = _measurement_matrix(measurements)
    k = int(choose_serving(r.max(axis=1)[None, :], prio, None)[0])
    return _state(measurements[0].ue_id, cells, r, tech, k)


def priority_reselect(measurements: Sequence[RsrpMeasurement],
                      policy: ReselectionPolicy) -> AssociationState:
    cells, r, prio, tech = _measurement_matrix(measurements)
    k = int(choose_serving(r.max(axis=1)[None, :], prio, policy)[0])
    return _state(measurements[0].ue_id, cells, r, tech, k)


def select_csirs_beam(ue_id: int, h: np.ndarray, codebook: Codebook, ssb_beam: int = -1) -> BeamAssignment:
    """Strongest CSI-RS direction for the serving cell's single-panel channel ``h``.

    The same direction is used on both polarisation panels (two layers).
    """
    g = codebook_gains(np.atleast_2d(h), codebook).mean(axis=0)
    d = int(np.argmax(g))
    w1, w2 = layer_codewords(codebook, d)
    return BeamAssignment(ue_id=ue_id, ssb_beam=ssb_beam, csirs_beam=d, w_layer1=w1, w_layer2=w2)
