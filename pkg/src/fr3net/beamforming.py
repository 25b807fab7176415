"""2D-DFT beam codebooks over a cross-polarised planar panel.

Elements of one polarisation panel are indexed ``m = n_h * m_v + n_v``
with half-wavelength spacing.  A direction with horizontal spatial
frequency ``u = sin(zenith) sin(azimuth)`` and vertical ``v = cos(zenith)``
has steering phase ``pi * (n_h u + n_v v)``; angles are relative to the
panel boresight.  Codewords are conjugated, unit-norm steering vectors, so
the received beam gain is ``|h @ w|**2``.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Sequence

import numpy as np

from .errors import InvalidParameterError, ShapeError

if TYPE_CHECKING:
    from .radio_catalog import RadioType


@dataclass(frozen=True)
class Codebook:
    kind: str  # "SSB" or "CSI-RS"
    codewords: np.ndarray  # (n_directions, m_h * m_v), one panel
    polarization_panels: int
    boresight: tuple[float, float]  # (azimuth deg, zenith deg)
    m_h: int
    m_v: int
    u: np.ndarray  # horizontal spatial frequency of each direction
    v: np.ndarray  # vertical spatial frequency of each direction

    @property
    def n_directions(self) -> int:
        return self.codewords.shape[0]

    @property
    def n_beams(self) -> int:
        return self.n_directions * self.polarization_panels

    def __len__(self) -> int:
        return self.n_beams

    def pointing_deg(self) -> np.ndarray:
        """(azimuth, zenith) in degrees each direction points at; NaN azimuth if invisible."""
        zen = np.degrees(np.arccos(np.clip(self.v, -1.0, 1.0)))
        s = np.sqrt(np.clip(1.0 - self.v**2, 0.0, None))
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(s > 0, self.u / s, np.nan)
        az = np.where(np.abs(ratio) <= 1.0, np.degrees(np.arcsin(np.clip(ratio, -1, 1))), np.nan)
        return np.column_stack([az + self.boresight[0], zen])


def steering(m_h: int, m_v: int, u, v) -> np.ndarray:
    """Plane-wave response of one panel; broadcasts over ``u``/``v``, shape (..., m_h*m_v)."""
    u = np.asarray(u, dtype=float)[..., None]
    v = np.asarray(v, dtype=float)[..., None]
    n_h = np.repeat(np.arange(m_h), m_v)
    n_v = np.tile(np.arange(m_v), m_h)
    return np.exp(1j * np.pi * (n_h * u + n_v * v))


def dft_frequencies(m: int, oversampling: int = 1) -> np.ndarray:
    """Spatial frequencies of an m-point DFT fan, centred on broadside (0)."""
    n = m * oversampling
    return 2.0 * (np.arange(n) - n // 2) / n


def _codebook(kind, m_h, m_v, h_idx, v_idx, panels, boresight, o_h=1, o_v=1) -> Codebook:
    fu = dft_frequencies(m_h, o_h)
    fv = dft_frequencies(m_v, o_v)
    hh, vv = np.meshgrid(np.asarray(h_idx), np.asarray(v_idx), indexing="ij")
    u = fu[hh.ravel()]
    v = fv[vv.ravel()]
    w = np.conj(steering(m_h, m_v, u, v)) / math.sqrt(m_h * m_v)
    return Codebook(kind=kind, codewords=w, polarization_panels=panels,
                    boresight=(float(boresight[0]), float(boresight[1])), m_h=m_h, m_v=m_v, u=u, v=v)


def build_dft_codebook(m_h: int, m_v: int, o_h: int = 1, o_v: int = 1,
                       boresight: Sequence[float] = (30.0, 90.0), kind: str = "CSI-RS",
                       panels: int = 1) -> Codebook:
    """Full (optionally oversampled) 2D-DFT codebook: ``o_h m_h x o_v m_v`` codewords."""
    if m_h < 1 or m_v < 1 or o_h < 1 or o_v < 1:
        raise InvalidParameterError("array sizes and oversampling factors must be >= 1")
    return _codebook(kind, m_h, m_v, range(o_h * m_h), range(o_v * m_v), panels, boresight, o_h, o_v)


def _central_rows(m_v: int, rows: int) -> list[int]:
    start = m_v // 2 - rows // 2
    return list(range(start, start + rows))


def _spread_columns(m_h: int, n: int) -> list[int]:
    # evenly spaced, always containing the broadside column m_h // 2
    return [(m_h // 2 + math.floor((j - n // 2) * m_h / n)) % m_h for j in range(n)]


def _fan_indices(m_h: int, m_v: int, n_dirs: int) -> tuple[list[int], list[int]]:
    if n_dirs < 1 or n_dirs > m_h * m_v:
        raise InvalidParameterError(f"{n_dirs} directions do not fit a {m_h}x{m_v} panel")
    if n_dirs <= m_h:
        return sorted(_spread_columns(m_h, n_dirs)), _central_rows(m_v, 1)
    if n_dirs % m_h:
        raise InvalidParameterError(f"{n_dirs} directions is not a multiple of {m_h} columns")
    return list(range(m_h)), _central_rows(m_v, n_dirs // m_h)


def ssb_codebook(radio_type: "RadioType", technology: str,
                 boresight: Sequence[float] = (30.0, 90.0)) -> Codebook:
    """Single-panel SSB fan with the catalog's beam count.

    Horizontal DFT columns at the broadside row; when the count exceeds the
    column count, whole central rows are added.
    """
    t = radio_type.tech(technology)
    h_idx, v_idx = _fan_indices(t.m_h, t.m_v, t.n_ssb_beams)
    return _codebook("SSB", t.m_h, t.m_v, h_idx, v_idx, 1, boresight)


def csirs_codebook(radio_type: "RadioType", technology: str,
                   boresight: Sequence[float] = (30.0, 90.0)) -> Codebook:
    """Dual-panel CSI-RS codebook: ``n_csirs / 2`` directions, each sent on both panels."""
    t = radio_type.tech(technology)
    if t.n_csirs_beams % 2:
        raise InvalidParameterError("CSI-RS beam count must be even (two polarisations)")
    h_idx, v_idx = _fan_indices(t.m_h, t.m_v, t.n_csirs_beams // 2)
    return _codebook("CSI-RS", t.m_h, t.m_v, h_idx, v_idx, 2, boresight)


def beam_amplitude_gain(h: np.ndarray, w: np.ndarray) -> np.ndarray | float:
    """``|h @ w|**2``; ``h`` may carry leading batch axes."""
    h = np.asarray(h)
    w = np.asarray(w)
    if h.shape[-1] != w.shape[-1]:
        raise ShapeError(f"channel length {h.shape[-1]} != codeword length {w.shape[-1]}")
    g = np.abs(h @ w) ** 2
    return float(g) if np.ndim(g) == 0 else g


def codebook_gains(h: np.ndarray, codebook: Codebook) -> np.ndarray:
    """Gain of every direction: (..., N) channel -> (..., n_directions)."""
    h = np.asarray(h)
    if h.shape[-1] != codebook.codewords.shape[1]:
        raise ShapeError(f"channel length {h.shape[-1]} != panel size {codebook.codewords.shape[1]}")
    return np.abs(h @ codebook.codewords.T) ** 2


def layer_codewords(codebook: Codebook, direction: int) -> tuple[np.ndarray, np.ndarray]:
    """The two full-array codewords of a direction: panel 1 only, then panel 2 only."""
    w = codebook.codewords[direction]
    z = np.zeros_like(w)
    return np.concatenate([w, z]), np.concatenate([z, w])


DIAGRAM_COLUMNS = ("codeword", "cut", "azimuth_deg", "elevation_deg", "gain_db")


def beam_diagram_rows(codebook: Codebook, step_deg: float = 1.0):
    """Horizontal and vertical array-gain cuts of every codeword.

    The horizontal cut runs at the boresight zenith, the vertical cut at the
    boresight azimuth.  Yields rows matching ``DIAGRAM_COLUMNS``.
    """
    if step_deg <= 0:
        raise InvalidParameterError("step_deg must be positive")
    az0, zen0 = codebook.boresight
    az = np.arange(-180.0, 180.0 + 1e-9, step_deg)
    zen = np.arange(0.0, 180.0 + 1e-9, step_deg)
    cuts = [
        ("horizontal", az + az0, np.full_like(az, zen0),
         np.sin(np.radians(zen0)) * np.sin(np.radians(az)), np.full_like(az, np.cos(np.radians(zen0)))),
        ("vertical", np.full_like(zen, az0), zen, np.zeros_like(zen), np.cos(np.radians(zen))),
    ]
    for name, az_deg, zen_deg, u, v in cuts:
        g = codebook_gains(steering(codebook.m_h, codebook.m_v, u, v), codebook)
        g_db = 10 * np.log10(np.maximum(g, 1e-12))
        for k in range(codebook.n_directions):
            for a, e, val in zip(az_deg, zen_deg, g_db[:, k]):
                yield [k, name, f"{a:.2f}", f"{e:.2f}", f"{val:.4f}"]


def write_beam_diagram(codebook: Codebook, path, step_deg: float = 1.0) -> int:
    """Write the beam diagram of one codebook as CSV; returns the number of data rows."""
    n = 0
    with open(path, "w", newline="") as fh:
        wr = csv.writer(fh, lineterminator="\n")
        wr.writerow(DIAGRAM_COLUMNS)
        for row in beam_diagram_rows(codebook, step_deg):
            wr.writerow(row)
            n += 1
    return n
