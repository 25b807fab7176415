"""Large-scale gain and Rician small-scale fading per UE-cell link.

Path loss, LOS probability and O2I penetration follow the 3GPP TR 38.901
UMa/UMi formulas; the element pattern is the 38.901 single-element
pattern.  Everything here is vectorised over (UE, cell) with thin scalar
wrappers for single links.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import linalg

from .beamforming import steering
from .errors import ModelDomainError

C_LIGHT = 299_792_458.0
K_BOLTZMANN = 1.380649e-23


@dataclass
class ShadowParams:
    sigma_los_db: float
    sigma_nlos_db: float
    dcorr_los_m: float
    dcorr_nlos_m: float


@dataclass
class ChannelParams:
    noise_figure_db: float = 9.0
    temperature_k: float = 290.0
    k_factor_los_db: float = 9.0
    k_factor_nlos_db: float | None = None  # None -> pure Rayleigh
    n_prb_groups: int = 1
    min_d2d_m: float = 10.0
    element_max_gain_dbi: float = 8.0
    element_hpbw_h_deg: float = 65.0
    element_hpbw_v_deg: float = 65.0
    element_floor_db: float = 30.0
    shadow: dict[str, ShadowParams] = field(default_factory=lambda: {
        "UMa": ShadowParams(4.0, 6.0, 37.0, 50.0),
        "UMi": ShadowParams(4.0, 7.82, 10.0, 13.0),
    })

    @property
    def k_los(self) -> float:
        return 10 ** (self.k_factor_los_db / 10)

    @property
    def k_nlos(self) -> float:
        return 0.0 if self.k_factor_nlos_db is None else 10 ** (self.k_factor_nlos_db / 10)


@dataclass
class LargeScale:
    path_loss_db: float
    shadow_db: float
    elem_gain_db: float
    los: bool
    o2i_loss_db: float = 0.0

    @property
    def beta_db(self) -> float:
        return -self.path_loss_db + self.shadow_db + self.elem_gain_db - self.o2i_loss_db

    @property
    def beta_linear(self) -> float:
        return 10 ** (self.beta_db / 10)


@dataclass
class SmallScale:
    """Per PRB group, rows are the two UE antennas over all 2*m_h*m_v elements.

    Row 0 sees panel 1 only, row 1 sees panel 2 only with a 90 degree shift.
    """

    h: np.ndarray  # (n_groups, 2, M)
    rician_k_linear: float

    @property
    def panel(self) -> np.ndarray:
        n = self.h.shape[-1] // 2
        return self.h[:, 0, :n]


@dataclass
class ChannelRealization:
    ue_id: int
    cell_id: int
    large: LargeScale
    small: SmallScale


# ---------------------------------------------------------------- geometry

def link_geometry(ue_pos: np.ndarray, cell_pos: np.ndarray, boresight_deg: np.ndarray,
                  tilt_deg: np.ndarray | float = 90.0, min_d2d: float = 0.0) -> dict[str, np.ndarray]:
    """Distances and departure angles for every (UE, cell) pair.

    ``azimuth`` is relative to the cell boresight, wrapped to [-180, 180);
    ``zenith`` is measured from the vertical (90 = horizon) and shifted so
    the cell's vertical boresight maps to 90.
    """
    ue = np.atleast_2d(np.asarray(ue_pos, dtype=float))
    cp = np.atleast_2d(np.asarray(cell_pos, dtype=float))
    dx = ue[:, None, 0] - cp[None, :, 0]
    dy = ue[:, None, 1] - cp[None, :, 1]
    dz = cp[None, :, 2] - ue[:, None, 2]
    d2d_true = np.hypot(dx, dy)
    d2d = np.maximum(d2d_true, min_d2d)
    d3d = np.hypot(d2d, dz)
    az = np.degrees(np.arctan2(dy, dx)) - np.asarray(boresight_deg, dtype=float)[None, :]
    az = (az + 180.0) % 360.0 - 180.0
    zen = 90.0 + np.degrees(np.arctan2(dz, d2d_true)) - (np.asarray(tilt_deg, dtype=float) - 90.0)
    return {"d2d": d2d, "d3d": d3d, "azimuth": az, "zenith": zen,
            "h_bs": np.broadcast_to(cp[None, :, 2], d2d.shape), "h_ut": np.broadcast_to(ue[:, None, 2], d2d.shape)}


# ------------------------------------------------------------ LOS / path loss

def los_probability(d2d, model: str, h_ut=1.5) -> np.ndarray:
    d = np.asarray(d2d, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        if model == "UMi":
            p = 18.0 / d + np.exp(-d / 36.0) * (1.0 - 18.0 / d)
        elif model == "UMa":
            h = np.asarray(h_ut, dtype=float)
            c = np.where(h <= 13.0, 0.0, ((np.clip(h, 13.0, 23.0) - 13.0) / 10.0) ** 1.5)
            p = (18.0 / d + np.exp(-d / 63.0) * (1.0 - 18.0 / d)) * \
                (1.0 + c * 1.25 * (d / 100.0) ** 3 * np.exp(-d / 150.0))
        else:
            raise ModelDomainError(f"unknown channel model {model!r}")
    p = np.where(d <= 18.0, 1.0, p)
    return np.clip(p, 0.0, 1.0)


def _check_carrier(fc_hz) -> np.ndarray:
    f = np.asarray(fc_hz, dtype=float) / 1e9
    if np.any((f < 0.5) | (f > 100.0)):
        raise ModelDomainError(f"carrier {np.min(f)}-{np.max(f)} GHz outside the 0.5-100 GHz model range")
    return f


def breakpoint_distance(fc_hz, h_bs, h_ut, h_e: float = 1.0) -> np.ndarray:
    return 4.0 * (np.asarray(h_bs) - h_e) * (np.asarray(h_ut) - h_e) * np.asarray(fc_hz) / C_LIGHT


def path_loss_db(d2d, d3d, fc_hz, h_bs, h_ut, model: str, los) -> np.ndarray:
    """38.901 UMa/UMi path loss in dB; NLOS is floored at the LOS value."""
    f = _check_carrier(fc_hz)
    d2d = np.asarray(d2d, dtype=float)
    d3d = np.asarray(d3d, dtype=float)
    h_bs = np.asarray(h_bs, dtype=float)
    h_ut = np.asarray(h_ut, dtype=float)
    dbp = breakpoint_distance(fc_hz, h_bs, h_ut)
    lf = np.log10(f)
    ld = np.log10(d3d)
    if model == "UMa":
        pl1 = 28.0 + 22.0 * ld + 20.0 * lf
        pl2 = 28.0 + 40.0 * ld + 20.0 * lf - 9.0 * np.log10(dbp**2 + (h_bs - h_ut) ** 2)
        pl_nlos = 13.54 + 39.08 * ld + 20.0 * lf - 0.6 * (h_ut - 1.5)
    elif model == "UMi":
        pl1 = 32.4 + 21.0 * ld + 20.0 * lf
        pl2 = 32.4 + 40.0 * ld + 20.0 * lf - 9.5 * np.log10(dbp**2 + (h_bs - h_ut) ** 2)
        pl_nlos = 22.4 + 35.3 * ld + 21.3 * lf - 0.3 * (h_ut - 1.5)
    else:
        raise ModelDomainError(f"unknown channel model {model!r}")
    pl_los = np.where(d2d <= dbp, pl1, pl2)
    return np.where(np.asarray(los, dtype=bool), pl_los, np.maximum(pl_los, pl_nlos))


def o2i_loss_db(fc_hz, indoor_distance, indoor) -> np.ndarray:
    """Low-loss building penetration plus 0.5 dB per indoor metre; 0 outdoors."""
    f = np.asarray(fc_hz, dtype=float) / 1e9
    l_glass = 2.0 + 0.2 * f
    l_concrete = 5.0 + 4.0 * f
    tw = 5.0 - 10.0 * np.log10(0.3 * 10 ** (-l_glass / 10) + 0.7 * 10 ** (-l_concrete / 10))
    return np.where(np.asarray(indoor, dtype=bool), tw + 0.5 * np.asarray(indoor_distance, dtype=float), 0.0)


def element_gain_db(azimuth_deg, zenith_deg, params: ChannelParams | None = None) -> np.ndarray:
    p = params or ChannelParams()
    a_h = -np.minimum(12.0 * (np.asarray(azimuth_deg) / p.element_hpbw_h_deg) ** 2, p.element_floor_db)
    a_v = -np.minimum(12.0 * ((np.asarray(zenith_deg) - 90.0) / p.element_hpbw_v_deg) ** 2, p.element_floor_db)
    return p.element_max_gain_dbi - np.minimum(-(a_h + a_v), p.element_floor_db)


def noise_power_w(prb_bandwidth_hz, params: ChannelParams | None = None) -> np.ndarray:
    p = params or ChannelParams()
    return K_BOLTZMANN * p.temperature_k * np.asarray(prb_bandwidth_hz, dtype=float) * 10 ** (p.noise_figure_db / 10)


# ----------------------------------------------------------------- shadowing

def correlated_normals(xy: np.ndarray, dcorr: float, n_fields: int, rng: np.random.Generator) -> np.ndarray:
    """Unit-variance Gaussian fields with correlation exp(-d/dcorr), sampled at ``xy``.

    Exact at the sample points (Cholesky of the point covariance).  Points at
    identical positions receive identical values.
    """
    xy = np.asarray(xy, dtype=float).reshape(-1, 2)
    uniq, inverse = np.unique(xy, axis=0, return_inverse=True)
    inverse = np.asarray(inverse).reshape(-1)
    z = rng.standard_normal((len(uniq), n_fields))
    if len(uniq) == 0:
        return np.zeros((0, n_fields))
    d = np.hypot(uniq[:, None, 0] - uniq[None, :, 0], uniq[:, None, 1] - uniq[None, :, 1])
    cov = np.exp(-d / dcorr)
    try:
        chol = linalg.cholesky(cov + 1e-10 * np.eye(len(uniq)), lower=True, check_finite=False)
    except linalg.LinAlgError:
        w, v = np.linalg.eigh(cov)
        chol = v * np.sqrt(np.clip(w, 0.0, None))
    return (chol @ z)[inverse]


def shadow_field(ue_xy: np.ndarray, site_keys: np.ndarray, cell_models: np.ndarray, los: np.ndarray,
                 rng: np.random.Generator, params: ChannelParams | None = None) -> np.ndarray:
    """Shadow fading in dB for every (UE, cell).

    One LOS and one NLOS field per site; cells on the same site share them.
    The link's LOS state picks which field (and standard deviation) applies.
    """
    p = params or ChannelParams()
    site_keys = np.asarray(site_keys)
    cell_models = np.asarray(cell_models)
    out = np.zeros((len(ue_xy), len(site_keys)))
    for model in sorted(set(cell_models.tolist())):
        sp = p.shadow[model]
        cols = np.flatnonzero(cell_models == model)
        sites, site_idx = np.unique(site_keys[cols], return_inverse=True)
        z_los = correlated_normals(ue_xy, sp.dcorr_los_m, len(sites), rng)
        z_nlos = correlated_normals(ue_xy, sp.dcorr_nlos_m, len(sites), rng)
        out[:, cols] = np.where(los[:, cols], sp.sigma_los_db * z_los[:, site_idx],
                                sp.sigma_nlos_db * z_nlos[:, site_idx])
    return out


# ---------------------------------------------------------- small scale

def rician_panel(azimuth_deg, zenith_deg, d3d, carrier_hz, k_linear, m_h: int, m_v: int,
                 rng: np.random.Generator, n_groups: int = 1) -> np.ndarray:
    """Single-panel Rician channel, shape (n_groups, n_links, m_h*m_v).

    The LOS part is the plane-wave steering vector (unit-modulus entries);
    the diffuse part is i.i.d. CN(0, 1), redrawn per PRB group.
    """
    az = np.radians(np.atleast_1d(np.asarray(azimuth_deg, dtype=float)))
    zen = np.radians(np.atleast_1d(np.asarray(zenith_deg, dtype=float)))
    k = np.broadcast_to(np.asarray(k_linear, dtype=float), az.shape)
    lam = C_LIGHT / np.broadcast_to(np.asarray(carrier_hz, dtype=float), az.shape)
    n = m_h * m_v
    los = steering(m_h, m_v, np.sin(zen) * np.sin(az), np.cos(zen))
    los *= np.exp(-2j * np.pi * np.mod(np.broadcast_to(d3d, az.shape) / lam, 1.0))[:, None]
    nlos = (rng.standard_normal((n_groups, az.size, n)) + 1j * rng.standard_normal((n_groups, az.size, n))) / math.sqrt(2)
    inf = np.isinf(k)
    kf = np.where(inf, 0.0, k)
    a = np.where(inf, 1.0, np.sqrt(kf / (1 + kf)))[:, None]
    b = np.where(inf, 0.0, np.sqrt(1 / (1 + kf)))[:, None]
    return a * los[None] + b * nlos


def k_factor(los, params: ChannelParams | None = None) -> np.ndarray:
    p = params or ChannelParams()
    return np.where(np.asarray(los, dtype=bool), p.k_los, p.k_nlos)


def dual_polarized(panel: np.ndarray) -> np.ndarray:
    """(..., N) panel channel -> (..., 2, 2N) two-antenna channel over both panels."""
    z = np.zeros_like(panel)
    row0 = np.concatenate([panel, z], axis=-1)
    row1 = np.concatenate([z, 1j * panel], axis=-1)
    return np.stack([row0, row1], axis=-2)


# ---------------------------------------------------------- single-link API

def _single(ue, cell, params):
    g = link_geometry(np.array(ue.position), np.array(cell.site_position), np.array([cell.boresight_deg]),
                      cell.tilt_deg, params.min_d2d_m)
    return {k: float(v[0, 0]) for k, v in g.items()}


def ue_los_probability(ue, cell, params: ChannelParams | None = None) -> float:
    g = _single(ue, cell, params or ChannelParams())
    d = math.hypot(ue.position[0] - cell.site_position[0], ue.position[1] - cell.site_position[1])
    return float(los_probability(d, cell.channel_model, g["h_ut"]))


def ue_path_loss(ue, cell, los: bool, params: ChannelParams | None = None) -> float:
    g = _single(ue, cell, params or ChannelParams())
    return float(path_loss_db(g["d2d"], g["d3d"], cell.carrier_hz, g["h_bs"], g["h_ut"], cell.channel_model, los))


def ue_element_gain(ue, cell, params: ChannelParams | None = None) -> float:
    g = _single(ue, cell, params or ChannelParams())
    return float(element_gain_db(g["azimuth"], g["zenith"], params))


def large_scale_gain(ue, cell, shadow_db: float, los: bool, params: ChannelParams | None = None) -> LargeScale:
    params = params or ChannelParams()
    return LargeScale(path_loss_db=ue_path_loss(ue, cell, los, params), shadow_db=float(shadow_db),
                      elem_gain_db=ue_element_gain(ue, cell, params), los=bool(los),
                      o2i_loss_db=float(o2i_loss_db(cell.carrier_hz, ue.indoor_distance, ue.indoor)))


def small_scale(ue, cell, los: bool, rng: np.random.Generator, params: ChannelParams | None = None,
                k_linear: float | None = None) -> SmallScale:
    params = params or ChannelParams()
    g = _single(ue, cell, params)
    k = float(k_factor(los, params)) if k_linear is None else float(k_linear)
    panel = rician_panel(g["azimuth"], g["zenith"], g["d3d"], cell.carrier_hz, k, cell.m_h, cell.m_v,
                         rng, params.n_prb_groups)
    return SmallScale(h=dual_polarized(panel[:, 0, :]), rician_k_linear=k)

