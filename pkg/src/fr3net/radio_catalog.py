"""Radio types, and how a layer of radios turns into cells."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, replace
from typing import Iterable, Sequence

import numpy as np

from . import beamforming
from .errors import CatalogMissError
from .geometry import SECTOR_BORESIGHTS_DEG, SitePlan

PRIORITY = {"4G": 0, "5G": 1, "6G": 2}
BS_HEIGHT = {"UMa": 25.0, "UMi": 10.0, "Hotspot": 10.0}


@dataclass(frozen=True)
class TechConfig:
    """Per-technology slice of a radio type."""

    technology: str
    carrier_ghz: float
    bandwidth_mhz: float
    n_prb: int
    scs_khz: float
    n_trx: int
    n_elements: int
    m_h: int
    m_v: int
    n_ssb_beams: int
    n_csirs_beams: int
    tx_power_dbm: float
    radio_bandwidth_mhz: float = 0.0  # instantaneous bandwidth of the radio; 0 -> one carrier

    def __post_init__(self):
        if not self.radio_bandwidth_mhz:
            object.__setattr__(self, "radio_bandwidth_mhz", self.bandwidth_mhz)

    @property
    def prb_bandwidth_hz(self) -> float:
        return 12 * self.scs_khz * 1e3

    @property
    def tx_power_watt(self) -> float:
        return 10 ** ((self.tx_power_dbm - 30.0) / 10.0)


@dataclass(frozen=True)
class RadioType:
    name: str
    techs: tuple[TechConfig, ...]
    radio_class: str  # macro / micro / pico, selects the static power defaults

    @property
    def technologies(self) -> tuple[str, ...]:
        return tuple(t.technology for t in self.techs)

    @property
    def cells_supported(self) -> int:
        return 3 * len(self.techs)

    @property
    def is_multiband(self) -> bool:
        return len(self.techs) > 1

    def tech(self, technology: str) -> TechConfig:
        for t in self.techs:
            if t.technology == technology:
                return t
        raise CatalogMissError(f"radio {self.name!r} has no {technology} carrier")


def _t4g(tx=46.0):
    return TechConfig("4G", 2.0, 20.0, 100, 15.0, 8, 8, 2, 2, 4, 8, tx)


def _t5g(tx, n_csirs):
    return TechConfig("5G", 3.5, 100.0, 273, 30.0, 64, 64, 8, 4, 8, n_csirs, tx)


def _t6g(tx):
    return TechConfig("6G", 10.0, 200.0, 273, 60.0, 128, 128, 16, 4, 16, 128, tx, radio_bandwidth_mhz=400.0)


CATALOG: dict[str, RadioType] = {
    r.name: r for r in (
        RadioType("4G macro", (_t4g(),), "macro"),
        RadioType("5G macro", (_t5g(49.0, 64),), "macro"),
        RadioType("5G micro", (_t5g(44.0, 32),), "micro"),
        RadioType("6G micro", (_t6g(44.0),), "micro"),
        RadioType("6G pico", (_t6g(41.0),), "pico"),
        RadioType("4G/5G macro", (_t4g(), _t5g(49.0, 64)), "macro"),
        RadioType("5G/6G micro", (_t5g(44.0, 32), _t6g(44.0)), "micro"),
    )
}


def catalog_lookup(name: str, catalog: dict[str, RadioType] | None = None) -> RadioType:
    cat = CATALOG if catalog is None else catalog
    key = name.strip()
    for k, v in cat.items():
        if k.lower() == key.lower():
            return v
    raise CatalogMissError(f"unknown radio type {name!r}; known: {', '.join(cat)}")


def catalog_to_json(catalog: dict[str, RadioType] | None = None) -> str:
    cat = CATALOG if catalog is None else catalog
    return json.dumps({k: asdict(v) for k, v in cat.items()}, indent=2, sort_keys=True)


def catalog_from_json(text: str) -> dict[str, RadioType]:
    raw = json.loads(text)
    return {name: _radio_from_dict(d) for name, d in raw.items()}


def _radio_from_dict(d: dict) -> RadioType:
    return RadioType(name=d["name"], techs=tuple(TechConfig(**t) for t in d["techs"]),
                     radio_class=d["radio_class"])


def override_catalog(overrides: dict) -> dict[str, RadioType]:
    """Catalog copy with per-radio, per-technology field overrides.

    ``{"6G pico": {"6G": {"tx_power_dbm": 44}}}``
    """
    cat = dict(CATALOG)
    for name, per_tech in overrides.items():
        r = catalog_lookup(name, cat)
        techs = tuple(replace(t, **per_tech.get(t.technology, {})) for t in r.techs)
        cat[r.name] = replace(r, techs=techs)
    return cat


@dataclass
class Cell:
    id: int
    radio_id: int
    technology: str
    site_position: tuple[float, float, float]
    boresight_deg: float
    m_h: int
    m_v: int
    carrier_hz: float
    n_prb: int
    prb_bandwidth_hz: float
    tx_power_watt: float
    priority: int
    channel_model: str  # "UMa" or "UMi"
    site_key: int  # cells sharing a mast share LOS state and shadowing
    tilt_deg: float = 90.0
    ssb: beamforming.Codebook | None = field(default=None, repr=False)
    csirs: beamforming.Codebook | None = field(default=None, repr=False)

    @property
    def n_elements(self) -> int:
        return 2 * self.m_h * self.m_v

    @property
    def bandwidth_hz(self) -> float:
        return self.n_prb * self.prb_bandwidth_hz


@dataclass
class RadioUnit:
    id: int
    radio_type: RadioType
    site_position: tuple[float, float, float]
    cell_ids: list[int]
    layer: str = ""
    power_params: object = None  # power.PowerParams, filled by the engine


def instantiate_layer(plan: SitePlan, radio_type: RadioType,
                      boresights: Sequence[float] = SECTOR_BORESIGHTS_DEG,
                      first_radio_id: int = 0, first_cell_id: int = 0,
                      bs_height: float | None = None, channel_model: str | None = None,
                      tilt_deg: float = 90.0, site_key_offset: int = 0,
                      layer: str = "") -> tuple[list[RadioUnit], list[Cell]]:
    """One radio per site, three cells per technology carried by that radio."""
    if len(plan) == 0:
        return [], []
    model = channel_model or ("UMa" if plan.site_kind == "UMa" else "UMi")
    h = BS_HEIGHT[plan.site_kind] if bs_height is None else bs_height
    codebooks = {t.technology: (beamforming.ssb_codebook(radio_type, t.technology),
                                beamforming.csirs_codebook(radio_type, t.technology))
                 for t in radio_type.techs}
    radios: list[RadioUnit] = []
    cells: list[Cell] = []
    cid = first_cell_id
    for s, xy in enumerate(plan.sites):
        pos = (float(xy[0]), float(xy[1]), float(h))
        owned = []
        for t in radio_type.techs:
            ssb, csi = codebooks[t.technology]
            for b in boresights:
                cells.append(Cell(id=cid, radio_id=first_radio_id + s, technology=t.technology,
                                  site_position=pos, boresight_deg=float(b), m_h=t.m_h, m_v=t.m_v,
                                  carrier_hz=t.carrier_ghz * 1e9, n_prb=t.n_prb,
                                  prb_bandwidth_hz=t.prb_bandwidth_hz, tx_power_watt=t.tx_power_watt,
                                  priority=PRIORITY[t.technology], channel_model=model,
                                  site_key=site_key_offset + s, tilt_deg=tilt_deg,
                                  ssb=ssb, csirs=csi))
                owned.append(cid)
                cid += 1
        radios.append(RadioUnit(id=first_radio_id + s, radio_type=radio_type, site_position=pos,
                                cell_ids=owned, layer=layer))
    return radios, cells


def cells_by_radio(cells: Iterable[Cell]) -> dict[int, list[Cell]]:
    out: dict[int, list[Cell]] = {}
    for c in cells:
        out.setdefault(c.radio_id, []).append(c)
    return out


def cell_arrays(cells: Sequence[Cell]) -> dict[str, np.ndarray]:
    """Column view of a cell list for vectorised channel evaluation."""
    return {
        "pos": np.array([c.site_position for c in cells], dtype=float).reshape(-1, 3),
        "boresight": np.array([c.boresight_deg for c in cells], dtype=float),
        "tilt": np.array([c.tilt_deg for c in cells], dtype=float),
        "carrier_hz": np.array([c.carrier_hz for c in cells], dtype=float),
        "model": np.array([c.channel_model for c in cells]),
        "site_key": np.array([c.site_key for c in cells], dtype=int),
    }
