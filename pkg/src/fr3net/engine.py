"""Scenario expansion, Monte-Carlo drops, result files and comparisons."""

from __future__ import annotations

import copy
import csv
import hashlib
import json
import logging
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path
from typing import Sequence

import numpy as np

from . import __version__, rng as rngmod
from .association import ReselectionPolicy, choose_serving, ssb_power_per_re, watt_to_dbm
from .beamforming import codebook_gains
from .channel import (ChannelParams, ShadowParams, element_gain_db, k_factor, link_geometry, los_probability,
                      noise_power_w, o2i_loss_db, path_loss_db, rician_panel, shadow_field)
from .errors import Fr3NetError, InvalidParameterError, ScenarioError
from .geometry import (DEFAULT_SECTOR_COUNTS, UE, SitePlan, UEModel, build_hex_grid, drop_hotspots,
                       drop_macro_ues, hotspot_plan)
from .link import MODES, SinrAccumulator, cell_transmission, effective_sinr, ue_rate
from .power import PowerCalibration, PowerReport, calibration_from_dict, network_power, radio_unit_power
from .radio_catalog import (CATALOG, Cell, RadioType, RadioUnit, catalog_lookup, instantiate_layer,
                            override_catalog)

log = logging.getLogger(__name__)

PER_UE_COLUMNS = ("drop", "ue_id", "tier_label", "serving_tech", "serving_cell", "ssb_beam", "csirs_beam",
                  "sinr_eff_l1_db", "sinr_eff_l2_db", "rate_mbps")
CDF_POINTS = 1000
HS_PLAUSIBLE_MEDIAN_MBPS = (150.0, 600.0)
HS_PLAUSIBLE_P95_MBPS = 700.0


# ------------------------------------------------------------------ config

@dataclass
class LayerSpec:
    radio_type: str
    deployment: str  # "UMa", "UMi" or "Hotspot"
    label: str = ""
    isd: float | None = None  # grid deployments; None -> 500 (UMa) / 200 (UMi)
    n_tiers: int | None = None  # None -> GeometryParams.n_tiers
    bs_height: float | None = None
    tilt_deg: float = 90.0

    @property
    def technologies(self) -> tuple[str, ...]:
        return catalog_lookup(self.radio_type).technologies


@dataclass
class GeometryParams:
    uma_isd: float = 500.0
    umi_isd: float = 200.0
    n_tiers: int = 2
    per_sector_counts: dict[str, int] = field(default_factory=lambda: dict(DEFAULT_SECTOR_COUNTS))
    n_hotspots: int = 19
    hotspot_region_radius: float = 500.0
    hotspot_radius: float = 40.0
    hotspot_min_separation: float = 80.0
    ues_per_hotspot: int = 30
    ue: UEModel = field(default_factory=UEModel)


@dataclass
class ScenarioConfig:
    name: str
    layers: list[LayerSpec]
    reselection: ReselectionPolicy = field(default_factory=ReselectionPolicy)
    seed: int = 1
    n_drops: int = 10
    scheduling_mode: str = "per-beam"
    output_dir: str | None = None
    geometry: GeometryParams = field(default_factory=GeometryParams)
    channel: ChannelParams = field(default_factory=ChannelParams)
    power: PowerCalibration = field(default_factory=PowerCalibration)
    catalog: dict = field(default_factory=dict)  # per-radio overrides, see override_catalog

    def to_dict(self) -> dict:
        d = asdict(self)
        d.pop("output_dir", None)
        d["reselection"]["threshold_dbm"] = {k: (None if math.isinf(v) else v)
                                             for k, v in self.reselection.threshold_dbm.items()}
        return d

    def config_hash(self) -> str:
        blob = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()[:16]


def _L(radio, deployment, label):
    return LayerSpec(radio_type=radio, deployment=deployment, label=label)


NAMED_SCENARIOS: dict[str, list[LayerSpec]] = {
    "4G UMa": [_L("4G macro", "UMa", "4G UMa")],
    "5G UMa": [_L("5G macro", "UMa", "5G UMa")],
    "[4G UMa + 5G UMa]": [_L("4G/5G macro", "UMa", "[4G UMa + 5G UMa]")],
    "4G UMa + 5G UMi (UMa BS)": [_L("4G macro", "UMa", "4G UMa"), _L("5G macro", "UMi", "5G UMi (UMa BS)")],
    "4G UMa + 5G UMi": [_L("4G macro", "UMa", "4G UMa"), _L("5G micro", "UMi", "5G UMi")],
    "4G UMa + [5G UMi + 6G UMi]": [_L("4G macro", "UMa", "4G UMa"),
                                   _L("5G/6G micro", "UMi", "[5G UMi + 6G UMi]")],
    "4G UMa + 5G UMi + 6G HS": [_L("4G macro", "UMa", "4G UMa"), _L("5G micro", "UMi", "5G UMi"),
                                _L("6G pico", "Hotspot", "6G HS")],
}
SCENARIO_NAMES = tuple(NAMED_SCENARIOS)


def _norm(name: str) -> str:
    return " ".join(name.replace("[", " [ ").replace("]", " ] ").replace("(", " ( ").replace(")", " ) ")
                    .replace("+", " + ").lower().split())


def expand_scenario(name: str, **overrides) -> ScenarioConfig:
    """Named deployment -> full config. Keyword overrides set top-level config fields."""
    for k, layers in NAMED_SCENARIOS.items():
        if _norm(k) == _norm(name):
            cfg = ScenarioConfig(name=k, layers=copy.deepcopy(layers))
            return replace(cfg, **overrides) if overrides else cfg
    raise ScenarioError(f"unknown scenario {name!r}; valid names: " + "; ".join(SCENARIO_NAMES))


def _dataclass_update(obj, values: dict, path: str):
    known = {f.name for f in fields(obj)}
    for k, v in values.items():
        if k not in known:
            raise InvalidParameterError(f"unknown config key {path}.{k}")
    return replace(obj, **values)


def config_from_dict(d: dict) -> ScenarioConfig:
    """Build a config from parsed JSON.

    ``scenario`` names a preset to start from; ``layers`` replaces its layer
    list; ``channel``, ``power``, ``geometry``, ``reselection`` and
    ``catalog`` hold namespaced overrides.
    """
    d = dict(d)
    base = d.pop("scenario", None)
    if base is not None:
        cfg = expand_scenario(base)
    elif "layers" in d:
        cfg = ScenarioConfig(name=d.get("name", "custom"), layers=[])
    else:
        raise ScenarioError("config needs either 'scenario' or 'layers'")
    if "layers" in d:
        cfg.layers = [LayerSpec(**l) for l in d.pop("layers")]
        for l in cfg.layers:
            catalog_lookup(l.radio_type, override_catalog(d.get("catalog", {})))
    for key in ("name", "seed", "n_drops", "scheduling_mode", "output_dir"):
        if key in d:
            setattr(cfg, key, d.pop(key))
    if "channel" in d:
        ch = dict(d.pop("channel"))
        if "shadow" in ch:
            ch["shadow"] = {**cfg.channel.shadow, **{m: ShadowParams(**v) for m, v in ch["shadow"].items()}}
        cfg.channel = _dataclass_update(cfg.channel, ch, "channel")
    if "power" in d:
        cfg.power = calibration_from_dict(d.pop("power"))
    if "geometry" in d:
        g = dict(d.pop("geometry"))
        if "ue" in g:
            g["ue"] = _dataclass_update(cfg.geometry.ue, g["ue"], "geometry.ue")
        cfg.geometry = _dataclass_update(cfg.geometry, g, "geometry")
    if "reselection" in d:
        r = dict(d.pop("reselection"))
        if "threshold_dbm" in r:
            r["threshold_dbm"] = {**cfg.reselection.threshold_dbm,
                                  **{k: (-math.inf if v is None else float(v)) for k, v in r["threshold_dbm"].items()}}
        cfg.reselection = _dataclass_update(cfg.reselection, r, "reselection")
    if "catalog" in d:
        cfg.catalog = d.pop("catalog")
    if d:
        raise InvalidParameterError(f"unknown config keys: {sorted(d)}")
    validate(cfg)
    return cfg


def load_config(path_or_name: str) -> ScenarioConfig:
    if os.path.isfile(path_or_name):
        with open(path_or_name) as fh:
            return config_from_dict(json.load(fh))
    return expand_scenario(path_or_name)


def validate(cfg: ScenarioConfig) -> None:
    if cfg.scheduling_mode not in MODES:
        raise InvalidParameterError(f"scheduling_mode must be one of {MODES}")
    if cfg.n_drops < 1:
        raise InvalidParameterError("n_drops must be >= 1")
    if not cfg.layers:
        raise ScenarioError("scenario has no layers")
    for l in cfg.layers:
        if l.deployment not in ("UMa", "UMi", "Hotspot"):
            raise ScenarioError(f"unknown deployment {l.deployment!r}")


# ----------------------------------------------------------------- network

@dataclass
class Network:
    radios: list[RadioUnit]
    cells: list[Cell]
    plans: list[SitePlan]


def build_network(cfg: ScenarioConfig, hotspot_sites: SitePlan | None = None) -> Network:
    catalog = override_catalog(cfg.catalog) if cfg.catalog else CATALOG
    g = cfg.geometry
    radios: list[RadioUnit] = []
    cells: list[Cell] = []
    plans: list[SitePlan] = []
    site_offset = 0
    for layer in cfg.layers:
        rt = catalog_lookup(layer.radio_type, catalog)
        tiers = g.n_tiers if layer.n_tiers is None else layer.n_tiers
        if layer.deployment == "UMa":
            plan = build_hex_grid(layer.isd or g.uma_isd, tiers, site_kind="UMa")
        elif layer.deployment == "UMi":
            plan = build_hex_grid(layer.isd or g.umi_isd, tiers, site_kind="UMi")
        else:
            if hotspot_sites is None:
                raise ScenarioError("hotspot layer needs hotspot positions")
            plan = hotspot_sites
        r, c = instantiate_layer(plan, rt, first_radio_id=len(radios), first_cell_id=len(cells),
                                 bs_height=layer.bs_height, tilt_deg=layer.tilt_deg,
                                 site_key_offset=site_offset, layer=layer.label or layer.radio_type)
        for radio in r:
            radio.power_params = cfg.power.params_for(rt)
        radios += r
        cells += c
        plans.append(plan)
        site_offset += len(plan)
    return Network(radios, cells, plans)


def network_power_report(net: Network) -> PowerReport:
    tx = {c.id: c.tx_power_watt for c in net.cells}
    return network_power(radio_unit_power(r, [tx[i] for i in r.cell_ids]) for r in net.radios)


# -------------------------------------------------------------------- drops

def drop_ues(cfg: ScenarioConfig, drop: int) -> tuple[list[UE], SitePlan]:
    """UE population of one drop; depends only on geometry settings, seed and drop index."""
    g = cfg.geometry
    macro_plan = build_hex_grid(g.uma_isd, g.n_tiers, site_kind="UMa")
    macro = drop_macro_ues(macro_plan, g.per_sector_counts, rngmod.substream(cfg.seed, drop, rngmod.MACRO_UES), g.ue)
    hotspots, hs_ues = drop_hotspots(g.n_hotspots, g.hotspot_region_radius, g.hotspot_radius,
                                     g.hotspot_min_separation, g.ues_per_hotspot,
                                     rngmod.substream(cfg.seed, drop, rngmod.HOTSPOTS), g.ue, first_id=len(macro))
    return macro + hs_ues, hotspot_plan(hotspots)


def _group_weights(n_prb: int, n_groups: int) -> np.ndarray:
    return np.array([len(a) for a in np.array_split(np.arange(n_prb), n_groups)], dtype=float)


def simulate_drop(cfg: ScenarioConfig, drop: int) -> dict[str, np.ndarray]:
    ues, hs_plan = drop_ues(cfg, drop)
    net = build_network(cfg, hs_plan)
    cells = net.cells
    chp = cfg.channel
    n_ue, n_cell = len(ues), len(cells)
    n_groups = max(1, int(chp.n_prb_groups))

    ue_pos = np.array([u.position for u in ues], dtype=float).reshape(-1, 3)
    indoor = np.array([u.indoor for u in ues], dtype=bool)
    d_in = np.array([u.indoor_distance for u in ues], dtype=float)
    cpos = np.array([c.site_position for c in cells], dtype=float)
    models = np.array([c.channel_model for c in cells])
    site_key = np.array([c.site_key for c in cells])
    carrier = np.array([c.carrier_hz for c in cells])

    geo = link_geometry(ue_pos, cpos, np.array([c.boresight_deg for c in cells]),
                        np.array([c.tilt_deg for c in cells]), chp.min_d2d_m)

    # LOS state is drawn per (UE, site): co-sited cells see the same street geometry
    p_los = np.empty((n_ue, n_cell))
    for m in set(models.tolist()):
        cols = models == m
        p_los[:, cols] = los_probability(geo["d2d"][:, cols], m, geo["h_ut"][:, cols])
    sites, site_idx = np.unique(site_key, return_inverse=True)
    u_los = rngmod.substream(cfg.seed, drop, rngmod.LOS_STATE).random((n_ue, len(sites)))
    los = u_los[:, site_idx] < p_los

    shadow = shadow_field(ue_pos[:, :2], site_key, models, los, rngmod.substream(cfg.seed, drop, rngmod.SHADOW), chp)
    pl = np.empty((n_ue, n_cell))
    for m in set(models.tolist()):
        cols = models == m
        pl[:, cols] = path_loss_db(geo["d2d"][:, cols], geo["d3d"][:, cols], carrier[cols],
                                   geo["h_bs"][:, cols], geo["h_ut"][:, cols], m, los[:, cols])
    gain = element_gain_db(geo["azimuth"], geo["zenith"], chp)
    o2i = o2i_loss_db(carrier[None, :], d_in[:, None], indoor[:, None])
    beta = 10 ** ((-pl + shadow + gain - o2i) / 10)
    kf = k_factor(los, chp)

    def panel(c: int) -> np.ndarray:
        cell = cells[c]
        return rician_panel(geo["azimuth"][:, c], geo["zenith"][:, c], geo["d3d"][:, c], cell.carrier_hz,
                            kf[:, c], cell.m_h, cell.m_v,
                            rngmod.substream(cfg.seed, drop, rngmod.SMALL_SCALE, c), n_groups)

    # pass 1: SSB sweep of every cell
    best_rsrp = np.empty((n_ue, n_cell))
    best_ssb = np.empty((n_ue, n_cell), dtype=int)
    for c, cell in enumerate(cells):
        g = codebook_gains(panel(c), cell.ssb).mean(axis=0)
        best_ssb[:, c] = np.argmax(g, axis=1)
        best_rsrp[:, c] = watt_to_dbm(beta[:, c] * g.max(axis=1) * ssb_power_per_re(cell.tx_power_watt, cell.n_prb))

    policy = cfg.reselection
    serving = choose_serving(best_rsrp, np.array([c.priority for c in cells]), policy)
    rows = np.arange(n_ue)

    # pass 2: CSI-RS selection and SINR, one cell at a time (channels are redrawn from the same substream)
    direction = np.zeros(n_ue, dtype=int)
    noise = noise_power_w(np.array([cells[s].prb_bandwidth_hz for s in serving]), chp)
    acc = SinrAccumulator(serving, direction, carrier, noise, cfg.scheduling_mode, n_groups)
    for c, cell in enumerate(cells):
        g = codebook_gains(panel(c), cell.csirs)
        served = np.flatnonzero(serving == c)
        if len(served):
            direction[served] = np.argmax(g[:, served, :].mean(axis=0), axis=1)
        tx = cell_transmission(direction[served], cell.csirs.n_directions, cell.tx_power_watt, cell.n_prb,
                               cfg.scheduling_mode)
        acc.add_cell(c, beta[:, c], g, tx)

    sinr = acc.sinr()
    n_prb = np.array([cells[s].n_prb for s in serving])
    bw = np.array([cells[s].prb_bandwidth_hz for s in serving])
    eff = np.empty(n_ue)
    for npb in np.unique(n_prb):
        sel = n_prb == npb
        eff[sel] = effective_sinr(sinr[:, sel].T, _group_weights(int(npb), n_groups))
    rate = ue_rate(1, 1.0, acc.n_ue, np.column_stack([eff, eff])) * n_prb * bw

    eff_db = 10 * np.log10(np.maximum(eff, 1e-30))
    return {
        "drop": np.full(n_ue, drop),
        "ue_id": np.array([u.id for u in ues]),
        "tier_label": np.array([u.tier_label for u in ues]),
        "serving_tech": np.array([cells[s].technology for s in serving]),
        "serving_cell": serving,
        "ssb_beam": best_ssb[rows, serving],
        "csirs_beam": direction.copy(),
        "sinr_eff_l1_db": eff_db,
        "sinr_eff_l2_db": eff_db.copy(),
        "rate_mbps": rate / 1e6,
        "rsrp_dbm": best_rsrp[rows, serving],
        "n_ue_share": acc.n_ue.copy(),
    }


# ------------------------------------------------------------------ results

@dataclass
class ResultSet:
    scenario: str
    records: dict[str, np.ndarray]
    power: PowerReport | dict
    config: dict
    metadata: dict

    @property
    def rates(self) -> np.ndarray:
        return np.asarray(self.records.get("rate_mbps", np.zeros(0)), dtype=float)

    def percentile(self, q: float) -> float:
        r = self.rates
        return float(np.percentile(r, q)) if len(r) else float("nan")

    @property
    def median(self) -> float:
        return self.percentile(50)

    def percentiles(self) -> dict[str, float]:
        return {f"p{q}": self.percentile(q) for q in (5, 50, 95)}

    def tech_fraction(self, tech: str) -> float:
        t = np.asarray(self.records.get("serving_tech", []))
        return float(np.mean(t == tech)) if len(t) else 0.0

    @property
    def power_dict(self) -> dict:
        return self.power.to_dict(self.scenario) if isinstance(self.power, PowerReport) else self.power

    @property
    def total_power_w(self) -> float:
        return float(self.power_dict["total_w"])


def _concat(parts: list[dict[str, np.ndarray]]) -> dict[str, np.ndarray]:
    if not parts:
        return {k: np.zeros(0) for k in PER_UE_COLUMNS}
    return {k: np.concatenate([p[k] for p in parts]) for k in parts[0]}


def plausibility(scenario: str, records: dict[str, np.ndarray]) -> dict | None:
    """Absolute-rate sanity band for the hotspot scenario; recorded in the manifest."""
    if scenario != "4G UMa + 5G UMi + 6G HS":
        return None
    r = np.asarray(records["rate_mbps"], dtype=float)
    med, p95 = float(np.median(r)), float(np.percentile(r, 95))
    ok = HS_PLAUSIBLE_MEDIAN_MBPS[0] <= med <= HS_PLAUSIBLE_MEDIAN_MBPS[1] and p95 >= HS_PLAUSIBLE_P95_MBPS
    return {"median_mbps": med, "p95_mbps": p95, "median_band_mbps": list(HS_PLAUSIBLE_MEDIAN_MBPS),
            "p95_floor_mbps": HS_PLAUSIBLE_P95_MBPS, "within_band": ok,
            "note": "" if ok else "outside plausibility band: calibration review needed"}


def run(cfg: ScenarioConfig, threads: int = 1) -> ResultSet:
    """All drops of a scenario; the output depends only on (config, seed), not on ``threads``."""
    validate(cfg)
    t0 = time.perf_counter()
    try:
        if threads > 1 and cfg.n_drops > 1:
            with ThreadPoolExecutor(max_workers=threads) as ex:
                parts = list(ex.map(lambda d: simulate_drop(cfg, d), range(cfg.n_drops)))
        else:
            parts = [simulate_drop(cfg, d) for d in range(cfg.n_drops)]
    except Fr3NetError as e:
        raise type(e)(f"scenario {cfg.name!r}: {e}") from e
    records = _concat(parts)
    ues, hs = drop_ues(cfg, 0)
    report = network_power_report(build_network(cfg, hs))
    meta = {
        "scenario": cfg.name,
        "seed": cfg.seed,
        "n_drops": cfg.n_drops,
        "scheduling_mode": cfg.scheduling_mode,
        "config_hash": cfg.config_hash(),
        "version": f"fr3net {__version__}",
        "wall_clock_s": round(time.perf_counter() - t0, 3),
    }
    check = plausibility(cfg.name, records)
    if check is not None:
        meta["plausibility"] = check
    log.info("%s: %d UE records, median %.2f Mbps", cfg.name, len(records["rate_mbps"]),
             float(np.median(records["rate_mbps"])) if len(records["rate_mbps"]) else float("nan"))
    return ResultSet(scenario=cfg.name, records=records, power=report, config=cfg.to_dict(), metadata=meta)


# ----------------------------------------------------------------- emitting

def _fmt(v) -> str:
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.6f}"
    return str(v)


def cdf_points(rates_mbps: np.ndarray, n: int = CDF_POINTS) -> tuple[np.ndarray, np.ndarray]:
    r = np.asarray(rates_mbps, dtype=float)
    if len(r) == 0:
        return np.zeros(0), np.zeros(0)
    p = np.arange(1, n + 1) / n
    return np.quantile(r, p), p


def emit(results: ResultSet, output_dir) -> list[Path]:
    out = Path(output_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
        paths = [out / "per_ue.csv", out / "cdf.csv", out / "power.json", out / "manifest.json"]
        rec = results.records
        n = len(rec.get("rate_mbps", []))
        with open(paths[0], "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(PER_UE_COLUMNS)
            cols = [rec[k] for k in PER_UE_COLUMNS] if n else []
            for i in range(n):
                w.writerow([_fmt(col[i]) for col in cols])
        x, p = cdf_points(results.rates)
        with open(paths[1], "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["rate_mbps", "cdf"])
            for a, b in zip(x, p):
                w.writerow([f"{a:.6f}", f"{b:.6f}"])
        with open(paths[2], "w") as fh:
            json.dump(results.power_dict, fh, indent=2, sort_keys=True)
            fh.write("\n")
        manifest = {"config": results.config, **results.metadata, "percentiles_mbps": results.percentiles()}
        with open(paths[3], "w") as fh:
            json.dump(_jsonable(manifest), fh, indent=2, sort_keys=True)
            fh.write("\n")
    except OSError as e:
        raise OSError(e.errno, f"cannot write results to {out}: {e.strerror}", str(out)) from e
    return paths


def _jsonable(o):
    if isinstance(o, dict):
        return {str(k): _jsonable(v) for k, v in o.items()}
    if isinstance(o, (list, tuple)):
        return [_jsonable(v) for v in o]
    if isinstance(o, (np.floating, float)):
        f = float(o)
        return f if math.isfinite(f) else None
    if isinstance(o, np.integer):
        return int(o)
    return o


def load_results(output_dir) -> ResultSet:
    d = Path(output_dir)
    with open(d / "manifest.json") as fh:
        manifest = json.load(fh)
    with open(d / "power.json") as fh:
        power = json.load(fh)
    cols: dict[str, list] = {k: [] for k in PER_UE_COLUMNS}
    with open(d / "per_ue.csv", newline="") as fh:
        for row in csv.DictReader(fh):
            for k in PER_UE_COLUMNS:
                cols[k].append(row[k])
    records = {k: np.array(v) for k, v in cols.items()}
    for k in ("rate_mbps", "sinr_eff_l1_db", "sinr_eff_l2_db"):
        records[k] = records[k].astype(float)
    config = manifest.pop("config", {})
    return ResultSet(scenario=manifest.get("scenario", d.name), records=records, power=power,
                     config=config, metadata=manifest)


def compare(results: Sequence[ResultSet], baseline: int = 0) -> list[dict]:
    """Median / 95th percentile rates and total power of each run, with ratios to the baseline."""
    if len(results) < 2:
        raise InvalidParameterError("compare needs at least two result sets")
    base = results[baseline]
    rows = []
    for r in results:
        rows.append({
            "scenario": r.scenario,
            "median_mbps": r.median,
            "p95_mbps": r.percentile(95),
            "median_ratio": r.median / base.median if base.median else float("nan"),
            "p95_ratio": r.percentile(95) / base.percentile(95) if base.percentile(95) else float("nan"),
            "power_w": r.total_power_w,
            "power_ratio": r.total_power_w / base.total_power_w if base.total_power_w else float("nan"),
        })
    return rows


def format_table(rows: list[dict]) -> str:
    head = f"{'scenario':<30} {'median Mbps':>12} {'p95 Mbps':>10} {'x median':>9} {'power kW':>9} {'x power':>8}"
    lines = [head, "-" * len(head)]
    for r in rows:
        lines.append(f"{r['scenario']:<30} {r['median_mbps']:>12.2f} {r['p95_mbps']:>10.2f} "
                     f"{r['median_ratio']:>9.2f} {r['power_w'] / 1e3:>9.2f} {r['power_ratio']:>8.2f}")
    return "\n".join(lines)
