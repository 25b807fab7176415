"""Site layouts and UE drops.

Sites sit on a hexagonal grid (or at hotspot centres).  Macro-area UEs are
dropped per sector with tier-dependent densities; hotspot UEs are dropped
in small discs on top of that.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .errors import InvalidParameterError, PlacementExhaustedError

SITE_KINDS = ("UMa", "UMi", "Hotspot")
SECTOR_BORESIGHTS_DEG = (30.0, 150.0, 270.0)
DEFAULT_SECTOR_COUNTS = {"center": 80, "tier1": 40, "tier2": 20}

# directions of the six nearest neighbours on the grid built below
_NEIGHBOUR_ANGLES = np.deg2rad(np.arange(0.0, 360.0, 60.0))


@dataclass(frozen=True)
class SitePlan:
    sites: np.ndarray  # (n, 2) metres
    isd: float
    n_tiers: int
    site_kind: str
    rings: np.ndarray  # hex ring index of each site, 0 at the centre

    def __len__(self) -> int:
        return len(self.sites)


@dataclass(frozen=True)
class Hotspot:
    center: tuple[float, float]
    radius: float = 40.0
    ue_count: int = 30


@dataclass
class UE:
    id: int
    position: tuple[float, float, float]
    indoor: bool
    tier_label: str
    n_rx_antennas: int = 2
    indoor_distance: float = 0.0  # metres walked inside the building, O2I term
    site: int = -1  # macro site / hotspot the UE was dropped around
    sector: int = -1


@dataclass
class UEModel:
    """Indoor ratio, heights and exclusion radii for dropped UEs."""

    indoor_probability: float = 0.8
    outdoor_height: float = 1.5
    floor_height: float = 3.0
    max_floor: int = 4
    max_indoor_distance: float = 25.0
    min_distance_uma: float = 35.0
    min_distance_umi: float = 10.0
    hotspot_indoor_probability: float = 0.0
    extra: dict = field(default_factory=dict)


def tier_label(ring: int) -> str:
    return "center" if ring == 0 else f"tier{ring}"


def build_hex_grid(isd: float, n_tiers: int, origin: Sequence[float] = (0.0, 0.0),
                   site_kind: str = "UMa") -> SitePlan:
    """Hexagonal grid with ``1 + 3 n (n + 1)`` sites, site 0 at ``origin``.

    Sites are ordered by ring, then counter-clockwise from the +x axis.
    """
    if not isd > 0:
        raise InvalidParameterError(f"isd must be positive, got {isd}")
    if n_tiers < 0:
        raise InvalidParameterError(f"n_tiers must be >= 0, got {n_tiers}")
    if site_kind not in SITE_KINDS:
        raise InvalidParameterError(f"unknown site kind {site_kind!r}")

    axial = []
    for q in range(-n_tiers, n_tiers + 1):
        for r in range(-n_tiers, n_tiers + 1):
            ring = max(abs(q), abs(r), abs(q + r))
            if ring <= n_tiers:
                axial.append((q, r, ring))
    pts = []
    for q, r, ring in axial:
        x = isd * (q + r / 2.0)
        y = isd * r * math.sqrt(3.0) / 2.0
        ang = math.atan2(y, x) % (2 * math.pi) if ring else 0.0
        pts.append((ring, round(ang, 12), x, y))
    pts.sort()
    xy = np.array([[p[2], p[3]] for p in pts], dtype=float) + np.asarray(origin, dtype=float)
    rings = np.array([p[0] for p in pts], dtype=int)
    return SitePlan(sites=xy, isd=float(isd), n_tiers=int(n_tiers), site_kind=site_kind, rings=rings)


def in_hexagon(points: np.ndarray, center: np.ndarray, isd: float) -> np.ndarray:
    """True where points fall inside the site's Voronoi hexagon (inradius isd/2)."""
    rel = np.atleast_2d(points)[:, :2] - center
    proj = rel[:, 0, None] * np.cos(_NEIGHBOUR_ANGLES) + rel[:, 1, None] * np.sin(_NEIGHBOUR_ANGLES)
    return np.all(proj <= isd / 2.0 + 1e-9, axis=1)


def sector_of(points: np.ndarray, center: np.ndarray,
              boresights_deg: Sequence[float] = SECTOR_BORESIGHTS_DEG) -> np.ndarray:
    """Index of the sector whose boresight is angularly closest."""
    rel = np.atleast_2d(points)[:, :2] - center
    ang = np.degrees(np.arctan2(rel[:, 1], rel[:, 0]))
    diff = (ang[:, None] - np.asarray(boresights_deg)[None, :] + 180.0) % 360.0 - 180.0
    return np.argmin(np.abs(diff), axis=1)


def _ue_heights(n: int, indoor: np.ndarray, model: UEModel, rng: np.random.Generator) -> np.ndarray:
    floors = rng.integers(1, model.max_floor + 1, size=n)
    return np.where(indoor, model.outdoor_height + model.floor_height * (floors - 1), model.outdoor_height)


def drop_macro_ues(plan: SitePlan, per_sector_counts: Mapping[str, int] | None,
                   rng: np.random.Generator, model: UEModel | None = None,
                   first_id: int = 0, max_tries: int = 10_000) -> list[UE]:
    """Drop UEs uniformly inside each sector wedge of each site's hexagon.

    ``per_sector_counts`` maps tier labels (``center``, ``tier1``, ...) to a
    per-sector count; tiers absent from the map get no UEs.
    """
    model = model or UEModel()
    counts = DEFAULT_SECTOR_COUNTS if per_sector_counts is None else per_sector_counts
    if any(int(v) < 0 for v in counts.values()):
        raise InvalidParameterError("per-sector UE counts must be non-negative")
    circ = plan.isd / math.sqrt(3.0)
    ues: list[UE] = []
    next_id = first_id
    for s, (center, ring) in enumerate(zip(plan.sites, plan.rings)):
        n_sec = int(counts.get(tier_label(int(ring)), 0))
        for sec in range(len(SECTOR_BORESIGHTS_DEG)):
            got = np.empty((0, 2))
            tries = 0
            while len(got) < n_sec:
                tries += 1
                if tries > max_tries:
                    raise PlacementExhaustedError(
                        f"could not place {n_sec} UEs in sector {sec} of site {s}")
                cand = center + rng.uniform(-circ, circ, size=(4 * n_sec, 2))
                ok = in_hexagon(cand, center, plan.isd)
                ok &= sector_of(cand, center) == sec
                ok &= np.hypot(*(cand - center).T) >= model.min_distance_uma
                got = np.vstack([got, cand[ok]])
            got = got[:n_sec]
            indoor = rng.random(n_sec) < model.indoor_probability
            z = _ue_heights(n_sec, indoor, model, rng)
            d_in = np.where(indoor, rng.uniform(0.0, model.max_indoor_distance, n_sec), 0.0)
            for k in range(n_sec):
                ues.append(UE(id=next_id, position=(float(got[k, 0]), float(got[k, 1]), float(z[k])),
                              indoor=bool(indoor[k]), tier_label=tier_label(int(ring)),
                              indoor_distance=float(d_in[k]), site=s, sector=sec))
                next_id += 1
    return ues


def _uniform_in_disc(rng: np.random.Generator, n: int, radius: float) -> np.ndarray:
    r = radius * np.sqrt(rng.random(n))
    t = rng.uniform(0.0, 2 * np.pi, n)
    return np.column_stack([r * np.cos(t), r * np.sin(t)])


def drop_hotspots(n: int, region_radius: float, hs_radius: float, min_sep: float,
                  ues_per_hs: int, rng: np.random.Generator, model: UEModel | None = None,
                  first_id: int = 0, max_tries: int = 100_000,
                  origin: Sequence[float] = (0.0, 0.0)) -> tuple[list[Hotspot], list[UE]]:
    """Place ``n`` hotspot centres at least ``min_sep`` apart and fill each disc with UEs."""
    model = model or UEModel()
    if n < 0 or ues_per_hs < 0:
        raise InvalidParameterError("hotspot and UE counts must be non-negative")
    if region_radius <= 0 or hs_radius <= 0:
        raise InvalidParameterError("radii must be positive")
    origin = np.asarray(origin, dtype=float)
    centers: list[np.ndarray] = []
    tries = 0
    while len(centers) < n:
        tries += 1
        if tries > max_tries:
            raise PlacementExhaustedError(
                f"placed {len(centers)} of {n} hotspots: min_sep={min_sep} m cannot be met "
                f"within a {region_radius} m region after {max_tries} attempts")
        c = origin + _uniform_in_disc(rng, 1, region_radius)[0]
        if all(np.hypot(*(c - o)) >= min_sep for o in centers):
            centers.append(c)

    hotspots = [Hotspot(center=(float(c[0]), float(c[1])), radius=float(hs_radius), ue_count=int(ues_per_hs))
                for c in centers]
    ues: list[UE] = []
    next_id = first_id
    min_d = min(model.min_distance_umi, hs_radius / 2.0)
    for h, c in enumerate(centers):
        pts = np.empty((0, 2))
        while len(pts) < ues_per_hs:
            cand = _uniform_in_disc(rng, 2 * ues_per_hs, hs_radius)
            cand = cand[np.hypot(cand[:, 0], cand[:, 1]) >= min_d]
            pts = np.vstack([pts, cand])
        pts = pts[:ues_per_hs] + c
        indoor = rng.random(ues_per_hs) < model.hotspot_indoor_probability
        z = _ue_heights(ues_per_hs, indoor, model, rng)
        d_in = np.where(indoor, rng.uniform(0.0, model.max_indoor_distance, ues_per_hs), 0.0)
        for k in range(ues_per_hs):
            ues.append(UE(id=next_id, position=(float(pts[k, 0]), float(pts[k, 1]), float(z[k])),
                          indoor=bool(indoor[k]), tier_label="hotspot",
                          indoor_distance=float(d_in[k]), site=h))
            next_id += 1
    return hotspots, ues


def hotspot_plan(hotspots: Sequence[Hotspot]) -> SitePlan:
    """Site plan with one site at every hotspot centre."""
    xy = np.array([h.center for h in hotspots], dtype=float).reshape(-1, 2)
    return SitePlan(sites=xy, isd=0.0 if len(xy) < 2 else float(_min_pairwise(xy)), n_tiers=0,
                    site_kind="Hotspot", rings=np.zeros(len(xy), dtype=int))


def _min_pairwise(xy: np.ndarray) -> float:
    d = np.hypot(xy[:, None, 0] - xy[None, :, 0], xy[:, None, 1] - xy[None, :, 1])
    d[np.diag_indices_from(d)] = np.inf
    return float(d.min())
