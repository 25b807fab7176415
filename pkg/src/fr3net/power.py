"""Radio-unit power consumption for single- and multi-carrier radios.

    P = P_BBU + P_0 + P_BB + M_trx D_TRX + M_pa D_PA + (1/eta) sum_c P_TX,c

A multiband radio has one TRX chain (and one MCPA) per element of each
technology's array, and its MCPAs amplify the carriers of all its cells.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field, replace
from typing import TYPE_CHECKING, Iterable, Sequence

from .errors import InvalidParameterError

if TYPE_CHECKING:
    from .radio_catalog import RadioType, RadioUnit

COMPONENTS = ("bbu", "static", "baseband", "trx", "pa", "out")


@dataclass(frozen=True)
class PowerParams:
    p_bbu_w: float
    p_0_w: float
    p_bb_w: float
    d_trx_w: tuple[float, ...]  # per technology carried by the radio
    d_pa_w: float
    eta: float
    m_trx_av: tuple[int, ...]  # per technology
    m_pa_ac: tuple[int, ...] = ()  # defaults to m_trx_av (no sleep modes)

    def __post_init__(self):
        if not self.m_pa_ac:
            object.__setattr__(self, "m_pa_ac", tuple(self.m_trx_av))
        if len(self.d_trx_w) != len(self.m_trx_av) or len(self.m_pa_ac) != len(self.m_trx_av):
            raise InvalidParameterError("per-technology power parameter lengths differ")
        if not 0.0 < self.eta <= 1.0:
            raise InvalidParameterError(f"eta must lie in (0, 1], got {self.eta}")
        scalars = (self.p_bbu_w, self.p_0_w, self.p_bb_w, self.d_pa_w, *self.d_trx_w, *self.m_trx_av, *self.m_pa_ac)
        if any(x < 0 for x in scalars):
            raise InvalidParameterError("power parameters must be non-negative")
        if any(a > t for a, t in zip(self.m_pa_ac, self.m_trx_av)):
            raise InvalidParameterError("active PAs cannot exceed available TRX")


@dataclass
class PowerCalibration:
    """Default parameter values; all overridable from the scenario config."""

    p_bbu_w: float = 100.0
    p_0_w: float = 60.0
    p_bb_w: float = 40.0
    multiband_bb_factor: float = 1.5
    d_trx_w: dict[str, float] = field(default_factory=lambda: {"4G": 1.5, "5G": 4.0, "6G": 2.5})
    d_pa_w: float = 2.0
    eta: float = 0.35
    # small-cell radios: lighter BBU share, controllers and low-power PA/TRX chains
    pico: dict[str, float] = field(default_factory=lambda: {
        "p_bbu_w": 50.0, "p_0_w": 30.0, "p_bb_w": 20.0, "d_trx_scale": 0.4, "d_pa_w": 0.5})

    def params_for(self, radio_type: "RadioType") -> PowerParams:
        techs = radio_type.techs
        d_trx = tuple(self.d_trx_w[t.technology] for t in techs)
        p_bbu, p_0, p_bb, d_pa = self.p_bbu_w, self.p_0_w, self.p_bb_w, self.d_pa_w
        if radio_type.radio_class == "pico":
            p_bbu, p_0, p_bb, d_pa = (self.pico["p_bbu_w"], self.pico["p_0_w"], self.pico["p_bb_w"],
                                      self.pico["d_pa_w"])
            d_trx = tuple(d * self.pico["d_trx_scale"] for d in d_trx)
        if radio_type.is_multiband:
            p_bb *= self.multiband_bb_factor
        return PowerParams(p_bbu_w=p_bbu, p_0_w=p_0, p_bb_w=p_bb, d_trx_w=d_trx, d_pa_w=d_pa, eta=self.eta,
                           m_trx_av=tuple(t.n_trx for t in techs))


@dataclass
class RadioPower:
    radio_id: int
    radio_type: str
    layer: str
    components: dict[str, float]

    @property
    def total_w(self) -> float:
        return sum(self.components[k] for k in COMPONENTS)


@dataclass
class PowerReport:
    per_radio: list[RadioPower]
    per_layer: dict[str, float]
    total_w: float

    def to_dict(self, scenario: str = "") -> dict:
        return {
            "scenario": scenario,
            "per_radio": [{"radio_id": r.radio_id, "radio_type": r.radio_type, "layer": r.layer,
                           "components_w": dict(r.components), "total_w": r.total_w} for r in self.per_radio],
            "per_layer": dict(self.per_layer),
            "total_w": self.total_w,
        }


def radio_power(params: PowerParams, cell_tx_w: Sequence[float], radio_id: int = 0,
                radio_type: str = "", layer: str = "") -> RadioPower:
    """Power draw of one radio with the given per-cell transmit powers."""
    if params.eta <= 0:
        raise InvalidParameterError("eta must be positive")
    comp = {
        "bbu": params.p_bbu_w,
        "static": params.p_0_w,
        "baseband": params.p_bb_w,
        "trx": sum(m * d for m, d in zip(params.m_trx_av, params.d_trx_w)),
        "pa": sum(params.m_pa_ac) * params.d_pa_w,
        "out": sum(float(p) for p in cell_tx_w) / params.eta,
    }
    return RadioPower(radio_id=radio_id, radio_type=radio_type, layer=layer, components=comp)


def radio_unit_power(radio: "RadioUnit", cell_tx_w: Sequence[float],
                     calibration: PowerCalibration | None = None) -> RadioPower:
    params = radio.power_params or (calibration or PowerCalibration()).params_for(radio.radio_type)
    return radio_power(params, cell_tx_w, radio.id, radio.radio_type.name, radio.layer)


def network_power(radio_powers: Iterable[RadioPower]) -> PowerReport:
    per = sorted(radio_powers, key=lambda r: r.radio_id)
    layers: dict[str, float] = {}
    for r in per:
        layers[r.layer] = layers.get(r.layer, 0.0) + r.total_w
    return PowerReport(per_radio=per, per_layer=dict(sorted(layers.items())),
                       total_w=float(sum(r.total_w for r in per)))


def calibration_from_dict(d: dict) -> PowerCalibration:
    base = PowerCalibration()
    merged = asdict(base)
    for k, v in d.items():
        if k not in merged:
            raise InvalidParameterError(f"unknown power parameter {k!r}")
        if isinstance(merged[k], dict):
            merged[k] = {**merged[k], **v}
        else:
            merged[k] = v
    return replace(base, **merged)
