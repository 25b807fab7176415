import pytest

from fr3net import engine
from fr3net.geometry import UEModel

ACCEPTANCE_LINES: list[str] = []


def tiny_config(name: str = "4G UMa + 5G UMi + 6G HS", **kw) -> engine.ScenarioConfig:
    """1 tier, 4 UEs per sector, 1 hotspot: seconds to run."""
    cfg = engine.expand_scenario(name, n_drops=kw.pop("n_drops", 2), seed=kw.pop("seed", 7))
    cfg.geometry = engine.GeometryParams(
        n_tiers=1, per_sector_counts={"center": 4, "tier1": 4}, n_hotspots=1, ues_per_hotspot=6,
        hotspot_region_radius=150.0, ue=UEModel())
    for k, v in kw.items():
        setattr(cfg, k, v)
    return cfg


@pytest.fixture
def tiny():
    return tiny_config


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
