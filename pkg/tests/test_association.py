import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fr3net.association import (ReselectionPolicy, RsrpMeasurement, associate_strongest, choose_serving,
                                measure_rsrp, priority_reselect, select_csirs_beam)
from fr3net.beamforming import build_dft_codebook, codebook_gains, csirs_codebook, ssb_codebook, steering
from fr3net.errors import NoCoverageError
from fr3net.geometry import build_hex_grid
from fr3net.radio_catalog import catalog_lookup, instantiate_layer

pytestmark = pytest.mark.property

PRIO = {"4G": 0, "5G": 1, "6G": 2}


def m(cell, beam, rsrp, tech):
    return RsrpMeasurement(0, cell, beam, float(rsrp), tech, PRIO[tech])


def brute_force(meas, policy):
    """Exhaustive rule evaluation over (cell, beam) candidates."""
    def strongest(cands):
        return min(cands, key=lambda x: (-x.rsrp_dbm, x.cell_id, x.beam_index))

    if policy.enabled:
        best = None
        for tech, prio in policy.priority.items():
            cands = [x for x in meas if x.technology == tech]
            if prio <= 0 or not cands:
                continue
            top = strongest(cands)
            if top.rsrp_dbm >= policy.threshold_dbm[tech] and (best is None or prio > best[0]):
                best = (prio, top)
        if best is not None:
            return best[1].cell_id, best[1].beam_index
        free = [x for x in meas if policy.priority[x.technology] <= 0
                or policy.threshold_dbm[x.technology] == -math.inf]
        if free:
            top = strongest(free)
            return top.cell_id, top.beam_index
    top = strongest(meas)
    return top.cell_id, top.beam_index


def test_reselection_oracle_10k():
    rng = np.random.default_rng(2024)
    pol = ReselectionPolicy()
    for i in range(10_000):
        n_cells = rng.integers(1, 4)
        n_beams = rng.integers(1, 5)
        techs = rng.choice(["4G", "5G", "6G"], size=n_cells)
        # integer dBm around the thresholds so ties and boundary hits occur
        r = rng.integers(-115, -100, size=(n_cells, n_beams))
        meas = [m(c, b, r[c, b], techs[c]) for c in range(n_cells) for b in range(n_beams)]
        policy = pol if i % 10 else ReselectionPolicy(enabled=False)
        got = priority_reselect(meas, policy)
        assert (got.serving_cell, got.serving_ssb_beam) == brute_force(meas, policy), (r, techs)


def test_reselection_rule_examples():
    pol = ReselectionPolicy()
    s = priority_reselect([m(0, 0, -85, "5G"), m(1, 0, -107, "6G")], pol)
    assert s.serving_cell == 1 and s.technology == "6G"
    s = priority_reselect([m(0, 0, -100, "5G"), m(1, 0, -109, "6G")], pol)
    assert s.serving_cell == 0 and s.technology == "5G"


def test_sub_threshold_6g_falls_back_to_4g():
    s = priority_reselect([m(0, 0, -120, "4G"), m(1, 0, -109, "6G")], ReselectionPolicy())
    assert s.technology == "4G"


def test_disabled_policy_is_strongest():
    meas = [m(0, 0, -85, "4G"), m(1, 0, -95, "5G"), m(2, 1, -100, "6G")]
    a = priority_reselect(meas, ReselectionPolicy(enabled=False))
    b = associate_strongest(meas)
    assert (a.serving_cell, a.serving_ssb_beam) == (b.serving_cell, b.serving_ssb_beam) == (0, 0)


def test_strongest_examples():
    assert associate_strongest([m(3, 0, -70, "4G")]).serving_cell == 3
    assert associate_strongest([m(0, 0, -90, "4G"), m(1, 0, -80, "5G")]).serving_cell == 1
    tie = associate_strongest([m(2, 1, -80, "5G"), m(1, 3, -80, "5G"), m(1, 2, -80, "5G")])
    assert (tie.serving_cell, tie.serving_ssb_beam) == (1, 2)


def test_empty_measurements():
    with pytest.raises(NoCoverageError):
        associate_strongest([])


def test_no_6g_below_threshold():
    rng = np.random.default_rng(1)
    r = rng.uniform(-140, -60, size=(500, 6))
    prio = np.array([0, 0, 1, 1, 2, 2])
    r[:, 4:] = rng.uniform(-140, -108.001, size=(500, 2))
    serving = choose_serving(r, prio, ReselectionPolicy())
    assert not np.isin(serving, [4, 5]).any()


@settings(max_examples=200, deadline=None)
@given(st.lists(st.floats(-140, -50), min_size=3, max_size=3), st.floats(-30.0, 30.0))
def test_argmax_invariant_to_common_offset(rsrp, offset):
    r = np.array([rsrp])
    prio = np.array([0, 1, 2])
    assert choose_serving(r, prio, None)[0] == choose_serving(r + offset, prio, None)[0]


@settings(max_examples=200, deadline=None)
@given(st.floats(-130, -90), st.floats(0, 20))
def test_raising_threshold_never_adds_users(th, delta):
    rng = np.random.default_rng(5)
    r = rng.uniform(-130, -70, size=(300, 4))
    prio = np.array([0, 1, 2, 2])
    lo = ReselectionPolicy(threshold_dbm={"4G": -math.inf, "5G": -110.0, "6G": th})
    hi = ReselectionPolicy(threshold_dbm={"4G": -math.inf, "5G": -110.0, "6G": th + delta})
    n = lambda pol: int(np.isin(choose_serving(r, prio, pol), [2, 3]).sum())
    assert n(hi) <= n(lo)


def test_measure_rsrp_unit_case_and_linearity():
    cell = instantiate_layer(build_hex_grid(500.0, 0), catalog_lookup("4G macro"))[1][0]
    cb = build_dft_codebook(1, 1)
    h = np.array([1.0 + 0j])
    assert measure_rsrp(0, cell, 1.0, h, cb, 1e-3)[0].rsrp_dbm == pytest.approx(0.0, abs=1e-12)
    h = np.random.default_rng(0).standard_normal(4) + 0j
    a = measure_rsrp(0, cell, 1e-9, h, p_ssb_w=1e-3)
    b = measure_rsrp(0, cell, 1e-9, h, p_ssb_w=2e-3)
    assert all(y.rsrp_dbm - x.rsrp_dbm == pytest.approx(10 * math.log10(2)) for x, y in zip(a, b))


def test_matched_beam_is_strongest():
    r = catalog_lookup("6G micro")
    cell = instantiate_layer(build_hex_grid(200.0, 0, site_kind="UMi"), r)[1][0]
    cb = cell.ssb
    for k in range(cb.n_directions):
        meas = measure_rsrp(0, cell, 1e-8, steering(16, 4, cb.u[k], cb.v[k]))
        assert max(meas, key=lambda x: x.rsrp_dbm).beam_index == k


def test_csirs_choice_on_grid_and_superset():
    r = catalog_lookup("5G macro")
    csi, ssb = csirs_codebook(r, "5G"), ssb_codebook(r, "5G")
    rng = np.random.default_rng(3)
    for k in range(csi.n_directions):
        assert select_csirs_beam(0, steering(8, 4, csi.u[k], csi.v[k]), csi).csirs_beam == k
    for _ in range(50):
        h = rng.standard_normal(32) + 1j * rng.standard_normal(32)
        a = select_csirs_beam(0, h, csi)
        assert codebook_gains(h, csi)[a.csirs_beam] >= codebook_gains(h, ssb).max() - 1e-12


def test_single_direction_codebook():
    a = select_csirs_beam(0, np.array([0.3 + 0.1j]), build_dft_codebook(1, 1, panels=2, kind="CSI-RS"))
    assert a.csirs_beam == 0 and np.allclose(a.w_layer1, [1, 0]) and np.allclose(a.w_layer2, [0, 1])
