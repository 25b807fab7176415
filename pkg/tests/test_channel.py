import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fr3net.channel import (ChannelParams, LargeScale, correlated_normals, dual_polarized, element_gain_db,
                            large_scale_gain, los_probability, noise_power_w, o2i_loss_db, path_loss_db,
                            rician_panel, shadow_field, small_scale)
from fr3net.errors import ModelDomainError
from fr3net.geometry import UE, build_hex_grid
from fr3net.radio_catalog import catalog_lookup, instantiate_layer

pytestmark = pytest.mark.property


def cell_for(radio="5G macro", kind="UMa"):
    plan = build_hex_grid(500.0, 0, site_kind=kind)
    return instantiate_layer(plan, catalog_lookup(radio))[1][0]  # boresight 30 deg


def ue_at(d, az_deg=30.0, z=1.5, indoor=False, d_in=0.0):
    a = math.radians(az_deg)
    return UE(id=0, position=(d * math.cos(a), d * math.sin(a), z), indoor=indoor, tier_label="center",
              indoor_distance=d_in)


# ---------------------------------------------------------------- LOS probability

def test_los_probability_colocated():
    assert los_probability(0.0, "UMa") == 1.0
    assert los_probability(0.0, "UMi") == 1.0


def test_uma_los_at_18m():
    # d <= 18 m: 18/d >= 1 and the formula saturates at 1
    assert los_probability(18.0, "UMa", 1.5) == pytest.approx(1.0)


def test_umi_los_far_away():
    d = 5000.0
    independent = 18 / d + math.exp(-d / 36) * (1 - 18 / d)
    assert los_probability(d, "UMi") == pytest.approx(independent)
    assert los_probability(d, "UMi") < 0.05


def test_uma_tall_ue_term():
    d, h = 200.0, 20.0
    c = ((h - 13) / 10) ** 1.5
    ref = (18 / d + math.exp(-d / 63) * (1 - 18 / d)) * (1 + c * 1.25 * (d / 100) ** 3 * math.exp(-d / 150))
    assert los_probability(d, "UMa", h) == pytest.approx(ref)


@settings(max_examples=100, deadline=None)
@given(st.floats(18.0, 5000.0), st.floats(0.0, 500.0), st.sampled_from(["UMa", "UMi"]))
def test_los_probability_non_increasing(d, step, model):
    p1, p2 = los_probability(d, model), los_probability(d + step, model)
    assert 0.0 <= p2 <= p1 + 1e-12 <= 1.0 + 1e-12


# -------------------------------------------------------------------- path loss

def test_10_vs_3p5_ghz_los_gap():
    d = 100.0
    d3 = math.hypot(d, 23.5)
    gap = path_loss_db(d, d3, 10e9, 25.0, 1.5, "UMa", True) - path_loss_db(d, d3, 3.5e9, 25.0, 1.5, "UMa", True)
    assert float(gap) == pytest.approx(20 * math.log10(10 / 3.5), abs=1e-9)
    assert abs(float(gap) - 9.5) <= 1.0


def test_10_vs_3p5_ghz_umi_nlos_gap():
    d = 150.0
    d3 = math.hypot(d, 8.5)
    gap = path_loss_db(d, d3, 10e9, 10.0, 1.5, "UMi", False) - path_loss_db(d, d3, 3.5e9, 10.0, 1.5, "UMi", False)
    assert abs(float(gap) - 9.7) <= 0.1


def test_doubling_distance_in_22log_regime():
    a = path_loss_db(40.0, 40.0, 3.5e9, 25.0, 1.5, "UMa", True)
    b = path_loss_db(80.0, 80.0, 3.5e9, 25.0, 1.5, "UMa", True)
    assert float(b - a) == pytest.approx(22 * math.log10(2), abs=1e-9)


def test_uma_los_formula_by_hand():
    d2, h_bs, h_ut, f = 120.0, 25.0, 1.5, 3.5
    d3 = math.hypot(d2, h_bs - h_ut)
    assert float(path_loss_db(d2, d3, f * 1e9, h_bs, h_ut, "UMa", True)) == pytest.approx(
        28 + 22 * math.log10(d3) + 20 * math.log10(f))


def test_uma_beyond_breakpoint_by_hand():
    h_bs, h_ut, f = 25.0, 1.5, 2.0
    dbp = 4 * (h_bs - 1) * (h_ut - 1) * f * 1e9 / 299_792_458.0
    d2 = dbp + 300
    d3 = math.hypot(d2, h_bs - h_ut)
    ref = 28 + 40 * math.log10(d3) + 20 * math.log10(f) - 9 * math.log10(dbp**2 + (h_bs - h_ut) ** 2)
    assert float(path_loss_db(d2, d3, f * 1e9, h_bs, h_ut, "UMa", True)) == pytest.approx(ref)


@settings(max_examples=200, deadline=None)
@given(st.floats(10.0, 5000.0), st.floats(0.5e9, 100e9), st.sampled_from(["UMa", "UMi"]))
def test_nlos_never_below_los(d, f, model):
    h = 25.0 if model == "UMa" else 10.0
    d3 = math.hypot(d, h - 1.5)
    assert path_loss_db(d, d3, f, h, 1.5, model, False) >= path_loss_db(d, d3, f, h, 1.5, model, True)


@pytest.mark.parametrize("f", [0.4e9, 150e9])
def test_carrier_outside_model_range(f):
    with pytest.raises(ModelDomainError):
        path_loss_db(100.0, 100.0, f, 25.0, 1.5, "UMa", True)


# ------------------------------------------------------------- element pattern

def test_element_pattern_points():
    assert float(element_gain_db(0.0, 90.0)) == pytest.approx(8.0)
    assert float(element_gain_db(32.5, 90.0)) == pytest.approx(5.0)
    assert float(element_gain_db(180.0, 90.0)) == pytest.approx(-22.0)


def test_single_link_element_gain_at_boresight():
    cell = cell_for()
    ue = ue_at(200.0, z=25.0)  # level with the array on the boresight ray
    ls = large_scale_gain(ue, cell, 0.0, True)
    assert ls.elem_gain_db == pytest.approx(8.0)


# ------------------------------------------------------------- large scale

def test_beta_arithmetic():
    ls = LargeScale(path_loss_db=100.0, shadow_db=0.0, elem_gain_db=0.0, los=True)
    assert ls.beta_linear == pytest.approx(1e-10)
    shadowed = LargeScale(path_loss_db=100.0, shadow_db=6.0, elem_gain_db=0.0, los=True)
    assert shadowed.beta_linear / ls.beta_linear == pytest.approx(10 ** 0.6)
    assert 10 ** 0.6 == pytest.approx(3.98, abs=0.01)


def test_o2i_grows_with_frequency():
    lo, hi = o2i_loss_db(3.5e9, 10.0, True), o2i_loss_db(10e9, 10.0, True)
    assert hi >= lo > 0
    assert float(o2i_loss_db(10e9, 10.0, False)) == 0.0


def test_indoor_ue_carries_o2i():
    cell = cell_for()
    ls = large_scale_gain(ue_at(150.0, indoor=True, d_in=10.0), cell, 0.0, False)
    assert ls.o2i_loss_db == pytest.approx(float(o2i_loss_db(3.5e9, 10.0, True)))
    assert ls.beta_db == pytest.approx(-ls.path_loss_db + ls.elem_gain_db - ls.o2i_loss_db)


@settings(max_examples=50, deadline=None)
@given(st.floats(40.0, 2000.0), st.floats(1.0, 500.0), st.booleans())
def test_beta_non_increasing_along_boresight(d, step, los):
    cell = cell_for()
    near = large_scale_gain(ue_at(d), cell, 0.0, los).beta_linear
    far = large_scale_gain(ue_at(d + step), cell, 0.0, los).beta_linear
    assert far <= near * (1 + 1e-12)


def test_noise_per_prb():
    p = ChannelParams()
    n = noise_power_w(360e3, p)
    assert float(n) == pytest.approx(1.380649e-23 * 290 * 360e3 * 10 ** 0.9)
    assert float(noise_power_w(720e3, p)) == pytest.approx(2 * float(n))


# -------------------------------------------------------------------- shadowing

def test_shadow_identical_positions():
    xy = np.array([[10.0, 20.0], [10.0, 20.0], [500.0, 0.0]])
    z = correlated_normals(xy, 37.0, 4, np.random.default_rng(0))
    assert np.array_equal(z[0], z[1])


def test_shadow_std_and_lag_correlation():
    dcorr = 50.0
    n = 50
    g = np.arange(n) * dcorr
    xy = np.array([(x, y) for x in g for y in g])
    z = correlated_normals(xy, dcorr, 8, np.random.default_rng(1))
    assert z.size >= 10_000
    assert abs(z.std() - 1.0) <= 0.05
    f = z.reshape(n, n, -1)
    pairs = np.concatenate([(f[1:] * f[:-1]).ravel(), (f[:, 1:] * f[:, :-1]).ravel()])
    assert pairs.size >= 10_000
    assert abs(pairs.mean() / z.var() - math.exp(-1)) <= 0.1


def test_shadow_field_sigma_per_state():
    rng = np.random.default_rng(2)
    xy = rng.uniform(-3000, 3000, size=(1200, 2))
    keys = np.arange(10)
    models = np.array(["UMa"] * 10)
    los = np.zeros((1200, 10), dtype=bool)
    s = shadow_field(xy, keys, models, los, rng)
    assert s.size >= 10_000
    assert abs(s.std() - 6.0) / 6.0 <= 0.05
    assert abs(s.mean()) < 0.3


def test_shadow_shared_by_co_sited_cells():
    rng = np.random.default_rng(3)
    xy = rng.uniform(-300, 300, size=(50, 2))
    s = shadow_field(xy, np.array([0, 0, 0, 1]), np.array(["UMi"] * 4), np.ones((50, 4), bool), rng)
    assert np.array_equal(s[:, 0], s[:, 2]) and not np.array_equal(s[:, 0], s[:, 3])


# ------------------------------------------------------------------ small scale

def test_pure_los_unit_modulus():
    h = rician_panel(10.0, 95.0, 100.0, 10e9, np.inf, 16, 4, np.random.default_rng(0))
    assert np.allclose(np.abs(h), 1.0)


def test_rayleigh_unit_power():
    h = rician_panel(np.zeros(10_000), np.full(10_000, 90.0), np.full(10_000, 50.0), 3.5e9, 0.0, 2, 2,
                     np.random.default_rng(1))
    assert np.all(np.abs(np.mean(np.abs(h) ** 2, axis=(0, 1)) - 1.0) <= 0.05)


def test_rician_mean_power_is_one():
    k = 10 ** 0.9
    h = rician_panel(np.full(20_000, 20.0), np.full(20_000, 100.0), np.full(20_000, 80.0), 3.5e9, k, 4, 2,
                     np.random.default_rng(2))
    assert abs(np.mean(np.abs(h) ** 2) - 1.0) <= 0.02


def test_polarisation_rows_orthogonal():
    cell = cell_for("6G micro", "UMi")
    s = small_scale(ue_at(60.0), cell, True, np.random.default_rng(3), k_linear=np.inf)
    assert s.h.shape == (1, 2, 128)
    assert abs(np.vdot(s.h[0, 0], s.h[0, 1])) < 1e-12
    assert np.allclose(s.panel, s.h[:, 0, :64])


def test_dual_polarized_layout():
    p = np.array([1 + 1j, 2.0])
    h = dual_polarized(p)
    assert np.allclose(h, [[1 + 1j, 2, 0, 0], [0, 0, 1j * (1 + 1j), 2j]])


def test_small_scale_deterministic():
    cell = cell_for()
    a = small_scale(ue_at(100.0), cell, False, np.random.default_rng(4))
    b = small_scale(ue_at(100.0), cell, False, np.random.default_rng(4))
    assert np.array_equal(a.h, b.h)
