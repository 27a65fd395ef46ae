import math

import numpy as np
import pytest

import bpl


def test_young_functions():
    phi2 = bpl.YoungFunction.exp_power(2)
    assert phi2(1.0) == pytest.approx(math.e - 1.0, rel=1e-14)
    assert phi2.inverse(math.e - 1.0) == pytest.approx(1.0, rel=1e-12)
    assert bpl.YoungFunction.plog(2).inverse(1.0) == pytest.approx(1.1447901016926394, rel=1e-9)
    with pytest.raises(Exception):
        phi2(-1.0)


def test_luxemburg_norm():
    got = bpl.luxemburg_norm([1.0], [1.0], bpl.YoungFunction.exp_power(2))
    assert got == pytest.approx(1.0 / math.sqrt(math.log(2.0)), rel=1e-9)
    mid = bpl.lux_equivalence_mid([1.0], [1.0], bpl.YoungFunction.exp_power(2))
    assert got <= mid <= 2.0 * got + 1e-8


def test_besov_norm_oracles():
    heavi = bpl.SampledPath.heaviside(0.0, 1.0, 0.5, 12)
    params = bpl.BesovParams(0.25, float("inf"), bpl.YoungFunction.power(2))
    res = bpl.dyadic_besov_norm(heavi, params)
    assert res["value"] == pytest.approx(2 ** -0.5 + 2 ** -0.25, rel=1e-6)

    ramp = bpl.SampledPath.ramp(0.0, 1.0, 10)
    res2 = bpl.dyadic_besov_norm(ramp, bpl.BesovParams(0.5, float("inf"), bpl.YoungFunction.power(2)))
    assert res2["seminorm_part"] == pytest.approx(0.5, rel=1e-9)
    assert res2["levels"][1]["j"] == 1


def test_numpy_path_round_trip(tmp_path):
    t = np.linspace(0.0, 1.0, 2 ** 6 + 1)
    vals = np.stack([np.sin(t), np.cos(t)], axis=1)
    p = bpl.SampledPath(0.0, 1.0, vals)
    assert p.dim == 2
    assert p.steps == 64
    np.testing.assert_allclose(p.values, vals, rtol=0, atol=0)
    csv = tmp_path / "p.csv"
    p.write_csv(str(csv))
    back = bpl.SampledPath.read_csv(str(csv))
    np.testing.assert_array_equal(back.values, p.values)


def test_brownian_determinism_and_law():
    a = bpl.sample_brownian(8, d=1, seed=42, stream=3)
    b = bpl.sample_brownian(8, d=1, seed=42, stream=3)
    np.testing.assert_array_equal(a.values, b.values)
    assert a.values[0, 0] == 0.0
    c = bpl.sample_brownian(8, d=1, seed=42, stream=4)
    assert not np.array_equal(a.values, c.values)


def test_simulation_pipeline():
    model = bpl.DiagonalModel.heat(8)
    bundle = bpl.simulate_bundle("const_diag", model, J=8, seed=7, stream=0)
    assert bpl.representation_check(bundle) <= 1e-8
    # lambda = 0 degenerates the convolution to the Ito integral
    zb = bpl.simulate_bundle("const_scalar", bpl.DiagonalModel.zero(1), J=7, seed=9)
    np.testing.assert_array_equal(zb.convolution.values, zb.integral.values)


def test_deterministic_convolution_closed_form():
    c = bpl.SampledPath.constant(0.0, 1.0, 8, [1.5])
    u = bpl.deterministic_convolution(c, bpl.DiagonalModel.ou(3.0))
    t = np.linspace(0.0, 1.0, 2 ** 8 + 1)
    want = 1.5 * (1.0 - np.exp(-3.0 * t)) / 3.0
    np.testing.assert_allclose(u.values[:, 0], want, rtol=1e-12, atol=1e-14)


def test_grr_zeta_pinned():
    assert bpl.grr_zeta(0.25, 0.5, 2.0, 1.0) == pytest.approx(10.623564234222302, rel=1e-7)


def test_run_experiment_smoke():
    rep = bpl.run_experiment("axiom_gauss", replicas=2000)
    assert rep["experiment"] == "axiom_gauss"
    assert rep["passed"] is True
    assert rep["degraded"] is True  # 2000 < the 10^4 default
    assert any(a["name"].startswith("bound_p") for a in rep["assertions"])
    assert "axiom_gauss" in rep["tables"]
    assert rep["config"]["replicas"] == 2000
    assert bpl.run_experiment("levy_modulus", replicas=5, levy_J=8)["degraded"] is True
    assert "moment_growth" in bpl.experiment_ids()
