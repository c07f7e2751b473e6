import math

import pytest

import dgac


def test_gauss_legendre_integrates_cubics():
    pts, wts = dgac.gauss_legendre(2)
    assert sum(w * x**3 for x, w in zip(pts, wts)) == pytest.approx(0.25, abs=1e-15)


def test_radau_ends_at_one():
    assert dgac.right_radau_points(2) == pytest.approx([1.0 / 3.0, 1.0])


def test_characteristic_degree_one():
    t = 0.3
    c = dgac.discrete_characteristic(1, t)
    assert c == pytest.approx([1.0, 2.0 * (t - 1.0)])
    assert dgac.characteristic_constant(1, 101) == pytest.approx(1.0, abs=1e-14)


def test_verify_default(tmp_path):
    r = dgac.verify(out=tmp_path)
    assert r["exit_code"] == 0
    assert all(c["passed"] for c in r["checks"])
    assert (tmp_path / "verify_identities.json").exists()


def test_solve_manufactured(tmp_path):
    cfg = dgac.default_verify_config()
    cfg["problem"] = {"manufactured": "expsine"}
    cfg["output"]["run_id"] = "py"
    r = dgac.solve(cfg, tmp_path)
    assert r["exit_code"] == 0
    assert 0.0 < r["error_norms"]["LinfL2"] < 1e-2
    assert (tmp_path / "py" / "norms.csv").exists()


def test_hash_ignores_output():
    a = dgac.default_verify_config()
    b = dgac.default_verify_config()
    b["output"]["run_id"] = "elsewhere"
    assert dgac.config_hash(a) == dgac.config_hash(b)
    assert len(dgac.config_hash(a)) == 16


def test_bad_config_raises():
    cfg = dgac.default_verify_config()
    cfg["problem"] = {"initial_profile": "nosuch"}
    with pytest.raises(dgac.ConfigError):
        dgac.solve(cfg, "unused")


def test_convergence_orders(tmp_path):
    cfg = dgac.default_verify_config()
    cfg["problem"] = {"manufactured": "expsine"}
    cfg["time"]["k"] = 0
    rows = dgac.convergence(cfg, levels=3, refine="both", out=tmp_path)
    assert len(rows) == 3
    assert math.isnan(rows[0]["order_X"])
    assert rows[-1]["order_X"] == pytest.approx(1.0, abs=0.2)
