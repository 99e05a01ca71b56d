import math

import pytest

import greedylab as gl

LP_HALF = {"kind": "lp", "p": 0.5}


def test_norm_and_greedy():
    assert gl.quasi_norm(LP_HALF, [1, 1, 0, 1]) == pytest.approx(9.0)
    f = [3, -5, 5, 1]
    assert gl.greedy_set(f, 2) == [2, 3]
    g = gl.greedy_approximation(f, 2)
    assert g["entries"] == [[2, -5.0], [3, 5.0]]
    r = gl.restricted_truncation([4, -2, 1], 2)
    assert [v for _, v in r["entries"]] == [2.0, -2.0]


def test_democracy_closed_forms():
    for m in (1, 7, 64):
        u = gl.phi_upper(LP_HALF, m)
        assert u["exact"]
        assert u["value"] == pytest.approx(m ** 2, rel=1e-12)
        assert gl.phi_lower(LP_HALF, m)["value"] == pytest.approx(m ** 2, rel=1e-12)
    mixed = {"kind": "direct_sum", "blocks": [
        {"size": 16, "space": {"kind": "lp", "p": 0.5}},
        {"size": 16, "space": {"kind": "lp", "p": 0.25}}]}
    assert gl.mu(mixed, 5) == pytest.approx(25.0, rel=1e-12)


def test_hardy_families():
    for k in (1, 3, 5):
        m = (k + 1) * 2 ** k
        ratio = gl.hyperbolic_norm(k, 2, 0.5) / m ** 2
        assert ratio == pytest.approx((k + 1) ** -1.5, rel=1e-10)
    assert gl.disjoint_norm(16, 2, 2, 0.5) == pytest.approx(256.0, rel=1e-10)


def test_fit():
    ms = [2.0 ** j for j in range(1, 9)]
    vs = [3 * m ** 1.5 * (1 + math.log(m)) ** -0.5 for m in ms]
    fit = gl.fit_power_log(ms, vs)
    assert fit["a"] == pytest.approx(1.5, abs=1e-9)
    assert fit["b"] == pytest.approx(-0.5, abs=1e-9)


def test_marriage():
    ok = gl.marriage([[1, 2], [1, 2]], 1)
    assert ok["feasible"]
    bad = gl.marriage([[1], [1], [1]], 2)
    assert not bad["feasible"]
    assert bad["violator"] == [1, 2, 3]


def test_experiment_and_errors():
    text, rows = gl.run_experiment({"experiment": "mixed-mu", "schedule": [1, 2, 4], "params": {"block": 8}})
    assert text.endswith("\n")
    assert [float(r["mu"]) for r in rows] == [1.0, 4.0, 16.0]
    assert "tga-suite" in gl.preset_names()
    again, _ = gl.run_experiment({"experiment": "mixed-mu", "schedule": [1, 2, 4], "params": {"block": 8}})
    assert again == text
    with pytest.raises(gl.ConfigError):
        gl.run_experiment({"experiment": "nope"})
    with pytest.raises(ValueError):
        gl.quasi_norm({"kind": "lp"}, [1])
