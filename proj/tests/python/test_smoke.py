import math

import numpy as np
import pytest

import epsconvex as ec


def unit_ball(radius=1.0):
    return ec.body({"shape": "ball", "space": {"m": 2, "a": 1}, "radius": radius})


def test_exp_log_round_trip():
    sp = ec.Space(2, 1.0)
    x = sp.point([0.3, -0.2])
    v = sp.tangent_frame(x)[0] * 0.7
    y = sp.exp(x, v)
    assert sp.distance(x, y) == pytest.approx(0.7, abs=1e-12)
    assert np.allclose(sp.log(x, y), v, atol=1e-12)


def test_sphere_curvature():
    ball = unit_ball()
    x = ball.space.point([math.sinh(1.0), 0.0])
    v = np.array([0.0, 0.0, 1.0])
    assert ec.second_fundamental_form(ball, x, v) == pytest.approx(1 / math.tanh(1.0), abs=1e-5)


def test_checks():
    verdicts = ec.check(unit_ball(), 0.5)
    assert [v["kind"] for v in verdicts][-1] == "iff_constant_curvature"
    assert all(v["passed"] for v in verdicts)
    half = ec.body({"shape": "half_space", "space": {"m": 2, "a": 1}, "normal": [1, 0]})
    assert not ec.check(half, 0.5)[0]["passed"]


def test_focal_time_and_profile():
    ball = unit_ball()
    x = ball.space.point([math.sinh(1.0), 0.0])
    assert ec.focal_time(ball, x, 5.0) == pytest.approx(1.0, abs=1e-4)
    prof = ec.curvature_profile(ball, x, 1.0, 8)
    for t, lo in zip(prof["t"], prof["lambda_minus"]):
        assert lo == pytest.approx(1 / math.tanh(1 - t), rel=1e-6)


def test_smoothing_and_roundtrip():
    ball = unit_ball()
    x = ec.Space(2, 1.0).point([math.sinh(1.2), 0.0])
    assert abs(ec.smoothed_value(ball, 0.05, x) - 0.2) <= 0.05
    assert ec.roundtrip(ball, 0.5, 64)["passed"]


def test_malformed_spec():
    with pytest.raises(ec.Error):
        ec.Body.from_json('{"shape": "ball"')
