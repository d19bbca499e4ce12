import json
import math

import numpy as np
import pytest

import air


def test_rotation_round_trip():
    axis = np.array([1.0, 2.0, 2.0]) / 3.0
    r = air.rotation_about_axis(axis, 0.7)
    assert np.allclose(r @ r.T, np.eye(3), atol=1e-12)
    assert np.allclose(r @ axis, axis, atol=1e-12)
    assert np.allclose(air.rotation_vector(r), 0.7 * axis, atol=1e-12)


def test_transform_compose_inverse():
    t = air.RigidTransform.from_axis_angle([0.0, 1.0, 0.0], 0.3, [0.1, -0.2, 0.5])
    ident = t * t.inverse()
    assert np.allclose(ident.rotation, np.eye(3), atol=1e-12)
    assert np.allclose(ident.translation, 0.0, atol=1e-12)


def test_pinhole_project_backproject():
    cam = air.PinholeDevice(500.0, 500.0, 319.5, 239.5, 640, 480)
    p = cam.backproject([100.0, 50.0], 2.0)
    pixel, depth = cam.project(p)
    assert np.allclose(pixel, [100.0, 50.0])
    assert depth == pytest.approx(2.0)


def test_upr_fixes_screen_points():
    upr = air.UprMatrix([0.1, -0.2, 1.5])
    h = upr.matrix() @ np.array([0.3, 0.4, 0.0, 1.0])
    assert np.allclose(h[:2] / h[2], [0.3, 0.4], atol=1e-12)


def test_eye_on_screen_plane_raises():
    with pytest.raises(air.AirError) as info:
        air.user_projection_matrix([0.0, 0.0, 0.0])
    assert info.value.code == "eye-on-screen-plane"


def test_dislocation_shift():
    base = [(0, [10.0, 10.0]), (1, [20.0, 30.0])]
    test = [(0, [13.0, 14.0]), (1, [23.0, 34.0]), (2, [0.0, 0.0])]
    mean, per_corner, unresolved = air.corner_dislocation(base, test)
    assert mean == 5.0
    assert [i for i, _ in per_corner] == [0, 1]
    assert unresolved == [2]


def test_simulate_and_calibrate(tmp_path):
    sim = air.simulate_calib(seed=3, out=tmp_path / "sim")
    assert "session.json" in sim["files"]
    cal = air.calibrate(tmp_path / "sim" / "session.json", out=tmp_path / "cal")
    assert "calibration.json" in cal["files"]
    result = air.calibrate_session(tmp_path / "sim" / "session.json")
    truth = air.default_rig()
    est = np.array(result["pan_axis"])
    ref = np.array(truth["pan_axis"])
    assert math.acos(min(1.0, abs(est @ ref))) < 1e-6


def test_render_user_view(tmp_path):
    out = air.render_user_view(out=tmp_path, eye=[0.0, 0.0, 1.5])
    assert "user_view.ppm" in out["files"]
    corners = json.loads((tmp_path / "corners.json").read_text())
    assert len(corners) > 0
    assert (tmp_path / "user_view.ppm").read_bytes().startswith(b"P6")


def test_missing_config_is_io_error(tmp_path):
    with pytest.raises(air.AirError) as info:
        air.correct(config=tmp_path / "nope.json", out=tmp_path)
    assert info.value.code == "io"
