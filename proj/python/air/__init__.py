"""Pan-tilt projector-camera simulation, calibration and distortion correction."""

import json

from ._air import (
    AirError,
    PinholeDevice,
    RigidTransform,
    UprMatrix,
    calibrate,
    corner_dislocation,
    correct,
    evaluate,
    render_user_view,
    rotation_about_axis,
    rotation_distance,
    rotation_from_vector,
    rotation_vector,
    scene_variants,
    simulate_calib,
    user_projection_matrix,
)
from . import _air


def default_rig():
    """Built-in rig as a JSON-compatible dict."""
    return json.loads(_air.default_rig_json())


def calibrate_session(session_path):
    """Calibration result for a session file, as a dict."""
    return json.loads(_air.calibrate_session_json(str(session_path)))


__all__ = [
    "AirError",
    "PinholeDevice",
    "RigidTransform",
    "UprMatrix",
    "calibrate",
    "calibrate_session",
    "corner_dislocation",
    "correct",
    "default_rig",
    "evaluate",
    "render_user_view",
    "rotation_about_axis",
    "rotation_distance",
    "rotation_from_vector",
    "rotation_vector",
    "scene_variants",
    "simulate_calib",
    "user_projection_matrix",
]
