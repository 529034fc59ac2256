"""eps-strict convexity checks for convex bodies in the hyperboloid model."""

import json

from ._core import (
    Body,
    Error,
    Space,
    check,
    curvature_profile,
    focal_time,
    integrate_riccati,
    levelset_check,
    roundtrip,
    second_fundamental_form,
    smoothed_value,
)


def body(spec):
    """Body from a spec dict, e.g. {"shape": "ball", "space": {"m": 2, "a": 1}, "radius": 1}."""
    return Body.from_json(json.dumps(spec))


__all__ = [
    "Body",
    "Error",
    "Space",
    "body",
    "check",
    "curvature_profile",
    "focal_time",
    "integrate_riccati",
    "levelset_check",
    "roundtrip",
    "second_fundamental_form",
    "smoothed_value",
]
