"""Per-object parameter interpolation shared by the renderer and editor.

Piecewise-linear between keyframes, exact at keyframe times; a flash's
attack-hold-release envelope contributes its four implied keypoints.  The
editor's TypeScript preview mirrors this function, and the cross-check
tests hold the two within one channel unit.
"""

from __future__ import annotations

from ..errors import LumascapeError
from ..model import LightObject, ObjectKind

TIME_EPS = 1e-9


def interpolate(obj: LightObject, t: float) -> dict[str, float]:
    if t < obj.start - TIME_EPS or t > obj.end + TIME_EPS:
        raise LumascapeError(
            f"t={t} outside object span [{obj.start}, {obj.end}]",
            code="time-out-of-span")
    if obj.kind is ObjectKind.FLASH:
        env = obj.envelope
        points = [
            (obj.start, 0.0),
            (obj.start + env.attack, 1.0),
            (obj.start + env.attack + env.hold, 1.0),
            (obj.end, 0.0),
        ]
        return {"intensity": _piecewise(points, t)}

    kfs = obj.keyframes
    if t <= kfs[0].t:
        return dict(kfs[0].params)
    if t >= kfs[-1].t:
        return dict(kfs[-1].params)
    hi = next(i for i, kf in enumerate(kfs) if kf.t >= t)
    lo = hi - 1
    a, b = kfs[lo], kfs[hi]
    if b.t - a.t <= TIME_EPS:
        return dict(b.params)
    frac = (t - a.t) / (b.t - a.t)
    names = set(a.params) | set(b.params)
    return {
        name: (a.params.get(name, b.params.get(name, 0.0)) * (1 - frac)
               + b.params.get(name, a.params.get(name, 0.0)) * frac)
        for name in names
    }


def _piecewise(points, t):
    if t <= points[0][0]:
        return points[0][1]
    for (t0, v0), (t1, v1) in zip(points, points[1:]):
        if t <= t1:
            if t1 - t0 <= TIME_EPS:
                return v1
            return v0 + (v1 - v0) * (t - t0) / (t1 - t0)
    return points[-1][1]
