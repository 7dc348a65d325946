"""Deterministic virtual rendering of a lightscape onto fixtures.

Per fixture and time: gather objects whose spatial extent covers the
fixture (ring distance from the effective center at most half the width),
weight each object's resolved color by interpolated intensity and a
raised-cosine falloff across the extent, then composite additively in
ascending z-order with a 255 clamp.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np

from ..errors import InputError
from ..model import Color, Lightscape, ObjectKind, resolve_color
from ..synth import interpolate
from .fixtures import FixtureConfig


@dataclass(frozen=True)
class RenderedFrame:
    t: float
    colors: tuple[Color, ...]  # one per fixture, order matches the config


def _ring_distance(a: float, b: float) -> float:
    d = abs(a - b) % 1.0
    return min(d, 1.0 - d)


def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


def render_frame(ls: Lightscape, fixtures: FixtureConfig, t: float) -> RenderedFrame:
    if t < 0.0 or t > ls.song_duration + 1e-9:
        raise InputError(f"t={t} outside [0, {ls.song_duration}]",
                         code="time-out-of-range")
    active = []
    for obj in ls.objects:
        if obj.start <= t <= obj.end:
            params = interpolate(obj, t)
            color = resolve_color(obj, ls.palette)
            active.append((obj, params, color))
    active.sort(key=lambda item: (item[0].z_order, item[0].id))

    channels = np.zeros((len(fixtures.fixtures), 3))
    for obj, params, color in active:
        intensity = params.get("intensity", 0.0)
        if intensity <= 0.0:
            continue
        width = obj.spatial.width
        if width <= 0.0:
            continue
        center = (obj.spatial.center + params.get("spatialPhase", 0.0)) % 1.0
        rgb = np.array(color.rgb(), dtype=np.float64)
        for i, fixture in enumerate(fixtures.fixtures):
            distance = _ring_distance(fixture.position, center)
            if distance <= width / 2.0 + 1e-12:
                falloff = 0.5 * (1.0 + math.cos(math.pi * distance / (width / 2.0))) \
                    if width > 0 else 1.0
                channels[i] += rgb * intensity * falloff

    clamped = np.clip(channels, 0.0, 255.0)
    colors = tuple(Color.from_rgb(*(_round_half_up(v) for v in row))
                   for row in clamped)
    return RenderedFrame(t=t, colors=colors)


def render_all(ls: Lightscape, fixtures: FixtureConfig, fps: float = 30.0):
    """Frames at t = k/fps for k = 0..floor(duration*fps)."""
    if fps <= 0:
        raise InputError("fps must be positive", code="bad-fps")
    n = int(math.floor(ls.song_duration * fps + 1e-9))
    for k in range(n + 1):
        yield render_frame(ls, fixtures, k / fps)


def palette_bins(ls: Lightscape) -> dict[str, tuple[int, int, int]]:
    """The five palette colors plus black, in canonical order."""
    pal = ls.palette
    return {
        "primary": pal.primary.rgb(),
        "softPrimary": pal.soft_primary.rgb(),
        "secondary": pal.secondary.rgb(),
        "softSecondary": pal.soft_secondary.rgb(),
        "background": pal.background.rgb(),
        "black": (0, 0, 0),
    }


def color_ratios(frames, bins: dict[str, tuple[int, int, int]]):
    """Per frame: fraction of fixtures nearest each bin (ties to the first
    listed bin); each row sums to one."""
    names = list(bins)
    targets = np.array([bins[name] for name in names], dtype=np.float64)
    for frame in frames:
        counts = dict.fromkeys(names, 0)
        for color in frame.colors:
            rgb = np.array(color.rgb(), dtype=np.float64)
            dists = ((targets - rgb) ** 2).sum(axis=1)
            counts[names[int(np.argmin(dists))]] += 1
        total = len(frame.colors)
        yield frame.t, {name: counts[name] / total for name in names}


def frames_to_csv(frames, fixtures: FixtureConfig) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["t", "fixture_id", "r", "g", "b"])
    for frame in frames:
        for fixture, color in zip(fixtures.fixtures, frame.colors):
            writer.writerow([f"{frame.t:.6f}", fixture.id,
                             color.r, color.g, color.b])
    return out.getvalue()


def ratios_to_csv(ratio_rows) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["t", "bin", "ratio"])
    for t, ratios in ratio_rows:
        for name, ratio in ratios.items():
            writer.writerow([f"{t:.6f}", name, f"{ratio:.6f}"])
    return out.getvalue()


def frames_to_raw(frames, fps: float) -> bytes:
    """LUMARAW1 stream: one row of pixels per frame (width = fixture count)."""
    frames = list(frames)
    if not frames:
        raise InputError("no frames to export", code="no-frames")
    width = len(frames[0].colors)
    header = f"LUMARAW1 {width} 1 {fps:g}\n".encode("ascii")
    body = bytearray()
    for frame in frames:
        for color in frame.colors:
            body.extend(color.rgb())
    return header + bytes(body)
