"""Invariant validation for lightscape documents.

``validate`` returns every violation as data rather than raising; callers
that need a hard failure wrap the result in ``ValidationError``.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import LumascapeError, ValidationError
from .colors import Color, hsv_to_rgb
from .document import (
    Lightscape, LightObject, ObjectKind, Segment, PALETTE_ROLES,
    SEGMENT_LABELS, temperature_category,
)

TIME_EPS = 1e-3  # 1 ms matching tolerance for duration/partition checks


@dataclass(frozen=True, slots=True)
class Violation:
    code: str
    message: str
    path: str = ""


def _check_color(color: Color, path: str, out: list[Violation]) -> None:
    for name in ("r", "g", "b"):
        ch = getattr(color, name)
        if not isinstance(ch, int) or not 0 <= ch <= 255:
            out.append(Violation("channel-out-of-range",
                                 f"channel {name}={ch} outside 0-255", path))
            return
    if color.h is not None and color.s is not None and color.v is not None:
        if not (0.0 <= color.h < 360.0 and 0.0 <= color.s <= 1.0 and 0.0 <= color.v <= 1.0):
            out.append(Violation("hsv-out-of-range",
                                 f"hsv ({color.h}, {color.s}, {color.v}) outside valid ranges",
                                 path))
            return
        rr, gg, bb = hsv_to_rgb(color.h, color.s, color.v)
        if max(abs(rr - color.r), abs(gg - color.g), abs(bb - color.b)) > 1:
            out.append(Violation("hsv-rgb-mismatch",
                                 "stored hsv does not reproduce rgb within 1 channel unit",
                                 path))


def _check_palette(ls: Lightscape, out: list[Violation]) -> None:
    pal = ls.palette
    for role in PALETTE_ROLES:
        _check_color(pal.by_role(role), f"palette.{role}", out)
    for soft_name, soft, source_name, source in (
        ("softPrimary", pal.soft_primary, "primary", pal.primary),
        ("softSecondary", pal.soft_secondary, "secondary", pal.secondary),
    ):
        sh, ss, _ = soft.hsv()
        h, s, _ = source.hsv()
        # hue undefined at zero saturation; stored hsv makes the check exact
        if s > 0 and ss > 0 and abs(((sh - h) + 180.0) % 360.0 - 180.0) > 1.0:
            out.append(Violation("soft-hue-changed",
                                 f"{soft_name} hue {sh:.3f} != {source_name} hue {h:.3f}",
                                 f"palette.{soft_name}"))
        if s > 0 and ss >= s:
            out.append(Violation("soft-not-desaturated",
                                 f"{soft_name} saturation {ss:.3f} >= {source_name} {s:.3f}",
                                 f"palette.{soft_name}"))


def _check_segments(segments, duration: float, out: list[Violation],
                    path_prefix: str = "segments") -> None:
    for i, seg in enumerate(segments):
        path = f"{path_prefix}[{i}]"
        if not seg.start < seg.end:
            out.append(Violation("segment-empty",
                                 f"start {seg.start} must precede end {seg.end}", path))
        if seg.start < -TIME_EPS or seg.end > duration + TIME_EPS:
            out.append(Violation("segment-out-of-bounds",
                                 f"[{seg.start}, {seg.end}] outside [0, {duration}]", path))
        if seg.label not in SEGMENT_LABELS:
            out.append(Violation("unknown-label", f"label {seg.label!r}", path))
        if not 1 <= seg.temperature <= 5:
            out.append(Violation("temperature-out-of-range",
                                 f"temperature {seg.temperature}", path))
    if segments:
        if abs(segments[0].start) > TIME_EPS:
            out.append(Violation("segments-not-partition",
                                 f"first segment starts at {segments[0].start}, not 0",
                                 path_prefix))
        for i in range(1, len(segments)):
            gap = segments[i].start - segments[i - 1].end
            if abs(gap) > TIME_EPS:
                out.append(Violation("segments-not-partition",
                                     f"gap of {gap:.6f}s before segment {i}",
                                     f"{path_prefix}[{i}]"))
        if abs(segments[-1].end - duration) > TIME_EPS:
            out.append(Violation("segments-not-partition",
                                 f"last segment ends at {segments[-1].end}, "
                                 f"not duration {duration}", path_prefix))


def _check_object(obj: LightObject, ls: Lightscape, out: list[Violation]) -> None:
    path = f"objects[{obj.id}]"
    if not obj.start < obj.end:
        out.append(Violation("object-empty",
                             f"start {obj.start} must precede end {obj.end}", path))
    if obj.start < -TIME_EPS or obj.end > ls.song_duration + TIME_EPS:
        out.append(Violation("object-out-of-bounds",
                             f"[{obj.start}, {obj.end}] outside [0, {ls.song_duration}]",
                             path))
    if not 0.0 <= obj.spatial.center <= 1.0 or not 0.0 <= obj.spatial.width <= 1.0:
        out.append(Violation("spatial-out-of-range",
                             f"center {obj.spatial.center}, width {obj.spatial.width}",
                             path))
    if obj.color_override is not None:
        _check_color(obj.color_override, f"{path}.colorOverride", out)
    elif obj.color_role not in PALETTE_ROLES:
        out.append(Violation("unresolved-color",
                             f"colorRole {obj.color_role!r} not a palette role "
                             "and no override present", path))

    if obj.kind is ObjectKind.FLASH:
        if obj.envelope is None:
            out.append(Violation("flash-missing-envelope", "flash without envelope", path))
        else:
            env = obj.envelope
            if env.attack < 0 or env.hold < 0 or env.release < 0 or env.total <= 0:
                out.append(Violation("envelope-invalid",
                                     f"attack/hold/release ({env.attack}, {env.hold}, "
                                     f"{env.release}) must be >= 0 with positive sum", path))
            elif abs((obj.end - obj.start) - env.total) > TIME_EPS:
                out.append(Violation("envelope-duration-mismatch",
                                     f"end-start {obj.end - obj.start:.6f} != "
                                     f"envelope sum {env.total:.6f}", path))
        if obj.keyframes:
            out.append(Violation("flash-with-keyframes",
                                 "flash objects carry no keyframes", path))
    else:
        if not obj.keyframes:
            out.append(Violation("layer-missing-keyframes",
                                 "layer requires at least one keyframe", path))
        else:
            prev = None
            for j, kf in enumerate(obj.keyframes):
                kpath = f"{path}.keyframes[{j}]"
                if prev is not None and kf.t <= prev:
                    out.append(Violation("keyframes-not-increasing",
                                         f"t {kf.t} after {prev}", kpath))
                prev = kf.t
                if kf.t < obj.start - TIME_EPS or kf.t > obj.end + TIME_EPS:
                    out.append(Violation("keyframe-out-of-span",
                                         f"t {kf.t} outside [{obj.start}, {obj.end}]", kpath))
                for name, value in kf.params.items():
                    if not isinstance(value, (int, float)) or value != value or \
                            value in (float("inf"), float("-inf")):
                        out.append(Violation("param-not-finite",
                                             f"{name}={value}", kpath))
                    elif name == "intensity" and not 0.0 <= value <= 1.0:
                        out.append(Violation("intensity-out-of-range",
                                             f"intensity {value}", kpath))
        if obj.envelope is not None:
            out.append(Violation("layer-with-envelope",
                                 "layer objects carry no envelope", path))


def _check_increasing(values, min_gap: float, code: str, what: str,
                      out: list[Violation], path: str) -> None:
    for i in range(1, len(values)):
        if values[i] - values[i - 1] < min_gap:
            out.append(Violation(code,
                                 f"{what}[{i}]={values[i]:.6f} within "
                                 f"{min_gap}s of previous", path))


def validate(ls: Lightscape) -> list[Violation]:
    """Return every invariant violation in the document; empty list when valid."""
    out: list[Violation] = []
    if ls.version != "1.0":
        out.append(Violation("unsupported-version", f"version {ls.version!r}", "version"))
    if not ls.song_duration > 0:
        out.append(Violation("bad-duration", f"songDuration {ls.song_duration}",
                             "songDuration"))
        return out

    _check_palette(ls, out)
    _check_segments(ls.segments, ls.song_duration, out)

    seen: set[str] = set()
    for obj in ls.objects:
        if obj.id in seen:
            out.append(Violation("duplicate-id", f"object id {obj.id!r} reused",
                                 f"objects[{obj.id}]"))
        seen.add(obj.id)
        _check_object(obj, ls, out)
    return out


def require_valid(ls: Lightscape) -> Lightscape:
    violations = validate(ls)
    if violations:
        raise ValidationError(violations)
    return ls


def resolve_color(obj: LightObject, palette) -> Color:
    """Override wins; otherwise look the role up in the palette."""
    if obj.color_override is not None:
        return obj.color_override
    color = palette.by_role(obj.color_role or "")
    if color is None:
        raise LumascapeError(f"colorRole {obj.color_role!r} not resolvable",
                             code="unresolved-color")
    return color
