"""Canonical JSON serialization of lightscape and analysis documents.

Canonical form: UTF-8, two-space indent, schema-defined key order, every
float printed with six decimal places, channels and counters as bare
integers, trailing newline.  Two structurally equal documents therefore
serialize to identical bytes, and re-serializing a canonical document is
the identity.
"""

from __future__ import annotations

import json
import math
from typing import Any

from ..errors import InputError
from .colors import Color
from .document import (
    AnalysisResult, BeatGrid, ColorPalette, Envelope, Keyframe, Lightscape,
    LightObject, ModulationKind, ObjectKind, PercussiveEvents, Segment,
    Spatial, SCHEMA_VERSION,
)
from .validate import require_valid, validate

ANALYSIS_SCHEMA_VERSION = "1.0"


class _Float:
    """Marker wrapper: emit with fixed six-decimal formatting."""

    __slots__ = ("value",)

    def __init__(self, value: float):
        self.value = float(value)


def _fmt_float(x: float) -> str:
    if not math.isfinite(x):
        raise InputError(f"non-finite number {x!r} in document", code="non-finite-number")
    text = f"{x:.6f}"
    return "0.000000" if text == "-0.000000" else text


def _emit(node: Any, indent: int, out: list[str]) -> None:
    pad = "  " * indent
    if isinstance(node, _Float):
        out.append(_fmt_float(node.value))
    elif isinstance(node, bool):
        out.append("true" if node else "false")
    elif isinstance(node, int):
        out.append(str(node))
    elif isinstance(node, float):
        out.append(_fmt_float(node))
    elif node is None:
        out.append("null")
    elif isinstance(node, str):
        out.append(json.dumps(node, ensure_ascii=False))
    elif isinstance(node, dict):
        if not node:
            out.append("{}")
            return
        out.append("{\n")
        for i, (key, value) in enumerate(node.items()):
            out.append(f"{pad}  {json.dumps(str(key), ensure_ascii=False)}: ")
            _emit(value, indent + 1, out)
            out.append(",\n" if i < len(node) - 1 else "\n")
        out.append(pad + "}")
    elif isinstance(node, (list, tuple)):
        if not node:
            out.append("[]")
            return
        out.append("[\n")
        for i, value in enumerate(node):
            out.append(pad + "  ")
            _emit(value, indent + 1, out)
            out.append(",\n" if i < len(node) - 1 else "\n")
        out.append(pad + "]")
    else:
        raise TypeError(f"cannot emit {type(node).__name__}")


def emit_canonical_json(node: Any) -> bytes:
    out: list[str] = []
    _emit(node, 0, out)
    out.append("\n")
    return "".join(out).encode("utf-8")


def _color_node(c: Color) -> dict:
    node: dict[str, Any] = {"r": int(c.r), "g": int(c.g), "b": int(c.b)}
    if c.h is not None and c.s is not None and c.v is not None:
        node["h"] = _Float(c.h)
        node["s"] = _Float(c.s)
        node["v"] = _Float(c.v)
    return node


def _palette_node(p: ColorPalette) -> dict:
    return {
        "primary": _color_node(p.primary),
        "softPrimary": _color_node(p.soft_primary),
        "secondary": _color_node(p.secondary),
        "softSecondary": _color_node(p.soft_secondary),
        "background": _color_node(p.background),
    }


def _segment_node(s: Segment) -> dict:
    return {
        "start": _Float(s.start),
        "end": _Float(s.end),
        "label": s.label,
        "temperature": int(s.temperature),
        "category": s.category,
    }


def _object_node(o: LightObject) -> dict:
    node: dict[str, Any] = {"id": o.id, "kind": o.kind.value}
    if o.color_role is not None:
        node["colorRole"] = o.color_role
    if o.color_override is not None:
        node["colorOverride"] = _color_node(o.color_override)
    node["start"] = _Float(o.start)
    node["end"] = _Float(o.end)
    node["spatial"] = {"center": _Float(o.spatial.center), "width": _Float(o.spatial.width)}
    if o.kind is ObjectKind.FLASH:
        env = o.envelope
        node["envelope"] = {"attack": _Float(env.attack), "hold": _Float(env.hold),
                            "release": _Float(env.release)}
    else:
        node["modulationKind"] = o.modulation_kind.value
        node["keyframes"] = [
            {"t": _Float(k.t),
             "params": {name: _Float(k.params[name]) for name in sorted(k.params)}}
            for k in o.keyframes
        ]
    node["zOrder"] = int(o.z_order)
    return node


def _provenance_node(prov: dict) -> dict:
    node: dict[str, Any] = {}
    for key in sorted(prov):
        value = prov[key]
        if isinstance(value, float):
            value = _Float(value)
        elif not isinstance(value, (str, int, bool)) and value is not None:
            raise InputError(f"provenance[{key!r}] must be scalar",
                             code="bad-provenance")
        node[str(key)] = value
    return node


def serialize(ls: Lightscape) -> bytes:
    """Canonical bytes of a valid lightscape document."""
    require_valid(ls)
    return emit_canonical_json({
        "version": ls.version,
        "songDuration": _Float(ls.song_duration),
        "palette": _palette_node(ls.palette),
        "segments": [_segment_node(s) for s in ls.segments],
        "objects": [_object_node(o) for o in ls.objects],
        "provenance": _provenance_node(ls.provenance),
    })


# ---------------------------------------------------------------------------
# parsing


def _want(node: dict, key: str, where: str) -> Any:
    if key not in node:
        raise InputError(f"{where}: missing key {key!r}", code="missing-key")
    return node[key]


def _as_float(value: Any, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise InputError(f"{where}: expected number, got {value!r}", code="bad-type")
    return float(value)


def _as_int(value: Any, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise InputError(f"{where}: expected integer, got {value!r}", code="bad-type")
    return value


def _parse_color(node: Any, where: str) -> Color:
    if not isinstance(node, dict):
        raise InputError(f"{where}: expected color object", code="bad-type")
    r = _as_int(_want(node, "r", where), where)
    g = _as_int(_want(node, "g", where), where)
    b = _as_int(_want(node, "b", where), where)
    if all(k in node for k in ("h", "s", "v")):
        return Color(r, g, b, h=_as_float(node["h"], where),
                     s=_as_float(node["s"], where), v=_as_float(node["v"], where))
    return Color(r, g, b)


def _parse_palette(node: Any, where: str = "palette") -> ColorPalette:
    if not isinstance(node, dict):
        raise InputError(f"{where}: expected object", code="bad-type")
    return ColorPalette(
        primary=_parse_color(_want(node, "primary", where), f"{where}.primary"),
        soft_primary=_parse_color(_want(node, "softPrimary", where), f"{where}.softPrimary"),
        secondary=_parse_color(_want(node, "secondary", where), f"{where}.secondary"),
        soft_secondary=_parse_color(_want(node, "softSecondary", where),
                                    f"{where}.softSecondary"),
        background=_parse_color(_want(node, "background", where), f"{where}.background"),
    )


def _parse_segment(node: Any, where: str) -> Segment:
    if not isinstance(node, dict):
        raise InputError(f"{where}: expected object", code="bad-type")
    seg = Segment(
        start=_as_float(_want(node, "start", where), where),
        end=_as_float(_want(node, "end", where), where),
        label=str(_want(node, "label", where)),
        temperature=_as_int(_want(node, "temperature", where), where),
    )
    if "category" in node and node["category"] != seg.category:
        raise InputError(f"{where}: category {node['category']!r} inconsistent with "
                         f"temperature {seg.temperature}", code="category-mismatch")
    return seg


def _parse_object(node: Any, where: str) -> LightObject:
    if not isinstance(node, dict):
        raise InputError(f"{where}: expected object", code="bad-type")
    kind_raw = str(_want(node, "kind", where))
    try:
        kind = ObjectKind(kind_raw)
    except ValueError:
        raise InputError(f"{where}: unknown kind {kind_raw!r}", code="unknown-kind") from None

    envelope = None
    keyframes: tuple[Keyframe, ...] = ()
    modulation = ModulationKind.NONE
    if kind is ObjectKind.FLASH:
        env_node = _want(node, "envelope", where)
        envelope = Envelope(
            attack=_as_float(_want(env_node, "attack", where), where),
            hold=_as_float(_want(env_node, "hold", where), where),
            release=_as_float(_want(env_node, "release", where), where),
        )
        if node.get("keyframes"):
            raise InputError(f"{where}: flash objects carry no keyframes",
                             code="flash-with-keyframes")
    else:
        mod_raw = str(node.get("modulationKind", "none"))
        try:
            modulation = ModulationKind(mod_raw)
        except ValueError:
            raise InputError(f"{where}: unknown modulationKind {mod_raw!r}",
                             code="unknown-modulation") from None
        kf_nodes = _want(node, "keyframes", where)
        if not isinstance(kf_nodes, list):
            raise InputError(f"{where}.keyframes: expected list", code="bad-type")
        kfs = []
        for i, kf in enumerate(kf_nodes):
            kwhere = f"{where}.keyframes[{i}]"
            params_node = _want(kf, "params", kwhere)
            if not isinstance(params_node, dict):
                raise InputError(f"{kwhere}.params: expected object", code="bad-type")
            params = {str(k): _as_float(v, f"{kwhere}.params.{k}")
                      for k, v in params_node.items()}
            kfs.append(Keyframe(t=_as_float(_want(kf, "t", kwhere), kwhere), params=params))
        keyframes = tuple(kfs)

    spatial_node = _want(node, "spatial", where)
    return LightObject(
        id=str(_want(node, "id", where)),
        kind=kind,
        start=_as_float(_want(node, "start", where), where),
        end=_as_float(_want(node, "end", where), where),
        spatial=Spatial(center=_as_float(_want(spatial_node, "center", where), where),
                        width=_as_float(_want(spatial_node, "width", where), where)),
        color_role=str(node["colorRole"]) if "colorRole" in node else None,
        color_override=(_parse_color(node["colorOverride"], f"{where}.colorOverride")
                        if "colorOverride" in node else None),
        envelope=envelope,
        modulation_kind=modulation,
        keyframes=keyframes,
        z_order=_as_int(node.get("zOrder", 0), where),
    )


def _load_json(data: bytes | str, what: str) -> dict:
    try:
        node = json.loads(data)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise InputError(f"malformed {what} document: {exc}", code="malformed-json") from exc
    if not isinstance(node, dict):
        raise InputError(f"{what} document must be a JSON object", code="bad-type")
    return node


def deserialize(data: bytes | str) -> Lightscape:
    """Parse and validate a lightscape document; raises on any defect."""
    node = _load_json(data, "lightscape")
    version = str(_want(node, "version", "document"))
    if version != SCHEMA_VERSION:
        raise InputError(f"unsupported schema version {version!r}",
                         code="unsupported-version")
    segments_node = _want(node, "segments", "document")
    objects_node = _want(node, "objects", "document")
    if not isinstance(segments_node, list) or not isinstance(objects_node, list):
        raise InputError("segments and objects must be lists", code="bad-type")
    ls = Lightscape(
        version=version,
        song_duration=_as_float(_want(node, "songDuration", "document"), "songDuration"),
        palette=_parse_palette(_want(node, "palette", "document")),
        segments=tuple(_parse_segment(s, f"segments[{i}]")
                       for i, s in enumerate(segments_node)),
        objects=tuple(_parse_object(o, f"objects[{i}]")
                      for i, o in enumerate(objects_node)),
        provenance=dict(node.get("provenance", {})),
    )
    return require_valid(ls)


def canonicalize(ls: Lightscape) -> Lightscape:
    """Quantize every float to the canonical six-decimal grid."""
    return deserialize(serialize(ls))


# ---------------------------------------------------------------------------
# analysis documents


def serialize_analysis(res: AnalysisResult) -> bytes:
    return emit_canonical_json({
        "version": ANALYSIS_SCHEMA_VERSION,
        "duration": _Float(res.duration),
        "beatGrid": {
            "bpm": _Float(res.beat_grid.bpm),
            "beats": [_Float(b) for b in res.beat_grid.beats],
            "downbeats": [_Float(b) for b in res.beat_grid.downbeats],
        },
        "segments": [_segment_node(s) for s in res.segments],
        "events": {
            "kicks": [_Float(t) for t in res.events.kicks],
            "snares": [_Float(t) for t in res.events.snares],
        },
        "perSegmentMedianRms": [_Float(x) for x in res.per_segment_median_rms],
        "provenance": _provenance_node(res.provenance),
    })


def deserialize_analysis(data: bytes | str) -> AnalysisResult:
    node = _load_json(data, "analysis")
    version = str(_want(node, "version", "analysis"))
    if version != ANALYSIS_SCHEMA_VERSION:
        raise InputError(f"unsupported analysis schema version {version!r}",
                         code="unsupported-version")
    grid_node = _want(node, "beatGrid", "analysis")
    events_node = _want(node, "events", "analysis")
    res = AnalysisResult(
        duration=_as_float(_want(node, "duration", "analysis"), "duration"),
        beat_grid=BeatGrid(
            bpm=_as_float(_want(grid_node, "bpm", "beatGrid"), "bpm"),
            beats=tuple(_as_float(b, "beats") for b in _want(grid_node, "beats", "beatGrid")),
            downbeats=tuple(_as_float(b, "downbeats")
                            for b in _want(grid_node, "downbeats", "beatGrid")),
        ),
        segments=tuple(_parse_segment(s, f"segments[{i}]")
                       for i, s in enumerate(_want(node, "segments", "analysis"))),
        events=PercussiveEvents(
            kicks=tuple(_as_float(t, "kicks") for t in _want(events_node, "kicks", "events")),
            snares=tuple(_as_float(t, "snares")
                         for t in _want(events_node, "snares", "events")),
        ),
        per_segment_median_rms=tuple(
            _as_float(x, "perSegmentMedianRms")
            for x in _want(node, "perSegmentMedianRms", "analysis")),
        provenance=dict(node.get("provenance", {})),
    )
    validate_analysis(res)
    return res


def validate_analysis(res: AnalysisResult) -> None:
    """Hard invariant check for analysis documents."""
    problems = []
    if not res.duration > 0:
        problems.append("duration must be positive")
    beats = res.beat_grid.beats
    for i in range(1, len(beats)):
        if beats[i] <= beats[i - 1]:
            problems.append(f"beats not strictly increasing at index {i}")
            break
    if beats and (beats[0] < 0 or beats[-1] > res.duration + 1e-3):
        problems.append("beats outside [0, duration]")
    for db in res.beat_grid.downbeats:
        if not any(abs(db - b) <= 1e-3 for b in beats):
            problems.append(f"downbeat {db} not on the beat grid")
            break
    for name, seq in (("kicks", res.events.kicks), ("snares", res.events.snares)):
        for i in range(1, len(seq)):
            if seq[i] - seq[i - 1] < PercussiveEvents.MIN_INTERONSET - 1e-9:
                problems.append(f"{name} closer than minimum inter-onset interval")
                break
    if len(res.per_segment_median_rms) != len(res.segments):
        problems.append("perSegmentMedianRms length != segment count")
    if any(not 0.0 <= x <= 1.0 for x in res.per_segment_median_rms):
        problems.append("perSegmentMedianRms outside [0, 1]")
    from .validate import Violation, _check_segments  # local import avoids cycle
    seg_violations: list[Violation] = []
    _check_segments(res.segments, res.duration, seg_violations)
    problems.extend(v.message for v in seg_violations)
    if problems:
        raise InputError("invalid analysis document: " + "; ".join(problems),
                         code="invalid-analysis")


def serialize_palette(palette: ColorPalette) -> bytes:
    return emit_canonical_json(_palette_node(palette))


def deserialize_palette(data: bytes | str) -> ColorPalette:
    return _parse_palette(_load_json(data, "palette"))
