"""Shared domain types, validation, and canonical serialization."""

from .colors import Color, derive_soft, hsv_to_rgb, rgb_to_hsv, rotate_hue, \
    with_saturation_value
from .document import (
    AnalysisResult, BeatGrid, ColorPalette, Envelope, Keyframe, Lightscape,
    LightObject, ModulationKind, ObjectKind, PercussiveEvents, Segment,
    Spatial, PALETTE_ROLES, SCHEMA_VERSION, SEGMENT_LABELS,
    temperature_category,
)
from .serialize import (
    canonicalize, deserialize, deserialize_analysis, deserialize_palette,
    emit_canonical_json, serialize, serialize_analysis, serialize_palette,
    validate_analysis,
)
from .validate import Violation, require_valid, resolve_color, validate

__all__ = [
    "AnalysisResult", "BeatGrid", "Color", "ColorPalette", "Envelope",
    "Keyframe", "Lightscape", "LightObject", "ModulationKind", "ObjectKind",
    "PALETTE_ROLES", "PercussiveEvents", "SCHEMA_VERSION", "SEGMENT_LABELS",
    "Segment", "Spatial", "Violation", "canonicalize", "derive_soft",
    "deserialize", "deserialize_analysis", "deserialize_palette",
    "emit_canonical_json", "hsv_to_rgb", "require_valid", "resolve_color",
    "rgb_to_hsv", "rotate_hue", "serialize", "serialize_analysis",
    "serialize_palette", "temperature_category", "validate",
    "validate_analysis", "with_saturation_value",
]
