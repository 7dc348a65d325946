"""Domain types for the object-based lightscape document.

All types are immutable value objects.  Invariant checking lives in
``model.validate``; canonical JSON round-tripping in ``model.serialize``.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum

from .colors import Color

SCHEMA_VERSION = "1.0"

SEGMENT_LABELS = frozenset({
    "intro", "verse", "chorus", "bridge", "solo", "break",
    "ending", "instrumental", "unknown",
})

PALETTE_ROLES = ("primary", "softPrimary", "secondary", "softSecondary", "background")


def temperature_category(temperature: int) -> str:
    """cold for 1-2, medium for 3-4, hot for 5."""
    if temperature <= 2:
        return "cold"
    if temperature <= 4:
        return "medium"
    return "hot"


@dataclass(frozen=True, slots=True)
class ColorPalette:
    primary: Color
    soft_primary: Color
    secondary: Color
    soft_secondary: Color
    background: Color

    def by_role(self, role: str) -> Color | None:
        return {
            "primary": self.primary,
            "softPrimary": self.soft_primary,
            "secondary": self.secondary,
            "softSecondary": self.soft_secondary,
            "background": self.background,
        }.get(role)


@dataclass(frozen=True, slots=True)
class Segment:
    start: float
    end: float
    label: str = "unknown"
    temperature: int = 3

    @property
    def category(self) -> str:
        return temperature_category(self.temperature)

    @property
    def duration(self) -> float:
        return self.end - self.start


@dataclass(frozen=True, slots=True)
class BeatGrid:
    bpm: float
    beats: tuple[float, ...]
    downbeats: tuple[float, ...] = ()


@dataclass(frozen=True, slots=True)
class PercussiveEvents:
    kicks: tuple[float, ...] = ()
    snares: tuple[float, ...] = ()

    MIN_INTERONSET = 0.1


@dataclass(frozen=True, slots=True)
class AnalysisResult:
    duration: float
    beat_grid: BeatGrid
    segments: tuple[Segment, ...]
    events: PercussiveEvents
    per_segment_median_rms: tuple[float, ...]
    provenance: dict = field(default_factory=dict)


@dataclass(frozen=True, slots=True)
class Envelope:
    attack: float
    hold: float
    release: float

    @property
    def total(self) -> float:
        return self.attack + self.hold + self.release


@dataclass(frozen=True, slots=True)
class Keyframe:
    t: float
    params: dict[str, float]


class ObjectKind(str, Enum):
    FLASH = "flash"
    LAYER = "layer"


class ModulationKind(str, Enum):
    NONE = "none"
    BRIGHTNESS_SINE = "brightnessSine"
    SPATIAL_SWEEP = "spatialSweep"
    BEAT_PULSE = "beatPulse"


@dataclass(frozen=True, slots=True)
class Spatial:
    center: float
    width: float


@dataclass(frozen=True, slots=True)
class LightObject:
    id: str
    kind: ObjectKind
    start: float
    end: float
    spatial: Spatial
    color_role: str | None = None
    color_override: Color | None = None
    envelope: Envelope | None = None
    modulation_kind: ModulationKind = ModulationKind.NONE
    keyframes: tuple[Keyframe, ...] = ()
    z_order: int = 0

    def moved_to(self, new_start: float) -> "LightObject":
        """Rigid translation preserving all relative timing."""
        delta = new_start - self.start
        kfs = tuple(Keyframe(k.t + delta, dict(k.params)) for k in self.keyframes)
        return replace(self, start=self.start + delta, end=self.end + delta,
                       keyframes=kfs)


@dataclass(frozen=True, slots=True)
class Lightscape:
    version: str
    song_duration: float
    palette: ColorPalette
    segments: tuple[Segment, ...]
    objects: tuple[LightObject, ...]
    provenance: dict = field(default_factory=dict)
