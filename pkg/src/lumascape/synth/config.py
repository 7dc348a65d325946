"""Synthesis tuning knobs with validation."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import InputError
from ..model import Envelope


@dataclass(frozen=True)
class SynthesisConfig:
    kick_envelope: Envelope = field(default_factory=lambda: Envelope(0.02, 0.03, 0.15))
    snare_envelope: Envelope = field(default_factory=lambda: Envelope(0.02, 0.03, 0.10))
    ambient_period_beats: float = 8.0
    sweep_period_beats: float = 4.0
    crossfade: float = 0.5
    ambient_depth: float = 0.3
    sweep_depth: float = 0.5
    pulse_depth: float = 0.8
    ambient_base: float = 0.4
    sweep_base: float = 0.4
    snare_alternate: bool = True
    flashes_in_cold: bool = True

    def __post_init__(self):
        for name, env in (("kick", self.kick_envelope), ("snare", self.snare_envelope)):
            if env.attack <= 0 or env.release <= 0 or env.hold < 0:
                # zero attack or release would make flash intensity jump
                raise InputError(
                    f"{name} envelope needs attack > 0, release > 0, hold >= 0",
                    code="bad-envelope")
        for name in ("ambient_depth", "sweep_depth", "pulse_depth",
                     "ambient_base", "sweep_base"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise InputError(f"{name} must lie in [0, 1]", code="bad-depth")
        if self.crossfade < 0:
            raise InputError("crossfade must be >= 0", code="bad-crossfade")
        if self.ambient_period_beats <= 0 or self.sweep_period_beats <= 0:
            raise InputError("modulation periods must be positive beats",
                             code="bad-period")
        if self.ambient_base * (1.0 + self.ambient_depth) > 1.0:
            raise InputError("ambient base*(1+depth) exceeds full intensity",
                             code="bad-depth")
