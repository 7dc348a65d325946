"""Light object synthesis: analysis + palette -> lightscape document."""

from .config import SynthesisConfig
from .interpolate import interpolate
from .synthesizer import (build_timeline, synthesize, synthesize_events,
                          synthesize_layers, Z_AMBIENT, Z_FLASH, Z_PULSE,
                          Z_SWEEP)

__all__ = [
    "SynthesisConfig", "Z_AMBIENT", "Z_FLASH", "Z_PULSE", "Z_SWEEP",
    "build_timeline", "interpolate", "synthesize", "synthesize_events",
    "synthesize_layers",
]
