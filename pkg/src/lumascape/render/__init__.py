"""Virtual fixture rendering and exports."""

from .fixtures import Fixture, FixtureConfig, default_venue, load_fixtures, \
    save_fixtures
from .renderer import (RenderedFrame, color_ratios, frames_to_csv,
                       frames_to_raw, palette_bins, ratios_to_csv,
                       render_all, render_frame)

__all__ = [
    "Fixture", "FixtureConfig", "RenderedFrame", "color_ratios",
    "default_venue", "frames_to_csv", "frames_to_raw", "load_fixtures",
    "palette_bins", "ratios_to_csv", "render_all", "render_frame",
    "save_fixtures",
]
