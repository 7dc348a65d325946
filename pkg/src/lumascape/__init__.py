"""lumascape: music-video-driven ambient lightscape synthesis."""

__version__ = "0.1.0"
