"""Visual analysis: frame ingestion and palette extraction."""

from .frames import FrameSet, ingest_frames, write_raw_stream
from .palette import (ColorCluster, ColorExtractor, assign_roles,
                      build_palette, extract_palette, select_salient_segment)

__all__ = [
    "ColorCluster", "ColorExtractor", "FrameSet", "assign_roles",
    "build_palette", "extract_palette", "ingest_frames",
    "select_salient_segment", "write_raw_stream",
]
