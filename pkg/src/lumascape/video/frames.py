"""Frame ingestion: numbered image sequences or raw packed-RGB streams.

Video decoding stays outside the tool; an extractor dumps either
`frame_%06d.png` plus a `manifest.txt` with `fps=<float>`, or a LUMARAW1
stream (`LUMARAW1 <width> <height> <fps>\\n` header, then 8-bit RGB frames).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image

from ..errors import InputError
from ..model import Segment

RAW_MAGIC = b"LUMARAW1"


@dataclass(frozen=True)
class FrameSet:
    frames: tuple[tuple[float, np.ndarray], ...]  # (timestamp, HxWx3 uint8)
    source_description: str

    def __post_init__(self):
        shapes = {frame.shape for _, frame in self.frames}
        if len(shapes) > 1:
            raise InputError("frames differ in dimensions", code="frame-shape-mismatch")
        times = [t for t, _ in self.frames]
        if any(b <= a for a, b in zip(times, times[1:])):
            raise InputError("frame timestamps must strictly increase",
                             code="frames-not-increasing")


def _downscale(image: np.ndarray, max_width: int) -> np.ndarray:
    h, w = image.shape[:2]
    if w <= max_width:
        return image
    new_w = max_width
    new_h = max(1, round(h * max_width / w))
    pil = Image.fromarray(image, mode="RGB")
    return np.asarray(pil.resize((new_w, new_h), Image.Resampling.BOX))


def _subsample(items: list, max_frames: int) -> list:
    if len(items) <= max_frames:
        return items
    stride = -(-len(items) // max_frames)  # ceil
    return items[::stride]


def _read_manifest_fps(directory: Path) -> float:
    manifest = directory / "manifest.txt"
    if not manifest.is_file():
        raise InputError(f"missing manifest.txt in {directory}", code="missing-manifest")
    match = re.search(r"^fps\s*=\s*([0-9.]+)\s*$",
                      manifest.read_text(encoding="utf-8"), re.MULTILINE)
    if not match:
        raise InputError(f"{manifest}: no fps=<float> line", code="malformed-manifest")
    fps = float(match.group(1))
    if fps <= 0:
        raise InputError(f"{manifest}: fps must be positive", code="malformed-manifest")
    return fps


def _load_image_sequence(directory: Path):
    fps = _read_manifest_fps(directory)
    paths = sorted(directory.glob("frame_*.png"))
    if not paths:
        raise InputError(f"no frame_*.png files in {directory}", code="no-frames")
    for path in paths:
        match = re.fullmatch(r"frame_(\d+)\.png", path.name)
        if not match:
            continue
        index = int(match.group(1))
        try:
            with Image.open(path) as img:
                rgb = np.asarray(img.convert("RGB"))
        except OSError as exc:
            raise InputError(f"unreadable image {path}: {exc}",
                             code="unreadable-image") from exc
        yield index / fps, rgb


def _load_raw_stream(path: Path):
    data = path.read_bytes()
    newline = data.find(b"\n")
    if newline < 0 or not data.startswith(RAW_MAGIC):
        raise InputError(f"{path}: not a LUMARAW1 stream", code="bad-raw-header")
    header = data[:newline].decode("ascii", errors="replace").split()
    if len(header) != 4:
        raise InputError(f"{path}: malformed LUMARAW1 header", code="bad-raw-header")
    width, height, fps = int(header[1]), int(header[2]), float(header[3])
    if width <= 0 or height <= 0 or fps <= 0:
        raise InputError(f"{path}: bad LUMARAW1 dimensions", code="bad-raw-header")
    body = data[newline + 1:]
    frame_bytes = width * height * 3
    n_frames = len(body) // frame_bytes
    if n_frames == 0:
        raise InputError(f"{path}: stream has no complete frames", code="no-frames")
    for i in range(n_frames):
        block = body[i * frame_bytes:(i + 1) * frame_bytes]
        yield i / fps, np.frombuffer(block, dtype=np.uint8).reshape(height, width, 3)


def ingest_frames(path: str | Path, segment: Segment, max_frames: int = 100,
                  max_width: int = 160) -> FrameSet:
    """Frames inside [segment.start, segment.end), uniformly subsampled to at
    most max_frames, each box-downscaled to at most max_width."""
    path = Path(path)
    if path.is_dir():
        source = f"image-sequence:{path}"
        stream = _load_image_sequence(path)
    elif path.is_file():
        source = f"raw-stream:{path}"
        stream = _load_raw_stream(path)
    else:
        raise InputError(f"frames path not found: {path}", code="missing-file")

    in_segment = [(t, img) for t, img in stream
                  if segment.start <= t < segment.end]
    if not in_segment:
        raise InputError(
            f"no frames inside segment [{segment.start}, {segment.end})",
            code="no-frames-in-segment")
    picked = _subsample(in_segment, max_frames)
    frames = tuple((t, _downscale(img, max_width)) for t, img in picked)
    return FrameSet(frames=frames, source_description=source)


def write_raw_stream(path: str | Path, frames: list[np.ndarray], fps: float) -> None:
    """Writer for the LUMARAW1 format (used by tests and the render export)."""
    if not frames:
        raise InputError("no frames to write", code="no-frames")
    height, width = frames[0].shape[:2]
    with open(path, "wb") as fh:
        fh.write(f"LUMARAW1 {width} {height} {fps:g}\n".encode("ascii"))
        for frame in frames:
            fh.write(np.ascontiguousarray(frame, dtype=np.uint8).tobytes())
