"""Pipeline configuration: YAML file, section dataclasses, stable digest.

The digest hashes a canonicalized (sorted-key) rendering so reordering keys
in the file leaves provenance unchanged.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

import yaml

from .errors import InputError
from .model import Envelope
from .synth import SynthesisConfig


@dataclass(frozen=True)
class AnalysisSettings:
    sample_rate: int = 44100
    window: int = 2048
    hop: int = 512
    bpm_min: float = 60.0
    bpm_max: float = 180.0
    stem_files: tuple[str, str] | None = None
    segment_file: str | None = None


@dataclass(frozen=True)
class RenderSettings:
    fps: float = 30.0
    fixtures: str | None = None  # path; default venue when absent


@dataclass(frozen=True)
class VideoSettings:
    max_frames: int = 100
    max_width: int = 160
    n_colors: int = 5


@dataclass(frozen=True)
class PipelineConfig:
    analysis: AnalysisSettings = field(default_factory=AnalysisSettings)
    synthesis: SynthesisConfig = field(default_factory=SynthesisConfig)
    video: VideoSettings = field(default_factory=VideoSettings)
    render: RenderSettings = field(default_factory=RenderSettings)
    seed: int = 0

    def digest(self) -> str:
        return hashlib.sha256(
            json.dumps(_as_plain(self), sort_keys=True).encode("utf-8")
        ).hexdigest()[:16]

    def provenance(self, tool_version: str) -> dict:
        return {"tool": f"lumascape {tool_version}",
                "configDigest": self.digest(), "seed": self.seed}


def _as_plain(obj):
    if isinstance(obj, Envelope):
        return {"attack": obj.attack, "hold": obj.hold, "release": obj.release}
    if hasattr(obj, "__dataclass_fields__"):
        return {name: _as_plain(getattr(obj, name))
                for name in obj.__dataclass_fields__}
    if isinstance(obj, (list, tuple)):
        return [_as_plain(v) for v in obj]
    return obj


def _envelope_from(node, default: Envelope, where: str) -> Envelope:
    if node is None:
        return default
    try:
        return Envelope(attack=float(node.get("attack", default.attack)),
                        hold=float(node.get("hold", default.hold)),
                        release=float(node.get("release", default.release)))
    except (AttributeError, TypeError, ValueError) as exc:
        raise InputError(f"{where}: bad envelope: {exc}", code="bad-config") from exc


def load_config(path: str | Path | None) -> PipelineConfig:
    if path is None:
        return PipelineConfig()
    path = Path(path)
    if not path.is_file():
        raise InputError(f"config file not found: {path}", code="missing-file")
    try:
        node = yaml.safe_load(path.read_text(encoding="utf-8")) or {}
    except yaml.YAMLError as exc:
        raise InputError(f"malformed config {path}: {exc}", code="bad-config") from exc
    if not isinstance(node, dict):
        raise InputError(f"config {path} must be a mapping", code="bad-config")

    known = {"analysis", "synthesis", "video", "render", "seed"}
    unknown = set(node) - known
    if unknown:
        raise InputError(f"unknown config sections: {sorted(unknown)}",
                         code="bad-config")

    def section(name):
        sub = node.get(name) or {}
        if not isinstance(sub, dict):
            raise InputError(f"config section {name} must be a mapping",
                             code="bad-config")
        return sub

    a = section("analysis")
    stem_files = a.get("stem_files")
    if stem_files is not None:
        if not (isinstance(stem_files, (list, tuple)) and len(stem_files) == 2):
            raise InputError("analysis.stem_files needs [drums, rest] paths",
                             code="bad-config")
        stem_files = (str(stem_files[0]), str(stem_files[1]))
    analysis = AnalysisSettings(
        sample_rate=int(a.get("sample_rate", 44100)),
        window=int(a.get("window", 2048)),
        hop=int(a.get("hop", 512)),
        bpm_min=float(a.get("bpm_min", 60.0)),
        bpm_max=float(a.get("bpm_max", 180.0)),
        stem_files=stem_files,
        segment_file=(str(a["segment_file"]) if a.get("segment_file") else None))

    s = section("synthesis")
    defaults = SynthesisConfig()
    synthesis = SynthesisConfig(
        kick_envelope=_envelope_from(s.get("kick_envelope"),
                                     defaults.kick_envelope, "kick_envelope"),
        snare_envelope=_envelope_from(s.get("snare_envelope"),
                                      defaults.snare_envelope, "snare_envelope"),
        ambient_period_beats=float(s.get("ambient_period_beats", 8.0)),
        sweep_period_beats=float(s.get("sweep_period_beats", 4.0)),
        crossfade=float(s.get("crossfade", 0.5)),
        ambient_depth=float(s.get("ambient_depth", 0.3)),
        sweep_depth=float(s.get("sweep_depth", 0.5)),
        pulse_depth=float(s.get("pulse_depth", 0.8)),
        ambient_base=float(s.get("ambient_base", 0.4)),
        sweep_base=float(s.get("sweep_base", 0.4)),
        snare_alternate=bool(s.get("snare_alternate", True)),
        flashes_in_cold=bool(s.get("flashes_in_cold", True)))

    v = section("video")
    video = VideoSettings(max_frames=int(v.get("max_frames", 100)),
                          max_width=int(v.get("max_width", 160)),
                          n_colors=int(v.get("n_colors", 5)))

    r = section("render")
    render = RenderSettings(fps=float(r.get("fps", 30.0)),
                            fixtures=(str(r["fixtures"])
                                      if r.get("fixtures") else None))

    return PipelineConfig(analysis=analysis, synthesis=synthesis, video=video,
                          render=render, seed=int(node.get("seed", 0)))
