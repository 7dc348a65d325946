"""Structural segmentation: beat-synchronous features, self-similarity,
checkerboard novelty, boundary picking snapped to downbeats.

Functional labels (verse/chorus/...) require an external annotation file;
computed segments carry the label "unknown" and get their temperature from
the energy quantizer afterwards.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np
from sklearn.base import BaseEstimator

from ..errors import InputError
from ..model import BeatGrid, Segment, SEGMENT_LABELS
from .io import AudioBuffer
from .spectral import stft


def mel_filterbank(n_bands: int, n_fft_bins: int, sample_rate: int,
                   f_min: float = 30.0, f_max: float | None = None) -> np.ndarray:
    """Triangular mel filters (HTK mel scale), rows normalized to unit sum."""
    f_max = f_max or sample_rate / 2.0

    def to_mel(f):
        return 2595.0 * np.log10(1.0 + np.asarray(f) / 700.0)

    def from_mel(m):
        return 700.0 * (10.0 ** (np.asarray(m) / 2595.0) - 1.0)

    mel_points = np.linspace(to_mel(f_min), to_mel(f_max), n_bands + 2)
    hz_points = from_mel(mel_points)
    fft_freqs = np.linspace(0, sample_rate / 2.0, n_fft_bins)
    bank = np.zeros((n_bands, n_fft_bins))
    for b in range(n_bands):
        lo, mid, hi = hz_points[b], hz_points[b + 1], hz_points[b + 2]
        rising = (fft_freqs - lo) / max(mid - lo, 1e-9)
        falling = (hi - fft_freqs) / max(hi - mid, 1e-9)
        bank[b] = np.clip(np.minimum(rising, falling), 0.0, None)
        total = bank[b].sum()
        if total > 0:
            bank[b] /= total
    return bank


def checkerboard_kernel(size: int) -> np.ndarray:
    """Gaussian-tapered checkerboard, normalized to unit absolute sum."""
    half = size // 2
    coords = np.arange(size) - half + 0.5
    gauss = np.exp(-coords ** 2 / (2.0 * (half / 2.0) ** 2))
    taper = np.outer(gauss, gauss)
    sign = np.sign(np.outer(coords, coords))
    kernel = sign * taper
    return kernel / np.abs(kernel).sum()


class StructureSegmenter(BaseEstimator):
    """Finds section boundaries from repetition structure.

    Parameters
    ----------
    n_mel : feature bands per beat.
    kernel_beats : checkerboard kernel span.
    min_spacing_beats : minimum distance between boundaries.
    novelty_floor : absolute novelty a peak must clear, on the unit-kernel
        scale; suppresses spurious boundaries in homogeneous material.
    """

    def __init__(self, n_mel=40, kernel_beats=16, min_spacing_beats=8,
                 novelty_floor=0.05, window=2048, hop=512):
        self.n_mel = n_mel
        self.kernel_beats = kernel_beats
        self.min_spacing_beats = min_spacing_beats
        self.novelty_floor = novelty_floor
        self.window = window
        self.hop = hop

    def fit(self, audio: AudioBuffer, beat_grid: BeatGrid):
        if audio.duration < 10.0:
            raise InputError("need at least 10 s of audio for segmentation",
                             code="audio-too-short")
        duration = audio.duration
        features, feature_times = self._beat_features(audio, beat_grid)
        novelty = self._novelty(features)
        boundaries = self._pick_boundaries(novelty, feature_times, beat_grid, duration)
        self.novelty_ = novelty
        self.boundaries_ = boundaries
        self.segments_ = self._build_segments(boundaries, duration)
        return self

    # -- internals ---------------------------------------------------------

    def _beat_features(self, audio, beat_grid):
        spec = stft(audio, window=self.window, hop=self.hop)
        power = spec.magnitudes ** 2
        bank = mel_filterbank(self.n_mel, power.shape[1], audio.sample_rate)
        mel = power @ bank.T
        edges = [t for t in beat_grid.beats if 0.0 < t < audio.duration]
        grid = np.concatenate([[0.0], edges, [audio.duration]])
        rows = []
        for i in range(len(grid) - 1):
            mask = (spec.frame_times >= grid[i]) & (spec.frame_times < grid[i + 1])
            if mask.any():
                rows.append(mel[mask].mean(axis=0))
            else:
                rows.append(rows[-1] if rows else mel[0])
        return np.array(rows), grid[1:-1]  # interior boundary candidate times

    def _novelty(self, features):
        norms = np.linalg.norm(features, axis=1)
        unit = features / np.maximum(norms, 1e-12)[:, None]
        ssm = unit @ unit.T
        n = len(features)
        size = min(self.kernel_beats, max(2, (n // 2) * 2))
        size -= size % 2
        kernel = checkerboard_kernel(size)
        half = size // 2
        padded = np.pad(ssm, half, mode="edge")
        novelty = np.empty(n)
        for i in range(n):
            block = padded[i:i + size, i:i + size]
            novelty[i] = float((block * kernel).sum())
        return novelty

    def _pick_boundaries(self, novelty, candidate_times, beat_grid, duration):
        # novelty[i] sits at feature-row boundary i, i.e. candidate_times[i-1]
        interior = novelty[1:1 + len(candidate_times)]
        if len(interior) == 0:
            return []
        mu, sigma = float(interior.mean()), float(interior.std())
        threshold = max(mu + sigma, self.novelty_floor)
        order = np.argsort(interior, kind="stable")[::-1]
        chosen: list[int] = []
        for idx in order:
            value = interior[idx]
            if value <= threshold:
                break
            is_peak = ((idx == 0 or interior[idx - 1] <= value)
                       and (idx == len(interior) - 1 or interior[idx + 1] <= value))
            if not is_peak:
                continue
            if all(abs(idx - c) >= self.min_spacing_beats for c in chosen):
                chosen.append(int(idx))
        times = sorted(candidate_times[i] for i in chosen)
        snapped = []
        for t in times:
            if beat_grid.downbeats:
                t = min(beat_grid.downbeats, key=lambda db: abs(db - t))
            if 0.5 < t < duration - 0.5:
                snapped.append(float(t))
        return sorted(set(snapped))

    def _build_segments(self, boundaries, duration):
        edges = [0.0] + list(boundaries) + [duration]
        return tuple(Segment(edges[i], edges[i + 1], "unknown", 3)
                     for i in range(len(edges) - 1))


def load_external_segments(path: str | Path, duration: float,
                           tolerance: float = 1e-3) -> tuple[Segment, ...]:
    """Parse `start<TAB>end<TAB>label` lines; the rows must partition
    [0, duration)."""
    path = Path(path)
    if not path.is_file():
        raise InputError(f"segment file not found: {path}", code="missing-file")
    segments = []
    for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise InputError(f"{path}:{lineno}: expected start<TAB>end<TAB>label",
                             code="malformed-segments")
        try:
            start, end = float(parts[0]), float(parts[1])
        except ValueError:
            raise InputError(f"{path}:{lineno}: bad numbers", code="malformed-segments")
        label = parts[2].strip()
        if label not in SEGMENT_LABELS:
            raise InputError(f"{path}:{lineno}: unknown label {label!r}",
                             code="malformed-segments")
        segments.append(Segment(start, end, label, 3))
    if not segments:
        raise InputError(f"{path}: no segments", code="malformed-segments")
    segments.sort(key=lambda s: s.start)
    if abs(segments[0].start) > tolerance or abs(segments[-1].end - duration) > tolerance:
        raise InputError("external segments do not span [0, duration)",
                         code="segments-not-partition")
    for prev, cur in zip(segments, segments[1:]):
        if abs(cur.start - prev.end) > tolerance:
            raise InputError(f"gap between segments at {prev.end}",
                             code="segments-not-partition")
    return tuple(segments)
