"""End-to-end audio analysis: ingestion through AnalysisResult.

Stems and structural segments come from provider hooks so precomputed
external files can stand in for the built-in separation/segmentation.
"""

from __future__ import annotations

from dataclasses import replace
from pathlib import Path

import numpy as np
from sklearn.base import BaseEstimator

from ..model import AnalysisResult, PercussiveEvents, Segment
from .beats import BeatTracker
from .hpss import HarmonicPercussiveSeparator, StemSet, load_external_stems
from .io import ANALYSIS_RATE, AudioBuffer, ingest_audio
from .percussion import KickSnareDetector
from .spectral import onset_envelope, stft
from .structure import StructureSegmenter, load_external_segments
from .temperature import TemperatureQuantizer


class AudioAnalyzer(BaseEstimator):
    """Runs the full audio chain; parameters forward to the stage estimators.

    stem_files : optional (drums_path, rest_path) pair used verbatim.
    segment_file : optional external segment annotation path.
    """

    def __init__(self, sample_rate=ANALYSIS_RATE, window=2048, hop=512,
                 bpm_min=60.0, bpm_max=180.0, stem_files=None,
                 segment_file=None, keep_flash_in_cold=True):
        self.sample_rate = sample_rate
        self.window = window
        self.hop = hop
        self.bpm_min = bpm_min
        self.bpm_max = bpm_max
        self.stem_files = stem_files
        self.segment_file = segment_file
        self.keep_flash_in_cold = keep_flash_in_cold

    def fit(self, audio: AudioBuffer):
        duration = audio.duration
        spec = stft(audio, window=self.window, hop=self.hop)
        env = onset_envelope(spec)

        tracker = BeatTracker(bpm_min=self.bpm_min, bpm_max=self.bpm_max).fit(env)
        grid = tracker.grid()

        stems = self._stems(audio)
        events = KickSnareDetector(window=self.window, hop=self.hop) \
            .fit(stems.drums).events()
        events = PercussiveEvents(
            kicks=tuple(t for t in events.kicks if t < duration),
            snares=tuple(t for t in events.snares if t < duration))

        segments = self._segments(audio, grid, duration)
        quantizer = TemperatureQuantizer().fit(audio, segments)
        segments = tuple(replace(seg, temperature=temp)
                         for seg, temp in zip(segments, quantizer.temperatures_))

        self.result_ = AnalysisResult(
            duration=duration,
            beat_grid=grid,
            segments=segments,
            events=events,
            per_segment_median_rms=quantizer.normalized_medians_,
            provenance={"stemSource": stems.source},
        )
        return self

    def analyze_file(self, path: str | Path) -> AnalysisResult:
        return self.fit(ingest_audio(path, target_rate=self.sample_rate)).result_

    def _stems(self, audio: AudioBuffer) -> StemSet:
        if self.stem_files:
            drums_path, rest_path = self.stem_files
            return load_external_stems(drums_path, rest_path, audio)
        return HarmonicPercussiveSeparator(
            window=self.window, hop=self.hop).transform(audio)

    def _segments(self, audio, grid, duration) -> tuple[Segment, ...]:
        if self.segment_file:
            return load_external_segments(self.segment_file, duration)
        segmenter = StructureSegmenter(window=self.window, hop=self.hop)
        return segmenter.fit(audio, grid).segments_


def analyze(path: str | Path, **params) -> AnalysisResult:
    return AudioAnalyzer(**params).analyze_file(path)
