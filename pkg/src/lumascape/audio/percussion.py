"""Kick and snare event detection from the drum stem.

Band-limited onset envelopes (kick: low band; snare: body plus crack bands)
are peak-picked against a moving median plus a global-MAD margin, with a
per-class minimum inter-onset interval and a local energy refinement.
"""

from __future__ import annotations

import numpy as np
from scipy.ndimage import median_filter
from sklearn.base import BaseEstimator

from ..model import PercussiveEvents
from .io import AudioBuffer
from .spectral import band_energy, band_onset_envelope, stft


class KickSnareDetector(BaseEstimator):
    """Thresholds follow moving-median + mad_delta * global MAD; band_log_gain
    keeps flux roughly proportional to energy so strong hits dominate cross-band
    leakage, and floor_ratio screens numerical dust when the envelope is sparse
    (a silent-background stem has zero MAD, which would otherwise let any
    positive ripple through)."""

    def __init__(self, kick_band=(30.0, 120.0),
                 snare_bands=((150.0, 400.0), (1000.0, 4000.0)),
                 mad_delta=2.0, min_interval=0.1, median_window=1.0,
                 band_log_gain=1.0, floor_ratio=0.25, window=2048, hop=512):
        self.kick_band = kick_band
        self.snare_bands = snare_bands
        self.mad_delta = mad_delta
        self.min_interval = min_interval
        self.median_window = median_window
        self.band_log_gain = band_log_gain
        self.floor_ratio = floor_ratio
        self.window = window
        self.hop = hop

    def fit(self, drums: AudioBuffer):
        if len(drums.samples) < self.window * 2:
            self.kicks_, self.snares_ = (), ()
            return self
        spec = stft(drums, window=self.window, hop=self.hop)
        self.kicks_ = self._detect(spec, [tuple(self.kick_band)])
        self.snares_ = self._detect(spec, [tuple(b) for b in self.snare_bands])
        return self

    def events(self) -> PercussiveEvents:
        return PercussiveEvents(kicks=self.kicks_, snares=self.snares_)

    def _detect(self, spec, bands) -> tuple[float, ...]:
        env = band_onset_envelope(spec, bands, log_gain=self.band_log_gain)
        values = env.values
        if len(values) == 0 or float(values.max()) <= 0.0:
            return ()
        frame_rate = env.frame_rate
        med_win = max(1, int(round(self.median_window * frame_rate)) | 1)
        moving_med = median_filter(values, size=med_win, mode="nearest")
        mad = float(np.median(np.abs(values - np.median(values))))
        threshold = np.maximum(moving_med + self.mad_delta * max(mad, 1e-12),
                               self.floor_ratio * float(values.max()))

        padded = np.pad(values, 1, mode="edge")
        is_peak = (values > padded[:-2]) & (values >= padded[2:]) & (values > threshold)
        peaks = np.flatnonzero(is_peak)
        if len(peaks) == 0:
            return ()

        # strongest-first selection under the inter-onset floor
        order = peaks[np.argsort(values[peaks], kind="stable")[::-1]]
        min_gap = self.min_interval * frame_rate
        accepted: list[int] = []
        for idx in order:
            if all(abs(idx - a) >= min_gap for a in accepted):
                accepted.append(int(idx))

        # refine each event to the local band-energy maximum (+-1 frame)
        energy = band_energy(spec, bands)
        times = []
        for e in sorted(accepted):
            frame = e + 1  # envelope step e gains energy at frame e+1
            lo, hi = max(0, frame - 1), min(len(energy) - 1, frame + 1)
            best = lo + int(np.argmax(energy[lo:hi + 1]))
            times.append(env.time_of(best - 1))
        times = sorted(t for t in times if t >= 0.0)
        # refinement can nudge neighbors together; re-apply the floor
        kept: list[float] = []
        for t in times:
            if not kept or t - kept[-1] >= self.min_interval:
                kept.append(float(t))
        return tuple(kept)


def detect_kick_snare(drums: AudioBuffer, **kwargs) -> PercussiveEvents:
    return KickSnareDetector(**kwargs).fit(drums).events()
