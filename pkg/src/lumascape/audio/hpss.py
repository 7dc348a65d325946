"""Harmonic/percussive separation by median filtering of the spectrogram.

Horizontal (time-axis) medians keep sustained ridges, vertical
(frequency-axis) medians keep broadband transients; soft Wiener-style masks
split the mix so the two stems sum back to the input exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.ndimage import median_filter
from sklearn.base import BaseEstimator

from ..errors import InputError
from .io import AudioBuffer, ingest_audio
from .spectral import istft, stft, with_stft


@dataclass(frozen=True)
class StemSet:
    drums: AudioBuffer
    harmonic: AudioBuffer
    source: str  # "computed-hpss" or "external-files"


class HarmonicPercussiveSeparator(BaseEstimator):
    """Median-filtering source separator with soft masks.

    Parameters
    ----------
    kernel_time : median kernel across time frames (harmonic estimate).
    kernel_freq : median kernel across frequency bins (percussive estimate).
    window, hop : STFT parameters.
    eps : mask regularizer.
    """

    def __init__(self, kernel_time=17, kernel_freq=17, window=2048, hop=512,
                 eps=1e-10):
        self.kernel_time = kernel_time
        self.kernel_freq = kernel_freq
        self.window = window
        self.hop = hop
        self.eps = eps

    def transform(self, audio: AudioBuffer) -> StemSet:
        if audio.duration < 2.0:
            raise InputError("need at least 2 s of audio for stem separation",
                             code="audio-too-short")
        n = len(audio.samples)
        # pad so overlap-add normalization is complete across the real signal
        pad = self.window
        padded = AudioBuffer(
            samples=np.concatenate([np.zeros(pad), audio.samples, np.zeros(pad)]),
            sample_rate=audio.sample_rate)
        spec = stft(padded, window=self.window, hop=self.hop)
        mag = spec.magnitudes
        harm = median_filter(mag, size=(self.kernel_time, 1), mode="reflect")
        perc = median_filter(mag, size=(1, self.kernel_freq), mode="reflect")
        p2, h2 = perc ** 2, harm ** 2
        mask_p = p2 / (p2 + h2 + self.eps)
        mask_h = 1.0 - mask_p

        def reconstruct(mask):
            masked = with_stft(spec, spec.stft * mask)
            y = istft(masked, length=len(padded.samples))
            return AudioBuffer(samples=np.clip(y[pad:pad + n], -1.0, 1.0),
                               sample_rate=audio.sample_rate)

        return StemSet(drums=reconstruct(mask_p), harmonic=reconstruct(mask_h),
                       source="computed-hpss")


def load_external_stems(drums_path: str | Path, harmonic_path: str | Path,
                        reference: AudioBuffer,
                        max_drift: float = 0.05) -> StemSet:
    """External stem files used verbatim; durations must match the mix."""
    drums = ingest_audio(drums_path, target_rate=reference.sample_rate)
    harmonic = ingest_audio(harmonic_path, target_rate=reference.sample_rate)
    for name, stem in (("drums", drums), ("harmonic", harmonic)):
        if abs(stem.duration - reference.duration) > max_drift:
            raise InputError(
                f"external {name} stem duration {stem.duration:.3f}s differs from "
                f"input {reference.duration:.3f}s by more than {max_drift * 1000:.0f} ms",
                code="stem-duration-mismatch")
    # trim/pad the residual few samples so lengths match exactly
    n = len(reference.samples)

    def fit(stem: AudioBuffer) -> AudioBuffer:
        s = stem.samples
        if len(s) > n:
            s = s[:n]
        elif len(s) < n:
            s = np.concatenate([s, np.zeros(n - len(s))])
        return AudioBuffer(samples=s, sample_rate=stem.sample_rate)

    return StemSet(drums=fit(drums), harmonic=fit(harmonic), source="external-files")
