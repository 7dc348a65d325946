"""Short-time spectral analysis: STFT, inverse, and the onset envelope.

The onset envelope drives everything downstream (beats, kick/snare), so its
time convention matters.  Envelope step e measures flux between frames e and
e+1; calibration against synthetic click trains puts the perceptual onset at
the center of frame e+1 plus half a hop, which keeps peak times within ~7 ms
of ground truth at the default window/hop.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import InputError
from .io import AudioBuffer

DEFAULT_WINDOW = 2048
DEFAULT_HOP = 512
FLUX_LOG_GAIN = 100.0
FLUX_MEAN_WINDOW = 0.5  # seconds


@dataclass(frozen=True)
class Spectrogram:
    magnitudes: np.ndarray          # (frames, bins), non-negative
    frame_times: np.ndarray         # window-center times, constant hop
    bin_frequencies: np.ndarray
    window: int
    hop: int
    sample_rate: int
    stft: np.ndarray = field(repr=False, default=None)  # complex, for reconstruction

    @property
    def frame_rate(self) -> float:
        return self.sample_rate / self.hop


@dataclass(frozen=True)
class OnsetEnvelope:
    values: np.ndarray              # non-negative, length = frames - 1
    frame_rate: float
    time_offset: float              # time of values[0]

    def times(self) -> np.ndarray:
        return self.time_offset + np.arange(len(self.values)) / self.frame_rate

    def time_of(self, index: float) -> float:
        return self.time_offset + index / self.frame_rate


def stft(audio: AudioBuffer, window: int = DEFAULT_WINDOW,
         hop: int = DEFAULT_HOP) -> Spectrogram:
    if window & (window - 1) != 0:
        raise InputError(f"window {window} must be a power of two", code="bad-window")
    if window % hop != 0:
        raise InputError(f"hop {hop} must divide window {window}", code="bad-hop")
    x = audio.samples
    if len(x) < window:
        raise InputError("audio shorter than one analysis window", code="audio-too-short")
    n_frames = (len(x) - window) // hop + 1
    idx = np.arange(window)[None, :] + hop * np.arange(n_frames)[:, None]
    win = np.hanning(window)
    frames = x[idx] * win
    spec = np.fft.rfft(frames, axis=1)
    times = (hop * np.arange(n_frames) + window / 2) / audio.sample_rate
    freqs = np.fft.rfftfreq(window, 1.0 / audio.sample_rate)
    return Spectrogram(magnitudes=np.abs(spec), frame_times=times,
                       bin_frequencies=freqs, window=window, hop=hop,
                       sample_rate=audio.sample_rate, stft=spec)


def with_stft(spec: Spectrogram, new_stft: np.ndarray) -> Spectrogram:
    """Same geometry, new complex content (e.g. after masking)."""
    from dataclasses import replace
    return replace(spec, stft=new_stft, magnitudes=np.abs(new_stft))


def istft(spec: Spectrogram, length: int | None = None) -> np.ndarray:
    """Weighted overlap-add inverse; exact on the interior where the window
    overlap sums are complete."""
    if spec.stft is None:
        raise InputError("spectrogram carries no phase", code="no-phase")
    window, hop = spec.window, spec.hop
    frames = np.fft.irfft(spec.stft, n=window, axis=1)
    n_frames = frames.shape[0]
    total = (n_frames - 1) * hop + window
    win = np.hanning(window)
    y = np.zeros(total)
    norm = np.zeros(total)
    for k in range(n_frames):
        sl = slice(k * hop, k * hop + window)
        y[sl] += frames[k] * win
        norm[sl] += win * win
    y = y / np.maximum(norm, 1e-12)
    if length is not None:
        if length > total:
            y = np.concatenate([y, np.zeros(length - total)])
        else:
            y = y[:length]
    return y


def onset_envelope(spec: Spectrogram, log_gain: float = FLUX_LOG_GAIN,
                   mean_window: float = FLUX_MEAN_WINDOW) -> OnsetEnvelope:
    """Half-wave-rectified log-magnitude spectral flux, locally mean-subtracted."""
    if spec.magnitudes.shape[0] < 2:
        raise InputError("need at least two frames for an onset envelope",
                         code="too-few-frames")
    log_mag = np.log1p(log_gain * spec.magnitudes)
    flux = np.maximum(np.diff(log_mag, axis=0), 0.0).sum(axis=1)
    frame_rate = spec.frame_rate
    m = max(1, int(round(mean_window * frame_rate)) | 1)
    padded = np.pad(flux, m // 2, mode="edge")
    local_mean = np.convolve(padded, np.ones(m) / m, mode="valid")
    values = np.maximum(flux - local_mean, 0.0)
    # flux step e compares frames e and e+1; see module docstring
    offset = float(spec.frame_times[1] + spec.hop / (2.0 * spec.sample_rate))
    return OnsetEnvelope(values=values, frame_rate=frame_rate, time_offset=offset)


def band_onset_envelope(spec: Spectrogram, bands: list[tuple[float, float]],
                        log_gain: float = FLUX_LOG_GAIN,
                        mean_window: float = FLUX_MEAN_WINDOW) -> OnsetEnvelope:
    """Onset envelope restricted to the union of frequency bands (Hz)."""
    mask = np.zeros(len(spec.bin_frequencies), dtype=bool)
    for lo, hi in bands:
        mask |= (spec.bin_frequencies >= lo) & (spec.bin_frequencies <= hi)
    if not mask.any():
        raise InputError("frequency bands select no bins", code="empty-band")
    sub = Spectrogram(magnitudes=spec.magnitudes[:, mask],
                      frame_times=spec.frame_times,
                      bin_frequencies=spec.bin_frequencies[mask],
                      window=spec.window, hop=spec.hop,
                      sample_rate=spec.sample_rate)
    return onset_envelope(sub, log_gain=log_gain, mean_window=mean_window)


def band_energy(spec: Spectrogram, bands: list[tuple[float, float]]) -> np.ndarray:
    """Per-frame summed magnitude within the band union."""
    mask = np.zeros(len(spec.bin_frequencies), dtype=bool)
    for lo, hi in bands:
        mask |= (spec.bin_frequencies >= lo) & (spec.bin_frequencies <= hi)
    return spec.magnitudes[:, mask].sum(axis=1)
