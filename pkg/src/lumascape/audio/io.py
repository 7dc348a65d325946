"""Audio ingestion: WAV reading, mixdown, and resampling."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np
from scipy.io import wavfile
from scipy.signal import resample_poly

from ..errors import InputError

ANALYSIS_RATE = 44100


@dataclass(frozen=True)
class AudioBuffer:
    """Mono audio, samples in [-1, 1]."""

    samples: np.ndarray
    sample_rate: int

    def __post_init__(self):
        if self.samples.ndim != 1 or len(self.samples) == 0:
            raise InputError("audio buffer must be non-empty and mono",
                             code="empty-audio")
        if not np.all(np.isfinite(self.samples)):
            raise InputError("audio buffer contains non-finite samples",
                             code="non-finite-audio")

    @property
    def duration(self) -> float:
        return len(self.samples) / self.sample_rate

    def __eq__(self, other):
        return (isinstance(other, AudioBuffer)
                and self.sample_rate == other.sample_rate
                and np.array_equal(self.samples, other.samples))


def ingest_audio(path: str | Path, target_rate: int = ANALYSIS_RATE) -> AudioBuffer:
    """Load a PCM WAV (16-bit int or 32-bit float, 1-2 channels) as mono
    float at target_rate.  Multi-channel input is averaged; rate conversion
    uses polyphase windowed-sinc resampling."""
    path = Path(path)
    if not path.is_file():
        raise InputError(f"audio file not found: {path}", code="missing-file")
    try:
        rate, data = wavfile.read(str(path))
    except ValueError as exc:
        raise InputError(f"cannot read WAV {path}: {exc}", code="unsupported-codec") from exc
    if data.size == 0:
        raise InputError(f"empty audio file: {path}", code="empty-audio")

    if data.dtype == np.int16:
        samples = data.astype(np.float64) / 32768.0
    elif data.dtype == np.float32 or data.dtype == np.float64:
        samples = data.astype(np.float64)
    else:
        raise InputError(f"unsupported WAV sample format {data.dtype} "
                         "(need 16-bit PCM or 32-bit float)", code="unsupported-bit-depth")

    if samples.ndim == 2:
        if samples.shape[1] > 2:
            raise InputError(f"{samples.shape[1]}-channel WAV not supported",
                             code="too-many-channels")
        samples = samples.mean(axis=1)

    if rate != target_rate:
        ratio = Fraction(target_rate, rate).limit_denominator(1000)
        samples = resample_poly(samples, ratio.numerator, ratio.denominator)
    samples = np.clip(samples, -1.0, 1.0)
    return AudioBuffer(samples=samples, sample_rate=target_rate)


def write_wav(path: str | Path, audio: AudioBuffer) -> None:
    wavfile.write(str(path), audio.sample_rate, audio.samples.astype(np.float32))
