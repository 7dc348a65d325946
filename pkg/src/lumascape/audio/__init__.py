"""Audio-side analysis: ingestion, spectral substrate, separation, beats,
structure, percussion events, and temperature."""

from .analyzer import AudioAnalyzer, analyze
from .beats import BeatTracker, NoBeatError, track_beats
from .hpss import HarmonicPercussiveSeparator, StemSet, load_external_stems
from .io import ANALYSIS_RATE, AudioBuffer, ingest_audio, write_wav
from .percussion import KickSnareDetector, detect_kick_snare
from .spectral import (OnsetEnvelope, Spectrogram, band_energy,
                       band_onset_envelope, istft, onset_envelope, stft,
                       with_stft)
from .structure import (StructureSegmenter, checkerboard_kernel,
                        load_external_segments, mel_filterbank)
from .temperature import (TemperatureQuantizer, cluster_rank_to_level,
                          compute_temperature, kmeans_1d_exact)

__all__ = [
    "ANALYSIS_RATE", "AudioAnalyzer", "AudioBuffer", "BeatTracker",
    "HarmonicPercussiveSeparator", "KickSnareDetector", "NoBeatError",
    "OnsetEnvelope", "Spectrogram", "StemSet", "StructureSegmenter",
    "TemperatureQuantizer", "analyze", "band_energy", "band_onset_envelope",
    "checkerboard_kernel", "cluster_rank_to_level", "compute_temperature",
    "detect_kick_snare", "ingest_audio", "istft", "kmeans_1d_exact",
    "load_external_segments", "load_external_stems", "mel_filterbank",
    "onset_envelope", "stft", "track_beats", "with_stft", "write_wav",
]
