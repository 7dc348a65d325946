"""Tempo estimation and beat tracking.

Global tempo comes from the autocorrelation peak of the onset envelope
(parabolically refined to sub-frame lag).  The beat sequence maximizes
    sum env(b_i) - tightness * sum log(delta_i / period)^2
by dynamic programming over envelope frames; downbeats assume 4/4 and take
the beat phase with the strongest summed envelope, earliest phase winning
ties.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator

from ..errors import LumascapeError
from ..model import BeatGrid
from .spectral import OnsetEnvelope


class NoBeatError(LumascapeError):
    code = "no-beat-found"


class BeatTracker(BaseEstimator):
    """Estimator: fit() on an OnsetEnvelope, read bpm_/beat_times_/downbeat_times_."""

    def __init__(self, bpm_min=60.0, bpm_max=180.0, tightness=100.0,
                 beats_per_bar=4, trim_fraction=0.1):
        self.bpm_min = bpm_min
        self.bpm_max = bpm_max
        self.tightness = tightness
        self.beats_per_bar = beats_per_bar
        self.trim_fraction = trim_fraction

    def fit(self, envelope: OnsetEnvelope):
        values = np.asarray(envelope.values, dtype=np.float64)
        if float(np.var(values)) < 1e-8:
            raise NoBeatError("onset envelope too flat to track beats")
        if len(values) < 4 * envelope.frame_rate:
            raise NoBeatError("need several seconds of envelope to track beats")

        fr = envelope.frame_rate
        env = values / values.std()

        self.bpm_ = self._estimate_tempo(env, fr)
        beat_frames = self._dp_beats(env, fr, self.bpm_)
        beat_frames = self._trim_weak_ends(env, beat_frames)
        if len(beat_frames) == 0:
            raise NoBeatError("no beats survived tracking")
        self.beat_frames_ = beat_frames
        self.beat_times_ = np.array([envelope.time_of(i) for i in beat_frames])
        phase = self._downbeat_phase(env, beat_frames)
        self.downbeat_times_ = self.beat_times_[phase::self.beats_per_bar]
        return self

    def grid(self) -> BeatGrid:
        return BeatGrid(bpm=float(self.bpm_),
                        beats=tuple(float(t) for t in self.beat_times_),
                        downbeats=tuple(float(t) for t in self.downbeat_times_))

    # -- internals ---------------------------------------------------------

    def _estimate_tempo(self, env, fr) -> float:
        centered = env - env.mean()
        acf = np.correlate(centered, centered, mode="full")[len(centered) - 1:]
        lag_min = max(2, int(np.floor(60.0 * fr / self.bpm_max)))
        lag_max = min(len(acf) - 2, int(np.ceil(60.0 * fr / self.bpm_min)))
        if lag_max <= lag_min:
            raise NoBeatError("envelope too short for the tempo range")
        lag = lag_min + int(np.argmax(acf[lag_min:lag_max + 1]))
        a, b, c = acf[lag - 1], acf[lag], acf[lag + 1]
        denom = a - 2 * b + c
        delta = 0.0 if denom == 0 else 0.5 * (a - c) / denom
        delta = float(np.clip(delta, -0.5, 0.5))
        refined = lag + delta
        bpm = 60.0 * fr / refined
        return float(np.clip(bpm, self.bpm_min, self.bpm_max))

    def _dp_beats(self, env, fr, bpm) -> np.ndarray:
        period = 60.0 * fr / bpm
        offsets = np.arange(-int(round(2 * period)), -int(round(period / 2)) + 1)
        penalty = -self.tightness * np.log(-offsets / period) ** 2

        n = len(env)
        cumscore = np.zeros(n)
        backlink = np.full(n, -1, dtype=np.int64)
        threshold = 0.01 * env.max()
        first_beat = True
        for i in range(n):
            window = i + offsets
            valid = window >= 0
            if valid.any():
                cands = penalty[valid] + cumscore[window[valid]]
                best = int(np.argmax(cands))
                cumscore[i] = env[i] + cands[best]
                if first_beat and env[i] < threshold:
                    backlink[i] = -1
                else:
                    backlink[i] = window[valid][best]
                    first_beat = False
            else:
                cumscore[i] = env[i]

        # last beat: strongest plausible cumscore local maximum near the end
        pad = np.pad(cumscore, 1, mode="edge")
        is_max = (cumscore > pad[:-2]) & (cumscore >= pad[2:])
        maxima = np.flatnonzero(is_max)
        if len(maxima) == 0:
            raise NoBeatError("degenerate cumulative score")
        med = np.median(cumscore[maxima])
        good = maxima[cumscore[maxima] >= 0.5 * med]
        tail = int(good[-1]) if len(good) else int(maxima[-1])

        beats = [tail]
        while backlink[beats[-1]] >= 0:
            beats.append(int(backlink[beats[-1]]))
        return np.array(beats[::-1], dtype=np.int64)

    def _trim_weak_ends(self, env, beat_frames) -> np.ndarray:
        """Drop leading/trailing beats without envelope support (silence)."""
        if len(beat_frames) == 0:
            return beat_frames
        support = env[beat_frames]
        floor = self.trim_fraction * float(np.median(support))
        lo, hi = 0, len(beat_frames)
        while lo < hi and support[lo] < floor:
            lo += 1
        while hi > lo and support[hi - 1] < floor:
            hi -= 1
        return beat_frames[lo:hi]

    def _downbeat_phase(self, env, beat_frames) -> int:
        best_phase, best_score = 0, -np.inf
        for phase in range(min(self.beats_per_bar, len(beat_frames))):
            score = float(env[beat_frames[phase::self.beats_per_bar]].sum())
            if score > best_score + 1e-12:
                best_phase, best_score = phase, score
        return best_phase


def track_beats(envelope: OnsetEnvelope, bpm_min=60.0, bpm_max=180.0,
                **kwargs) -> BeatGrid:
    return BeatTracker(bpm_min=bpm_min, bpm_max=bpm_max, **kwargs).fit(envelope).grid()
