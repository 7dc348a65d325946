"""Per-segment energy temperature on the 1-5 scale.

Median short-window RMS per segment, min-max normalized across segments,
then quantized by one-dimensional k-means.  The 1-D problem is solved
exactly: optimal clusters are contiguous in sorted order, so a dynamic
program over prefix statistics finds the global SSE optimum
deterministically (Lloyd iterations from quantile seeds can stall in local
optima, which the exactness contract here does not allow).
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator

from ..errors import InputError
from ..model import Segment
from .io import AudioBuffer

RMS_WINDOW = 0.5
RMS_HOP = 0.25


def kmeans_1d_exact(values: np.ndarray, k: int) -> tuple[np.ndarray, np.ndarray]:
    """Globally optimal 1-D k-means.

    Returns (labels, centroids) with clusters ordered ascending by centroid.
    Labels follow the sorted-contiguity structure of the optimum; ties pick
    the earliest split, so results are deterministic.
    """
    x = np.asarray(values, dtype=np.float64)
    n = len(x)
    if not 1 <= k <= n:
        raise InputError(f"k={k} outside [1, {n}]", code="bad-k")
    order = np.argsort(x, kind="stable")
    xs = x[order]
    pref = np.concatenate([[0.0], np.cumsum(xs)])
    pref2 = np.concatenate([[0.0], np.cumsum(xs ** 2)])

    def sse(i: int, j: int) -> float:
        # SSE of xs[i..j] inclusive
        count = j - i + 1
        total = pref[j + 1] - pref[i]
        return max(0.0, (pref2[j + 1] - pref2[i]) - total * total / count)

    cost = np.full((k, n), np.inf)
    split = np.zeros((k, n), dtype=np.int64)
    for j in range(n):
        cost[0, j] = sse(0, j)
    for m in range(1, k):
        for j in range(m, n):
            best, best_i = np.inf, m
            for i in range(m, j + 1):
                c = cost[m - 1, i - 1] + sse(i, j)
                if c < best - 1e-15:
                    best, best_i = c, i
            cost[m, j] = best
            split[m, j] = best_i

    bounds = [n]
    j = n - 1
    for m in range(k - 1, 0, -1):
        i = int(split[m, j])
        bounds.append(i)
        j = i - 1
    bounds.append(0)
    bounds.reverse()

    labels_sorted = np.empty(n, dtype=np.int64)
    centroids = np.empty(k)
    for c in range(k):
        lo, hi = bounds[c], bounds[c + 1]
        labels_sorted[lo:hi] = c
        centroids[c] = xs[lo:hi].mean()
    labels = np.empty(n, dtype=np.int64)
    labels[order] = labels_sorted
    return labels, centroids


def cluster_rank_to_level(rank: int, k: int) -> int:
    """Map ascending cluster rank (1-based) among k clusters onto 1..5."""
    if k == 1:
        return 3
    return int(np.floor(1 + 4 * (rank - 1) / (k - 1) + 0.5))


class TemperatureQuantizer(BaseEstimator):
    def __init__(self, rms_window=RMS_WINDOW, rms_hop=RMS_HOP, n_levels=5):
        self.rms_window = rms_window
        self.rms_hop = rms_hop
        self.n_levels = n_levels

    def fit(self, audio: AudioBuffer, segments: list[Segment]):
        if not segments:
            raise InputError("need at least one segment", code="no-segments")
        medians = np.array([self._segment_median_rms(audio, s) for s in segments])
        span = medians.max() - medians.min()
        if span < 1e-12:
            normalized = np.full(len(medians), 0.5)
        else:
            normalized = (medians - medians.min()) / span
        k = min(self.n_levels, len(np.unique(normalized)))
        labels, _ = kmeans_1d_exact(normalized, k)
        # exact solver returns clusters already ascending by centroid
        self.temperatures_ = tuple(
            cluster_rank_to_level(int(label) + 1, k) for label in labels)
        self.normalized_medians_ = tuple(float(v) for v in normalized)
        return self

    def _segment_median_rms(self, audio: AudioBuffer, segment: Segment) -> float:
        sr = audio.sample_rate
        start, end = int(round(segment.start * sr)), int(round(segment.end * sr))
        if end <= start:
            raise InputError(f"zero-duration segment at {segment.start}",
                             code="segment-empty")
        win = int(round(self.rms_window * sr))
        hop = int(round(self.rms_hop * sr))
        x = audio.samples
        centers_rms = []
        k = 0
        while k * hop + win <= len(x):
            center = (k * hop + win / 2) / sr
            if segment.start <= center < segment.end:
                block = x[k * hop:k * hop + win]
                centers_rms.append(float(np.sqrt(np.mean(block ** 2))))
            k += 1
        if centers_rms:
            return float(np.median(centers_rms))
        block = x[start:min(end, len(x))]
        return float(np.sqrt(np.mean(block ** 2))) if len(block) else 0.0


def compute_temperature(audio: AudioBuffer, segments: list[Segment],
                        **kwargs) -> tuple[tuple[int, ...], tuple[float, ...]]:
    q = TemperatureQuantizer(**kwargs).fit(audio, segments)
    return q.temperatures_, q.normalized_medians_
