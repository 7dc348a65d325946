"""Dominant color extraction and palette assembly.

Pixels from the hottest segment's frames are clustered with k-means in RGB
(deterministic k-means++ seeding, Lloyd refinement); clusters split into
saturated candidates (primary/secondary by weight) and an unsaturated
background, with hue-rotation and desaturation fallbacks when a side is
missing.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator

from ..errors import InputError
from ..model import (Color, ColorPalette, Segment, derive_soft, rotate_hue,
                     with_saturation_value)
from .frames import FrameSet

KMEANS_SEED = 0xC0FFEE
SATURATION_SPLIT = 0.25


def select_salient_segment(segments) -> Segment:
    """Hottest segment; ties prefer longer, then earlier."""
    if not segments:
        raise InputError("no segments to choose from", code="no-segments")
    return max(segments,
               key=lambda s: (s.temperature, s.duration, -s.start))


def _pixel_matrix(frames: FrameSet, max_pixels: int) -> np.ndarray:
    stacks = [img.reshape(-1, 3) for _, img in frames.frames]
    pixels = np.concatenate(stacks, axis=0)
    if len(pixels) > max_pixels:
        stride = -(-len(pixels) // max_pixels)
        pixels = pixels[::stride]
    return pixels.astype(np.float64)


def _saturation(pixels: np.ndarray) -> np.ndarray:
    mx = pixels.max(axis=1)
    mn = pixels.min(axis=1)
    with np.errstate(invalid="ignore", divide="ignore"):
        sat = np.where(mx > 0, (mx - mn) / np.maximum(mx, 1e-12), 0.0)
    return sat


class ColorCluster:
    __slots__ = ("centroid", "weight", "mean_saturation")

    def __init__(self, centroid: Color, weight: float, mean_saturation: float):
        self.centroid = centroid
        self.weight = weight
        self.mean_saturation = mean_saturation

    def __repr__(self):
        return (f"ColorCluster({self.centroid.rgb()}, weight={self.weight:.3f}, "
                f"sat={self.mean_saturation:.3f})")


class ColorExtractor(BaseEstimator):
    """k-means over sampled pixels; clusters_ sorted by descending weight.

    Textured footage makes k-means split one dominant color into several
    nearby centroids, which would let a lesser color out-rank it by weight;
    clusters closer than merge_distance are therefore pooled before ranking.
    """

    def __init__(self, n_colors=5, max_pixels=50_000, seed=KMEANS_SEED,
                 tol=0.5, max_iter=50, merge_distance=25.0):
        self.n_colors = n_colors
        self.max_pixels = max_pixels
        self.seed = seed
        self.tol = tol
        self.max_iter = max_iter
        self.merge_distance = merge_distance

    def fit(self, frames: FrameSet):
        if not frames.frames:
            raise InputError("no frames to extract colors from", code="no-frames")
        pixels = _pixel_matrix(frames, self.max_pixels)
        k = min(self.n_colors, len(np.unique(pixels, axis=0)))
        centroids = self._kmeans_pp_init(pixels, k)
        centroids, labels = self._lloyd(pixels, centroids)

        saturation = _saturation(pixels)
        raw = []
        for c in range(len(centroids)):
            member = labels == c
            count = int(member.sum())
            if count == 0:
                continue  # degenerate input collapses to fewer clusters
            raw.append((centroids[c], count / len(pixels),
                        float(saturation[member].mean())))
        clusters = [
            ColorCluster(centroid=Color.from_rgb(*np.round(centroid).astype(int)),
                         weight=weight, mean_saturation=sat)
            for centroid, weight, sat in self._merge_close(raw)]
        clusters.sort(key=lambda cl: -cl.weight)
        self.clusters_ = clusters
        return self

    def _merge_close(self, raw):
        """Pool clusters whose centroids sit within merge_distance."""
        merged = list(raw)
        while len(merged) > 1:
            best = None
            for i in range(len(merged)):
                for j in range(i + 1, len(merged)):
                    dist = float(np.linalg.norm(merged[i][0] - merged[j][0]))
                    if dist <= self.merge_distance and \
                            (best is None or dist < best[0]):
                        best = (dist, i, j)
            if best is None:
                break
            _, i, j = best
            (c1, w1, s1), (c2, w2, s2) = merged[i], merged[j]
            total = w1 + w2
            pooled = ((c1 * w1 + c2 * w2) / total, total,
                      (s1 * w1 + s2 * w2) / total)
            merged = [m for idx, m in enumerate(merged) if idx not in (i, j)]
            merged.append(pooled)
        return merged

    def _kmeans_pp_init(self, pixels, k):
        rng = np.random.default_rng(self.seed)
        centroids = [pixels[rng.integers(len(pixels))]]
        for _ in range(1, k):
            d2 = np.min(
                [np.sum((pixels - c) ** 2, axis=1) for c in centroids], axis=0)
            total = d2.sum()
            if total <= 0:
                centroids.append(pixels[rng.integers(len(pixels))])
                continue
            probs = d2 / total
            centroids.append(pixels[rng.choice(len(pixels), p=probs)])
        return np.array(centroids, dtype=np.float64)

    def _lloyd(self, pixels, centroids):
        labels = np.zeros(len(pixels), dtype=np.int64)
        for _ in range(self.max_iter):
            dists = ((pixels[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)
            labels = np.argmin(dists, axis=1)
            moved = 0.0
            for c in range(len(centroids)):
                member = labels == c
                if member.any():
                    new = pixels[member].mean(axis=0)
                    moved = max(moved, float(np.abs(new - centroids[c]).max()))
                    centroids[c] = new
            if moved < self.tol:
                break
        dists = ((pixels[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)
        return centroids, np.argmin(dists, axis=1)


def assign_roles(clusters) -> tuple[Color, Color, Color]:
    """(primary, secondary, background) per the weight/saturation rules."""
    if not clusters:
        raise InputError("no color clusters", code="no-clusters")
    saturated = [c for c in clusters if c.mean_saturation >= SATURATION_SPLIT]
    unsaturated = [c for c in clusters if c.mean_saturation < SATURATION_SPLIT]

    primary = (saturated[0] if saturated else clusters[0]).centroid
    if len(saturated) >= 2:
        secondary = saturated[1].centroid
    else:
        secondary = rotate_hue(primary, 120.0)
    if unsaturated:
        background = unsaturated[0].centroid
    else:
        background = with_saturation_value(primary, s=0.1, v=0.9)
    return primary, secondary, background


def build_palette(primary: Color, secondary: Color, background: Color) -> ColorPalette:
    return ColorPalette(
        primary=primary,
        soft_primary=derive_soft(primary),
        secondary=secondary,
        soft_secondary=derive_soft(secondary),
        background=background,
    )


def extract_palette(frames: FrameSet, n_colors: int = 5, **kwargs) -> ColorPalette:
    extractor = ColorExtractor(n_colors=n_colors, **kwargs).fit(frames)
    return build_palette(*assign_roles(extractor.clusters_))
