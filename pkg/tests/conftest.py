"""Shared synthetic-signal builders and document fixtures."""

import numpy as np
import pytest

from lumascape.audio import AudioBuffer
from lumascape.model import Color, ColorPalette, derive_soft

SR = 44100


def pink_noise(n, rng):
    """1/f-shaped noise, unit peak."""
    spec = rng.standard_normal(n // 2 + 1) + 1j * rng.standard_normal(n // 2 + 1)
    freq = np.fft.rfftfreq(n, 1.0 / SR)
    freq[0] = freq[1]
    spec /= np.sqrt(freq)
    y = np.fft.irfft(spec, n)
    return y / np.max(np.abs(y))


def click_track(bpm, duration, lead_in=0.5, noise_db=-20.0, seed=0,
                click_width=32):
    """Ramped click train over a pink-noise bed.  Returns (buffer, truth)."""
    rng = np.random.default_rng(seed)
    n = int(duration * SR)
    x = np.zeros(n)
    period = 60.0 / bpm
    truth = []
    t = lead_in
    i = 0
    while t < duration - lead_in:
        p = int(round(t * SR))
        amp = 0.5 + 0.5 * ((i % 4) == 0)
        end = min(n, p + click_width)
        x[p:end] += amp * np.hanning(2 * click_width)[click_width:click_width + end - p]
        truth.append(p / SR)
        t += period
        i += 1
    if noise_db is not None:
        x += pink_noise(n, rng) * 10.0 ** (noise_db / 20.0)
    x = x / max(1.0, np.max(np.abs(x)))
    return AudioBuffer(samples=x, sample_rate=SR), np.array(truth)


def sine_click_mixture(duration=6.0, sine_hz=220.0, click_spacing=0.5,
                       click_amp=0.9, sine_amp=0.3):
    """Sustained sine plus periodic single-sample clicks; returns
    (mix, sine_only, clicks, click_times)."""
    n = int(duration * SR)
    t = np.arange(n) / SR
    sine = sine_amp * np.sin(2 * np.pi * sine_hz * t)
    clicks = np.zeros(n)
    click_times = []
    ct = 0.25
    while ct < duration - 0.25:
        p = int(round(ct * SR))
        clicks[p] = click_amp
        click_times.append(p / SR)
        ct += click_spacing
    mix = np.clip(sine + clicks, -1.0, 1.0)
    return (AudioBuffer(samples=mix, sample_rate=SR), sine, clicks,
            np.array(click_times))


def burst(freq, length, sr=SR, attack=0.01, noise_mix=0.0, noise_band=None,
          seed=0):
    """Decaying tone burst with a smooth attack; optional band-limited noise
    component (snare crack lives in the kHz range, not the kick band)."""
    n = int(length * sr)
    t = np.arange(n) / sr
    env = np.exp(-t / (length / 4))
    ramp = np.minimum(1.0, t / attack)
    tone = np.sin(2 * np.pi * freq * t)
    if noise_mix > 0:
        rng = np.random.default_rng(seed)
        noise = rng.standard_normal(n)
        if noise_band is not None:
            spec = np.fft.rfft(noise)
            freqs = np.fft.rfftfreq(n, 1.0 / sr)
            spec[(freqs < noise_band[0]) | (freqs > noise_band[1])] = 0.0
            noise = np.fft.irfft(spec, n)
            noise /= max(1e-9, np.abs(noise).max())
        tone = (1 - noise_mix) * tone + noise_mix * noise
    return env * ramp * tone


def drum_pattern(kick_times, snare_times, duration, kick_hz=60.0,
                 snare_hz=200.0):
    """Synthetic kit: low decaying-sine kicks, tone-plus-crack snares."""
    n = int(duration * SR)
    x = np.zeros(n)
    for kt in kick_times:
        b = 0.9 * burst(kick_hz, 0.12)
        p = int(round(kt * SR))
        x[p:p + len(b)] += b[:max(0, n - p)]
    for i, st in enumerate(snare_times):
        b = 0.7 * burst(snare_hz, 0.08, noise_mix=0.5, noise_band=(1000, 4000),
                        seed=100 + i)
        p = int(round(st * SR))
        x[p:p + len(b)] += b[:max(0, n - p)]
    x = np.clip(x, -1.0, 1.0)
    return AudioBuffer(samples=x, sample_rate=SR)


def two_texture_track(switch=20.0, duration=40.0, seed=3):
    """White noise then pure tone: one structural boundary at `switch`."""
    rng = np.random.default_rng(seed)
    n = int(duration * SR)
    cut = int(switch * SR)
    x = np.zeros(n)
    x[:cut] = 0.3 * rng.standard_normal(cut)
    t = np.arange(n - cut) / SR
    x[cut:] = 0.4 * np.sin(2 * np.pi * 330.0 * t)
    return AudioBuffer(samples=np.clip(x, -1, 1), sample_rate=SR)


def stepped_energy_track(levels, seg_len=4.0, tone_hz=220.0):
    """Constant-frequency tone whose amplitude steps per segment."""
    n_seg = len(levels)
    n = int(n_seg * seg_len * SR)
    t = np.arange(n) / SR
    amp = np.zeros(n)
    for i, level in enumerate(levels):
        lo, hi = int(i * seg_len * SR), int((i + 1) * seg_len * SR)
        amp[lo:hi] = level
    x = amp * np.sin(2 * np.pi * tone_hz * t)
    return AudioBuffer(samples=x, sample_rate=SR)


def song_fixture(duration=24.0, bpm=120.0, seed=11):
    """A structured little track: quiet tone-only intro, then a loud section
    with kicks on the beat, snares on the off-beat, and a brighter tone."""
    n = int(duration * SR)
    t = np.arange(n) / SR
    x = np.zeros(n)
    half = duration / 2.0
    quiet = t < half
    x[quiet] += 0.08 * np.sin(2 * np.pi * 220.0 * t[quiet])
    x[~quiet] += 0.35 * np.sin(2 * np.pi * 330.0 * t[~quiet])
    period = 60.0 / bpm
    kicks, snares = [], []
    bt = 0.5
    while bt < duration - 0.5:
        loud = bt >= half
        amp = 0.9 if loud else 0.25
        b = amp * burst(60.0, 0.12)
        p = int(round(bt * SR))
        x[p:p + len(b)] += b[:max(0, n - p)]
        kicks.append(bt)
        if loud:
            sb = 0.6 * burst(200.0, 0.08, noise_mix=0.5, noise_band=(1000, 4000),
                             seed=seed + len(snares))
            sp = int(round((bt + period / 2) * SR))
            if sp + len(sb) < n:
                x[sp:sp + len(sb)] += sb
                snares.append(bt + period / 2)
        bt += period
    x = np.clip(x, -1.0, 1.0)
    return AudioBuffer(samples=x, sample_rate=SR), kicks, snares


def match_events(detected, truth, tolerance):
    """Greedy one-to-one matching; returns (hits, precision, recall, f1)."""
    detected = sorted(detected)
    used = [False] * len(truth)
    hits = 0
    for d in detected:
        best, best_err = -1, tolerance
        for i, tt in enumerate(truth):
            if used[i]:
                continue
            err = abs(d - tt)
            if err <= best_err:
                best, best_err = i, err
        if best >= 0:
            used[best] = True
            hits += 1
    precision = hits / len(detected) if detected else 0.0
    recall = hits / len(truth) if len(truth) else 0.0
    f1 = (2 * precision * recall / (precision + recall)
          if precision + recall > 0 else 0.0)
    return hits, precision, recall, f1


@pytest.fixture
def palette():
    primary = Color.from_hsv(0.0, 1.0, 1.0)
    secondary = Color.from_hsv(240.0, 1.0, 1.0)
    return ColorPalette(
        primary=primary, soft_primary=derive_soft(primary),
        secondary=secondary, soft_secondary=derive_soft(secondary),
        background=Color.from_rgb(128, 128, 128),
    )
