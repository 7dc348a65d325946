"""Rule-based mapping from analysis + palette to light objects.

Kicks flash the primary color full-width; snares flash the secondary color
half-width, alternating sides.  Each segment carries layered ambience by
temperature band: a soft-primary brightness-modulated base everywhere, a
soft-secondary spatial sweep from temperature 3, and a beat-locked pulse in
brightened background color at temperature 5.  Layers from adjacent
segments crossfade symmetrically around boundaries so summed intensity
stays continuous.
"""

from __future__ import annotations

import logging
import math

from ..errors import InputError
from ..model import (AnalysisResult, Color, ColorPalette, Keyframe, Lightscape,
                     LightObject, ModulationKind, ObjectKind, PercussiveEvents,
                     Segment, Spatial, SCHEMA_VERSION, require_valid,
                     with_saturation_value)
from .config import SynthesisConfig

log = logging.getLogger("lumascape.synth")

Z_AMBIENT, Z_SWEEP, Z_PULSE, Z_FLASH = 0, 1, 2, 10


def q6(x: float) -> float:
    return round(float(x), 6)


def synthesize_events(events: PercussiveEvents, palette: ColorPalette,
                      cfg: SynthesisConfig, song_duration: float,
                      ) -> list[LightObject]:
    """One flash per kick and per snare, clipped at song end."""
    flashes: list[LightObject] = []

    def clipped_envelope(env, available):
        attack = min(env.attack, available)
        hold = min(env.hold, max(0.0, available - attack))
        release = min(env.release, max(0.0, available - attack - hold))
        from ..model import Envelope
        return Envelope(attack, hold, release)

    for i, t in enumerate(events.kicks):
        if t >= song_duration:
            continue
        env = clipped_envelope(cfg.kick_envelope, song_duration - t)
        flashes.append(LightObject(
            id=f"kick-{i:04d}", kind=ObjectKind.FLASH,
            start=t, end=t + env.total,
            spatial=Spatial(center=0.5, width=1.0),
            color_role="primary", envelope=env, z_order=Z_FLASH))
    for i, t in enumerate(events.snares):
        if t >= song_duration:
            continue
        env = clipped_envelope(cfg.snare_envelope, song_duration - t)
        center = (0.25 if i % 2 == 0 else 0.75) if cfg.snare_alternate else 0.5
        flashes.append(LightObject(
            id=f"snare-{i:04d}", kind=ObjectKind.FLASH,
            start=t, end=t + env.total,
            spatial=Spatial(center=center, width=0.5),
            color_role="secondary", envelope=env, z_order=Z_FLASH))
    return flashes


def _crossfade_widths(segments, crossfade):
    """Per-boundary crossfade, clamped to half the shorter neighbor."""
    widths = []
    for left, right in zip(segments, segments[1:]):
        shorter = min(left.duration, right.duration)
        if crossfade > shorter:
            clamped = shorter / 2.0
            log.warning("crossfade %.3fs longer than %.3fs segment; clamped to %.3fs",
                        crossfade, shorter, clamped)
            widths.append(clamped)
        else:
            widths.append(crossfade)
    return widths


def _ramp(t, span_start, span_end, fade_in, fade_out):
    value = 1.0
    if fade_in > 0 and t < span_start + fade_in:
        value = min(value, (t - span_start) / fade_in)
    if fade_out > 0 and t > span_end - fade_out:
        value = min(value, (span_end - t) / fade_out)
    return max(0.0, value)


def _keyframe_times(span_start, span_end, fade_in, fade_out, beats,
                    extra=()) -> list[float]:
    times = {q6(span_start), q6(span_end)}
    if fade_in > 0:
        times.add(q6(span_start + fade_in))
    if fade_out > 0:
        times.add(q6(span_end - fade_out))
    for b in beats:
        if span_start < b < span_end:
            times.add(q6(b))
    for t in extra:
        if span_start < t < span_end:
            times.add(q6(t))
    return sorted(times)


def _pulse_level(t, beats, period, peak, valley, valley_frac=0.75):
    """Triangle pulse: peak on each beat, valley 75% of the way to the next."""
    if not beats or t <= beats[0]:
        return valley
    i = 0
    for j, b in enumerate(beats):
        if b <= t:
            i = j
        else:
            break
    b = beats[i]
    next_b = beats[i + 1] if i + 1 < len(beats) else b + period
    fall_end = b + valley_frac * (next_b - b)
    if t <= fall_end:
        frac = (t - b) / max(fall_end - b, 1e-9)
        return peak + (valley - peak) * frac
    frac = (t - fall_end) / max(next_b - fall_end, 1e-9)
    return valley + (peak - valley) * min(1.0, frac)


def synthesize_layers(segments, beat_grid, palette: ColorPalette,
                      cfg: SynthesisConfig, song_duration: float,
                      ) -> list[LightObject]:
    segments = list(segments)
    fades = _crossfade_widths(segments, cfg.crossfade)
    bpm = beat_grid.bpm
    beat_period = 60.0 / bpm
    ambient_period = cfg.ambient_period_beats * beat_period
    sweep_period = cfg.sweep_period_beats * beat_period
    pulse_color = with_saturation_value(
        palette.background,
        s=min(palette.background.hsv()[1], 0.2),
        v=max(palette.background.hsv()[2], 0.9))

    layers: list[LightObject] = []
    for i, seg in enumerate(segments):
        fade_left = fades[i - 1] if i > 0 else 0.0
        fade_right = fades[i] if i < len(fades) else 0.0
        span_start = q6(max(0.0, seg.start - fade_left / 2.0))
        span_end = q6(min(song_duration, seg.end + fade_right / 2.0))
        seg_beats = [b for b in beat_grid.beats if seg.start <= b < seg.end]

        def make_layer(kind_tag, modulation, color_role, color_override,
                       spatial, z_order, value_fn, extra_times=(),
                       extra_params=None):
            times = _keyframe_times(span_start, span_end, fade_left, fade_right,
                                    seg_beats, extra=extra_times)
            keyframes = []
            for t in times:
                ramp = _ramp(t, span_start, span_end, fade_left, fade_right)
                params = {"intensity": q6(value_fn(t) * ramp)}
                if extra_params:
                    params.update({k: q6(fn(t)) for k, fn in extra_params.items()})
                keyframes.append(Keyframe(t=t, params=params))
            return LightObject(
                id=f"seg{i:02d}-{kind_tag}", kind=ObjectKind.LAYER,
                start=span_start, end=span_end, spatial=spatial,
                color_role=color_role, color_override=color_override,
                modulation_kind=modulation, keyframes=tuple(keyframes),
                z_order=z_order)

        def ambient_value(t, s0=seg.start):
            return cfg.ambient_base * (
                1.0 + cfg.ambient_depth * math.sin(2 * math.pi * (t - s0) / ambient_period))

        layers.append(make_layer(
            "ambient", ModulationKind.BRIGHTNESS_SINE, "softPrimary", None,
            Spatial(center=0.5, width=1.0), Z_AMBIENT, ambient_value))

        if seg.temperature >= 3:
            def sweep_phase(t, s0=seg.start):
                return 0.5 * cfg.sweep_depth * math.sin(
                    2 * math.pi * (t - s0) / sweep_period)

            layers.append(make_layer(
                "sweep", ModulationKind.SPATIAL_SWEEP, "softSecondary", None,
                Spatial(center=0.5, width=0.4), Z_SWEEP,
                lambda t: cfg.sweep_base,
                extra_params={"spatialPhase": sweep_phase}))

        if seg.temperature >= 5:
            peak = cfg.pulse_depth
            valley = 0.25 * cfg.pulse_depth
            valleys = []
            for j, b in enumerate(seg_beats):
                nxt = seg_beats[j + 1] if j + 1 < len(seg_beats) else b + beat_period
                v = b + 0.75 * (nxt - b)
                if v < span_end:
                    valleys.append(v)

            def pulse_value(t, beats=tuple(seg_beats)):
                return _pulse_level(t, beats, beat_period, peak, valley)

            layers.append(make_layer(
                "pulse", ModulationKind.BEAT_PULSE, None, pulse_color,
                Spatial(center=0.5, width=1.0), Z_PULSE, pulse_value,
                extra_times=valleys))
    return layers


def build_timeline(flashes, layers, segments, palette: ColorPalette,
                   song_duration: float, provenance: dict | None = None,
                   ) -> Lightscape:
    """Assemble and validate the complete document."""
    objects = list(layers) + sorted(flashes, key=lambda f: (f.start, f.id))
    ls = Lightscape(
        version=SCHEMA_VERSION,
        song_duration=song_duration,
        palette=palette,
        segments=tuple(segments),
        objects=tuple(objects),
        provenance=dict(provenance or {}),
    )
    return require_valid(ls)


def synthesize(analysis: AnalysisResult, palette: ColorPalette,
               cfg: SynthesisConfig | None = None,
               provenance: dict | None = None) -> Lightscape:
    """Full synthesis: events + layers + timeline assembly."""
    cfg = cfg or SynthesisConfig()
    events = analysis.events
    if not cfg.flashes_in_cold:
        cold = [s for s in analysis.segments if s.temperature <= 2]

        def in_cold(t):
            return any(s.start <= t < s.end for s in cold)

        events = PercussiveEvents(
            kicks=tuple(t for t in events.kicks if not in_cold(t)),
            snares=tuple(t for t in events.snares if not in_cold(t)))
    flashes = synthesize_events(events, palette, cfg, analysis.duration)
    layers = synthesize_layers(analysis.segments, analysis.beat_grid, palette,
                               cfg, analysis.duration)
    return build_timeline(flashes, layers, analysis.segments, palette,
                          analysis.duration, provenance)
