"""Synthesis rules: event flashes, temperature-driven layers, timeline
assembly, and interpolation."""

import numpy as np
import pytest

from lumascape.errors import InputError, LumascapeError
from lumascape.model import (AnalysisResult, BeatGrid, Envelope,
                             PercussiveEvents, Segment, serialize, validate)
from lumascape.synth import (SynthesisConfig, build_timeline, interpolate,
                             synthesize, synthesize_events, synthesize_layers)


def make_grid(bpm, duration, offset=0.0):
    period = 60.0 / bpm
    beats = []
    t = offset if offset > 0 else period
    while t < duration:
        beats.append(round(t, 6))
        t += period
    return BeatGrid(bpm=bpm, beats=tuple(beats), downbeats=tuple(beats[::4]))


def make_analysis(temps, bpm=120.0, seg_len=10.0, kicks=(), snares=()):
    duration = seg_len * len(temps)
    segments = tuple(Segment(i * seg_len, (i + 1) * seg_len, "unknown", t)
                     for i, t in enumerate(temps))
    rms = tuple((t - 1) / 4.0 for t in temps)
    return AnalysisResult(
        duration=duration, beat_grid=make_grid(bpm, duration),
        segments=segments,
        events=PercussiveEvents(kicks=tuple(kicks), snares=tuple(snares)),
        per_segment_median_rms=rms)


class TestEvents:
    def test_single_kick_flash_shape(self, palette):
        events = PercussiveEvents(kicks=(10.0,))
        [flash] = synthesize_events(events, palette, SynthesisConfig(), 60.0)
        assert flash.start == 10.0
        assert flash.end == pytest.approx(10.2)
        assert flash.color_role == "primary"
        assert interpolate(flash, 10.0)["intensity"] == 0.0
        assert interpolate(flash, 10.02)["intensity"] == pytest.approx(1.0)
        assert interpolate(flash, 10.05)["intensity"] == pytest.approx(1.0)
        assert interpolate(flash, 10.2)["intensity"] == pytest.approx(0.0)

    def test_empty_events_no_flashes(self, palette):
        assert synthesize_events(PercussiveEvents(), palette,
                                 SynthesisConfig(), 60.0) == []

    def test_counts_per_role(self, palette):
        events = PercussiveEvents(kicks=(1.0, 2.0), snares=(1.5,))
        flashes = synthesize_events(events, palette, SynthesisConfig(), 60.0)
        assert len(flashes) == 3
        assert sum(1 for f in flashes if f.color_role == "primary") == 2
        assert sum(1 for f in flashes if f.color_role == "secondary") == 1

    def test_snare_centers_alternate(self, palette):
        events = PercussiveEvents(snares=(1.0, 2.0, 3.0))
        flashes = synthesize_events(events, palette, SynthesisConfig(), 60.0)
        assert [f.spatial.center for f in flashes] == [0.25, 0.75, 0.25]

    def test_flash_clipped_at_song_end(self, palette):
        events = PercussiveEvents(kicks=(59.9,))
        [flash] = synthesize_events(events, palette, SynthesisConfig(), 60.0)
        assert flash.end <= 60.0 + 1e-9
        assert flash.envelope.total == pytest.approx(flash.end - flash.start)

    def test_flash_start_binds_to_event_exactly(self, palette):
        times = (0.123456, 7.654321)
        flashes = synthesize_events(PercussiveEvents(kicks=times), palette,
                                    SynthesisConfig(), 60.0)
        assert tuple(f.start for f in flashes) == times


class TestLayers:
    def test_cold_segment_single_ambient_layer(self, palette):
        analysis = make_analysis([1])
        layers = synthesize_layers(analysis.segments, analysis.beat_grid,
                                   palette, SynthesisConfig(), analysis.duration)
        assert len(layers) == 1
        assert layers[0].modulation_kind.value == "brightnessSine"
        assert layers[0].color_role == "softPrimary"

    def test_layer_counts_by_temperature(self, palette):
        analysis = make_analysis([2, 4, 5])
        layers = synthesize_layers(analysis.segments, analysis.beat_grid,
                                   palette, SynthesisConfig(), analysis.duration)
        by_seg = {}
        for layer in layers:
            by_seg.setdefault(layer.id.split("-")[0], []).append(layer)
        assert [len(by_seg[f"seg{i:02d}"]) for i in range(3)] == [1, 2, 3]

    def test_ambient_period_from_bpm(self, palette):
        analysis = make_analysis([1], bpm=120.0)
        [ambient] = synthesize_layers(analysis.segments, analysis.beat_grid,
                                      palette, SynthesisConfig(), analysis.duration)
        # brightnessSine period 8*60/120 = 4 s: intensity at t and t+4 equal
        v0 = interpolate(ambient, 2.0)["intensity"]
        v1 = interpolate(ambient, 6.0)["intensity"]
        assert v0 == pytest.approx(v1, abs=1e-6)

    def test_pulse_layer_keyframes_on_beats_and_bounds(self, palette):
        analysis = make_analysis([5], bpm=120.0, seg_len=2.5)
        layers = synthesize_layers(analysis.segments, analysis.beat_grid,
                                   palette, SynthesisConfig(), analysis.duration)
        pulse = next(l for l in layers if l.modulation_kind.value == "beatPulse")
        kf_times = [k.t for k in pulse.keyframes]
        for beat in analysis.beat_grid.beats:
            assert any(abs(beat - t) < 1e-6 for t in kf_times)
        assert kf_times[0] == pytest.approx(0.0)
        assert kf_times[-1] == pytest.approx(2.5)
        # peak on the beat
        beat = analysis.beat_grid.beats[1]
        assert interpolate(pulse, beat)["intensity"] == pytest.approx(0.8)

    def test_pulse_color_is_brightened_background(self, palette):
        analysis = make_analysis([5])
        layers = synthesize_layers(analysis.segments, analysis.beat_grid,
                                   palette, SynthesisConfig(), analysis.duration)
        pulse = next(l for l in layers if l.modulation_kind.value == "beatPulse")
        assert pulse.color_override is not None
        _, s, v = pulse.color_override.hsv()
        assert v >= 0.9 - 1e-9
        assert s <= 0.2 + 1e-9

    def test_segment_without_beats_keyframes_at_bounds(self, palette):
        grid = BeatGrid(bpm=120.0, beats=(100.0,), downbeats=(100.0,))
        segments = (Segment(0.0, 10.0, "unknown", 1),)
        [layer] = synthesize_layers(segments, grid, palette,
                                    SynthesisConfig(crossfade=0.0), 10.0)
        assert [k.t for k in layer.keyframes] == [0.0, 10.0]


class TestTimeline:
    def test_crossfade_overlap_geometry(self, palette):
        analysis = make_analysis([1, 1], seg_len=10.0)
        cfg = SynthesisConfig(crossfade=0.5)
        ls = synthesize(analysis, palette, cfg)
        ambients = [o for o in ls.objects if o.id.endswith("ambient")]
        incoming = ambients[1]
        assert incoming.start == pytest.approx(10.0 - 0.25)
        # ramp completes 0.25 s after the boundary
        assert interpolate(incoming, 10.25)["intensity"] == pytest.approx(
            interpolate(incoming, 10.26)["intensity"], abs=0.02)
        assert interpolate(incoming, incoming.start)["intensity"] == 0.0

    def test_single_segment_no_ramps(self, palette):
        analysis = make_analysis([2])
        ls = synthesize(analysis, palette)
        [ambient] = [o for o in ls.objects if o.id.endswith("ambient")]
        assert ambient.start == 0.0 and ambient.end == analysis.duration
        assert interpolate(ambient, 0.0)["intensity"] > 0.0

    def test_output_validates(self, palette):
        analysis = make_analysis([1, 4, 5], kicks=(1.0, 5.0, 21.0),
                                 snares=(2.5, 22.5))
        ls = synthesize(analysis, palette)
        assert validate(ls) == []

    def test_crossfade_clamped_for_short_segment(self, palette, caplog):
        segments = (Segment(0.0, 10.0, "unknown", 2), Segment(10.0, 10.3, "unknown", 3),
                    Segment(10.3, 20.0, "unknown", 4))
        analysis = AnalysisResult(
            duration=20.0, beat_grid=make_grid(120, 20.0), segments=segments,
            events=PercussiveEvents(), per_segment_median_rms=(0.0, 0.5, 1.0))
        with caplog.at_level("WARNING"):
            ls = synthesize(analysis, palette, SynthesisConfig(crossfade=0.5))
        assert validate(ls) == []
        assert any("clamped" in r.message for r in caplog.records)

    def test_continuous_layer_coverage(self, palette):
        analysis = make_analysis([1, 3, 5, 2])
        ls = synthesize(analysis, palette)
        layers = [o for o in ls.objects if o.kind.value == "layer"]
        for t in np.linspace(0.0, analysis.duration, 101):
            assert any(l.start <= t <= l.end for l in layers)

    def test_determinism_byte_identical(self, palette):
        analysis = make_analysis([1, 4, 5], kicks=(1.0, 5.0), snares=(2.5,))
        a = serialize(synthesize(analysis, palette))
        b = serialize(synthesize(analysis, palette))
        assert a == b

    def test_flash_count_bijection(self, palette):
        kicks = tuple(np.round(np.arange(0.5, 29.0, 0.8), 6))
        snares = tuple(np.round(np.arange(0.9, 29.0, 1.6), 6))
        analysis = make_analysis([3, 4, 2], kicks=kicks, snares=snares)
        ls = synthesize(analysis, palette)
        flashes = [o for o in ls.objects if o.kind.value == "flash"]
        assert len(flashes) == len(kicks) + len(snares)

    def test_cold_flash_gate(self, palette):
        analysis = make_analysis([1, 5], kicks=(5.0, 15.0))
        cfg = SynthesisConfig(flashes_in_cold=False)
        ls = synthesize(analysis, palette, cfg)
        flashes = [o for o in ls.objects if o.kind.value == "flash"]
        assert [f.start for f in flashes] == [15.0]


class TestInterpolate:
    def test_linear_midpoint(self, palette):
        analysis = make_analysis([1])
        [layer] = synthesize_layers(analysis.segments, analysis.beat_grid,
                                    palette, SynthesisConfig(), analysis.duration)
        kfs = layer.keyframes
        mid = (kfs[0].t + kfs[1].t) / 2
        expect = (kfs[0].params["intensity"] + kfs[1].params["intensity"]) / 2
        assert interpolate(layer, mid)["intensity"] == pytest.approx(expect)

    def test_exact_at_keyframes(self, palette):
        analysis = make_analysis([3])
        layers = synthesize_layers(analysis.segments, analysis.beat_grid,
                                   palette, SynthesisConfig(), analysis.duration)
        sweep = next(l for l in layers if l.modulation_kind.value == "spatialSweep")
        for kf in sweep.keyframes:
            got = interpolate(sweep, kf.t)
            for name, value in kf.params.items():
                assert got[name] == pytest.approx(value)

    def test_outside_span_rejected(self, palette):
        events = PercussiveEvents(kicks=(10.0,))
        [flash] = synthesize_events(events, palette, SynthesisConfig(), 60.0)
        with pytest.raises(LumascapeError) as exc:
            interpolate(flash, 10.5)
        assert exc.value.code == "time-out-of-span"


class TestConfigValidation:
    def test_zero_attack_rejected(self):
        with pytest.raises(InputError):
            SynthesisConfig(kick_envelope=Envelope(0.0, 0.03, 0.15))

    def test_zero_release_rejected(self):
        with pytest.raises(InputError):
            SynthesisConfig(snare_envelope=Envelope(0.02, 0.03, 0.0))

    def test_depth_out_of_range_rejected(self):
        with pytest.raises(InputError):
            SynthesisConfig(pulse_depth=1.5)
