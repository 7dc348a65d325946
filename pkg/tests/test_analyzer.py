"""Full audio-analysis chain on a structured synthetic track."""

import numpy as np
import pytest

from lumascape.audio import AudioAnalyzer, write_wav
from lumascape.model import serialize_analysis, validate_analysis

from conftest import song_fixture


@pytest.fixture(scope="module")
def analyzed():
    buf, kicks, snares = song_fixture()
    analyzer = AudioAnalyzer().fit(buf)
    return buf, kicks, snares, analyzer.result_


class TestAnalyzer:
    def test_result_passes_validation(self, analyzed):
        _, _, _, result = analyzed
        validate_analysis(result)

    def test_bpm_near_truth(self, analyzed):
        _, _, _, result = analyzed
        assert abs(result.beat_grid.bpm - 120.0) <= 1.0

    def test_segments_partition_and_get_temperatures(self, analyzed):
        _, _, _, result = analyzed
        assert result.segments[0].start == 0.0
        assert result.segments[-1].end == pytest.approx(result.duration)
        assert len(result.segments) >= 2
        # the loud half must be hotter than the quiet half
        assert result.segments[-1].temperature > result.segments[0].temperature

    def test_kicks_detected_in_loud_half(self, analyzed):
        _, kicks, _, result = analyzed
        loud_truth = [k for k in kicks if k >= 12.0]
        hits = sum(1 for k in loud_truth
                   if min(abs(k - d) for d in result.events.kicks) <= 0.05)
        assert hits / len(loud_truth) >= 0.9

    def test_determinism_byte_identical(self, analyzed):
        buf, _, _, result = analyzed
        again = AudioAnalyzer().fit(buf).result_
        assert serialize_analysis(again) == serialize_analysis(result)

    def test_file_roundtrip(self, tmp_path, analyzed):
        buf, _, _, result = analyzed
        path = tmp_path / "song.wav"
        write_wav(path, buf)
        from_file = AudioAnalyzer().analyze_file(path)
        assert abs(from_file.beat_grid.bpm - result.beat_grid.bpm) < 0.5
