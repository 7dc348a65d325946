"""Color math: HSV conversion, soft derivation, hue rotation."""

import pytest
from hypothesis import given, strategies as st

from lumascape.model import Color, derive_soft, hsv_to_rgb, rgb_to_hsv, rotate_hue


class TestConversion:
    @pytest.mark.parametrize("rgb,hsv", [
        ((255, 0, 0), (0.0, 1.0, 1.0)),
        ((0, 255, 0), (120.0, 1.0, 1.0)),
        ((0, 0, 255), (240.0, 1.0, 1.0)),
        ((0, 0, 0), (0.0, 0.0, 0.0)),
        ((255, 255, 255), (0.0, 0.0, 1.0)),
    ])
    def test_known_corners(self, rgb, hsv):
        h, s, v = rgb_to_hsv(*rgb)
        assert (round(h, 6), round(s, 6), round(v, 6)) == hsv
        assert hsv_to_rgb(*hsv) == rgb

    @given(st.integers(0, 255), st.integers(0, 255), st.integers(0, 255))
    def test_round_trip_within_one_unit(self, r, g, b):
        h, s, v = rgb_to_hsv(r, g, b)
        rr, gg, bb = hsv_to_rgb(h, s, v)
        assert max(abs(rr - r), abs(gg - g), abs(bb - b)) <= 1


class TestSoftDerivation:
    def test_pure_red(self):
        soft = derive_soft(Color.from_rgb(255, 0, 0))
        assert soft.rgb() == (255, 153, 153)
        assert soft.h == 0.0 and soft.s == pytest.approx(0.4)

    def test_mid_gray(self):
        soft = derive_soft(Color.from_rgb(128, 128, 128))
        assert soft.rgb() == (160, 160, 160)

    def test_black(self):
        soft = derive_soft(Color.from_rgb(0, 0, 0))
        assert soft.rgb() == (64, 64, 64)

    @given(st.integers(0, 255), st.integers(0, 255), st.integers(0, 255))
    def test_soft_properties(self, r, g, b):
        source = Color.from_rgb(r, g, b)
        h, s, v = source.hsv()
        soft = derive_soft(source)
        assert soft.h == pytest.approx(h)  # hue preserved exactly
        if s > 0:
            assert soft.s < s
        assert soft.v >= v


class TestRotation:
    def test_rotation_wraps(self):
        rotated = rotate_hue(Color.from_hsv(300.0, 1.0, 1.0), 120.0)
        assert rotated.h == pytest.approx(60.0)

    def test_rotation_preserves_sv(self):
        rotated = rotate_hue(Color.from_hsv(10.0, 0.7, 0.9), 120.0)
        assert rotated.s == pytest.approx(0.7)
        assert rotated.v == pytest.approx(0.9)
