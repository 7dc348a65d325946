"""Color values and HSV math.

RGB channels are integers 0-255.  A Color may carry explicit HSV fields so
that hue-preserving derivations (soft variants, rotations) stay exact even
after the RGB channels are rounded; when absent, HSV is derived on demand.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


def rgb_to_hsv(r: int, g: int, b: int) -> tuple[float, float, float]:
    """Standard RGB->HSV: hue in degrees [0, 360), s and v in [0, 1]."""
    rf, gf, bf = r / 255.0, g / 255.0, b / 255.0
    mx = max(rf, gf, bf)
    mn = min(rf, gf, bf)
    c = mx - mn
    if c == 0:
        h = 0.0
    elif mx == rf:
        h = 60.0 * (((gf - bf) / c) % 6.0)
    elif mx == gf:
        h = 60.0 * ((bf - rf) / c + 2.0)
    else:
        h = 60.0 * ((rf - gf) / c + 4.0)
    s = 0.0 if mx == 0 else c / mx
    return h % 360.0, s, mx


def hsv_to_rgb(h: float, s: float, v: float) -> tuple[int, int, int]:
    """Standard HSV->RGB with round-half-up channel quantization."""
    h = h % 360.0
    c = v * s
    x = c * (1.0 - abs((h / 60.0) % 2.0 - 1.0))
    m = v - c
    sextant = int(h // 60.0) % 6
    rgb = [
        (c, x, 0.0), (x, c, 0.0), (0.0, c, x),
        (0.0, x, c), (x, 0.0, c), (c, 0.0, x),
    ][sextant]
    return tuple(_round_half_up((ch + m) * 255.0) for ch in rgb)  # type: ignore[return-value]


@dataclass(frozen=True, slots=True)
class Color:
    r: int
    g: int
    b: int
    h: float | None = None
    s: float | None = None
    v: float | None = None

    @classmethod
    def from_rgb(cls, r: int, g: int, b: int) -> "Color":
        return cls(int(r), int(g), int(b))

    @classmethod
    def from_hsv(cls, h: float, s: float, v: float) -> "Color":
        """Build from HSV, keeping the exact HSV alongside the rounded RGB."""
        r, g, b = hsv_to_rgb(h, s, v)
        return cls(r, g, b, h=h % 360.0, s=s, v=v)

    def hsv(self) -> tuple[float, float, float]:
        """Explicit HSV when present, else derived from RGB."""
        if self.h is not None and self.s is not None and self.v is not None:
            return self.h, self.s, self.v
        return rgb_to_hsv(self.r, self.g, self.b)

    def rgb(self) -> tuple[int, int, int]:
        return self.r, self.g, self.b


def derive_soft(color: Color, saturation_scale: float = 0.4,
                value_lift: float = 0.25) -> Color:
    """Soft variant: same hue, saturation scaled down, value lifted toward 1.

    S' = saturation_scale * S,  V' = V + value_lift * (1 - V).
    """
    h, s, v = color.hsv()
    return Color.from_hsv(h, saturation_scale * s, v + value_lift * (1.0 - v))


def rotate_hue(color: Color, degrees: float) -> Color:
    h, s, v = color.hsv()
    return Color.from_hsv((h + degrees) % 360.0, s, v)


def with_saturation_value(color: Color, s: float, v: float) -> Color:
    h, _, _ = color.hsv()
    return Color.from_hsv(h, s, v)
