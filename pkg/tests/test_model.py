"""Document model: validation, canonical serialization, color resolution."""

import math

import pytest
from hypothesis import given, settings, strategies as st

from lumascape.errors import InputError, LumascapeError, ValidationError
from lumascape.model import (
    BeatGrid, Color, ColorPalette, Envelope, Keyframe, Lightscape,
    LightObject, ModulationKind, ObjectKind, Segment, Spatial,
    canonicalize, derive_soft, deserialize, resolve_color, serialize,
    temperature_category, validate,
)


def q6(x):
    return round(x, 6)


def make_palette():
    primary = Color.from_hsv(0.0, 1.0, 1.0)
    secondary = Color.from_hsv(240.0, 1.0, 1.0)
    return ColorPalette(
        primary=primary,
        soft_primary=derive_soft(primary),
        secondary=secondary,
        soft_secondary=derive_soft(secondary),
        background=Color.from_rgb(128, 128, 128),
    )


def make_flash(obj_id="kick-0000", start=10.0, envelope=Envelope(0.02, 0.03, 0.15)):
    return LightObject(
        id=obj_id, kind=ObjectKind.FLASH, start=start,
        end=q6(start + envelope.total),
        spatial=Spatial(center=0.5, width=1.0),
        color_role="primary", envelope=envelope, z_order=10,
    )


def make_layer(obj_id="seg00-ambient", start=0.0, end=30.0):
    kfs = (Keyframe(start, {"intensity": 0.4}), Keyframe(end, {"intensity": 0.4}))
    return LightObject(
        id=obj_id, kind=ObjectKind.LAYER, start=start, end=end,
        spatial=Spatial(center=0.5, width=1.0), color_role="softPrimary",
        modulation_kind=ModulationKind.BRIGHTNESS_SINE, keyframes=kfs,
    )


def make_lightscape(objects=None, duration=30.0):
    return Lightscape(
        version="1.0", song_duration=duration, palette=make_palette(),
        segments=(Segment(0.0, duration, "unknown", 3),),
        objects=tuple(objects if objects is not None else (make_layer(), make_flash())),
        provenance={"tool": "lumascape 0.1.0", "seed": 0},
    )


class TestValidate:
    def test_well_formed_document_has_no_violations(self):
        assert validate(make_lightscape()) == []

    def test_envelope_duration_mismatch(self):
        flash = LightObject(
            id="kick-0000", kind=ObjectKind.FLASH, start=10.0, end=10.5,
            spatial=Spatial(0.5, 1.0), color_role="primary",
            envelope=Envelope(0.02, 0.03, 0.15), z_order=10,
        )
        codes = [v.code for v in validate(make_lightscape([make_layer(), flash]))]
        assert "envelope-duration-mismatch" in codes

    def test_duplicate_ids(self):
        doc = make_lightscape([make_flash("dup"), make_flash("dup", start=12.0)])
        codes = [v.code for v in validate(doc)]
        assert "duplicate-id" in codes

    def test_unresolved_role(self):
        obj = LightObject(
            id="x", kind=ObjectKind.FLASH, start=1.0, end=1.2,
            spatial=Spatial(0.5, 1.0), color_role="tertiary",
            envelope=Envelope(0.02, 0.03, 0.15),
        )
        codes = [v.code for v in validate(make_lightscape([obj]))]
        assert "unresolved-color" in codes

    def test_layer_keyframes_must_increase(self):
        kfs = (Keyframe(2.0, {"intensity": 0.5}), Keyframe(1.0, {"intensity": 0.5}))
        obj = LightObject(id="l", kind=ObjectKind.LAYER, start=0.0, end=5.0,
                          spatial=Spatial(0.5, 1.0), color_role="primary",
                          keyframes=kfs)
        codes = [v.code for v in validate(make_lightscape([obj]))]
        assert "keyframes-not-increasing" in codes

    def test_segment_partition_gap_detected(self):
        doc = Lightscape(
            version="1.0", song_duration=30.0, palette=make_palette(),
            segments=(Segment(0.0, 10.0), Segment(12.0, 30.0)),
            objects=(), provenance={},
        )
        codes = [v.code for v in validate(doc)]
        assert "segments-not-partition" in codes

    def test_intensity_out_of_range(self):
        kfs = (Keyframe(0.0, {"intensity": 1.5}),)
        obj = LightObject(id="l", kind=ObjectKind.LAYER, start=0.0, end=5.0,
                          spatial=Spatial(0.5, 1.0), color_role="primary",
                          keyframes=kfs)
        codes = [v.code for v in validate(make_lightscape([obj]))]
        assert "intensity-out-of-range" in codes

    @pytest.mark.parametrize("temp,cat", [(1, "cold"), (2, "cold"), (3, "medium"),
                                          (4, "medium"), (5, "hot")])
    def test_category_derivation_exhaustive(self, temp, cat):
        assert temperature_category(temp) == cat


class TestSerialize:
    def test_round_trip_structural_equality(self):
        doc = canonicalize(make_lightscape())
        assert deserialize(serialize(doc)) == doc

    def test_canonical_re_serialization_is_identity(self):
        data = serialize(make_lightscape())
        assert serialize(deserialize(data)) == data

    def test_empty_objects_round_trip(self):
        doc = make_lightscape([])
        data = serialize(doc)
        assert serialize(deserialize(data)) == data

    def test_unsupported_version_rejected(self):
        data = serialize(make_lightscape()).decode().replace('"1.0"', '"99.0"', 1)
        with pytest.raises(InputError) as exc:
            deserialize(data)
        assert exc.value.code == "unsupported-version"

    def test_malformed_syntax_rejected(self):
        with pytest.raises(InputError) as exc:
            deserialize(b"{not json")
        assert exc.value.code == "malformed-json"

    def test_invariant_violations_rejected_on_load(self):
        doc = make_lightscape()
        text = serialize(doc).decode().replace('"kick-0000"', '"seg00-ambient"')
        with pytest.raises(ValidationError):
            deserialize(text)

    def test_serialize_refuses_invalid_document(self):
        doc = make_lightscape([make_flash("dup"), make_flash("dup", start=12.0)])
        with pytest.raises(ValidationError):
            serialize(doc)

    def test_six_decimal_time_formatting(self):
        data = serialize(make_lightscape()).decode()
        assert '"songDuration": 30.000000' in data


class TestResolveColor:
    def test_role_lookup(self):
        palette = make_palette()
        obj = make_flash()
        assert resolve_color(obj, palette) == palette.primary

    def test_override_wins(self):
        override = Color.from_rgb(1, 2, 3)
        obj = LightObject(id="x", kind=ObjectKind.FLASH, start=0.0, end=0.2,
                          spatial=Spatial(0.5, 1.0), color_role="secondary",
                          color_override=override,
                          envelope=Envelope(0.02, 0.03, 0.15))
        assert resolve_color(obj, make_palette()) == override

    def test_unknown_role_raises(self):
        obj = LightObject(id="x", kind=ObjectKind.FLASH, start=0.0, end=0.2,
                          spatial=Spatial(0.5, 1.0), color_role="tertiary",
                          envelope=Envelope(0.02, 0.03, 0.15))
        with pytest.raises(LumascapeError) as exc:
            resolve_color(obj, make_palette())
        assert exc.value.code == "unresolved-color"


# --- property tests -------------------------------------------------------

times = st.integers(min_value=0, max_value=30_000_000).map(lambda n: n / 1e6)
channels = st.integers(min_value=0, max_value=255)


@st.composite
def colors(draw):
    return Color.from_rgb(draw(channels), draw(channels), draw(channels))


@st.composite
def lightscapes(draw):
    duration = draw(st.integers(min_value=5_000_000, max_value=60_000_000)) / 1e6
    n_seg = draw(st.integers(min_value=1, max_value=4))
    cuts = sorted(draw(st.lists(
        st.integers(min_value=1, max_value=int(duration * 1e6) - 1),
        min_size=n_seg - 1, max_size=n_seg - 1, unique=True)))
    bounds = [0.0] + [c / 1e6 for c in cuts] + [duration]
    segments = tuple(
        Segment(bounds[i], bounds[i + 1], "unknown",
                draw(st.integers(min_value=1, max_value=5)))
        for i in range(len(bounds) - 1))

    objects = []
    n_flash = draw(st.integers(min_value=0, max_value=3))
    for i in range(n_flash):
        attack = draw(st.integers(min_value=1000, max_value=100_000)) / 1e6
        hold = draw(st.integers(min_value=0, max_value=100_000)) / 1e6
        release = draw(st.integers(min_value=1000, max_value=300_000)) / 1e6
        total = q6(attack + hold + release)
        start = draw(st.integers(
            min_value=0, max_value=int((duration - total) * 1e6))) / 1e6
        objects.append(LightObject(
            id=f"flash-{i:04d}", kind=ObjectKind.FLASH,
            start=start, end=q6(start + total),
            spatial=Spatial(draw(st.integers(0, 1_000_000)) / 1e6,
                            draw(st.integers(0, 1_000_000)) / 1e6),
            color_role=draw(st.sampled_from(
                ["primary", "secondary", "background"])),
            color_override=draw(st.one_of(st.none(), colors())),
            envelope=Envelope(attack, hold, release), z_order=10))
    n_layer = draw(st.integers(min_value=0, max_value=2))
    for i in range(n_layer):
        start = draw(st.integers(min_value=0,
                                 max_value=int(duration * 1e6) - 10)) / 1e6
        end = draw(st.integers(min_value=int(start * 1e6) + 10,
                               max_value=int(duration * 1e6))) / 1e6
        n_kf = draw(st.integers(min_value=1, max_value=4))
        ts = sorted(draw(st.lists(
            st.integers(min_value=int(start * 1e6), max_value=int(end * 1e6)),
            min_size=n_kf, max_size=n_kf, unique=True)))
        kfs = tuple(Keyframe(t / 1e6, {"intensity": draw(st.integers(0, 1_000_000)) / 1e6})
                    for t in ts)
        objects.append(LightObject(
            id=f"layer-{i:04d}", kind=ObjectKind.LAYER, start=start, end=end,
            spatial=Spatial(0.5, 1.0), color_role="softPrimary",
            modulation_kind=draw(st.sampled_from(list(ModulationKind))),
            keyframes=kfs, z_order=i))

    return Lightscape(version="1.0", song_duration=duration,
                      palette=make_palette(), segments=segments,
                      objects=tuple(objects),
                      provenance={"seed": draw(st.integers(0, 2**31))})


@given(lightscapes())
@settings(max_examples=60, deadline=None)
def test_property_round_trip(doc):
    assert validate(doc) == []
    data = serialize(doc)
    again = deserialize(data)
    assert again == doc
    assert serialize(again) == data


@given(lightscapes())
@settings(max_examples=30, deadline=None)
def test_property_segment_partition_sums_to_duration(doc):
    total = sum(s.duration for s in doc.segments)
    assert math.isclose(total, doc.song_duration, abs_tol=1e-3)
