import numpy as np
import pytest

from circlepack.layoutfile import (
    LayoutParseError,
    format_layout,
    parse_layout,
    read_layout,
    write_layout,
)
from circlepack.radii import (
    BEST_KNOWN_RADII,
    RADIUS_STRINGS,
    UnknownInstanceError,
    best_known_radius,
    bundled_sizes,
)
from circlepack.svgout import render_svg, svg_document


class TestLayoutFile:
    def test_round_trip_is_bit_exact(self, tmp_path):
        rng = np.random.default_rng(3)
        centers = rng.normal(size=(17, 2)) * 13.7
        R = 11.0821497243
        path = tmp_path / "layout.txt"
        write_layout(path, centers, R)
        parsed, parsed_R = read_layout(path)
        assert parsed_R == R
        assert np.array_equal(parsed, centers)
        # and rendering the parsed layout reproduces the bytes
        assert format_layout(parsed, parsed_R) == path.read_text()

    def test_awkward_floats_survive(self):
        centers = np.array([[0.1, -1e-17], [1e300, 2.0 / 3.0]])
        parsed, R = parse_layout(format_layout(centers, 1.0000000001))
        assert np.array_equal(parsed, centers)
        assert R == 1.0000000001

    def test_truncated_file_rejected(self):
        with pytest.raises(LayoutParseError):
            parse_layout("3 5.0\n0.0 0.0\n1.0 1.0\n")

    def test_malformed_rows_rejected(self):
        with pytest.raises(LayoutParseError):
            parse_layout("1 5.0\n0.0\n")
        with pytest.raises(LayoutParseError):
            parse_layout("1 5.0\nzero one\n")
        with pytest.raises(LayoutParseError):
            parse_layout("")
        with pytest.raises(LayoutParseError):
            parse_layout("1\n0.0 0.0\n")
        with pytest.raises(LayoutParseError):
            parse_layout("0 5.0\n")
        with pytest.raises(LayoutParseError):
            parse_layout("1 5.0\nnan 0.0\n")

    def test_missing_file(self, tmp_path):
        with pytest.raises(LayoutParseError):
            read_layout(tmp_path / "nope.txt")


class TestRadiusTable:
    def test_contains_the_published_pairs_verbatim(self):
        expected = {
            100: "11.0821497243",
            200: "15.4632748785",
            210: "15.8792012772",
            220: "16.2253735494",
            230: "16.5964300724",
            240: "16.8971658948",
            250: "17.2629622393",
            260: "17.6049551932",
            270: "17.8872656677",
            280: "18.2472267427",
            290: "18.5493750704",
            300: "18.8135833638",
            310: "19.1848594632",
            320: "19.4562307640",
            400: "21.6895717951",
            500: "24.1329376240",
            600: "26.4274162694",
            700: "28.4958443164",
            800: "30.4212133790",
            900: "32.2330843545",
            1000: "33.9571409147",
            1100: "35.6161932968",
            1200: "37.1121608416",
            1300: "38.6047666608",
            1400: "40.0604065845",
            1500: "41.4126836805",
        }
        assert RADIUS_STRINGS == expected
        assert len(RADIUS_STRINGS) == 26

    def test_lookup(self):
        assert best_known_radius(100) == 11.0821497243
        assert best_known_radius(1500) == 41.4126836805
        with pytest.raises(UnknownInstanceError):
            best_known_radius(33)

    def test_floats_match_strings(self):
        for n, s in RADIUS_STRINGS.items():
            assert BEST_KNOWN_RADII[n] == float(s)
        assert bundled_sizes() == tuple(sorted(RADIUS_STRINGS))


class TestSvg:
    def test_single_circle_has_two_elements(self):
        doc = svg_document([(0.0, 0.0)], 2.0)
        assert doc.count("<circle") == 2
        assert doc.startswith("<?xml")

    def test_circle_count_tracks_layout(self):
        rng = np.random.default_rng(1)
        centers = rng.normal(size=(100, 2))
        doc = svg_document(centers, 11.0821497243)
        assert doc.count("<circle") == 101

    def test_identical_inputs_give_identical_bytes(self, tmp_path):
        rng = np.random.default_rng(2)
        centers = rng.normal(size=(9, 2)) * 2
        a = tmp_path / "a.svg"
        b = tmp_path / "b.svg"
        render_svg(centers, 4.5, a)
        render_svg(centers, 4.5, b)
        assert a.read_bytes() == b.read_bytes()
        assert a.read_bytes().decode("ascii") == svg_document(centers, 4.5)
