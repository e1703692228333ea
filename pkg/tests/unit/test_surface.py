"""Unit tests for surface assembly and spec files."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from libs.builders import regular_ngon
from libs.surface import (
    TWO_PI,
    InvalidReferenceError,
    Placement,
    PolygonSpec,
    RayOutsideSectorError,
    SideGluing,
    SurfaceValidationError,
    TranslationSurface,
    build_surface,
    dumps_surface_spec,
    load_surface_spec,
    parse_surface_spec,
    spec_digest,
)

UNIT_SQUARE = ((0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0))


def _two_square_polygons():
    return [
        PolygonSpec(id=0, vertices=UNIT_SQUARE, labels=("a", "b", "a", "c")),
        PolygonSpec(
            id=1,
            vertices=((1.0, 0.0), (2.0, 0.0), (2.0, 1.0), (1.0, 1.0)),
            labels=("d", "c", "d", "b"),
        ),
    ]


TWO_SQUARE_GLUINGS = [
    ((0, 0), (0, 2)),
    ((0, 1), (1, 3)),
    ((1, 0), (1, 2)),
    ((1, 1), (0, 3)),
]


@pytest.mark.unit
class TestSurfaceAssembly:
    """Test building surfaces from polygons and gluings."""

    def test_square_torus(self, torus) -> None:
        """Test the unit torus has one regular point."""
        assert len(torus.singularities) == 1
        assert torus.singularities[0].cone_angle == pytest.approx(TWO_PI)
        assert torus.area == pytest.approx(1.0)
        assert torus.l0 == pytest.approx(1.0)
        assert torus.genus == 1

    def test_decagon_singularities(self, decagon) -> None:
        """Test the decagon has two cone points of angle 4π."""
        assert len(decagon.singularities) == 2
        for singularity in decagon.singularities:
            assert singularity.cone_angle == pytest.approx(4.0 * math.pi)
            assert len(singularity.fan) == 5
        assert decagon.genus == 2
        assert decagon.area == pytest.approx(7.694208843, abs=1e-9)

    def test_octagon_single_singularity(self, octagon) -> None:
        """Test the octagon has one cone point of angle 6π."""
        assert len(octagon.singularities) == 1
        assert octagon.singularities[0].cone_angle == pytest.approx(6.0 * math.pi)
        assert octagon.genus == 2

    @pytest.mark.parametrize("n", [8, 10, 12, 14, 16, 18])
    def test_gauss_bonnet(self, n: int) -> None:
        """Test cone angle excess matches 2π(2g - 2)."""
        surface = regular_ngon(n)
        excess = sum(s.cone_angle - TWO_PI for s in surface.singularities)
        assert excess == pytest.approx(TWO_PI * (2 * surface.genus - 2))
        total = sum(s.cone_angle for s in surface.singularities)
        assert total == pytest.approx((n - 2) * math.pi)

    def test_fan_angles_sum_to_cone_angle(self, decagon) -> None:
        """Test fan corners tile the cone circle."""
        for singularity in decagon.singularities:
            angles = [record.angle for record in singularity.fan]
            assert sum(angles) == pytest.approx(singularity.cone_angle)
            starts = [record.start for record in singularity.fan]
            assert starts == sorted(starts)
            assert starts[0] == 0.0

    def test_two_marked_points(self) -> None:
        """Test a 2x1 torus cut into two squares has two regular points."""
        surface = build_surface(_two_square_polygons(), TWO_SQUARE_GLUINGS)
        assert len(surface.singularities) == 2
        assert surface.cone_signature() == [(1, 4), (1, 4)]
        assert surface.genus == 1
        assert surface.area == pytest.approx(2.0)

    def test_polygon_order_does_not_matter(self) -> None:
        """Test reordering the polygon list keeps ids and cone data."""
        forward = build_surface(_two_square_polygons(), TWO_SQUARE_GLUINGS)
        backward = build_surface(
            list(reversed(_two_square_polygons())), TWO_SQUARE_GLUINGS
        )
        assert forward.cone_signature() == backward.cone_signature()
        assert [s.representative for s in forward.singularities] == [
            s.representative for s in backward.singularities
        ]

    def test_partner_and_translation(self, torus) -> None:
        """Test gluings are symmetric with opposite translations."""
        assert torus.partner((0, 0)) == (0, 2)
        assert torus.partner((0, 2)) == (0, 0)
        np.testing.assert_allclose(torus.translation((0, 0)), [0.0, 1.0])
        np.testing.assert_allclose(torus.translation((0, 2)), [0.0, -1.0])
        assert torus.canonical_edge((0, 3)) == (0, 1)

    def test_scaled_surface(self, decagon) -> None:
        """Test scaling multiplies area by the square of the factor."""
        scaled = decagon.scaled(2.0)
        assert scaled.area == pytest.approx(4.0 * decagon.area)
        assert scaled.l0 == pytest.approx(2.0)
        assert scaled.cone_signature() == decagon.cone_signature()


@pytest.mark.unit
class TestSurfaceValidation:
    """Test invalid inputs are rejected."""

    def test_missing_partner(self) -> None:
        """Test an unglued edge is reported."""
        polygon = PolygonSpec(id=0, vertices=UNIT_SQUARE, labels=("a", "b", "a", "b"))
        with pytest.raises(SurfaceValidationError, match="without a partner"):
            build_surface([polygon], [((0, 0), (0, 2))])

    def test_not_antiparallel(self) -> None:
        """Test gluing two perpendicular edges fails."""
        polygon = PolygonSpec(id=0, vertices=UNIT_SQUARE, labels=("a", "a", "b", "b"))
        with pytest.raises(SurfaceValidationError, match="antiparallel"):
            build_surface([polygon], [((0, 0), (0, 1)), ((0, 2), (0, 3))])

    def test_edge_glued_twice(self) -> None:
        """Test an edge cannot appear in two gluings."""
        polygon = PolygonSpec(id=0, vertices=UNIT_SQUARE, labels=("a", "b", "a", "b"))
        with pytest.raises(SurfaceValidationError, match="glued twice"):
            build_surface([polygon], [((0, 0), (0, 2)), ((0, 2), (0, 0))])

    def test_unknown_polygon(self) -> None:
        """Test a gluing naming a missing polygon fails."""
        polygon = PolygonSpec(id=0, vertices=UNIT_SQUARE, labels=("a", "b", "a", "b"))
        with pytest.raises(InvalidReferenceError):
            build_surface([polygon], [((0, 0), (3, 2)), ((0, 1), (0, 3))])

    def test_clockwise_polygon(self) -> None:
        """Test clockwise vertex order is rejected."""
        polygon = PolygonSpec(
            id=0, vertices=tuple(reversed(UNIT_SQUARE)), labels=("a", "b", "a", "b")
        )
        with pytest.raises(SurfaceValidationError, match="counter-clockwise"):
            build_surface([polygon], [((0, 0), (0, 2)), ((0, 1), (0, 3))])

    def test_non_convex_polygon(self) -> None:
        """Test a reflex corner is rejected."""
        polygon = PolygonSpec(
            id=0,
            vertices=((0.0, 0.0), (2.0, 0.0), (1.0, 0.5), (2.0, 2.0), (0.0, 2.0)),
            labels=("a", "b", "c", "d", "e"),
        )
        with pytest.raises(SurfaceValidationError, match="convex"):
            build_surface([polygon], [])

    def test_declared_translation_mismatch(self) -> None:
        """Test a declared translation must match the glued vertices."""
        polygon = PolygonSpec(id=0, vertices=UNIT_SQUARE, labels=("a", "b", "a", "b"))
        gluings = [
            SideGluing((0, 0), (0, 2), translation=(0.0, 2.0)),
            SideGluing((0, 1), (0, 3)),
        ]
        with pytest.raises(SurfaceValidationError, match="declares translation"):
            TranslationSurface([polygon], gluings)

    def test_declared_translation_accepted(self) -> None:
        """Test matching declared translations build the torus."""
        polygon = PolygonSpec(id=0, vertices=UNIT_SQUARE, labels=("a", "b", "a", "b"))
        gluings = [
            SideGluing((0, 0), (0, 2), translation=(0.0, 1.0)),
            SideGluing((0, 1), (0, 3), translation=(-1.0, 0.0)),
        ]
        surface = TranslationSurface([polygon], gluings)
        np.testing.assert_allclose(surface.translation((0, 0)), [0.0, 1.0])

    def test_label_count_mismatch(self) -> None:
        """Test one label per edge is required."""
        polygon = PolygonSpec(id=0, vertices=UNIT_SQUARE, labels=("a", "b"))
        with pytest.raises(SurfaceValidationError, match="labels"):
            build_surface([polygon], [])


@pytest.mark.unit
class TestAngularCoordinates:
    """Test angular coordinates on the cone circle."""

    def test_torus_diagonal_ray(self, torus) -> None:
        """Test the diagonal ray from the origin corner sits at π/4."""
        singularity = torus.singularities[0]
        coordinate = torus.angular_coordinate(
            singularity, (0, 0), np.array([1.0, 1.0])
        )
        assert coordinate == pytest.approx(math.pi / 4)

    def test_ray_outside_corner(self, torus) -> None:
        """Test a ray pointing out of the corner raises."""
        singularity = torus.singularities[0]
        with pytest.raises(RayOutsideSectorError):
            torus.angular_coordinate(singularity, (0, 0), np.array([-1.0, -0.5]))

    def test_decagon_side_rays(self, decagon) -> None:
        """Test consecutive side rays at a singularity are 4π/5 apart."""
        for singularity in decagon.singularities:
            coordinates = [
                decagon.angular_coordinate(
                    singularity,
                    record.corner,
                    decagon.polygon(record.polygon_id).edges[record.vertex],
                )
                for record in singularity.fan
            ]
            gaps = np.diff(coordinates)
            np.testing.assert_allclose(gaps, 4.0 * math.pi / 5.0, atol=1e-9)

    def test_ray_direction_inverts_coordinate(self, decagon) -> None:
        """Test ray_direction recovers the corner and heading."""
        singularity = decagon.singularities[1]
        for record in singularity.fan:
            ray = np.array(
                [math.cos(record.direction + 0.3), math.sin(record.direction + 0.3)]
            )
            coordinate = decagon.angular_coordinate(singularity, record.corner, ray)
            corner, heading = decagon.ray_direction(singularity, coordinate)
            assert corner.corner == record.corner
            assert heading == pytest.approx((record.direction + 0.3) % TWO_PI)

    def test_wrong_singularity(self, decagon) -> None:
        """Test naming a corner of another singularity raises."""
        first, second = decagon.singularities
        with pytest.raises(InvalidReferenceError):
            decagon.angular_coordinate(
                first, second.representative, np.array([1.0, 0.0])
            )

    @given(
        st.floats(min_value=0.01, max_value=0.99),
        st.integers(min_value=0, max_value=4),
        st.integers(min_value=0, max_value=1),
    )
    @settings(max_examples=200, deadline=None)
    def test_coordinate_round_trip(self, decagon, fraction, slot, sid) -> None:
        """Test any ray inside a corner maps to its coordinate and back."""
        singularity = decagon.singularities[sid]
        record = singularity.fan[slot]
        heading = record.direction + fraction * record.angle
        ray = np.array([math.cos(heading), math.sin(heading)])

        coordinate = decagon.angular_coordinate(singularity, record.corner, ray)
        corner, back = decagon.ray_direction(singularity, coordinate)

        assert coordinate == pytest.approx(record.start + fraction * record.angle)
        assert corner.corner == record.corner
        assert math.remainder(back - heading, TWO_PI) == pytest.approx(0.0, abs=1e-9)

    @given(
        st.integers(min_value=0, max_value=9),
        st.floats(min_value=-50.0, max_value=50.0),
        st.floats(min_value=-50.0, max_value=50.0),
    )
    @settings(max_examples=200, deadline=None)
    def test_develop_across_involution(self, decagon, edge, x, y) -> None:
        """Test crossing an edge and back returns the same placement."""
        start = Placement(0, (x, y))

        across = decagon.develop_across(start, edge)
        partner_edge = decagon.partner((0, edge))[1]
        back = decagon.develop_across(across, partner_edge)

        assert back.polygon_id == 0
        assert back.offset == pytest.approx(start.offset, abs=1e-9)
        here = decagon.placed_vertices(start)
        there = decagon.placed_vertices(across)
        size = decagon.polygon(0).size
        np.testing.assert_allclose(
            here[edge], there[(partner_edge + 1) % size], atol=1e-9
        )


@pytest.mark.unit
class TestSpecFiles:
    """Test the JSON surface spec format."""

    def test_round_trip_keeps_digest(self, decagon, temp_dir) -> None:
        """Test a dumped spec loads back to the same surface."""
        path = temp_dir / "decagon.json"
        path.write_text(dumps_surface_spec(decagon))
        loaded = load_surface_spec(path)
        assert spec_digest(loaded) == spec_digest(decagon)
        assert loaded.cone_signature() == decagon.cone_signature()

    def test_dump_is_deterministic(self, decagon) -> None:
        """Test two dumps are byte-identical."""
        assert dumps_surface_spec(decagon) == dumps_surface_spec(regular_ngon(10))

    def test_malformed_json(self) -> None:
        """Test broken JSON raises a validation error."""
        with pytest.raises(SurfaceValidationError, match="malformed"):
            parse_surface_spec("{not json")

    def test_missing_fields(self) -> None:
        """Test a spec without gluings raises a validation error."""
        with pytest.raises(SurfaceValidationError):
            parse_surface_spec({"polygons": []})

    def test_parse_dict(self) -> None:
        """Test a spec given as a dict builds the torus."""
        surface = parse_surface_spec(
            {
                "polygons": [
                    {"id": 0, "vertices": UNIT_SQUARE, "labels": ["a", "b", "a", "b"]}
                ],
                "gluings": [[[0, 0], [0, 2]], [[0, 1], [0, 3]]],
            }
        )
        assert len(surface.singularities) == 1
        assert surface.area == pytest.approx(1.0)
