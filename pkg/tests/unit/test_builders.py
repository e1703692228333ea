"""Unit tests for the surface families."""

import math

import pytest

from libs.builders import (
    BouwMollerParams,
    BuilderParameterError,
    bouw_moller,
    detect_ngon,
    ngon_label,
    regular_ngon,
    regular_ngon_area,
    rotation_automorphism,
    semi_regular_polygon,
    surface_by_name,
)
from libs.surface import SurfaceValidationError


@pytest.mark.unit
class TestRegularNgon:
    """Test regular n-gon surfaces."""

    @pytest.mark.parametrize("n", [8, 10, 12, 14])
    def test_area_matches_closed_form(self, n: int) -> None:
        """Test the shoelace area equals (n/4)·cot(π/n)."""
        assert regular_ngon(n).area == pytest.approx(regular_ngon_area(n), abs=1e-9)

    @pytest.mark.parametrize(
        "n, count", [(8, 1), (10, 2), (12, 1), (14, 2), (16, 1), (18, 2)]
    )
    def test_singularity_count(self, n: int, count: int) -> None:
        """Test n = 2 mod 4 gives two cone points, n = 0 mod 4 one."""
        assert len(regular_ngon(n).singularities) == count

    def test_fourteen_gon_cone_angles(self) -> None:
        """Test the 14-gon splits (n - 2)π evenly between its cone points."""
        surface = regular_ngon(14)
        for singularity in surface.singularities:
            assert singularity.cone_angle == pytest.approx(6.0 * math.pi)

    @pytest.mark.parametrize("n", [4, 6, 7, 9])
    def test_rejects_bad_n(self, n: int) -> None:
        """Test odd or small n is refused."""
        with pytest.raises(BuilderParameterError):
            regular_ngon(n)

    def test_unit_sides_and_horizontal_base(self, decagon) -> None:
        """Test sides have unit length and edge 0 is horizontal."""
        polygon = decagon.polygons[0]
        assert polygon.edge_lengths == pytest.approx([1.0] * 10)
        assert polygon.edges[0][1] == pytest.approx(0.0)
        assert decagon.l0 == pytest.approx(1.0)

    def test_labels(self) -> None:
        """Test opposite sides share a label and labels run 1..n/2."""
        labels = [ngon_label(k, 10) for k in range(10)]
        assert sorted(set(labels)) == ["1", "2", "3", "4", "5"]
        for k in range(5):
            assert labels[k] == labels[k + 5]

    def test_detect_ngon(self, decagon, torus, bm_4_8) -> None:
        """Test detection of regular n-gon surfaces."""
        assert detect_ngon(decagon) == 10
        assert detect_ngon(torus) is None
        assert detect_ngon(bm_4_8) is None


@pytest.mark.unit
class TestBouwMoller:
    """Test Bouw-Moller surfaces."""

    @pytest.mark.parametrize("m, n", [(4, 8), (6, 8), (8, 4), (6, 9)])
    def test_gcd_singularities(self, m: int, n: int) -> None:
        """Test S_{m,n} has gcd(m, n) singularities."""
        surface = bouw_moller(m, n)
        assert len(surface.singularities) == math.gcd(m, n)
        assert surface.family.kind == "bouw_moller"

    def test_polygon_sizes(self, bm_4_8) -> None:
        """Test end polygons are n-gons and middle ones 2n-gons."""
        assert [polygon.size for polygon in bm_4_8.polygons] == [8, 16, 16, 8]

    def test_normalized_shortest_side(self, bm_4_8) -> None:
        """Test normalization makes the shortest side 1."""
        assert bm_4_8.l0 == pytest.approx(1.0)
        raw = bouw_moller(4, 8, normalized=False)
        assert raw.l0 == pytest.approx(math.sin(math.pi / 4))
        assert raw.area * 2.0 == pytest.approx(bm_4_8.area)

    def test_semi_regular_polygon_is_equiangular(self) -> None:
        """Test every corner of P(i) has angle (2n - 2)π/(2n)."""
        polygon = semi_regular_polygon(1, 4, 8)
        assert polygon.size == 16
        for vertex in range(polygon.size):
            assert polygon.interior_angle(vertex) == pytest.approx(7.0 * math.pi / 8)

    def test_rotation_automorphism(self, bm_4_8) -> None:
        """Test rotation by 2π/n permutes edges and keeps the gluings."""
        permutation = rotation_automorphism(bm_4_8, 2.0 * math.pi / 8)
        assert len(permutation) == sum(p.size for p in bm_4_8.polygons)
        assert sorted(permutation.values()) == sorted(permutation)

    def test_rotation_not_a_symmetry(self, bm_4_8) -> None:
        """Test a rotation that moves the polygons off themselves raises."""
        with pytest.raises(SurfaceValidationError):
            rotation_automorphism(bm_4_8, math.pi / 8)

    @pytest.mark.parametrize("m, n", [(2, 2), (1, 5), (4, 1)])
    def test_rejects_bad_parameters(self, m: int, n: int) -> None:
        """Test parameters outside the family are refused."""
        with pytest.raises(BuilderParameterError):
            BouwMollerParams(m, n)


@pytest.mark.unit
class TestRegistry:
    """Test surface names used on the command line."""

    def test_named_surfaces(self) -> None:
        """Test each naming scheme builds the matching family."""
        assert surface_by_name("torus").area == pytest.approx(1.0)
        assert surface_by_name("ngon10").family.n == 10
        raw = surface_by_name("bm-4-8-raw")
        assert raw.family.m == 4
        assert raw.family.normalized is False
        assert surface_by_name("BM-4-8").family.normalized is True

    def test_unknown_name(self) -> None:
        """Test other names return None."""
        assert surface_by_name("decagon.json") is None
