"""Unit tests for saddle connection enumeration, flow and cylinders."""

import math

import numpy as np
import pytest

from libs.builders import bouw_moller, regular_ngon
from libs.geodesics import (
    EnumerationBudgetError,
    NonPeriodicDirectionError,
    cutting_sequence,
    cylinder_decomposition,
    cylinder_regions,
    enumerate_saddle_connections,
    find_by_holonomy,
    reverse_connection,
    reverse_index,
    side_connection,
    side_directions,
    trace_ray,
)
from libs.surface import cross2


def _inside(polygon, point, tol=1e-9):
    return all(
        cross2(polygon.edges[i], point - polygon.vertex(i)) >= -tol
        for i in range(polygon.size)
    )


@pytest.mark.unit
class TestEnumeration:
    """Test saddle connection enumeration by unfolding."""

    def test_torus_short_connections(self, torus) -> None:
        """Test the torus has the four sides and four diagonals up to 1.5."""
        connections = enumerate_saddle_connections(torus, 1.5)
        assert len(connections) == 8
        assert sum(1 for sc in connections if sc.is_side) == 4
        lengths = sorted(round(sc.length, 9) for sc in connections)
        assert lengths == [1.0] * 4 + [round(math.sqrt(2.0), 9)] * 4

    def test_torus_primitive_vectors(self, torus_connections) -> None:
        """Test torus connections are exactly the primitive lattice vectors."""
        holonomies = sorted(
            (round(sc.holonomy[0]), round(sc.holonomy[1])) for sc in torus_connections
        )
        expected = sorted(
            (x, y)
            for x in range(-3, 4)
            for y in range(-3, 4)
            if math.gcd(x, y) == 1 and math.hypot(x, y) <= 3.0
        )
        assert holonomies == expected
        for sc in torus_connections:
            assert sc.holonomy == pytest.approx(
                (round(sc.holonomy[0]), round(sc.holonomy[1])), abs=1e-9
            )

    def test_decagon_sides_first(self, decagon) -> None:
        """Test the ten oriented sides are all connections up to 1.5."""
        connections = enumerate_saddle_connections(decagon, 1.5)
        assert len(connections) == 10
        assert all(sc.is_side for sc in connections)
        assert all(not sc.is_closed for sc in connections)

    def test_sorted_and_bounded(self, decagon_connections) -> None:
        """Test output is sorted by length and respects lmax."""
        lengths = [sc.length for sc in decagon_connections]
        assert lengths == sorted(lengths)
        assert max(lengths) <= 3.0 + 1e-9

    def test_every_reverse_present(self, decagon_connections, decagon) -> None:
        """Test each connection's reverse is enumerated too."""
        reverse = reverse_index(decagon, decagon_connections)
        assert all(index is not None for index in reverse)
        for index, other in enumerate(reverse):
            assert reverse[other] == index

    def test_reverse_connection(self, decagon_connections, decagon) -> None:
        """Test reversing swaps endpoints and negates the holonomy."""
        for sc in decagon_connections[:20]:
            back = reverse_connection(decagon, sc)
            assert back.start.singularity == sc.end.singularity
            assert back.end.singularity == sc.start.singularity
            assert back.holonomy == pytest.approx(
                (-sc.holonomy[0], -sc.holonomy[1]), abs=1e-9
            )
            assert back.cutting_sequence == tuple(reversed(sc.cutting_sequence))

    def test_independent_of_worker_count(self, decagon) -> None:
        """Test threads do not change the result."""
        serial = enumerate_saddle_connections(decagon, 2.9, max_workers=1)
        threaded = enumerate_saddle_connections(decagon, 2.9, max_workers=4)
        assert [sc.key for sc in serial] == [sc.key for sc in threaded]

    @pytest.mark.parametrize("n", [8, 10])
    def test_connections_are_straight(self, n) -> None:
        """Test every piece stays in its polygon and crossings move forward."""
        surface = regular_ngon(n)
        connections = enumerate_saddle_connections(surface, 6.0)
        rays = set()
        for sc in connections:
            positions = [crossing.position for crossing in sc.crossings]
            assert all(0.0 < p < 1.0 for p in positions), sc.describe()
            assert all(a < b for a, b in zip(positions, positions[1:])), sc.describe()
            total = 0.0
            for piece in sc.pieces:
                polygon = surface.polygon(piece.polygon_id)
                for point in (piece.start, piece.end):
                    assert _inside(polygon, np.asarray(point)), sc.describe()
                total += math.dist(piece.start, piece.end)
            assert total == pytest.approx(sc.length, abs=1e-9)
            ray = (sc.start.singularity, round(sc.start.coordinate, 7))
            assert ray not in rays, sc.describe()
            rays.add(ray)

    def test_bouw_moller_within_budget(self) -> None:
        """Test S_{8,8} enumerates to 2.5 with a modest copy budget."""
        surface = bouw_moller(8, 8)
        connections = enumerate_saddle_connections(surface, 2.5, max_copies=200_000)
        assert connections
        assert all(sc.length <= 2.5 + 1e-9 for sc in connections)

    def test_budget_exceeded(self, decagon) -> None:
        """Test a tiny copy budget raises."""
        with pytest.raises(EnumerationBudgetError):
            enumerate_saddle_connections(decagon, 8.0, max_copies=10)

    def test_non_positive_lmax(self, torus) -> None:
        """Test lmax must be positive."""
        with pytest.raises(ValueError):
            enumerate_saddle_connections(torus, 0.0)

    def test_cutting_sequence_labels(self, decagon_connections) -> None:
        """Test cutting sequences list the labels of crossed sides."""
        crossing = [sc for sc in decagon_connections if sc.crossings]
        assert crossing
        for sc in crossing:
            assert cutting_sequence(sc) == [c.label for c in sc.crossings]
            assert set(cutting_sequence(sc)) <= {"1", "2", "3", "4", "5"}

    def test_side_connection(self, decagon) -> None:
        """Test a side built directly matches the enumerated one."""
        sc = side_connection(decagon, 0, 0)
        assert sc.is_side
        assert sc.length == pytest.approx(1.0)
        assert sc.angle == pytest.approx(0.0)
        reverse = side_connection(decagon, 0, 0, reverse=True)
        assert reverse.angle == pytest.approx(math.pi)

    def test_find_by_holonomy(self, torus_connections) -> None:
        """Test lookup by holonomy finds the single (2, 1) connection."""
        found = find_by_holonomy(torus_connections, (2.0, 1.0 + 1e-12))
        assert len(found) == 1
        assert torus_connections[found[0]].length == pytest.approx(math.sqrt(5.0))
        assert find_by_holonomy(torus_connections, (2.0, 2.0)) == []


@pytest.mark.unit
class TestFlow:
    """Test straight-line flow."""

    def test_closed_leaf(self, torus) -> None:
        """Test a horizontal leaf of the torus closes after length 1."""
        start = np.array([0.5, 0.25])
        trace = trace_ray(
            torus, 0, start, np.array([1.0, 0.0]), 5.0, closing_point=(0, start)
        )
        assert trace.stop == "closed"
        assert trace.length == pytest.approx(1.0)
        assert trace.exits == [1]

    def test_hits_vertex(self, torus) -> None:
        """Test a diagonal ray stops at the corner."""
        trace = trace_ray(
            torus, 0, np.array([0.25, 0.25]), np.array([1.0, 1.0]), 5.0
        )
        assert trace.stop == "vertex"
        assert trace.vertex == 2
        assert trace.length == pytest.approx(0.75 * math.sqrt(2.0))

    def test_length_limit(self, torus) -> None:
        """Test an irrational slope runs to the limit."""
        trace = trace_ray(
            torus, 0, np.array([0.5, 0.25]), np.array([1.0, math.sqrt(2.0)]), 3.0
        )
        assert trace.stop == "limit"
        assert trace.length == pytest.approx(3.0)

    def test_start_on_exit_edge(self, torus) -> None:
        """Test a ray starting on the edge it leaves through crosses it first."""
        trace = trace_ray(torus, 0, np.array([0.5, 1.0]), np.array([0.0, 1.0]), 0.5)
        assert trace.stop == "limit"
        np.testing.assert_allclose(trace.end_point, [0.5, 0.5], atol=1e-12)


@pytest.mark.unit
class TestCylinders:
    """Test cylinder decompositions."""

    def test_torus_horizontal(self, torus) -> None:
        """Test the torus is one unit cylinder horizontally."""
        decomposition = cylinder_decomposition(torus, 0.0)
        assert len(decomposition.cylinders) == 1
        cylinder = decomposition.cylinders[0]
        assert cylinder.circumference == pytest.approx(1.0)
        assert cylinder.height == pytest.approx(1.0)

    def test_torus_diagonal(self, torus) -> None:
        """Test the diagonal direction gives one cylinder of the same area."""
        decomposition = cylinder_decomposition(torus, math.pi / 4)
        assert len(decomposition.cylinders) == 1
        assert decomposition.cylinders[0].circumference == pytest.approx(
            math.sqrt(2.0)
        )
        assert decomposition.total_area == pytest.approx(1.0)

    def test_decagon_horizontal(self, decagon) -> None:
        """Test the decagon splits into two cylinders of equal modulus."""
        decomposition = cylinder_decomposition(decagon, 0.0)
        assert len(decomposition.cylinders) == 2
        assert decomposition.total_area == pytest.approx(decagon.area, abs=1e-7)
        moduli = [cylinder.modulus for cylinder in decomposition.cylinders]
        assert moduli[0] == pytest.approx(moduli[1], rel=1e-6)

    def test_boundaries_are_horizontal(self, decagon) -> None:
        """Test every boundary connection runs in the decomposition direction."""
        decomposition = cylinder_decomposition(decagon, 0.0)
        for sc in decomposition.connections:
            assert abs(sc.holonomy[1]) < 1e-9

    def test_side_directions(self, torus, decagon) -> None:
        """Test side directions are listed once each in [0, π)."""
        assert side_directions(torus) == pytest.approx([0.0, math.pi / 2])
        expected = [k * math.pi / 5 for k in range(5)]
        assert side_directions(decagon) == pytest.approx(expected, abs=1e-9)

    def test_side_directions_are_periodic(self, decagon) -> None:
        """Test every side direction of the decagon gives two cylinders."""
        for direction in side_directions(decagon):
            decomposition = cylinder_decomposition(decagon, direction)
            assert len(decomposition.cylinders) == 2
            assert decomposition.total_area == pytest.approx(decagon.area, rel=1e-6)

    def test_fourteen_gon_side_directions(self) -> None:
        """Test every side direction of the 14-gon gives three cylinders."""
        surface = regular_ngon(14)
        for direction in side_directions(surface):
            decomposition = cylinder_decomposition(surface, direction)
            assert len(decomposition.cylinders) == 3
            assert decomposition.total_area == pytest.approx(surface.area, rel=1e-6)

    def test_non_periodic_direction(self, torus) -> None:
        """Test an irrational slope raises."""
        with pytest.raises(NonPeriodicDirectionError):
            cylinder_decomposition(torus, math.atan(math.sqrt(2.0)))

    def test_regions_cover_polygons(self, decagon) -> None:
        """Test each band belongs to a cylinder and has positive area."""
        decomposition = cylinder_decomposition(decagon, 0.0)
        regions = cylinder_regions(decagon, decomposition)
        total = 0.0
        for bands in regions.values():
            for cyl_index, band in bands:
                assert 0 <= cyl_index < len(decomposition.cylinders)
                x, y = band[:, 0], band[:, 1]
                total += 0.5 * abs(
                    float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))
                )
        assert total == pytest.approx(decagon.area, rel=1e-6)
