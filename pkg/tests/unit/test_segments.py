"""Unit tests for sectors, transition diagrams and segment decompositions."""

import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from libs.builders import bouw_moller
from libs.geodesics import (
    enumerate_saddle_connections,
    find_by_holonomy,
    side_connection,
)
from libs.segments import (
    ADJACENT,
    DECAGON_DIAGONALS,
    DECAGON_LONG_DIAGONAL,
    EPS_0,
    EPS_1_EFFECTIVE,
    NON_ADJACENT,
    BMDecomposition,
    Segment,
    SegmentCounts,
    SegmentGroupingError,
    SectorDiagrams,
    bm_length_bound,
    bm_subdivide,
    catalogue_check,
    classify_type,
    delta_holonomies,
    diagonal_lengths,
    is_delta,
    is_end_polygon_side,
    is_longest_diagonal,
    is_odd_saddle_connection,
    is_short_diagonal,
    length_lower_bound,
    long_segment_bound,
    pair_g_bound,
    pair_h_bound,
    reassembled_crossings,
    sector_index,
    subdivide,
    transition_diagram,
    trip_bound,
)


def _bm_decomposition(adjacency):
    segments = [
        Segment(
            index=index,
            kind="non-sandwiched",
            start=None,
            end=None,
            interior=(),
            start_position=0.0,
            end_position=1.0,
            length=1.0,
            adjacency=tag,
        )
        for index, tag in enumerate(adjacency)
    ]
    return BMDecomposition(
        connection=None,
        segments=segments,
        counts=SegmentCounts(len(segments), len(segments), 0),
        pairs=[],
        groups=[],
    )


@pytest.fixture(scope="module")
def bm_8_8():
    """Normalized Bouw-Moller surface S_{8,8}."""
    return bouw_moller(8, 8)


@pytest.fixture(scope="module")
def bm_8_8_connections(bm_8_8):
    """S_{8,8} saddle connections up to length 2.5."""
    return enumerate_saddle_connections(bm_8_8, 2.5)


@pytest.fixture(scope="module")
def decagon_diagrams(decagon):
    """Cached transition diagrams of the decagon."""
    return SectorDiagrams(decagon)


@pytest.mark.unit
class TestSectors:
    """Test direction sectors."""

    def test_sector_of_direction(self) -> None:
        """Test 4π/10 < 1.4 < 5π/10 lands in sector 4."""
        assert sector_index(1.4, 10) == 4

    def test_boundary_direction(self) -> None:
        """Test directions on a sector boundary have no sector."""
        assert sector_index(0.0, 10) is None
        assert sector_index(math.pi / 10, 10) is None
        assert sector_index(3 * math.pi / 14, 14) is None

    def test_opposite_directions_share_a_sector(self) -> None:
        """Test θ and θ + π fall in the same sector."""
        for theta in (0.1, 0.5, 1.4, 2.9):
            assert sector_index(theta, 10) == sector_index(theta + math.pi, 10)

    @given(
        st.floats(min_value=0.0, max_value=2.0 * math.pi, exclude_max=True),
        st.sampled_from([10, 14, 18]),
    )
    @settings(max_examples=300, deadline=None)
    def test_sector_matches_floor(self, theta, n) -> None:
        """Test the index is the floor of (θ mod π)/(π/n) off the boundaries."""
        width = math.pi / n
        ratio = (theta % math.pi) / width
        assume(abs(ratio - round(ratio)) * width > 1e-6)

        index = sector_index(theta, n)

        assert index == int(math.floor(ratio)) % n
        assert 0 <= index < n


@pytest.mark.unit
class TestTransitionDiagrams:
    """Test side-succession graphs."""

    def test_sigma_is_a_permutation(self, decagon_diagrams) -> None:
        """Test every sector orders all five labels."""
        table = decagon_diagrams.table()
        assert sorted(table) == list(range(10))
        for sigma in table.values():
            assert sorted(sigma) == ["1", "2", "3", "4", "5"]

    def test_loop_at_the_end(self, decagon) -> None:
        """Test the loop sits on the last label of σ."""
        diagram = transition_diagram(decagon, 2)
        loops = [a for a, _ in diagram.graph.edges if diagram.graph.has_edge(a, a)]
        assert diagram.loop_label in loops
        assert diagram.rank(diagram.loop_label) == 5
        assert diagram.rank(diagram.sandwiched_label) == 1

    def test_for_direction(self, decagon_diagrams) -> None:
        """Test lookup by direction uses the sector index."""
        assert decagon_diagrams.for_direction(1.4).sector.index == 4
        assert decagon_diagrams.for_direction(0.0) is None


@pytest.mark.unit
class TestDiagonals:
    """Test closed-form diagonal lengths."""

    def test_decagon_table(self) -> None:
        """Test the golden-ratio expressions match sin(kπ/n)/sin(π/n)."""
        lengths = diagonal_lengths(10)
        for k, value in DECAGON_DIAGONALS.items():
            assert lengths[k] == pytest.approx(value, abs=1e-12)
        assert lengths[5] == pytest.approx(DECAGON_LONG_DIAGONAL)

    def test_catalogue(self, decagon_connections) -> None:
        """Test every crossing-free non-side connection is a diagonal."""
        counts, unmatched = catalogue_check(decagon_connections, 10)
        assert unmatched == []
        assert set(counts) == {2, 3}
        assert counts[2] % 2 == 0

    def test_short_and_longest(self, decagon_connections) -> None:
        """Test diagonal predicates agree with the lengths."""
        for sc in decagon_connections:
            if is_short_diagonal(sc, 10):
                assert sc.length == pytest.approx(2.0 * math.cos(math.pi / 10))
            assert not is_longest_diagonal(sc, 10)


@pytest.mark.unit
class TestSubdivision:
    """Test segment decompositions on the decagon."""

    def test_sides_are_single_segments(self, decagon, decagon_diagrams) -> None:
        """Test sides have one segment and type 1."""
        sc = side_connection(decagon, 0, 3)
        decomposition = subdivide(decagon, sc, decagon_diagrams)
        assert decomposition.counts == SegmentCounts(1, 1, 0)
        assert classify_type(decagon, sc, decagon_diagrams) == 1

    def test_counts_and_reassembly(self, decagon, decagon_connections) -> None:
        """Test segments cut at non-sandwiched sides and reassemble."""
        diagrams = SectorDiagrams(decagon)
        for sc in decagon_connections:
            decomposition = subdivide(decagon, sc, diagrams)
            counts = decomposition.counts
            assert counts.p + counts.q == counts.n
            assert reassembled_crossings(decomposition) == sc.crossings
            total = sum(segment.length for segment in decomposition.segments)
            assert total == pytest.approx(sc.length)
            if decomposition.diagram is not None:
                cuts = [
                    c
                    for c in sc.crossings
                    if c.label != decomposition.diagram.sandwiched_label
                ]
                assert counts.n == len(cuts) + 1

    def test_delta_is_type_two(self, decagon, decagon_connections) -> None:
        """Test images of Δ exist below length 3 and are classified type 2."""
        deltas = [sc for sc in decagon_connections if is_delta(decagon, sc)]
        assert deltas
        expected = math.sqrt(5.0 + 4.0 * math.cos(2.0 * math.pi / 10))
        for sc in deltas:
            assert sc.length == pytest.approx(expected)
            assert classify_type(decagon, sc) == 2

    def test_length_lower_bounds(self, decagon, decagon_connections) -> None:
        """Test every connection is at least as long as its type bound."""
        diagrams = SectorDiagrams(decagon)
        for sc in decagon_connections:
            sc_type = classify_type(decagon, sc, diagrams)
            n_alpha = subdivide(decagon, sc, diagrams).counts.n
            assert sc.length >= length_lower_bound(sc_type, n_alpha, 10) - 1e-9

    def test_delta_holonomies(self) -> None:
        """Test the dihedral images of Δ all have Δ's length."""
        images = delta_holonomies(10)
        assert images.shape == (20, 2)
        norms = np.hypot(images[:, 0], images[:, 1])
        np.testing.assert_allclose(
            norms, math.sqrt(5.0 + 4.0 * math.cos(math.pi / 5)), atol=1e-12
        )


@pytest.mark.unit
class TestBounds:
    """Test the closed-form length bounds."""

    def test_trip_bound(self) -> None:
        """Test a single-segment trip bound."""
        assert trip_bound(1, 0, 10) == pytest.approx(
            math.hypot(1.0, math.sin(math.pi / 5))
        )
        assert trip_bound(2, 1, 10) > trip_bound(2, 0, 10)

    def test_type_bounds(self) -> None:
        """Test type bounds at one segment hit the decagon diagonals."""
        assert length_lower_bound(1, 1, 10) == 1.0
        assert length_lower_bound(4, 1, 10) == pytest.approx(
            2.0 * math.cos(math.pi / 10)
        )
        assert length_lower_bound(3, 1, 10) == pytest.approx(1.0 + math.sqrt(5.0))
        assert EPS_0 == pytest.approx(2.0 * math.cos(math.pi / 10) - math.sqrt(2.0))
        assert EPS_1_EFFECTIVE == pytest.approx(
            DECAGON_LONG_DIAGONAL - 2.0 * math.sqrt(2.0)
        )
        assert long_segment_bound(10) == pytest.approx(2.0 * math.cos(math.pi / 10))

    def test_bouw_moller_bounds(self) -> None:
        """Test the Bouw-Moller length and pair bounds."""
        assert bm_length_bound(1) == pytest.approx(2.0 * math.sqrt(2.0) - 1.0)
        cos8 = math.cos(math.pi / 8)
        assert pair_g_bound(8, 8) == pytest.approx(8.0 * cos8 * cos8)
        assert pair_h_bound(8, 8) == pytest.approx(4.0 * cos8)


@pytest.mark.unit
class TestBouwMollerSegments:
    """Test Bouw-Moller segment predicates."""

    def test_odd_separation(self) -> None:
        """Test non-adjacent segments need an odd gap of adjacent ones."""
        odd = _bm_decomposition([NON_ADJACENT, ADJACENT, NON_ADJACENT])
        even = _bm_decomposition(
            [NON_ADJACENT, ADJACENT, ADJACENT, NON_ADJACENT]
        )
        touching = _bm_decomposition([NON_ADJACENT, NON_ADJACENT])
        assert is_odd_saddle_connection(odd)
        assert not is_odd_saddle_connection(even)
        assert not is_odd_saddle_connection(touching)
        assert is_odd_saddle_connection(touching, allow_zero=True)

    def test_single_non_adjacent(self) -> None:
        """Test one non-adjacent segment leaves nothing to separate."""
        single = _bm_decomposition([ADJACENT, NON_ADJACENT])
        assert not is_odd_saddle_connection(single)
        assert not is_odd_saddle_connection(single, allow_zero=True)
        assert not is_odd_saddle_connection(_bm_decomposition([NON_ADJACENT]))

    def test_end_polygon_sides(self, bm_4_8) -> None:
        """Test sides touching P(0) or P(m-1) are recognised."""
        assert is_end_polygon_side(bm_4_8, side_connection(bm_4_8, 0, 0))
        assert is_end_polygon_side(bm_4_8, side_connection(bm_4_8, 3, 0))
        middle = [
            edge
            for edge in range(bm_4_8.polygon(1).size)
            if bm_4_8.partner((1, edge))[0] == 2
        ]
        assert middle
        assert not is_end_polygon_side(bm_4_8, side_connection(bm_4_8, 1, middle[0]))


@pytest.mark.unit
class TestBouwMollerGrouping:
    """Test grouping and length bounds on S_{8,8}."""

    @staticmethod
    def _end_diagonals(connections):
        found = find_by_holonomy(connections, (1.0 + math.sqrt(2.0), 0.0))
        return [connections[i] for i in found if not connections[i].crossings]

    def test_end_polygon_diagonal_stands_alone(
        self, bm_8_8, bm_8_8_connections
    ) -> None:
        """Test a diagonal inside P(0) is one group of one unit."""
        diagonals = self._end_diagonals(bm_8_8_connections)
        assert diagonals
        for sc in diagonals:
            dec = bm_subdivide(bm_8_8, sc, strict=True)
            assert dec.counts.n == 1
            assert [group.units for group in dec.groups] == [1]
            assert dec.findings == []
            assert sc.length >= bm_length_bound(1) - 1e-9

    def test_length_bound_without_findings(self, bm_8_8, bm_8_8_connections) -> None:
        """Test grouping succeeds and the length bound holds up to 2.5."""
        checked = 0
        for sc in bm_8_8_connections:
            if is_end_polygon_side(bm_8_8, sc):
                continue
            dec = bm_subdivide(bm_8_8, sc)
            assert dec.findings == [], sc.describe()
            assert sc.length >= bm_length_bound(dec.counts.n) - 1e-9, sc.describe()
            checked += 1
        assert checked > 0

    def test_short_group_is_reported(
        self, bm_8_8, bm_8_8_connections, monkeypatch
    ) -> None:
        """Test a group below its length bound is a finding, or raises."""
        monkeypatch.setattr(
            "libs.segments.bouw_moller.bm_length_bound", lambda units: 100.0
        )
        sc = self._end_diagonals(bm_8_8_connections)[0]

        dec = bm_subdivide(bm_8_8, sc)

        assert any("below" in finding for finding in dec.findings)
        with pytest.raises(SegmentGroupingError, match="below"):
            bm_subdivide(bm_8_8, sc, strict=True)
