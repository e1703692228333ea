"""Unit tests for SVG figures."""

import pytest

from apps.cli.rendering import OverlayError, emit_svg, render_svg, resolve_overlay


@pytest.mark.unit
class TestOverlays:
    """Test overlay id resolution."""

    def test_connection_overlay(self, decagon) -> None:
        """Test connection:<i> picks one enumerated connection."""
        overlay = resolve_overlay(decagon, "connection:0", 1.5)
        assert len(overlay.connections) == 1
        assert overlay.connections[0].is_side
        assert overlay.decomposition is None

    def test_cylinders_overlay(self, decagon) -> None:
        """Test cylinders defaults to the horizontal direction."""
        overlay = resolve_overlay(decagon, "cylinders", 1.5)
        assert len(overlay.decomposition.cylinders) == 2
        tilted = resolve_overlay(decagon, "cylinders:0.6283185307179586", 1.5)
        assert tilted.decomposition.direction == pytest.approx(0.6283185307179586)

    def test_delta_overlay(self, decagon) -> None:
        """Test delta finds an image of Δ below length 3."""
        overlay = resolve_overlay(decagon, "delta", 3.0)
        assert len(overlay.connections) == 1

    def test_witness_overlay(self, bm_4_8) -> None:
        """Test the witness overlay draws four sides."""
        overlay = resolve_overlay(bm_4_8, "witness", 1.5)
        assert len(overlay.connections) == 4

    @pytest.mark.parametrize(
        "overlay_id", ["nothing", "connection:999", "connection:x", "cylinders:east"]
    )
    def test_bad_ids(self, decagon, overlay_id: str) -> None:
        """Test ids naming nothing raise OverlayError."""
        with pytest.raises(OverlayError):
            resolve_overlay(decagon, overlay_id, 1.5)

    def test_witness_needs_bouw_moller(self, decagon) -> None:
        """Test the witness overlay is refused on an n-gon."""
        with pytest.raises(OverlayError, match="Bouw-Moller"):
            resolve_overlay(decagon, "witness", 1.5)


@pytest.mark.unit
class TestRenderSvg:
    """Test SVG output."""

    def test_plain_surface(self, decagon) -> None:
        """Test a bare surface renders one outline and its labels."""
        text = render_svg(decagon, [])
        assert text.startswith("<?xml") or text.startswith("<svg")
        assert "<svg" in text
        assert text.count(">1<") == 2

    def test_deterministic(self, decagon) -> None:
        """Test rendering twice gives identical text."""
        overlays = [
            resolve_overlay(decagon, "cylinders", 1.5),
            resolve_overlay(decagon, "connection:0", 1.5),
        ]
        assert render_svg(decagon, overlays) == render_svg(decagon, overlays)

    def test_emit(self, decagon, temp_dir) -> None:
        """Test the figure is written to disk."""
        path = emit_svg(decagon, [], temp_dir / "decagon.svg")
        assert path.exists()
        assert "<svg" in path.read_text()
