"""End-to-end verification suites at their default windows."""

import json

import pytest
from typer.testing import CliRunner

from apps.cli.main import app
from apps.cli.services.verification_service import VerificationService
from libs.builders import regular_ngon
from libs.kvolsearch import SearchConfig, sup_ratio

runner = CliRunner()


@pytest.mark.slow
@pytest.mark.integration
class TestSuites:
    """Test every suite passes its gating checks."""

    @pytest.mark.parametrize("suite", ["decagon", "ngon14", "ngon-mod4", "bm"])
    def test_suite_passes(self, suite: str) -> None:
        """Test the suite report."""
        service = VerificationService(max_workers=4)

        report = service.run(suite)

        failed = {
            c.name: c.findings for c in report.checks if c.gating and not c.passed
        }
        assert report.passed, failed

    def test_decagon_suite_from_cli(self, temp_dir) -> None:
        """Test the decagon suite through the command line."""
        path = temp_dir / "decagon.json"

        command = ["verify", "--suite", "decagon", "--json", str(path)]
        result = runner.invoke(app, command)

        assert result.exit_code == 0, result.output
        report = json.loads(path.read_text())
        assert report["passed"] is True
        names = {check["name"] for check in report["checks"]}
        assert {"max_ratio", "singularity_structure", "case_lemma_Ia"} <= names


@pytest.mark.slow
@pytest.mark.integration
class TestDecagonMaximum:
    """Test the decagon maximum over a long window."""

    def test_half_reached_only_by_side_pairs(self) -> None:
        """Test max ratio 1/2 up to length 6, achieved by two-side curves."""
        surface = regular_ngon(10)

        report = sup_ratio(
            surface, SearchConfig(lmax=6.0, max_components=2, max_workers=4)
        )

        assert report.max_ratio == pytest.approx(0.5, abs=1e-9)
        assert report.verified
        assert all(record.two_side_pair for record in report.achievers)
