"""Unit tests for the VerificationService."""

from dataclasses import replace

import pytest

from apps.cli.services.verification_service import SUITES, VerificationService
from libs.kvolsearch import SearchConfig, sup_ratio


@pytest.fixture(scope="module")
def decagon_report(decagon):
    """Decagon search over pairs of curves up to length 2."""
    return sup_ratio(decagon, SearchConfig(lmax=2.0, max_components=2))


@pytest.fixture(scope="module")
def bm_4_8_report(bm_4_8):
    """S_{4,8} search with room for curves of two sides."""
    return sup_ratio(bm_4_8, SearchConfig(lmax=2.5 * bm_4_8.l0, max_components=2))


@pytest.mark.unit
class TestVerificationService:
    """Test verification service functionality."""

    def test_unknown_suite(self) -> None:
        """Test an unknown suite name raises."""
        service = VerificationService()

        with pytest.raises(ValueError, match="unknown suite"):
            service.run("everything")

    def test_suite_names(self) -> None:
        """Test the suites offered on the command line."""
        assert SUITES == ("decagon", "ngon14", "ngon-mod4", "bm")

    def test_ngon_mod4_short_window(self) -> None:
        """Test octagon and 12-gon maxima come from once-crossing sides."""
        service = VerificationService(kvol_lmax=2.0)

        report = service.run("ngon-mod4")

        assert report.suite == "ngon-mod4"
        assert report.passed, [c.findings for c in report.checks]
        names = [check.name for check in report.checks]
        assert names == [
            "ngon8_singularities",
            "ngon8_max_ratio",
            "ngon12_singularities",
            "ngon12_max_ratio",
        ]

    def test_ngon_mod4_default_window(self) -> None:
        """Test the ngon-mod4 suite passes at its own search window."""
        report = VerificationService().run("ngon-mod4")

        assert report.passed, [c.findings for c in report.checks]


@pytest.mark.unit
class TestKVolCheck:
    """Test the maximal ratio check against hand-edited reports."""

    def test_decagon_report_passes(self, decagon_report) -> None:
        """Test a full decagon report passes both achiever directions."""
        check = VerificationService()._kvol_check(
            "decagon_max_ratio",
            decagon_report,
            expected=0.5,
            achiever_ok=lambda record: record.two_side_pair,
            side_pairs_reach=True,
        )

        assert check.passed, check.findings
        assert check.details["side_pairs"] > 0

    def test_truncated_report_fails(self, decagon) -> None:
        """Test achievers left unverified fail the check."""
        config = SearchConfig(lmax=2.0, max_components=2, verify_limit=1)
        report = sup_ratio(decagon, config)

        check = VerificationService()._kvol_check(
            "decagon_max_ratio", report, expected=0.5, side_pairs_reach=True
        )

        assert not check.passed
        assert any("recount limit" in finding for finding in check.findings)

    def test_side_pair_below_maximum_fails(self, decagon_report) -> None:
        """Test a two-side pair missing from the achievers fails the check."""
        trimmed = replace(decagon_report, achievers=decagon_report.achievers[:1])

        check = VerificationService()._kvol_check(
            "decagon_max_ratio", trimmed, expected=0.5, side_pairs_reach=True
        )

        assert not check.passed
        assert any("stays below" in finding for finding in check.findings)

    def test_bm_4_8_side_witness(self, bm_4_8, bm_4_8_report) -> None:
        """Test the S_{4,8} maximum is reached by two sides meeting twice."""
        service = VerificationService()
        expected = 0.5 / bm_4_8.l0**2

        check = service._kvol_check(
            "bm_4_8_max_ratio", bm_4_8_report, expected, side_witness=True
        )
        empty = service._kvol_check(
            "bm_4_8_max_ratio",
            replace(bm_4_8_report, achievers=[]),
            expected,
            side_witness=True,
        )

        assert check.passed, check.findings
        assert not empty.passed
        assert any("two l0-sides" in finding for finding in empty.findings)
