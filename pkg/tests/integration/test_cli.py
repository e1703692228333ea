"""Integration tests for the flatcurve command line."""

import csv
import json

import pytest
from typer.testing import CliRunner

from apps.cli.main import app
from apps.cli.reporting import digest

runner = CliRunner()


@pytest.mark.integration
class TestBuild:
    """Test the build command."""

    def test_build_decagon_file(self, temp_dir) -> None:
        """Test a decagon spec is written and reloads as a surface."""
        out = temp_dir / "decagon.json"
        command = ["build", "--family", "ngon", "--n", "10", "--out", str(out)]
        result = runner.invoke(app, command)
        assert result.exit_code == 0, result.output
        spec = json.loads(out.read_text())
        assert len(spec["polygons"]) == 1

        report = temp_dir / "cyl.json"
        result = runner.invoke(
            app, ["cylinders", "--surface", str(out), "--json", str(report)]
        )
        assert result.exit_code == 0, result.output
        assert len(json.loads(report.read_text())["cylinders"]) == 2

    def test_build_rejects_bad_n(self) -> None:
        """Test n = 9 exits with a usage error."""
        result = runner.invoke(app, ["build", "--family", "ngon", "--n", "9"])
        assert result.exit_code == 2

    def test_build_needs_parameters(self) -> None:
        """Test a family without parameters exits 2."""
        result = runner.invoke(app, ["build", "--family", "bm", "--n", "8"])
        assert result.exit_code == 2


@pytest.mark.integration
class TestSurfaceInput:
    """Test surface loading failures."""

    def test_malformed_spec(self, temp_dir) -> None:
        """Test unreadable spec content exits 2."""
        path = temp_dir / "broken.json"
        path.write_text("{not json")
        command = ["enumerate", "--surface", str(path), "--lmax", "2"]
        result = runner.invoke(app, command)
        assert result.exit_code == 2

    def test_spec_not_utf8(self, temp_dir) -> None:
        """Test spec bytes that are not UTF-8 exit 2."""
        path = temp_dir / "binary.json"
        path.write_bytes(b"\xff\xfe{")
        command = ["enumerate", "--surface", str(path), "--lmax", "2"]
        result = runner.invoke(app, command)
        assert result.exit_code == 2

    def test_unpaired_edges(self, temp_dir) -> None:
        """Test a spec with a missing gluing exits 2."""
        path = temp_dir / "open.json"
        path.write_text(
            json.dumps(
                {
                    "polygons": [
                        {
                            "id": 0,
                            "vertices": [[0, 0], [1, 0], [1, 1], [0, 1]],
                            "labels": ["a", "b", "a", "b"],
                        }
                    ],
                    "gluings": [[[0, 0], [0, 2]]],
                }
            )
        )
        command = ["enumerate", "--surface", str(path), "--lmax", "2"]
        result = runner.invoke(app, command)
        assert result.exit_code == 2

    def test_unknown_name(self) -> None:
        """Test a name that is neither a family nor a file exits 2."""
        result = runner.invoke(app, ["kvol", "--surface", "pentagon", "--lmax", "2"])
        assert result.exit_code == 2


@pytest.mark.integration
class TestEnumerate:
    """Test the enumerate command."""

    def test_csv_file(self, temp_dir) -> None:
        """Test the torus CSV lists the eight shortest connections."""
        path = temp_dir / "torus.csv"
        result = runner.invoke(
            app,
            ["enumerate", "--surface", "torus", "--lmax", "1.5", "--csv", str(path)],
        )
        assert result.exit_code == 0, result.output
        with path.open() as handle:
            rows = list(csv.DictReader(handle))
        assert len(rows) == 8
        assert {row["length"] for row in rows} == {"1.0", "1.414213562373"}

    def test_seed_is_ignored(self, temp_dir) -> None:
        """Test --seed leaves the output unchanged."""
        first, second = temp_dir / "a.csv", temp_dir / "b.csv"
        base = ["enumerate", "--surface", "ngon10", "--lmax", "2.5"]
        assert runner.invoke(app, base + ["--csv", str(first)]).exit_code == 0
        assert (
            runner.invoke(app, base + ["--csv", str(second), "--seed", "7"]).exit_code
            == 0
        )
        assert first.read_text() == second.read_text()

    def test_non_positive_lmax(self) -> None:
        """Test lmax 0 exits 2."""
        result = runner.invoke(app, ["enumerate", "--surface", "torus", "--lmax", "0"])
        assert result.exit_code == 2


@pytest.mark.integration
class TestKvol:
    """Test the kvol command."""

    def test_torus_report_and_manifest(self, temp_dir) -> None:
        """Test the report, its sidecar and the digest linking them."""
        path = temp_dir / "torus.json"
        result = runner.invoke(
            app, ["kvol", "--surface", "torus", "--lmax", "1.5", "--json", str(path)]
        )
        assert result.exit_code == 0, result.output
        text = path.read_text()
        report = json.loads(text)
        assert report["max_ratio"] == pytest.approx(1.0)
        assert report["verified"] is True
        manifest = json.loads((temp_dir / "torus.json.manifest.json").read_text())
        assert manifest["result_digest"] == digest(text)
        assert manifest["command"] == "kvol"
        assert manifest["surface_hash"]

    def test_reports_are_byte_identical(self, temp_dir) -> None:
        """Test two runs write the same report."""
        paths = [temp_dir / "one.json", temp_dir / "two.json"]
        for path in paths:
            result = runner.invoke(
                app,
                [
                    "kvol",
                    "--surface",
                    "ngon10",
                    "--lmax",
                    "2",
                    "--max-components",
                    "2",
                    "--json",
                    str(path),
                ],
            )
            assert result.exit_code == 0, result.output
        assert paths[0].read_bytes() == paths[1].read_bytes()
        assert json.loads(paths[0].read_text())["max_ratio"] == pytest.approx(0.5)

    def test_bad_max_components(self) -> None:
        """Test zero components exits 2."""
        result = runner.invoke(
            app, ["kvol", "--surface", "torus", "--lmax", "1", "--max-components", "0"]
        )
        assert result.exit_code == 2


@pytest.mark.integration
class TestWitness:
    """Test the witness command."""

    def test_witness_report(self, temp_dir) -> None:
        """Test S_{4,8} yields ratio 1/2."""
        path = temp_dir / "witness.json"
        result = runner.invoke(
            app, ["witness", "--m", "4", "--n", "8", "--json", str(path)]
        )
        assert result.exit_code == 0, result.output
        report = json.loads(path.read_text())
        assert abs(report["algebraic"]) == 2
        assert report["ratio"] == pytest.approx(0.5)

    def test_gcd_equals_n(self) -> None:
        """Test S_{8,4} is refused with the diagnostic."""
        result = runner.invoke(app, ["witness", "--m", "8", "--n", "4"])
        assert result.exit_code == 2
        assert "equals n" in result.output

    def test_unknown_family(self) -> None:
        """Test only Bouw-Moller witnesses exist."""
        result = runner.invoke(
            app, ["witness", "--family", "ngon", "--m", "4", "--n", "8"]
        )
        assert result.exit_code == 2


@pytest.mark.integration
class TestVerifyAndFigures:
    """Test suite selection, cylinders and svg."""

    def test_unknown_suite(self) -> None:
        """Test an unknown suite exits 2."""
        result = runner.invoke(app, ["verify", "--suite", "everything"])
        assert result.exit_code == 2

    def test_non_periodic_direction(self) -> None:
        """Test an irrational torus slope exits 2."""
        result = runner.invoke(
            app,
            ["cylinders", "--surface", "torus", "--direction", "0.9553166181245093"],
        )
        assert result.exit_code == 2

    def test_svg(self, temp_dir) -> None:
        """Test a figure with two overlays is written."""
        out = temp_dir / "decagon.svg"
        result = runner.invoke(
            app,
            [
                "svg",
                "--surface",
                "ngon10",
                "--out",
                str(out),
                "--overlay",
                "cylinders",
                "--overlay",
                "connection:0",
                "--lmax",
                "1.5",
            ],
        )
        assert result.exit_code == 0, result.output
        assert "<svg" in out.read_text()

    def test_svg_bad_overlay(self, temp_dir) -> None:
        """Test an unknown overlay exits 2."""
        result = runner.invoke(
            app,
            ["svg", "--surface", "ngon10", "--out", str(temp_dir / "x.svg")]
            + ["--overlay", "moon"],
        )
        assert result.exit_code == 2

    def test_bad_log_level(self) -> None:
        """Test an unknown log level exits 2."""
        result = runner.invoke(
            app, ["--log-level", "chatty", "cylinders", "--surface", "torus"]
        )
        assert result.exit_code == 2
