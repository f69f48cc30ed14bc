"""
Integration tests: Xi of 6_1 from its scene, end to end
"""
import json
from fractions import Fraction

import pytest
from click.testing import CliRunner

from dihedral_xi import compute_xi
from dihedral_xi.cli import main
from dihedral_xi.pipeline import NOT_OBSTRUCTED, load_problem


@pytest.fixture(scope="module")
def six_one_report():
    """Report for the bundled 6_1 scene with the computed provider."""
    from pathlib import Path

    data = Path(__file__).resolve().parent.parent.parent / "data"
    return compute_xi(load_problem(data / "6_1.scene.json"))


@pytest.mark.integration
@pytest.mark.slow
class TestSixOne:
    """Test the full 6_1 computation."""

    def test_cover_is_a_homology_sphere(self, six_one_report):
        """H1 of the 6_1 cover vanishes."""
        assert six_one_report.h1 == []
        assert six_one_report.rational_homology_sphere is True

    def test_anchor_monodromies(self, six_one_report):
        """gamma_r is trivial and gamma_l is a rotation."""
        assert six_one_report.monodromies["gamma_r"] == "Id"
        assert six_one_report.monodromies["gamma_l"] != "Id"
        assert six_one_report.c0 == 1

    def test_basis_and_matrix(self, six_one_report):
        """M = (-1) over beta^1 - beta^2."""
        assert six_one_report.basis == ["beta^1-beta^2"]
        assert six_one_report.matrix == [[Fraction(-1)]]
        assert six_one_report.sigma_W == 1

    def test_xi(self, six_one_report):
        """Xi_3(6_1) = 1, within the ribbon bound."""
        assert six_one_report.term1 == 0
        assert six_one_report.term2 == 0
        assert six_one_report.xi == 1
        assert six_one_report.integral
        assert six_one_report.verdict == NOT_OBSTRUCTED
        assert six_one_report.warnings == []

    def test_rerouted_anchor_paths(self, data_dir, tmp_path, six_one_report):
        """Anchor paths that cross a wall and come straight back give the same lifts.

        gamma_r steps over arc 1 and back before leaving the base face;
        gamma_l doubles back across arc 3 and across its last arc 4.
        """
        raw = json.loads((data_dir / "6_1.scene.json").read_text())
        base = raw["anchor_paths"]["gamma_l"]["arcs"]
        assert base == [1, 3, 2, 5, 10, 4]
        raw["anchor_paths"] = {
            "gamma_r": {"target": "beta_r", "arcs": [1, 1]},
            "gamma_l": {"target": "beta_l", "arcs": [1, 3, 3, 3, 2, 5, 10, 4, 4, 4]},
        }
        path = tmp_path / "6_1.rerouted.scene.json"
        path.write_text(json.dumps(raw))
        report = compute_xi(load_problem(path))
        assert report.monodromies == six_one_report.monodromies
        assert report.basis == ["beta^1-beta^2"]
        assert report.matrix == [[Fraction(-1)]]
        assert report.sigma_M == six_one_report.sigma_M
        assert report.xi == 1

    def test_parallel_prefetch(self, data_dir, six_one_report):
        """Workers do not change the result."""
        report = compute_xi(load_problem(data_dir / "6_1.scene.json"), max_workers=2)
        assert report.xi == six_one_report.xi

    def test_cli_xi(self, data_dir, config_file):
        """``xi`` on the scene file reports Xi = 1."""
        result = CliRunner().invoke(main, [
            "xi", "--input", str(data_dir / "6_1.scene.json"),
            "--json", "--config", str(config_file()),
        ])
        assert result.exit_code == 0, result.output
        assert json.loads(result.output)["xi"] == "1"

    def test_cli_block(self, data_dir, config_file):
        """``block`` prints the 6_1 linking block."""
        result = CliRunner().invoke(main, [
            "block", "--input", str(data_dir / "6_1.scene.json"),
            "--first", "beta", "--second", "beta_r",
            "--json", "--config", str(config_file()),
        ])
        assert result.exit_code == 0, result.output
        assert json.loads(result.output)["matrix"] == [
            ["-1", "0", "1"], ["0", "0", "0"], ["1", "0", "-1"],
        ]
