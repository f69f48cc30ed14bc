"""
Unit tests for problem loading and Xi evaluation
"""
import json
from fractions import Fraction

import pytest

from dihedral_xi.errors import NotRationalHomologySphereError, SeifertError, XiError
from dihedral_xi.linking import BlockSource, LinkingBlock
from dihedral_xi.pipeline import (
    NOT_OBSTRUCTED,
    OBSTRUCTED,
    UNDETERMINED,
    compute_xi,
    cover_signature,
    load_problem,
    ribbon_bound,
    ribbon_verdict,
    sigma_W,
)
from dihedral_xi.providers import TableBlockProvider

EIGHT_ELEVEN_PROBLEM = {
    "name": "8_11",
    "p": 3,
    "seifert": {
        "matrix": [[1, 0, 0, 0], [-1, 1, 0, 0], [0, -1, -1, -1], [0, 0, -2, 0]],
        "basis": ["A", "B", "gamma", "beta"],
    },
    "characteristic": [0, 0, 0, 1],
    "omega": ["A", "B"],
    "c0": 1,
    "anchor_paths": {
        "delta_A": {"target": "A", "colors": []},
        "delta_B": {"target": "B", "colors": []},
        "gamma_r": {"target": "beta_r", "colors": []},
        "gamma_l": {"target": "beta_l", "colors": [2]},
    },
}


class ConstantBlocks(BlockSource):
    """Every block is the same matrix."""

    def __init__(self, rows):
        self.rows = rows

    def block(self, first, second):
        return LinkingBlock.build(first, second, self.rows)


@pytest.fixture
def problem_file(tmp_path):
    """Write a problem document, with optional changes, and return its path."""

    def _write(**changes):
        doc = json.loads(json.dumps(EIGHT_ELEVEN_PROBLEM))
        doc.update(changes)
        path = tmp_path / "problem.json"
        path.write_text(json.dumps(doc))
        return path

    return _write


@pytest.mark.unit
class TestHelpers:
    """Test small derived quantities."""

    def test_sigma_w(self):
        """sigma(W) = -sigma(M)."""
        assert sigma_W([[-1]]) == 1
        assert sigma_W([[-2, -1, -2], [-1, -2, -2], [-2, -2, -3]]) == 3

    def test_ribbon_bound(self):
        """Ribbon knots have |Xi_p| <= (p - 1)/2."""
        assert ribbon_bound(3) == 1
        assert ribbon_bound(5) == 2

    def test_verdicts(self):
        """The bound itself is not an obstruction."""
        assert ribbon_verdict(1, 3) == NOT_OBSTRUCTED
        assert ribbon_verdict(-1, 3) == NOT_OBSTRUCTED
        assert ribbon_verdict(3, 3) == OBSTRUCTED
        assert ribbon_verdict(Fraction(-5, 2), 5) == OBSTRUCTED

    def test_cover_signature(self):
        """p sigma(X) - (p - 1)/4 e(B) - Xi."""
        assert cover_signature(3, 0, 0, 1) == -1
        assert cover_signature(3, 1, 2, 0) == 2


@pytest.mark.unit
class TestLoadProblem:
    """Test problem files."""

    def test_load_problem_file(self, problem_file):
        """Colors resolve anchor monodromies without a scene."""
        problem = load_problem(problem_file())
        assert problem.seifert.genus == 2
        assert problem.monodromies["A"].is_identity
        assert problem.monodromies["gamma_l"](1) == 3
        assert problem.scenes == []

    def test_load_scene_with_problem(self, data_dir):
        """Scene files carry their own problem section."""
        problem = load_problem(data_dir / "6_1.scene.json")
        assert problem.name == "6_1"
        assert problem.c0 == 1
        assert len(problem.scenes) == 1
        assert problem.monodromies["gamma_r"].is_identity
        assert problem.monodromies["gamma_l"](1) == 3

    def test_not_characteristic(self, problem_file):
        """The characteristic vector is checked."""
        with pytest.raises(SeifertError, match="characteristic"):
            load_problem(problem_file(characteristic=[1, 0, 0, 0]))

    def test_missing_omega_anchor(self, problem_file):
        """Every omega curve needs an anchor path."""
        anchors = dict(EIGHT_ELEVEN_PROBLEM["anchor_paths"])
        del anchors["delta_B"]
        with pytest.raises(XiError, match="no anchor path reaches B"):
            load_problem(problem_file(anchor_paths=anchors))

    def test_c0_needed_without_scene(self, problem_file):
        """c0 defaults to the color of arc 0 only when a scene exists."""
        with pytest.raises(XiError, match="c0"):
            load_problem(problem_file(c0=None))

    def test_unknown_key(self, problem_file):
        """Problem documents reject unknown keys."""
        with pytest.raises(XiError, match="schema"):
            load_problem(problem_file(surprise=True))

    def test_missing_file(self, tmp_path):
        """A missing input is reported."""
        with pytest.raises(XiError, match="not found"):
            load_problem(tmp_path / "none.json")

    def test_scene_without_problem(self, data_dir):
        """A bare scene is not a problem."""
        with pytest.raises(XiError, match="no problem section"):
            load_problem(data_dir / "trefoil.scene.json")


@pytest.mark.unit
class TestComputeXi:
    """Test Xi assembly with injected blocks."""

    def test_table_run(self, problem_file, data_dir):
        """8_11 with the published blocks is obstructed."""
        problem = load_problem(problem_file(assume_rational_homology_sphere=True))
        report = compute_xi(problem, TableBlockProvider.from_file(data_dir / "8_11.blocks.json"))
        assert report.sigma_M == -3
        assert report.sigma_W == 3
        assert report.self_linking == 0
        assert report.xi == 3
        assert report.verdict == OBSTRUCTED
        assert report.h1 is None
        assert report.warnings == []

    def test_undetermined_without_homology(self, problem_file, data_dir):
        """Without H1 and without an assumption the verdict is open."""
        problem = load_problem(problem_file())
        report = compute_xi(problem, TableBlockProvider.from_file(data_dir / "8_11.blocks.json"))
        assert report.verdict == UNDETERMINED
        assert report.warnings

    def test_asymmetric_matrix_warns(self, problem_file):
        """An asymmetric M is symmetrized with a warning."""
        problem = load_problem(problem_file(assume_rational_homology_sphere=True))
        blocks = ConstantBlocks([[1, 2, 0], [0, 0, 0], [0, 0, 0]])
        report = compute_xi(problem, blocks)
        assert any("not symmetric" in w for w in report.warnings)

    def test_report_json(self, problem_file, data_dir):
        """Rationals serialize as strings."""
        problem = load_problem(problem_file(assume_rational_homology_sphere=True))
        report = compute_xi(problem, TableBlockProvider.from_file(data_dir / "8_11.blocks.json"))
        data = json.loads(report.to_json())
        assert data["xi"] == "3"
        assert data["matrix"][2] == ["-2", "-2", "-3"]
        assert data["basis"] == ["A^2-A^3", "B^2-B^3", "beta^1-beta^2"]

    def test_rejects_cover_with_free_homology(self, data_dir, monkeypatch):
        """A cover with b1 > 0 stops the computation."""
        from dihedral_xi import pipeline

        problem = load_problem(data_dir / "6_1.scene.json")
        monkeypatch.setattr(pipeline, "_cover_h1", lambda problem, provider: [0])
        with pytest.raises(NotRationalHomologySphereError):
            compute_xi(problem)
