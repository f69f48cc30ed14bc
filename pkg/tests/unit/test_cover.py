"""
Unit tests for the dihedral cover chain complex and lifted curves
"""
import json

import pytest
from braid_scenes import closed_braid_scene

from dihedral_xi.coloring import enumerate_colorings
from dihedral_xi.cover import (
    SHEETS,
    build_cover_complex,
    euler_characteristic,
    h1,
    homology_ranks,
    lift_all,
    lift_curve,
    sheet_sequence,
    wall_lifts,
)
from dihedral_xi.diagram import parse_scene
from dihedral_xi.errors import CoverError, LiftError


@pytest.mark.unit
class TestCoverComplex:
    """Test construction of the cover complex."""

    def test_boundaries_compose_to_zero(self, six_one_cover):
        """d1 d2 = 0 and d2 d3 = 0 on the 6_1 cover."""
        assert six_one_cover.boundaries_compose_to_zero()

    def test_three_outer_lifts(self, six_one_cover):
        """The complement of the walls lifts to three 3-cells."""
        assert six_one_cover.counts[3] == 3
        assert len(six_one_cover.outer_lifts()) == 3

    def test_euler_characteristic(self, six_one_cover, trefoil_scene):
        """Closed 3-manifolds have Euler characteristic zero."""
        assert euler_characteristic(six_one_cover) == 0
        assert euler_characteristic(build_cover_complex(trefoil_scene)) == 0

    def test_six_one_cover_is_a_homology_sphere(self, six_one_cover):
        """H1 of the 6_1 cover vanishes."""
        assert h1(six_one_cover) == []
        assert homology_ranks(six_one_cover) == (1, 0, 0, 1)

    def test_trefoil_cover(self, trefoil_scene):
        """The trefoil cover is a closed connected rational homology sphere."""
        complex_ = build_cover_complex(trefoil_scene)
        assert complex_.boundaries_compose_to_zero()
        betti = homology_ranks(complex_)
        assert betti[0] == 1 and betti[3] == 1
        assert complex_.homology().is_rational_homology_sphere
        assert h1(complex_) == []

    def test_loops_do_not_change_homology(self, trefoil_scene, loops_scene):
        """Crossing-free companions add cells but no homology."""
        plain = build_cover_complex(trefoil_scene)
        with_loops = build_cover_complex(loops_scene)
        assert with_loops.counts != plain.counts
        assert h1(with_loops) == h1(plain)
        assert euler_characteristic(with_loops) == 0

    def test_face_transport_covers_every_face(self, six_one_scene, six_one_cover):
        """Every face gets a sheet relabelling."""
        assert set(six_one_cover.face_transport) == set(range(len(six_one_scene.diagram.faces)))

    def test_rejects_invalid_coloring(self, meridian_document):
        """The cover needs a valid coloring."""
        meridian_document["coloring"] = [1, 1, 1, 1]
        with pytest.raises(CoverError, match="invalid coloring"):
            build_cover_complex(parse_scene(json.dumps(meridian_document)))

    def test_rejects_other_p(self, meridian_document):
        """Only p = 3 is supported."""
        meridian_document["p"] = 5
        with pytest.raises(CoverError, match="p=3"):
            build_cover_complex(parse_scene(json.dumps(meridian_document)))

    def test_rejects_split_piece_with_crossings(self):
        """A companion drawn apart from alpha must be crossing-free."""
        word = [1, 1, 1, 3]
        scene = closed_braid_scene(word, names=["alpha", "k"], strands=4)
        (colors,) = enumerate_colorings(scene)
        colored = closed_braid_scene(word, names=["alpha", "k"], strands=4, coloring=colors)
        assert len(colored.diagram.pieces) == 2
        with pytest.raises(CoverError, match="split"):
            build_cover_complex(colored)

    def test_unknown_cell(self, six_one_cover):
        """Looking up a missing label raises."""
        with pytest.raises(CoverError):
            six_one_cover.cell(2, ("W", -1, 1))

    def test_dump_format(self, trefoil_scene):
        """Dumps list cell counts and boundary entries."""
        complex_ = build_cover_complex(trefoil_scene)
        lines = complex_.dump().splitlines()
        assert lines[0] == "# dihedral-xi chain complex"
        assert lines[1:5] == [f"cells {d} {n}" for d, n in enumerate(complex_.counts)]
        assert any(line.startswith("d2 ") for line in lines)

    def test_wall_lifts(self, trefoil_scene):
        """Alpha walls have one fixed lift and one branched pair."""
        complex_ = build_cover_complex(trefoil_scene)
        lifts = wall_lifts(complex_, 0)
        assert len({lifts.fixed, *lifts.double}) == 3

    def test_branched_pair_meets_along_the_lifted_arc(self, trefoil_scene):
        """The two cells of the double wall share the single lift of their alpha edge."""
        complex_ = build_cover_complex(trefoil_scene)
        lifts = wall_lifts(complex_, 0)
        (fixed_sheet,) = complex_.segment_tau[0].fixed_points()
        swapped = min(m for m in SHEETS if m != fixed_sheet)
        branch_edge = complex_.cell(1, ("e", 0, swapped))
        for cell in lifts.double:
            assert complex_.d2.column(cell)[branch_edge] == 1
        assert branch_edge not in complex_.d2.column(lifts.fixed)
        assert complex_.cell(1, ("e", 0, fixed_sheet)) in complex_.d2.column(lifts.fixed)


@pytest.mark.unit
class TestLiftCurve:
    """Test lifts of companion curves."""

    def test_six_one_lifts_close(self, six_one_cover):
        """beta lifts to three closed loops in disjoint sheets."""
        lifts = lift_all(six_one_cover, "beta")
        assert [c.sheet for c in lifts] == list(SHEETS)
        for j, cycle in enumerate(lifts, start=1):
            assert six_one_cover.d1.apply(cycle.chain) == {}
            assert sheet_sequence(cycle)[0] == j
        for a in lifts:
            for b in lifts:
                if a is not b:
                    assert not set(a.chain) & set(b.chain)

    def test_meridian_lift_in_fixed_sheet(self, meridian_scene):
        """A meridian of an arc colored 3 closes only in sheet 3."""
        complex_ = build_cover_complex(meridian_scene)
        cycle = lift_curve(complex_, "m", 3)
        assert set(sheet_sequence(cycle)) == {3}

    def test_meridian_lift_does_not_close(self, meridian_scene):
        """In sheets 1 and 2 the meridian lift is open."""
        complex_ = build_cover_complex(meridian_scene)
        with pytest.raises(LiftError, match="does not close"):
            lift_curve(complex_, "m", 1)

    def test_alpha_is_not_lifted(self, six_one_cover):
        """The branch curve has no lift."""
        with pytest.raises(LiftError, match="branch curve"):
            lift_curve(six_one_cover, "alpha", 1)

    def test_bad_sheet(self, six_one_cover):
        """Sheets are 1, 2, 3."""
        with pytest.raises(LiftError, match="sheet"):
            lift_curve(six_one_cover, "beta", 4)

    def test_loop_lifts(self, loops_scene):
        """A crossing-free companion lifts verbatim to each sheet."""
        complex_ = build_cover_complex(loops_scene)
        cycle = lift_curve(complex_, "u", 2)
        assert len(cycle.chain) == 1
        assert cycle.piercings == ()
