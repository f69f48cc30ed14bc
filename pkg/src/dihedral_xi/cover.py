"""
Cellular chain complex of the irregular dihedral 3-fold branched cover.

Base structure (cone on the diagram): a wall hangs down from every segment of
every component to a single point ``inf`` below the diagram.  Cells:

* 0-cells: ``inf``; at each crossing the under point U and the over point O
* 1-cells: the segments; ``r`` from ``inf`` up to U; ``s`` from U up to O
* 2-cells: one wall per segment, oriented with its normal to the left
* 3-cell: the complement of the walls

Sheets are labelled by the 3-cell lift they sit in.  Crossing the wall below
an alpha segment colored c from its right to its left sends sheet m to
tau_c(m).  A wall lift is labelled by the sheet on its right; edge, U and O
lifts on alpha are labelled by orbits of the local transposition.
"""

import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, Hashable, Iterator, List, Optional, Tuple

from .chains import HomologyData, SparseIntegerMatrix, composes_to_zero, homology
from .coloring import DihedralPermutation, check_fox_coloring, color_to_transposition
from .diagram import HEAD, TAIL, End, Scene
from .errors import CoverError, LiftError

logger = logging.getLogger(__name__)

SHEETS = (1, 2, 3)
Label = Tuple[Hashable, ...]


def _orbit(m: int, tau: DihedralPermutation) -> int:
    return min(m, tau(m))


@dataclass
class CoverComplex:
    scene: Scene
    cells: Tuple[List[Label], List[Label], List[Label], List[Label]]
    index: Tuple[Dict[Label, int], ...]
    d1: SparseIntegerMatrix
    d2: SparseIntegerMatrix
    d3: SparseIntegerMatrix
    segment_tau: Dict[int, DihedralPermutation]
    face_transport: Dict[int, DihedralPermutation]
    _homology: Optional[HomologyData] = field(default=None, repr=False)

    def cell(self, dim: int, label: Label) -> int:
        try:
            return self.index[dim][label]
        except KeyError:
            raise CoverError(f"no {dim}-cell labelled {label}") from None

    @property
    def counts(self) -> Tuple[int, int, int, int]:
        return tuple(len(c) for c in self.cells)  # type: ignore[return-value]

    def outer_lifts(self) -> List[int]:
        return [self.cell(3, ("B", j)) for j in SHEETS]

    def boundaries_compose_to_zero(self) -> bool:
        return composes_to_zero(self.d1, self.d2) and composes_to_zero(self.d2, self.d3)

    def homology(self) -> HomologyData:
        if self._homology is None:
            self._homology = homology(self.counts, self.d1, self.d2, self.d3)
        return self._homology

    def dump(self) -> str:
        lines = ["# dihedral-xi chain complex"]
        lines += [f"cells {dim} {n}" for dim, n in enumerate(self.counts)]
        for dim, labels in enumerate(self.cells):
            for i, label in enumerate(labels):
                lines.append(f"cell {dim} {i} {' '.join(str(x) for x in label)}")
        for name, matrix in (("d1", self.d1), ("d2", self.d2), ("d3", self.d3)):
            for col in sorted(matrix.columns):
                for row, value in sorted(matrix.columns[col].items()):
                    lines.append(f"{name} {row} {col} {value}")
        return "\n".join(lines) + "\n"


class _Builder:
    def __init__(self, scene: Scene):
        self.scene = scene
        self.diagram = scene.diagram
        self.cells: Tuple[List[Label], ...] = ([], [], [], [])
        self.index: Tuple[Dict[Label, int], ...] = ({}, {}, {}, {})
        self.boundary: Tuple[Dict[int, Dict[Label, int]], ...] = ({}, {}, {}, {})
        alpha = scene.alpha.name
        self.tau: Dict[int, DihedralPermutation] = {}
        for seg in self.diagram.segments:
            if seg.component == alpha:
                color = scene.color_of_arc(self.diagram.segment_arc[seg.index])
                self.tau[seg.index] = color_to_transposition(color, scene.p)
            else:
                self.tau[seg.index] = DihedralPermutation.identity(len(SHEETS))
        self.transport = self._face_transport()

    def _face_transport(self) -> Dict[int, DihedralPermutation]:
        """Sheet relabelling from the reference face 0 to every face."""
        diagram = self.diagram
        if not diagram.faces:
            return {}
        neighbours: Dict[int, List[Tuple[int, int]]] = {}
        for seg in diagram.segments:
            if diagram.is_loop(seg.index):
                continue
            right, left = diagram.face_right(seg.index), diagram.face_left(seg.index)
            neighbours.setdefault(right, []).append((left, seg.index))
            neighbours.setdefault(left, []).append((right, seg.index))
        transport = {0: DihedralPermutation.identity(len(SHEETS))}
        queue = deque([0])
        while queue:
            face = queue.popleft()
            for other, seg in neighbours.get(face, []):
                moved = transport[face].then(self.tau[seg])
                if other not in transport:
                    transport[other] = moved
                    queue.append(other)
                elif transport[other] != moved:
                    raise CoverError(
                        f"sheet labels disagree around face {other}; the coloring "
                        f"does not define a cover"
                    )
        return transport

    def add(self, dim: int, label: Label, boundary: Dict[Label, int]) -> None:
        if label in self.index[dim]:
            return
        self.index[dim][label] = len(self.cells[dim])
        self.cells[dim].append(label)
        self.boundary[dim][self.index[dim][label]] = boundary

    # per-crossing helpers

    def end_taus(self, cid: str) -> List[DihedralPermutation]:
        return [self.tau[end.segment] for end in self.diagram.crossings[cid].ends]

    def sector_maps(self, cid: str) -> List[DihedralPermutation]:
        """T_i sends the sheet in sector 0 to the sheet in sector i."""
        taus = self.end_taus(cid)
        maps = [DihedralPermutation.identity(len(SHEETS))]
        for i in range(1, 4):
            maps.append(maps[-1].then(taus[i]))
        return maps

    def over_tau(self, cid: str) -> DihedralPermutation:
        return self.tau[self.diagram.crossings[cid].over_in]

    def under_tau(self, cid: str) -> DihedralPermutation:
        return self.tau[self.diagram.crossings[cid].under_in]

    def u_label(self, cid: str, k: int) -> Label:
        return ("U", cid, _orbit(k, self.under_tau(cid)))

    def o_label(self, cid: str, k: int) -> Label:
        return ("O", cid, _orbit(k, self.over_tau(cid)))

    def e_label(self, seg: int, m: int) -> Label:
        return ("e", seg, _orbit(m, self.tau[seg]))

    def vertical(self, cid: str, pos: int, m: int, incoming: bool) -> Dict[Label, int]:
        """Lift of the vertical path from ``inf`` to the crossing point of an end."""
        rs = pos if incoming else (pos - 1) % 4
        k = self.sector_maps(cid)[rs].inverse()(m)
        chain: Dict[Label, int] = {("r", cid, k): 1}
        if pos in (1, 3):
            side_a = m if rs in (3, 0) else self.over_tau(cid)(m)
            chain[("s", cid, side_a)] = 1
        return chain

    # construction

    def build(self) -> CoverComplex:
        diagram = self.diagram
        for n in SHEETS:
            self.add(0, ("inf", n), {})
        for cid in sorted(diagram.crossings):
            face = diagram.sector_face(cid, 0)
            to_reference = self.transport[face].inverse()
            for k in SHEETS:
                self.add(0, self.u_label(cid, k), {})
                self.add(0, self.o_label(cid, k), {})
            for k in SHEETS:
                self.add(1, ("r", cid, k), _chain(
                    (self.u_label(cid, k), 1), (("inf", to_reference(k)), -1)
                ))
                self.add(1, ("s", cid, k), _chain(
                    (self.o_label(cid, k), 1), (self.u_label(cid, k), -1)
                ))

        for seg in diagram.segments:
            if diagram.is_loop(seg.index):
                self._add_loop(seg.index, seg.component)
                continue
            head_cid, head_pos = diagram.end_at[End(seg.index, HEAD)]
            tail_cid, tail_pos = diagram.end_at[End(seg.index, TAIL)]
            for m in SHEETS:
                if head_pos == 0:
                    head_point = self.u_label(head_cid, m)
                else:
                    head_point = self.o_label(head_cid, m)
                if tail_pos == 2:
                    tail_point = self.u_label(tail_cid, self.end_taus(tail_cid)[1](m))
                else:
                    tail_point = self.o_label(tail_cid, m)
                self.add(1, self.e_label(seg.index, m), _chain(
                    (head_point, 1), (tail_point, -1)
                ))
            for m in SHEETS:
                wall: Dict[Label, int] = {self.e_label(seg.index, m): 1}
                for label, coef in self.vertical(head_cid, head_pos, m, True).items():
                    wall[label] = wall.get(label, 0) - coef
                for label, coef in self.vertical(tail_cid, tail_pos, m, False).items():
                    wall[label] = wall.get(label, 0) + coef
                self.add(2, ("W", seg.index, m), wall)

        for j in SHEETS:
            outer: Dict[Label, int] = {}
            for seg in diagram.segments:
                right = ("W", seg.index, j)
                left = ("W", seg.index, self.tau[seg.index](j))
                outer[right] = outer.get(right, 0) + 1
                outer[left] = outer.get(left, 0) - 1
            self.add(3, ("B", j), outer)

        complex_ = CoverComplex(
            scene=self.scene,
            cells=self.cells,  # type: ignore[arg-type]
            index=self.index,
            d1=self._matrix(1),
            d2=self._matrix(2),
            d3=self._matrix(3),
            segment_tau=self.tau,
            face_transport=self.transport,
        )
        logger.info(
            f"Built cover of {self.scene.name}: cells {complex_.counts}, "
            f"chi={euler_characteristic(complex_)}"
        )
        return complex_

    def _add_loop(self, seg: int, component: str) -> None:
        for m in SHEETS:
            self.add(0, ("D", component, m), {})
            self.add(1, ("rd", component, m), _chain(
                (("D", component, m), 1), (("inf", m), -1)
            ))
            self.add(1, self.e_label(seg, m), {})
            self.add(2, ("W", seg, m), {self.e_label(seg, m): 1})

    def _matrix(self, dim: int) -> SparseIntegerMatrix:
        matrix = SparseIntegerMatrix(len(self.cells[dim - 1]), len(self.cells[dim]))
        for col, chain in self.boundary[dim].items():
            for label, coef in chain.items():
                if label not in self.index[dim - 1]:
                    raise CoverError(f"boundary of a {dim}-cell uses unknown {label}")
                matrix.add(self.index[dim - 1][label], col, coef)
        return matrix


def _chain(*terms: Tuple[Label, int]) -> Dict[Label, int]:
    out: Dict[Label, int] = {}
    for label, coef in terms:
        out[label] = out.get(label, 0) + coef
    return {k: v for k, v in out.items() if v}


def build_cover_complex(scene: Scene) -> CoverComplex:
    if scene.p != 3:
        raise CoverError(f"the cover engine supports p=3 only, scene has p={scene.p}")
    diagnostics = check_fox_coloring(scene)
    if not diagnostics.valid:
        raise CoverError(
            "invalid coloring: " + "; ".join(diagnostics.violations), scene=scene.name
        )
    if len(scene.diagram.pieces) > 1:
        raise CoverError("the projection of the crossing components is split")
    return _Builder(scene).build()


def euler_characteristic(complex_: CoverComplex) -> int:
    n0, n1, n2, n3 = complex_.counts
    return n0 - n1 + n2 - n3


def h1(complex_: CoverComplex) -> List[int]:
    """Invariant factors of H1 (torsion orders, 0 for each free summand)."""
    return complex_.homology().h1_factors


def homology_ranks(complex_: CoverComplex) -> Tuple[int, int, int, int]:
    return complex_.homology().betti


@dataclass(frozen=True)
class WallLifts:
    segment: int
    fixed: int
    double: Tuple[int, int]


def wall_lifts(complex_: CoverComplex, segment: int) -> WallLifts:
    """Lifts of the wall below an alpha segment: the branched pair and the fixed one."""
    tau = complex_.segment_tau[segment]
    fixed = tau.fixed_points()
    if len(fixed) != 1:
        raise CoverError(f"segment {segment} is not on the branch curve")
    pair = tuple(m for m in SHEETS if m != fixed[0])
    return WallLifts(
        segment=segment,
        fixed=complex_.cell(2, ("W", segment, fixed[0])),
        double=(
            complex_.cell(2, ("W", segment, pair[0])),
            complex_.cell(2, ("W", segment, pair[1])),
        ),
    )


@dataclass(frozen=True)
class LiftedCycle:
    """Closed lift of a companion curve.

    ``chain`` maps 1-cell indices to coefficients; ``piercings`` lists the
    wall lifts crossed by the curve pushed to its right and upwards.
    """

    component: str
    sheet: int
    chain: Dict[int, int]
    piercings: Tuple[Tuple[int, int], ...]
    sheets: Tuple[int, ...]


def _walk_segments(scene: Scene, component: str) -> Iterator[int]:
    diagram = scene.diagram
    start = diagram.zeroth_segment(component)
    seg = diagram.segments[start]
    n = max(len(scene.component(component).walk), 1)
    for step in range(n):
        yield diagram.segment_id(component, seg.position + step)


def lift_curve(complex_: CoverComplex, component: str, sheet: int) -> LiftedCycle:
    scene = complex_.scene
    diagram = scene.diagram
    comp = scene.component(component)
    if comp.is_alpha:
        raise LiftError("alpha is the branch curve; only companions are lifted")
    if sheet not in SHEETS:
        raise LiftError(f"sheet must be one of {SHEETS}, got {sheet}")

    chain: Dict[int, int] = {}
    piercings: List[Tuple[int, int]] = []
    sheets: List[int] = []
    m = sheet
    for seg in _walk_segments(scene, component):
        sheets.append(m)
        cell = complex_.cell(1, ("e", seg, m))
        chain[cell] = chain.get(cell, 0) + 1
        if diagram.is_loop(seg):
            continue
        cid, pos = diagram.end_at[End(seg, HEAD)]
        if pos != 0:
            continue
        record = diagram.crossings[cid]
        tau = complex_.segment_tau[record.over_in]
        pierced = record.ends[1].segment
        if record.sign > 0:
            piercings.append((complex_.cell(2, ("W", pierced, m)), 1))
        else:
            piercings.append((complex_.cell(2, ("W", pierced, tau(m))), -1))
        m = tau(m)
    if m != sheet:
        raise LiftError(
            f"lift of {component} starting in sheet {sheet} does not close "
            f"(returns in sheet {m})"
        )
    chain = {k: v for k, v in chain.items() if v}
    boundary = complex_.d1.apply(chain)
    if boundary:
        raise LiftError(f"lift of {component} is not a cycle")
    return LiftedCycle(component, sheet, chain, tuple(piercings), tuple(sheets))


def lift_all(complex_: CoverComplex, component: str) -> List[LiftedCycle]:
    return [lift_curve(complex_, component, j) for j in SHEETS]


def sheet_sequence(cycle: LiftedCycle) -> Tuple[int, ...]:
    """Sheet of every segment along the lift, starting at the zeroth arc."""
    return cycle.sheets
