"""
Colored link-diagram scenes.

A scene is a planar diagram of the branch knot ``alpha`` plus at most two
companion curves.  Each component is stored as its closed walk through the
crossings; the rotation system, the faces of the projection and the arc
numbering used by the cover are derived from the walks and the crossing signs.
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Dict, List, Literal, NamedTuple, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from .errors import SceneError

logger = logging.getLogger(__name__)

ALPHA = "alpha"
COMPANION = "companion"
HEAD = "head"
TAIL = "tail"


# --- file schema -----------------------------------------------------------


class AnchorPathDocument(BaseModel):
    model_config = ConfigDict(extra="forbid")

    target: str
    arcs: List[int] = Field(default_factory=list)


class ComponentDocument(BaseModel):
    model_config = ConfigDict(extra="forbid")

    name: str
    role: Literal["alpha", "companion"]
    walk: List[Tuple[str, Literal["over", "under"]]] = Field(default_factory=list)


class SceneDocument(BaseModel):
    model_config = ConfigDict(extra="forbid")

    name: str = "scene"
    p: int = 3
    components: List[ComponentDocument]
    crossings: Dict[str, Literal[1, -1]] = Field(default_factory=dict)
    zeroth_arcs: Dict[str, int] = Field(default_factory=dict)
    coloring: List[int] = Field(default_factory=list)
    anchor_paths: Dict[str, AnchorPathDocument] = Field(default_factory=dict)
    problem: Optional[Dict[str, Any]] = None


# --- value types -----------------------------------------------------------


class Passage(NamedTuple):
    crossing: str
    over: bool


class Segment(NamedTuple):
    """Piece of a walk from passage ``position`` to the next passage."""

    index: int
    component: str
    position: int


class End(NamedTuple):
    segment: int
    side: str  # HEAD or TAIL


@dataclass(frozen=True)
class Component:
    name: str
    role: str
    walk: Tuple[Passage, ...]

    @property
    def is_alpha(self) -> bool:
        return self.role == ALPHA


@dataclass(frozen=True)
class AnchorPath:
    """Under-crossing word of a path from alpha's zeroth arc to ``target``."""

    name: str
    target: str
    arcs: Tuple[int, ...]


@dataclass(frozen=True)
class CrossingRecord:
    """Derived view of one crossing.

    ``ends`` lists the four segment ends counter-clockwise starting with the
    incoming under end.
    """

    id: str
    sign: int
    under_component: str
    over_component: str
    under_in: int
    under_out: int
    over_in: int
    over_out: int

    @property
    def ends(self) -> Tuple[End, End, End, End]:
        if self.sign > 0:
            return (
                End(self.under_in, HEAD),
                End(self.over_out, TAIL),
                End(self.under_out, TAIL),
                End(self.over_in, HEAD),
            )
        return (
            End(self.under_in, HEAD),
            End(self.over_in, HEAD),
            End(self.under_out, TAIL),
            End(self.over_out, TAIL),
        )


@dataclass(frozen=True)
class GaussLists:
    component: str
    f: Tuple[int, ...]
    eps: Tuple[int, ...]
    t: Tuple[str, ...]
    c: Tuple[int, ...] = ()


@dataclass(frozen=True)
class Scene:
    name: str
    p: int
    components: Tuple[Component, ...]
    signs: Dict[str, int]
    zeroth_arcs: Dict[str, int]
    coloring: Tuple[int, ...]
    anchor_paths: Dict[str, AnchorPath] = field(default_factory=dict)
    problem: Optional[Dict[str, Any]] = None

    def component(self, name: str) -> Component:
        for comp in self.components:
            if comp.name == name:
                return comp
        raise SceneError(f"unknown component {name!r}", scene=self.name)

    @property
    def alpha(self) -> Component:
        return next(c for c in self.components if c.is_alpha)

    @property
    def companions(self) -> Tuple[Component, ...]:
        return tuple(c for c in self.components if not c.is_alpha)

    @cached_property
    def diagram(self) -> "PlanarDiagram":
        return PlanarDiagram(self)

    def arc_count(self, name: str) -> int:
        return self.diagram.arc_count[name]

    def color_of_arc(self, arc: int) -> int:
        if not 0 <= arc < len(self.coloring):
            raise SceneError(f"alpha arc {arc} has no color", scene=self.name)
        return self.coloring[arc]


# --- derived planar structure ----------------------------------------------


class PlanarDiagram:
    """Segments, rotations, faces and arc numbering of a scene."""

    def __init__(self, scene: Scene):
        self.scene = scene
        self.segments: List[Segment] = []
        self.first_segment: Dict[str, int] = {}
        for comp in scene.components:
            self.first_segment[comp.name] = len(self.segments)
            for k in range(max(len(comp.walk), 1)):
                self.segments.append(Segment(len(self.segments), comp.name, k))

        self.crossings: Dict[str, CrossingRecord] = self._crossing_records()
        self.end_at: Dict[End, Tuple[str, int]] = {}
        for record in self.crossings.values():
            for pos, end in enumerate(record.ends):
                self.end_at[end] = (record.id, pos)

        self.faces: List[Tuple[Tuple[str, int], ...]] = []
        self.dart_face: Dict[Tuple[str, int], int] = {}
        self._trace_faces()
        self.pieces = self._pieces()
        self._check_euler()

        self.arc_count: Dict[str, int] = {}
        self.segment_arc: Dict[int, int] = {}
        self.arc_heads: Dict[str, List[int]] = {}
        for comp in scene.components:
            self._number_arcs(comp)

    # segments and crossings

    def segment_id(self, component: str, position: int) -> int:
        comp = self.scene.component(component)
        n = max(len(comp.walk), 1)
        return self.first_segment[component] + position % n

    def is_loop(self, segment: int) -> bool:
        """True for the single segment of a crossing-free component."""
        seg = self.segments[segment]
        return not self.scene.component(seg.component).walk

    def _crossing_records(self) -> Dict[str, CrossingRecord]:
        seen: Dict[str, Dict[str, Tuple[str, int]]] = {}
        for comp in self.scene.components:
            for k, passage in enumerate(comp.walk):
                slot = "over" if passage.over else "under"
                entry = seen.setdefault(passage.crossing, {})
                if slot in entry:
                    raise SceneError(
                        f"open component: crossing {passage.crossing} has two "
                        f"{slot}-passages",
                        scene=self.scene.name,
                    )
                entry[slot] = (comp.name, k)

        records: Dict[str, CrossingRecord] = {}
        for cid, entry in seen.items():
            if set(entry) != {"over", "under"}:
                raise SceneError(
                    f"open component: crossing {cid} is passed only once",
                    scene=self.scene.name,
                )
            if cid not in self.scene.signs:
                raise SceneError(f"crossing {cid} has no sign", scene=self.scene.name)
            under_comp, uk = entry["under"]
            over_comp, ok = entry["over"]
            records[cid] = CrossingRecord(
                id=cid,
                sign=self.scene.signs[cid],
                under_component=under_comp,
                over_component=over_comp,
                under_in=self.segment_id(under_comp, uk - 1),
                under_out=self.segment_id(under_comp, uk),
                over_in=self.segment_id(over_comp, ok - 1),
                over_out=self.segment_id(over_comp, ok),
            )
        unused = set(self.scene.signs) - set(records)
        if unused:
            raise SceneError(
                f"crossings never visited by a walk: {sorted(unused)}",
                scene=self.scene.name,
            )
        return records

    # faces

    def next_dart(self, dart: Tuple[str, int]) -> Tuple[str, int]:
        cid, pos = dart
        end = self.crossings[cid].ends[pos]
        other = End(end.segment, TAIL if end.side == HEAD else HEAD)
        target, j = self.end_at[other]
        return target, (j + 1) % 4

    def _trace_faces(self) -> None:
        for cid in sorted(self.crossings):
            for pos in range(4):
                start = (cid, pos)
                if start in self.dart_face:
                    continue
                cycle = []
                dart = start
                while dart not in self.dart_face:
                    self.dart_face[dart] = len(self.faces)
                    cycle.append(dart)
                    dart = self.next_dart(dart)
                if dart != start:
                    raise SceneError(
                        "non-realizable planar code: face tracing did not close",
                        scene=self.scene.name,
                    )
                self.faces.append(tuple(cycle))

    def sector_face(self, crossing: str, sector: int) -> int:
        """Face containing the sector between ends ``sector`` and ``sector+1``."""
        return self.dart_face[(crossing, (sector + 1) % 4)]

    def face_right(self, segment: int) -> int:
        return self.dart_face[self.end_at[End(segment, TAIL)]]

    def face_left(self, segment: int) -> int:
        return self.dart_face[self.end_at[End(segment, HEAD)]]

    def _pieces(self) -> List[set]:
        parent = {cid: cid for cid in self.crossings}

        def find(x: str) -> str:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for seg in self.segments:
            if self.is_loop(seg.index):
                continue
            a = self.end_at[End(seg.index, TAIL)][0]
            b = self.end_at[End(seg.index, HEAD)][0]
            parent[find(a)] = find(b)
        groups: Dict[str, set] = {}
        for cid in self.crossings:
            groups.setdefault(find(cid), set()).add(cid)
        return list(groups.values())

    def _check_euler(self) -> None:
        for piece in self.pieces:
            vertices = len(piece)
            edges = 2 * vertices
            faces = {self.dart_face[(cid, pos)] for cid in piece for pos in range(4)}
            if vertices - edges + len(faces) != 2:
                raise SceneError(
                    f"non-realizable planar code: V-E+F = "
                    f"{vertices - edges + len(faces)} on a piece with {vertices} "
                    f"crossings",
                    scene=self.scene.name,
                )

    # arc numbering

    def _rank(self, name: str) -> int:
        ranks = {c.name: i for i, c in enumerate(self.scene.companions, start=1)}
        return 0 if name == self.scene.alpha.name else ranks[name]

    def breaks_arc(self, comp: Component, k: int) -> bool:
        """Does passage ``k`` of ``comp`` end an arc?

        alpha and the first companion break only under each other and
        themselves; the second companion breaks under everything.
        """
        passage = comp.walk[k]
        if passage.over:
            return False
        over = self.crossings[passage.crossing].over_component
        return self._rank(over) <= max(self._rank(comp.name), 1)

    def _number_arcs(self, comp: Component) -> None:
        n = len(comp.walk)
        first = self.first_segment[comp.name]
        if n == 0:
            self.arc_count[comp.name] = 1
            self.segment_arc[first] = 0
            self.arc_heads[comp.name] = []
            return
        breaks = [self.breaks_arc(comp, k) for k in range(n)]
        if not any(breaks):
            self.arc_count[comp.name] = 1
            self.arc_heads[comp.name] = []
            for k in range(n):
                self.segment_arc[first + k] = 0
            return

        offset = self.scene.zeroth_arcs.get(comp.name)
        if offset is None:
            offset = (breaks.index(True) + 1) % n
        if not 0 <= offset < n:
            raise SceneError(
                f"zeroth arc offset {offset} out of range for {comp.name}",
                scene=self.scene.name,
            )
        if not breaks[(offset - 1) % n]:
            raise SceneError(
                f"zeroth arc of {comp.name} must start after an arc-breaking "
                f"under-passage",
                scene=self.scene.name,
            )
        arc = 0
        heads: List[int] = []
        for idx in range(n):
            k = (offset + idx) % n
            self.segment_arc[first + (k - 1) % n] = arc
            if breaks[k]:
                heads.append(k)
                arc += 1
        self.arc_count[comp.name] = arc
        self.arc_heads[comp.name] = heads

    def arc_at_passage(self, component: str, k: int) -> int:
        """Arc arriving at passage ``k``; for non-breaking passages it continues."""
        return self.segment_arc[self.segment_id(component, k - 1)]

    def zeroth_segment(self, component: str) -> int:
        """First segment of arc 0."""
        comp = self.scene.component(component)
        if not comp.walk:
            return self.first_segment[component]
        heads = self.arc_heads[component]
        if not heads:
            return self.first_segment[component]
        return self.segment_id(component, heads[-1])


# --- operations ------------------------------------------------------------


def scene_from_document(doc: SceneDocument, mirror: bool = False) -> Scene:
    alphas = [c for c in doc.components if c.role == ALPHA]
    if len(alphas) != 1:
        raise SceneError(f"scene needs exactly one alpha component, got {len(alphas)}")
    if len(doc.components) > 3:
        raise SceneError("scene holds alpha plus at most two companion curves")
    names = [c.name for c in doc.components]
    if len(set(names)) != len(names):
        raise SceneError(f"duplicate component names in {names}")

    components = tuple(
        Component(
            name=c.name,
            role=c.role,
            walk=tuple(Passage(cid, side == "over") for cid, side in c.walk),
        )
        for c in doc.components
    )
    signs = {cid: (-s if mirror else s) for cid, s in doc.crossings.items()}
    anchors = {
        name: AnchorPath(name=name, target=a.target, arcs=tuple(a.arcs))
        for name, a in doc.anchor_paths.items()
    }
    scene = Scene(
        name=doc.name,
        p=doc.p,
        components=components,
        signs=signs,
        zeroth_arcs=dict(doc.zeroth_arcs),
        coloring=tuple(doc.coloring),
        anchor_paths=anchors,
        problem=doc.problem,
    )
    for name in scene.zeroth_arcs:
        scene.component(name)

    diagram = scene.diagram
    m = diagram.arc_count[scene.alpha.name]
    if scene.coloring:
        if len(scene.coloring) < m:
            raise SceneError(
                f"missing coloring entry for alpha arc {len(scene.coloring)}",
                scene=scene.name,
            )
        if len(scene.coloring) > m:
            raise SceneError(
                f"coloring lists {len(scene.coloring)} colors for {m} alpha arcs",
                scene=scene.name,
            )
        bad = [c for c in scene.coloring if not 1 <= c <= scene.p]
        if bad:
            raise SceneError(f"colors must lie in 1..{scene.p}, got {bad}")
    for path in anchors.values():
        for arc in path.arcs:
            if not 0 <= arc < m:
                raise SceneError(
                    f"anchor path {path.name} crosses arc {arc}, which is not an "
                    f"alpha arc",
                    scene=scene.name,
                )
    logger.debug(
        f"Parsed scene {scene.name}: {len(diagram.crossings)} crossings, "
        f"{len(diagram.faces)} faces, {m} alpha arcs"
    )
    return scene


def parse_scene(text: str, mirror: bool = False) -> Scene:
    """Parse and validate scene-file content."""
    try:
        doc = SceneDocument.model_validate_json(text)
    except ValidationError as e:
        raise SceneError(f"scene schema violation: {e}") from e
    return scene_from_document(doc, mirror=mirror)


def serialize_scene(scene: Scene) -> str:
    doc = SceneDocument(
        name=scene.name,
        p=scene.p,
        components=[
            ComponentDocument(
                name=c.name,
                role=c.role,  # type: ignore[arg-type]
                walk=[(ps.crossing, "over" if ps.over else "under") for ps in c.walk],
            )
            for c in scene.components
        ],
        crossings=dict(scene.signs),  # type: ignore[arg-type]
        zeroth_arcs=dict(scene.zeroth_arcs),
        coloring=list(scene.coloring),
        anchor_paths={
            name: AnchorPathDocument(target=a.target, arcs=list(a.arcs))
            for name, a in scene.anchor_paths.items()
        },
        problem=scene.problem,
    )
    return doc.model_dump_json(indent=2)


def derive_gauss_lists(scene: Scene, component: str) -> GaussLists:
    comp = scene.component(component)
    diagram = scene.diagram
    f: List[int] = []
    eps: List[int] = []
    t: List[str] = []
    for k in diagram.arc_heads[comp.name]:
        record = diagram.crossings[comp.walk[k].crossing]
        over = scene.component(record.over_component)
        over_k = next(
            i for i, ps in enumerate(over.walk) if ps.crossing == record.id and ps.over
        )
        f.append(diagram.arc_at_passage(over.name, over_k))
        eps.append(record.sign)
        t.append("k" if over.is_alpha else "p")
    colors = tuple(scene.coloring) if comp.is_alpha and f else ()
    return GaussLists(comp.name, tuple(f), tuple(eps), tuple(t), colors)


def format_gauss_lists(lists: GaussLists, labelled: bool = True) -> List[str]:
    """Render lists in the numbering-table text format, one line per list."""

    def paren(items: List[str]) -> str:
        return "(" + ",".join(items) + ")"

    rows = [
        ("f", [str(x) for x in lists.f]),
        ("ε", ["+" if s > 0 else "-" for s in lists.eps]),
        ("t", list(lists.t)),
    ]
    if lists.c:
        rows.append(("c", [str(x) for x in lists.c]))
    if labelled:
        return [f"{label}={paren(items)}" for label, items in rows]
    return [paren(items) for _, items in rows]


def s3_linking(scene: Scene, g: str, h: str) -> int:
    """Classical linking number: half the signed count of g/h crossings."""
    if g == h:
        raise SceneError("linking number needs two distinct components")
    scene.component(g)
    scene.component(h)
    total = 0
    for record in scene.diagram.crossings.values():
        if {record.under_component, record.over_component} == {g, h}:
            total += record.sign
    if total % 2:
        raise SceneError(f"odd signed crossing count between {g} and {h}")
    return total // 2


def same_alpha_numbering(first: Scene, second: Scene) -> bool:
    """Do two scenes agree on alpha's self-crossing lists and colors?"""

    def self_part(scene: Scene) -> Tuple[Any, ...]:
        lists = derive_gauss_lists(scene, scene.alpha.name)
        keep = [i for i, t in enumerate(lists.t) if t == "k"]
        return (
            tuple(lists.f[i] for i in keep),
            tuple(lists.eps[i] for i in keep),
            lists.c,
        )

    return self_part(first) == self_part(second)


def load_scene(path: Any, mirror: bool = False) -> Scene:
    with open(path, "r", encoding="utf-8") as f:
        return parse_scene(f.read(), mirror=mirror)


def scene_summary(scene: Scene) -> Dict[str, Any]:
    diagram = scene.diagram
    return {
        "name": scene.name,
        "components": [c.name for c in scene.components],
        "crossings": len(diagram.crossings),
        "faces": len(diagram.faces),
        "pieces": len(diagram.pieces),
        "arcs": dict(diagram.arc_count),
    }


__all__ = [
    "AnchorPath",
    "Component",
    "GaussLists",
    "Passage",
    "PlanarDiagram",
    "Scene",
    "derive_gauss_lists",
    "format_gauss_lists",
    "load_scene",
    "parse_scene",
    "s3_linking",
    "same_alpha_numbering",
    "scene_from_document",
    "scene_summary",
    "serialize_scene",
]
