"""
Fox colorings as dihedral representations, and monodromy of anchor paths.

Sheets of the irregular dihedral cover are labelled 1..p.  The reflection of
color ``c`` acts on sheets by ``s -> 2c - s (mod p)``, with label ``p`` standing
for the residue 0; for p = 3 this is 1 -> (23), 2 -> (13), 3 -> (12).
"""

import itertools
import logging
import math
from dataclasses import dataclass, field
from typing import Iterable, List, Sequence, Tuple

from sympy.combinatorics import Permutation
from sympy.polys.domains import GF
from sympy.polys.matrices import DomainMatrix

from .diagram import AnchorPath, Scene
from .errors import ColoringError

logger = logging.getLogger(__name__)


def _label(value: int, p: int) -> int:
    value %= p
    return value if value else p


@dataclass(frozen=True)
class DihedralPermutation:
    """Permutation of sheets 1..n; ``images[s - 1]`` is the image of sheet ``s``."""

    images: Tuple[int, ...]

    @classmethod
    def identity(cls, n: int = 3) -> "DihedralPermutation":
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def from_sympy(cls, perm: Permutation) -> "DihedralPermutation":
        return cls(tuple(perm(i) + 1 for i in range(perm.size)))

    def as_sympy(self) -> Permutation:
        return Permutation([s - 1 for s in self.images])

    def __call__(self, sheet: int) -> int:
        return self.images[sheet - 1]

    @property
    def size(self) -> int:
        return len(self.images)

    def then(self, other: "DihedralPermutation") -> "DihedralPermutation":
        """Apply ``self`` first, then ``other``."""
        return DihedralPermutation.from_sympy(self.as_sympy() * other.as_sympy())

    def inverse(self) -> "DihedralPermutation":
        return DihedralPermutation.from_sympy(~self.as_sympy())

    @property
    def is_identity(self) -> bool:
        return self.images == tuple(range(1, self.size + 1))

    @property
    def is_reflection(self) -> bool:
        return bool(self.as_sympy().is_odd)

    def fixed_points(self) -> Tuple[int, ...]:
        return tuple(s for s in range(1, self.size + 1) if self(s) == s)

    def __str__(self) -> str:
        cycles = self.as_sympy().cyclic_form
        if not cycles:
            return "Id"
        return "".join("(" + "".join(str(i + 1) for i in c) + ")" for c in cycles)


def color_to_transposition(color: int, p: int = 3) -> DihedralPermutation:
    """Sheet action of the meridian of an arc colored ``color``."""
    if not 1 <= color <= p:
        raise ColoringError(f"color {color} outside 1..{p}")
    return DihedralPermutation(
        tuple(_label(2 * color - s, p) for s in range(1, p + 1))
    )


@dataclass
class ColoringDiagnostics:
    valid: bool
    colors_used: Tuple[int, ...]
    violations: List[str] = field(default_factory=list)


def _alpha_relations(scene: Scene) -> List[Tuple[str, Tuple[int, int, int, bool]]]:
    """Per alpha under-crossing: (in-arc, over-arc or -1, out-arc, is self)."""
    diagram = scene.diagram
    alpha = scene.alpha.name
    relations = []
    for record in diagram.crossings.values():
        if record.under_component != alpha:
            continue
        a = diagram.segment_arc[record.under_in]
        c = diagram.segment_arc[record.under_out]
        if record.over_component == alpha:
            b = diagram.segment_arc[record.over_in]
            relations.append((record.id, (a, b, c, True)))
        elif a != c:
            relations.append((record.id, (a, -1, c, False)))
    return sorted(relations)


def check_fox_coloring(scene: Scene) -> ColoringDiagnostics:
    p = scene.p
    m = scene.arc_count(scene.alpha.name)
    colors = scene.coloring
    violations: List[str] = []
    if len(colors) != m:
        violations.append(f"coloring has {len(colors)} entries for {m} arcs")
        return ColoringDiagnostics(False, tuple(sorted(set(colors))), violations)

    for cid, (a, b, c, is_self) in _alpha_relations(scene):
        if is_self:
            if (colors[a] + colors[c] - 2 * colors[b]) % p:
                violations.append(
                    f"crossing {cid}: arcs {a},{c} colored {colors[a]},{colors[c]} "
                    f"under arc {b} colored {colors[b]}"
                )
        elif colors[a] != colors[c]:
            violations.append(
                f"crossing {cid}: alpha changes color under a companion "
                f"({colors[a]} -> {colors[c]})"
            )
    used = tuple(sorted(set(colors)))
    if len(used) < 2:
        violations.append("coloring is not surjective: fewer than two colors")
    return ColoringDiagnostics(not violations, used, violations)


def _canonical(values: Sequence[int], p: int) -> Tuple[int, ...]:
    best = None
    for u in range(1, p):
        if math.gcd(u, p) != 1:
            continue
        for shift in range(p):
            candidate = tuple(_label(u * v + shift, p) for v in values)
            if best is None or candidate < best:
                best = candidate
    assert best is not None
    return best


def enumerate_colorings(scene: Scene, p: int = 3) -> List[Tuple[int, ...]]:
    """All surjective p-colorings of alpha, one per equivalence class.

    Two colorings are equivalent when they differ by ``x -> u*x + c``.
    """
    m = scene.arc_count(scene.alpha.name)
    field_ = GF(p)
    rows = []
    for _, (a, b, c, is_self) in _alpha_relations(scene):
        row = [0] * m
        row[a] += 1
        row[c] += 1 if is_self else -1
        if is_self:
            row[b] -= 2
        rows.append([field_(x) for x in row])

    if rows:
        reduced, pivots = DomainMatrix(rows, (len(rows), m), field_).rref()
        dense = [[int(x) % p for x in r] for r in reduced.to_list()]
    else:
        pivots, dense = (), []
    free = [j for j in range(m) if j not in pivots]

    classes = set()
    for assignment in itertools.product(range(p), repeat=len(free)):
        values = [0] * m
        for j, v in zip(free, assignment):
            values[j] = v
        for r, j in enumerate(pivots):
            values[j] = -sum(dense[r][k] * values[k] for k in free) % p
        if len(set(values)) < 2:
            continue
        classes.add(_canonical(values, p))
    logger.debug(f"{scene.name}: {len(classes)} coloring class(es) mod {p}")
    return sorted(classes)


def monodromy_of_colors(colors: Iterable[int], p: int = 3) -> DihedralPermutation:
    """Compose meridian actions so that the first color crossed acts first."""
    result = DihedralPermutation.identity(p)
    for color in colors:
        result = result.then(color_to_transposition(color, p))
    return result


def monodromy(path: AnchorPath, scene: Scene) -> DihedralPermutation:
    m = scene.arc_count(scene.alpha.name)
    for arc in path.arcs:
        if not 0 <= arc < m:
            raise ColoringError(f"anchor path {path.name}: arc {arc} is not on alpha")
    return monodromy_of_colors((scene.color_of_arc(a) for a in path.arcs), scene.p)


def sheet_trace(path: AnchorPath, scene: Scene, start: int) -> List[int]:
    """Sheet reached after each crossing of ``path`` when starting in ``start``."""
    sheets = []
    sheet = start
    for arc in path.arcs:
        sheet = color_to_transposition(scene.color_of_arc(arc), scene.p)(sheet)
        sheets.append(sheet)
    return sheets
