"""
Linking numbers of lifted curves in the dihedral cover, and the matrix M.

lk(a, b) = <F, b> / n where dF = n * a.  ``b`` is represented by its wall
piercings (the lift pushed to its right and up), so F only needs to be paired
against 2-cells.
"""

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .chains import solve_bounding
from .coloring import DihedralPermutation
from .cover import SHEETS, CoverComplex, LiftedCycle, build_cover_complex, lift_curve
from .diagram import Scene
from .errors import LinkingError

logger = logging.getLogger(__name__)

Block = Tuple[Tuple[Fraction, ...], ...]


@dataclass(frozen=True)
class BoundingChain:
    cycle: LiftedCycle
    order: int
    chain: Dict[int, int]


def order_and_bounding_chain(complex_: CoverComplex, cycle: LiftedCycle) -> BoundingChain:
    """Minimal n with n * cycle a boundary, and one 2-chain it bounds."""
    n, chain = solve_bounding(complex_.d2, cycle.chain)
    expected = {k: n * v for k, v in cycle.chain.items() if v}
    if complex_.d2.apply(chain) != expected:
        raise LinkingError(
            f"bounding chain check failed for {cycle.component}^{cycle.sheet}"
        )
    return BoundingChain(cycle, n, chain)


def linking_number(
    complex_: CoverComplex,
    a: LiftedCycle,
    b: LiftedCycle,
    bounding: Optional[BoundingChain] = None,
) -> Fraction:
    if a.component == b.component:
        raise LinkingError(
            f"lifts of the same curve {a.component} are not disjoint from its push-off; "
            f"use an explicit push-off component"
        )
    if bounding is None:
        bounding = order_and_bounding_chain(complex_, a)
    pairing = sum(sign * bounding.chain.get(cell, 0) for cell, sign in b.piercings)
    return Fraction(pairing, bounding.order)


@dataclass(frozen=True)
class LinkingBlock:
    """``matrix[j-1][k-1] = lk(first^j, second^k)``."""

    first: str
    second: str
    matrix: Block

    @classmethod
    def build(cls, first: str, second: str, rows: Sequence[Sequence[object]]) -> "LinkingBlock":
        if len(rows) != len(SHEETS) or any(len(r) != len(SHEETS) for r in rows):
            raise LinkingError(f"block {first},{second} must be 3x3")
        return cls(first, second, tuple(tuple(Fraction(str(x)) for x in r) for r in rows))

    def entry(self, j: int, k: int) -> Fraction:
        return self.matrix[j - 1][k - 1]

    def row_sums(self) -> List[Fraction]:
        return [sum(row, Fraction(0)) for row in self.matrix]

    def column_sums(self) -> List[Fraction]:
        return [sum(col, Fraction(0)) for col in zip(*self.matrix)]

    def transpose(self) -> "LinkingBlock":
        return LinkingBlock(self.second, self.first, tuple(zip(*self.matrix)))

    @property
    def is_integral(self) -> bool:
        return all(x.denominator == 1 for row in self.matrix for x in row)

    def as_lists(self) -> List[List[str]]:
        return [[str(x) for x in row] for row in self.matrix]


def linking_block(
    source: Union[Scene, CoverComplex], g: str, h: str
) -> LinkingBlock:
    complex_ = source if isinstance(source, CoverComplex) else build_cover_complex(source)
    rows = []
    for j in SHEETS:
        a = lift_curve(complex_, g, j)
        bounding = order_and_bounding_chain(complex_, a)
        rows.append(
            tuple(
                linking_number(complex_, a, lift_curve(complex_, h, k), bounding)
                for k in SHEETS
            )
        )
    block = LinkingBlock(g, h, tuple(rows))
    logger.debug(f"Block {g},{h}: {block.as_lists()}")
    return block


# basis of H1(V - beta) lifts


@dataclass(frozen=True)
class BasisElement:
    """Formal difference curve^j - curve^k."""

    curve: str
    j: int
    k: int

    @property
    def name(self) -> str:
        return f"{self.curve}^{self.j}-{self.curve}^{self.k}"

    def flipped(self) -> "BasisElement":
        return BasisElement(self.curve, self.k, self.j)


@dataclass(frozen=True)
class BasisSpec:
    elements: Tuple[BasisElement, ...]

    @property
    def names(self) -> List[str]:
        return [e.name for e in self.elements]

    def __len__(self) -> int:
        return len(self.elements)


def basis_lifts(
    omega: Dict[str, DihedralPermutation],
    gamma_r: Optional[DihedralPermutation],
    gamma_l: Optional[DihedralPermutation],
    c0: int,
    genus: int,
    beta: str = "beta",
) -> BasisSpec:
    """Pick the lifts whose differences span the kernel used by M.

    ``omega`` maps every non-characteristic curve to the monodromy of its
    anchor path; ``gamma_r`` and ``gamma_l`` are the monodromies of the anchor
    paths to the right and left push-offs of the characteristic curve.
    """
    if gamma_r is None or gamma_l is None:
        raise LinkingError("missing monodromy for an anchor path of the characteristic curve")
    if len(omega) != 2 * genus - 2:
        raise LinkingError(
            f"genus {genus} needs {2 * genus - 2} omega curves, got {len(omega)}"
        )
    elements = []
    for curve, mu in omega.items():
        if mu is None:
            raise LinkingError(f"missing monodromy for {curve}")
        j, k = sorted(set(SHEETS) - {mu(c0)})
        elements.append(BasisElement(curve, j, k))
    j = gamma_r(c0)
    other = set(SHEETS) - {j, gamma_l(c0)}
    if len(other) != 1:
        raise LinkingError(
            "anchor paths to the two push-offs of the characteristic curve reach the "
            f"same sheet {j}; they cannot name distinct lifts"
        )
    elements.append(BasisElement(beta, j, other.pop()))
    return BasisSpec(tuple(elements))


@dataclass(frozen=True)
class IntersectionDataMatrix:
    basis: Tuple[str, ...]
    matrix: Block

    @property
    def is_symmetric(self) -> bool:
        n = len(self.matrix)
        return all(self.matrix[r][s] == self.matrix[s][r] for r in range(n) for s in range(r))

    @property
    def is_integral(self) -> bool:
        return all(x.denominator == 1 for row in self.matrix for x in row)

    def as_lists(self) -> List[List[str]]:
        return [[str(x) for x in row] for row in self.matrix]


def assemble_M(provider: "BlockSource", basis: BasisSpec) -> IntersectionDataMatrix:
    """m_rs = lk(x_r^j - x_r^k, x_s^{j,+} - x_s^{k,-}).

    Negative push-offs come from positive ones through lk(X, Z-) = lk(Z, X+).
    """
    elements = basis.elements
    rows = []
    for r in elements:
        row = []
        for s in elements:
            forward = provider.block(r.curve, s.curve)
            backward = provider.block(s.curve, r.curve)
            row.append(
                forward.entry(r.j, s.j)
                - backward.entry(s.k, r.j)
                - forward.entry(r.k, s.j)
                + backward.entry(s.k, r.k)
            )
        rows.append(tuple(row))
    matrix = IntersectionDataMatrix(tuple(basis.names), tuple(rows))
    logger.info(f"Assembled M over basis {basis.names}: {matrix.as_lists()}")
    return matrix


class BlockSource(ABC):
    """Anything that returns block(x, y+) for curve names x, y."""

    @abstractmethod
    def block(self, first: str, second: str) -> LinkingBlock:
        """Block indexed [sheet of first][sheet of second+]."""
