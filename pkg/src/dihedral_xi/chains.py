"""
Sparse integer linear algebra for cellular chain complexes.

Boundary matrices are stored column-wise as dict-of-dicts.  Elimination first
removes every unit pivot it can find (cheap and exact over ZZ), then hands the
small residual block to sympy's Smith normal form.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Set, Tuple

from sympy.polys.domains import ZZ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.normalforms import invariant_factors, smith_normal_decomp

from .errors import NotRationalHomologySphereError

logger = logging.getLogger(__name__)

Vector = Dict[int, int]


@dataclass
class SparseIntegerMatrix:
    """Integer matrix stored as ``columns[col][row] = value`` (zeros omitted)."""

    nrows: int
    ncols: int
    columns: Dict[int, Vector] = field(default_factory=dict)

    def add(self, row: int, col: int, value: int) -> None:
        if not value:
            return
        column = self.columns.setdefault(col, {})
        total = column.get(row, 0) + value
        if total:
            column[row] = total
        else:
            del column[row]

    def rows(self) -> Dict[int, Vector]:
        out: Dict[int, Vector] = {}
        for col, entries in self.columns.items():
            for row, value in entries.items():
                out.setdefault(row, {})[col] = value
        return out

    def column(self, col: int) -> Vector:
        return dict(self.columns.get(col, {}))

    def apply(self, vector: Vector) -> Vector:
        """Matrix times a sparse column vector."""
        out: Vector = {}
        for col, coef in vector.items():
            for row, value in self.columns.get(col, {}).items():
                out[row] = out.get(row, 0) + coef * value
        return {k: v for k, v in out.items() if v}

    def nnz(self) -> int:
        return sum(len(c) for c in self.columns.values())

    def to_domain_matrix(self) -> DomainMatrix:
        rep: Dict[int, Dict[int, object]] = {}
        for col, entries in self.columns.items():
            for row, value in entries.items():
                rep.setdefault(row, {})[col] = ZZ(value)
        return DomainMatrix(rep, (self.nrows, self.ncols), ZZ)


def composes_to_zero(first: SparseIntegerMatrix, second: SparseIntegerMatrix) -> bool:
    """Is ``first * second`` the zero matrix?"""
    if first.ncols != second.nrows:
        raise ValueError("incompatible boundary shapes")
    product = first.to_domain_matrix() * second.to_domain_matrix()
    return bool(product.is_zero_matrix)


@dataclass
class PivotStep:
    row: int
    col: int
    entries: Vector
    rhs: int


@dataclass
class Reduction:
    steps: List[PivotStep]
    rows: Dict[int, Vector]
    rhs: Vector

    @property
    def rank_from_pivots(self) -> int:
        return len(self.steps)


def eliminate_unit_pivots(
    matrix: SparseIntegerMatrix, rhs: Optional[Vector] = None
) -> Reduction:
    """Gaussian elimination restricted to +-1 pivots, tracking a right-hand side."""
    rows = {r: dict(v) for r, v in matrix.rows().items()}
    b: Vector = dict(rhs or {})
    col_rows: Dict[int, Set[int]] = {}
    for r, entries in rows.items():
        for c in entries:
            col_rows.setdefault(c, set()).add(r)

    steps: List[PivotStep] = []
    while True:
        best: Optional[Tuple[int, int, int]] = None
        for r, entries in rows.items():
            for c, value in entries.items():
                if value not in (1, -1):
                    continue
                cost = (len(entries) - 1) * (len(col_rows[c]) - 1)
                if best is None or cost < best[0]:
                    best = (cost, r, c)
                    if cost == 0:
                        break
            if best is not None and best[0] == 0:
                break
        if best is None:
            break

        _, pr, pc = best
        pivot_row = rows.pop(pr)
        pivot = pivot_row[pc]
        pivot_rhs = b.pop(pr, 0)
        for c in pivot_row:
            col_rows[c].discard(pr)
        for r in list(col_rows[pc]):
            entries = rows[r]
            factor = entries[pc] * pivot
            for c, value in pivot_row.items():
                updated = entries.get(c, 0) - factor * value
                if updated:
                    if c not in entries:
                        col_rows[c].add(r)
                    entries[c] = updated
                elif c in entries:
                    del entries[c]
                    col_rows[c].discard(r)
            if pivot_rhs:
                b[r] = b.get(r, 0) - factor * pivot_rhs
        del col_rows[pc]
        steps.append(PivotStep(pr, pc, pivot_row, pivot_rhs))

    remaining = {r: e for r, e in rows.items() if e}
    leftover_rhs = {r: v for r, v in b.items() if v}
    return Reduction(steps, remaining, leftover_rhs)


def _dense(rows: Dict[int, Vector]) -> Tuple[List[int], List[int], DomainMatrix]:
    row_ids = sorted(rows)
    col_ids = sorted({c for e in rows.values() for c in e})
    col_pos = {c: i for i, c in enumerate(col_ids)}
    dense = [[ZZ(0)] * len(col_ids) for _ in row_ids]
    for i, r in enumerate(row_ids):
        for c, value in rows[r].items():
            dense[i][col_pos[c]] = ZZ(value)
    return row_ids, col_ids, DomainMatrix(dense, (len(row_ids), len(col_ids)), ZZ)


def rank_and_torsion(matrix: SparseIntegerMatrix) -> Tuple[int, List[int]]:
    """Rank of an integer matrix and its invariant factors larger than 1."""
    reduction = eliminate_unit_pivots(matrix)
    rank = reduction.rank_from_pivots
    torsion: List[int] = []
    if reduction.rows:
        _, _, residual = _dense(reduction.rows)
        factors = [abs(int(d)) for d in invariant_factors(residual)]
        rank += sum(1 for d in factors if d)
        torsion = sorted(d for d in factors if d > 1)
    return rank, torsion


def solve_bounding(
    matrix: SparseIntegerMatrix, target: Vector
) -> Tuple[int, Vector]:
    """Smallest n >= 1 and an integer x with ``matrix * x = n * target``.

    Raises ``NotRationalHomologySphereError`` when no multiple of the target
    lies in the image.
    """
    if not target:
        return 1, {}
    reduction = eliminate_unit_pivots(matrix, target)
    rows, rhs = reduction.rows, reduction.rhs

    for r in rhs:
        if r not in rows:
            raise NotRationalHomologySphereError(
                "cycle has infinite order: no multiple bounds"
            )

    n = 1
    residual_solution: Vector = {}
    if rows and rhs:
        row_ids, col_ids, residual = _dense(rows)
        smf, s, t = smith_normal_decomp(residual)
        diag = smf.to_list()
        s_rows = s.to_list()
        t_rows = t.to_list()
        sb = [
            sum(int(s_rows[i][k]) * rhs.get(r, 0) for k, r in enumerate(row_ids))
            for i in range(len(row_ids))
        ]
        rank = sum(
            1 for i in range(min(len(row_ids), len(col_ids))) if int(diag[i][i])
        )
        if any(sb[i] for i in range(rank, len(row_ids))):
            raise NotRationalHomologySphereError(
                "cycle has infinite order: no multiple bounds"
            )
        for i in range(rank):
            d = int(diag[i][i])
            n = math.lcm(n, abs(d) // math.gcd(abs(d), sb[i]))
        z = [n * sb[i] // int(diag[i][i]) for i in range(rank)]
        for j, c in enumerate(col_ids):
            value = sum(int(t_rows[j][i]) * z[i] for i in range(rank))
            if value:
                residual_solution[c] = value

    x: Vector = dict(residual_solution)
    for step in reversed(reduction.steps):
        acc = n * step.rhs
        for c, value in step.entries.items():
            if c != step.col:
                acc -= value * x.get(c, 0)
        value = acc * step.entries[step.col]
        if value:
            x[step.col] = value
    return n, x


@dataclass
class HomologyData:
    betti: Tuple[int, int, int, int]
    torsion_h1: List[int]

    @property
    def h1_factors(self) -> List[int]:
        """Invariant factors of H1; 0 marks a free summand."""
        return list(self.torsion_h1) + [0] * self.betti[1]

    @property
    def is_rational_homology_sphere(self) -> bool:
        return self.betti[1] == 0


def homology(
    counts: Tuple[int, int, int, int],
    d1: SparseIntegerMatrix,
    d2: SparseIntegerMatrix,
    d3: SparseIntegerMatrix,
) -> HomologyData:
    r1, _ = rank_and_torsion(d1)
    r2, torsion = rank_and_torsion(d2)
    r3, _ = rank_and_torsion(d3)
    n0, n1, n2, n3 = counts
    betti = (n0 - r1, n1 - r1 - r2, n2 - r2 - r3, n3 - r3)
    logger.debug(f"Betti numbers {betti}, H1 torsion {torsion}")
    return HomologyData(betti, torsion)
