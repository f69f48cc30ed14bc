"""
Seifert forms and mod p characteristic classes.
"""

import itertools
import logging
import math
from dataclasses import dataclass
from functools import reduce
from typing import List, Sequence, Tuple

from sympy import Matrix
from sympy.polys.domains import GF
from sympy.polys.matrices import DomainMatrix

from .errors import SeifertError

logger = logging.getLogger(__name__)

IntMatrix = Tuple[Tuple[int, ...], ...]


def _as_matrix(rows: Sequence[Sequence[int]]) -> IntMatrix:
    return tuple(tuple(int(x) for x in row) for row in rows)


def _require_square(m: Sequence[Sequence[int]], what: str) -> int:
    n = len(m)
    if any(len(row) != n for row in m):
        raise SeifertError(f"{what} must be square, got {n} rows of lengths "
                           f"{[len(r) for r in m]}")
    return n


@dataclass(frozen=True)
class SeifertData:
    """Seifert matrix ``A`` of a surface V in a named basis of H1(V)."""

    matrix: IntMatrix
    basis: Tuple[str, ...]

    @classmethod
    def build(
        cls, matrix: Sequence[Sequence[int]], basis: Sequence[str] = ()
    ) -> "SeifertData":
        n = _require_square(matrix, "Seifert matrix")
        names = tuple(basis) or tuple(f"e{i + 1}" for i in range(n))
        if len(names) != n:
            raise SeifertError(f"{len(names)} basis names for a {n}x{n} matrix")
        data = cls(_as_matrix(matrix), names)
        data.validate()
        return data

    @property
    def genus(self) -> int:
        return len(self.matrix) // 2

    def validate(self) -> None:
        n = len(self.matrix)
        if n % 2:
            raise SeifertError(f"Seifert matrix has odd rank {n}")
        if n == 0:
            return
        a = Matrix(self.matrix)
        if (a - a.T).det() != 1:
            raise SeifertError(
                "A - A^T is not unimodular with determinant 1; this is not the "
                "Seifert matrix of a surface with one boundary component"
            )

    def index(self, name: str) -> int:
        try:
            return self.basis.index(name)
        except ValueError:
            raise SeifertError(f"unknown basis class {name!r}") from None


def symmetrize(data: SeifertData) -> IntMatrix:
    n = _require_square(data.matrix, "Seifert matrix")
    return tuple(
        tuple(data.matrix[i][j] + data.matrix[j][i] for j in range(n)) for i in range(n)
    )


def _check_dims(form: Sequence[Sequence[int]], v: Sequence[int]) -> None:
    if len(form) != len(v):
        raise SeifertError(f"dimension mismatch: {len(form)}x{len(form)} form, "
                           f"vector of length {len(v)}")


def _apply(form: Sequence[Sequence[int]], v: Sequence[int]) -> List[int]:
    return [sum(x * y for x, y in zip(row, v)) for row in form]


def verify_characteristic(form: Sequence[Sequence[int]], v: Sequence[int], p: int) -> bool:
    """Is ``v`` primitive with ``form . v == 0 (mod p)``?"""
    _check_dims(form, v)
    if reduce(math.gcd, (abs(x) for x in v), 0) != 1:
        return False
    return all(x % p == 0 for x in _apply(form, v))


def self_pairing(form: Sequence[Sequence[int]], v: Sequence[int]) -> int:
    _check_dims(form, v)
    return sum(x * y for x, y in zip(v, _apply(form, v)))


def _balanced(x: int, p: int) -> int:
    x %= p
    return x - p if x > p // 2 else x


def mod_p_kernel(form: Sequence[Sequence[int]], p: int) -> List[Tuple[int, ...]]:
    """Basis of ker(form mod p), entries in 0..p-1."""
    n = _require_square(form, "symmetrized form")
    if n == 0:
        return []
    field_ = GF(p)
    reduced, pivots = DomainMatrix(
        [[field_(x) for x in row] for row in form], (n, n), field_
    ).rref()
    dense = [[int(x) % p for x in row] for row in reduced.to_list()]
    basis = []
    for free in (j for j in range(n) if j not in pivots):
        v = [0] * n
        v[free] = 1
        for r, j in enumerate(pivots):
            v[j] = -dense[r][free] % p
        basis.append(tuple(v))
    return basis


def characteristic_classes_mod_p(
    form: Sequence[Sequence[int]], p: int
) -> List[Tuple[int, ...]]:
    """Primitive integer representatives of the projective classes in ker(form mod p).

    Each class is normalized so its first nonzero residue is 1 and then lifted
    with entries in (-p/2, p/2].
    """
    basis = mod_p_kernel(form, p)
    n = len(form)
    classes = set()
    for coeffs in itertools.product(range(p), repeat=len(basis)):
        v = [sum(c * b[i] for c, b in zip(coeffs, basis)) % p for i in range(n)]
        lead = next((x for x in v if x), 0)
        if not lead:
            continue
        inv = pow(lead, -1, p)
        classes.add(tuple(_balanced(x * inv, p) for x in v))
    reps = sorted(classes)
    logger.debug(f"{len(reps)} characteristic class(es) mod {p}")
    return reps
