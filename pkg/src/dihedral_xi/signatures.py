"""
Exact signatures.

Both the symmetric and the Hermitian case go through the characteristic
polynomial: its roots are all real, so Descartes' rule of signs counts the
positive and negative eigenvalues exactly.  Coefficients of the Tristram-Levine
matrices live in Q(zeta_p); they are tested for zero exactly in the number
field and their signs are certified with interval arithmetic.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence, Tuple

import sympy
from mpmath import iv
from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix

from .errors import SignatureError

logger = logging.getLogger(__name__)

MAX_SIGN_DIGITS = 2000


def _sign_changes(signs: Sequence[int]) -> int:
    nonzero = [s for s in signs if s]
    return sum(1 for a, b in zip(nonzero, nonzero[1:]) if a != b)


def _descartes_signature(signs: Sequence[int]) -> int:
    """Signature from the coefficient signs of a real-rooted polynomial.

    ``signs`` is leading-first, as returned by ``DomainMatrix.charpoly``.
    """
    degree = len(signs) - 1
    positive = _sign_changes(signs)
    mirrored = [s * (-1) ** (degree - k) for k, s in enumerate(signs)]
    negative = _sign_changes(mirrored)
    return positive - negative


def _qq(x: object) -> object:
    if isinstance(x, Fraction):
        return QQ(x.numerator, x.denominator)
    return QQ(x)


def signature_symmetric(m: Sequence[Sequence[object]]) -> int:
    """Signature of a symmetric matrix with integer or rational entries."""
    n = len(m)
    if any(len(row) != n for row in m):
        raise SignatureError("signature needs a square matrix")
    if any(m[i][j] != m[j][i] for i in range(n) for j in range(i)):
        raise SignatureError("signature needs a symmetric matrix")
    if n == 0:
        return 0
    dm = DomainMatrix([[_qq(x) for x in row] for row in m], (n, n), QQ)
    coeffs = dm.charpoly()
    return _descartes_signature([(c > 0) - (c < 0) for c in coeffs])


@dataclass(frozen=True)
class HermitianCyclotomicMatrix:
    """Hermitian matrix over Q(zeta_p), zeta_p = exp(2 pi i / p)."""

    p: int
    matrix: DomainMatrix

    @property
    def field(self):  # type: ignore[no-untyped-def]
        return self.matrix.domain

    def coordinates(self) -> List[List[Tuple[Fraction, ...]]]:
        """Entries as rational coordinate vectors in the power basis of zeta."""
        degree = self.p - 1
        rows = []
        for row in self.matrix.to_list():
            out_row = []
            for entry in row:
                coeffs = [_fraction(c) for c in entry.to_list()]
                padded = [Fraction(0)] * (degree - len(coeffs)) + coeffs
                out_row.append(tuple(reversed(padded)))
            rows.append(out_row)
        return rows

    def signature(self, digits: int = 30) -> int:
        n = self.matrix.shape[0]
        if n == 0:
            return 0
        coeffs = self.matrix.charpoly()
        return _descartes_signature(
            [_certified_sign(self.field, c, self.p, digits) for c in coeffs]
        )


def _fraction(x: object) -> Fraction:
    return Fraction(int(x.numerator), int(x.denominator))  # type: ignore[attr-defined]


def cyclotomic_field(p: int):  # type: ignore[no-untyped-def]
    return QQ.algebraic_field(sympy.exp(2 * sympy.pi * sympy.I / p))


def _certified_sign(field, value, p: int, digits: int) -> int:  # type: ignore[no-untyped-def]
    """Sign of a real element of Q(zeta_p), given in the power basis of zeta."""
    if field.is_zero(value):
        return 0
    coeffs = [_fraction(c) for c in value.to_list()]
    degree = len(coeffs) - 1
    dps = digits
    while dps <= MAX_SIGN_DIGITS:
        iv.dps = dps
        total = iv.mpf(0)
        for k, c in enumerate(coeffs):
            if c:
                power = degree - k
                angle = 2 * iv.pi * power / p
                total += iv.mpf(c.numerator) / c.denominator * iv.cos(angle)
        if total.a > 0:
            return 1
        if total.b < 0:
            return -1
        dps *= 2
    raise SignatureError(
        f"could not certify the sign of a cyclotomic number within {MAX_SIGN_DIGITS} "
        f"digits"
    )


def tristram_levine_matrix(
    a: Sequence[Sequence[int]], i: int, p: int
) -> HermitianCyclotomicMatrix:
    """(1 - zeta^i) A + (1 - zeta^-i) A^T over Q(zeta_p)."""
    n = len(a)
    if any(len(row) != n for row in a):
        raise SignatureError("Seifert matrix must be square")
    if i % p == 0:
        raise SignatureError(f"exponent {i} is divisible by p={p}")
    field = cyclotomic_field(p)
    zeta = field.unit
    one = field.one
    forward = one - zeta ** (i % p)
    backward = one - zeta ** ((-i) % p)
    rows = [
        [
            forward * field.convert(a[r][s]) + backward * field.convert(a[s][r])
            for s in range(n)
        ]
        for r in range(n)
    ]
    return HermitianCyclotomicMatrix(p, DomainMatrix(rows, (n, n), field))


def tristram_levine(a: Sequence[Sequence[int]], i: int, p: int, digits: int = 30) -> int:
    if not a:
        if i % p == 0:
            raise SignatureError(f"exponent {i} is divisible by p={p}")
        return 0
    return tristram_levine_matrix(a, i, p).signature(digits)


def tl_sum(a: Sequence[Sequence[int]], p: int, digits: int = 30) -> int:
    """Sum of the Tristram-Levine signatures at every nontrivial p-th root of unity."""
    total = sum(tristram_levine(a, i, p, digits) for i in range(1, p))
    logger.debug(f"Tristram-Levine sum at p={p}: {total}")
    return total
