"""Dense exact linear algebra.

Matrices are lists of rows.  The generic routines work over any ring whose
elements support ``+ - * /`` and comparison with 0: :class:`Fraction` for
Q, :class:`~isokit.arith.Residue` for F_p and Z/p^N.  Over Z/p^N only unit
pivots are used; a system that would need a non-unit pivot raises
:class:`PivotObstruction`.

:class:`PadicMatrix` is the precision-carrying matrix type used by the
lattice code; its products run on plain integers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from operator import mul
from typing import Sequence

from .arith import DomainError, Residue, check_odd_prime, is_unit, rational_mod


class PivotObstruction(DomainError):
    """Elimination over Z/p^N met a row with only non-unit entries."""


class SingularMatrix(DomainError):
    pass


def identity(n: int, one=Fraction(1)):
    zero = one - one
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def zeros(r: int, c: int, zero=Fraction(0)):
    return [[zero] * c for _ in range(r)]


def transpose(A):
    return [list(col) for col in zip(*A)]


def _scaled_ints(rows):
    """(integer rows, d) with rows = integer rows / d, or None for
    entries that are not rationals (e.g. residues)."""
    dens = []
    for r in rows:
        for e in r:
            t = type(e)
            if t is Fraction:
                dens.append(e.denominator)
            elif t is not int:
                return None
    d = math.lcm(*dens) if dens else 1
    return [[int(e * d) if type(e) is int else e.numerator * (d // e.denominator) for e in r] for r in rows], d


def mat_mul(A, B):
    # exact rationals go through integer products over a common denominator
    a, b = _scaled_ints(A), _scaled_ints(B)
    if a is not None and b is not None:
        (Ai, da), (Bi, db) = a, b
        d = da * db
        Bt = list(zip(*Bi))
        return [[Fraction(sum(map(mul, row, col)), d) for col in Bt] for row in Ai]
    Bt = list(zip(*B))
    return [[sum((a * b for a, b in zip(row, col)), row[0] * 0) for col in Bt] for row in A]


def mat_vec(A, x):
    a, v = _scaled_ints(A), _scaled_ints([x])
    if a is not None and v is not None:
        (Ai, da), ((xi,), dx) = a, v
        d = da * dx
        return [Fraction(sum(map(mul, row, xi)), d) for row in Ai]
    return [sum((a * b for a, b in zip(row, x)), row[0] * 0) for row in A]


def mat_add(A, B):
    return [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_sub(A, B):
    return [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_scale(c, A):
    return [[c * a for a in row] for row in A]


def dot(x, y):
    return sum((a * b for a, b in zip(x, y)), x[0] * 0)


def is_zero_matrix(A) -> bool:
    return all(a == 0 for row in A for a in row)


def _recip(x):
    return Fraction(1) / x if isinstance(x, (Fraction, int)) else x.inverse()


def _bareiss(rows) -> int:
    """Determinant of an integer matrix, fraction-free."""
    A = [list(r) for r in rows]
    n = len(A)
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            sw = next((i for i in range(k + 1, n) if A[i][k]), None)
            if sw is None:
                return 0
            A[k], A[sw] = A[sw], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def _check_rect(M):
    if not M or not M[0]:
        raise DomainError("empty matrix")
    c = len(M[0])
    if any(len(row) != c for row in M):
        raise DomainError("ragged matrix")


def rref(M):
    """Reduced row echelon form.

    Returns ``(R, pivots, transform)`` with ``transform @ M == R``.  Pivots
    are taken at the first admissible row (a unit entry).
    """
    _check_rect(M)
    rows, cols = len(M), len(M[0])
    R = [list(r) for r in M]
    one = R[0][0] * 0 + 1
    T = identity(rows, one)
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        pr = next((i for i in range(r, rows) if is_unit(R[i][c])), None)
        if pr is None:
            continue
        R[r], R[pr] = R[pr], R[r]
        T[r], T[pr] = T[pr], T[r]
        inv = _recip(R[r][c])
        R[r] = [x * inv for x in R[r]]
        T[r] = [x * inv for x in T[r]]
        for i in range(rows):
            if i != r and R[i][c] != 0:
                f = R[i][c]
                R[i] = [x - f * y for x, y in zip(R[i], R[r])]
                T[i] = [x - f * y for x, y in zip(T[i], T[r])]
        pivots.append(c)
        r += 1
    for i in range(r, rows):
        if any(x != 0 for x in R[i]):
            raise PivotObstruction("non-unit pivot obstruction")
    return R, pivots, T


def rank(M) -> int:
    return len(rref(M)[1])


def kernel(M):
    """Basis of {x : M x = 0} (a free module basis over Z/p^N)."""
    R, pivots, _ = rref(M)
    cols = len(M[0])
    one = M[0][0] * 0 + 1
    zero = one - one
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for j in free:
        v = [zero] * cols
        v[j] = one
        for i, pc in enumerate(pivots):
            v[pc] = -R[i][j]
        basis.append(v)
    return basis


def solve_linear(M, rhs):
    """Solve ``M x = rhs``.

    Returns ``(x, kernel_basis)`` where x is a particular solution, or
    ``(None, kernel_basis)`` when the system is inconsistent.
    """
    if isinstance(M, PadicMatrix):
        x, K = solve_linear(M.residues(), [Residue(int(v), M.p, M.N) for v in rhs])
        conv = lambda v: [int(e) for e in v]  # noqa: E731
        return (None if x is None else conv(x)), [conv(k) for k in K]
    _check_rect(M)
    if len(rhs) != len(M):
        raise DomainError("dimension mismatch between matrix and right-hand side")
    R, pivots, T = rref(M)
    cols = len(M[0])
    zero = M[0][0] * 0
    b = mat_vec(T, list(rhs))
    if any(b[i] != 0 for i in range(len(pivots), len(M))):
        return None, kernel(M)
    x = [zero] * cols
    for i, pc in enumerate(pivots):
        x[pc] = b[i]
    return x, kernel(M)


def det(M):
    _check_rect(M)
    n = len(M)
    if len(M[0]) != n:
        raise DomainError("determinant of a non-square matrix")
    A = [list(r) for r in M]
    out = A[0][0] * 0 + 1
    for c in range(n):
        pr = next((i for i in range(c, n) if is_unit(A[i][c])), None)
        if pr is None:
            if all(A[i][c] == 0 for i in range(c, n)):
                return out * 0
            raise PivotObstruction("determinant needs a non-unit pivot")
        if pr != c:
            A[c], A[pr] = A[pr], A[c]
            out = -out
        out = out * A[c][c]
        inv = _recip(A[c][c])
        for i in range(c + 1, n):
            if A[i][c] != 0:
                f = A[i][c] * inv
                A[i] = [x - f * y for x, y in zip(A[i], A[c])]
    return out


def mat_inverse(M):
    if isinstance(M, PadicMatrix):
        return M.inverse()
    _check_rect(M)
    n = len(M)
    if len(M[0]) != n:
        raise DomainError("inverse of a non-square matrix")
    try:
        R, pivots, T = rref(M)
    except PivotObstruction:
        raise SingularMatrix("matrix is not invertible") from None
    if len(pivots) != n:
        raise SingularMatrix("matrix is singular")
    return T


def to_fractions(M):
    return [[Fraction(x) for x in row] for row in M]


# ------------------------------------------------------------ Z / p^N


def _mulmod(A, B, m):
    Bt = list(zip(*B))
    return tuple([tuple([sum(map(mul, row, col)) % m for col in Bt]) for row in A])


def _inverse_mod(rows, p, m):
    n = len(rows)
    A = [list(r) + [int(i == j) for j in range(n)] for i, r in enumerate(rows)]
    for c in range(n):
        pr = next((i for i in range(c, n) if A[i][c] % p), None)
        if pr is None:
            raise SingularMatrix("matrix is not invertible modulo p")
        A[c], A[pr] = A[pr], A[c]
        inv = pow(A[c][c], -1, m)
        A[c] = [x * inv % m for x in A[c]]
        for i in range(n):
            if i != c and A[i][c]:
                f = A[i][c]
                A[i] = [(x - f * y) % m for x, y in zip(A[i], A[c])]
    return tuple(tuple(r[n:]) for r in A)


def solve_mod_p(M, rhs, p: int):
    """Particular solution of M x = rhs over F_p with plain ints, or None."""
    rows = [[x % p for x in r] + [b % p] for r, b in zip(M, rhs)]
    cols = len(M[0]) if M else 0
    pivots = []
    r = 0
    for c in range(cols):
        pr = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        inv = pow(rows[r][c], -1, p)
        rows[r] = [x * inv % p for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [(x - f * y) % p for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    if any(row[-1] for row in rows[r:]):
        return None
    x = [0] * cols
    for i, c in enumerate(pivots):
        x[c] = rows[i][-1]
    return x


def rank_mod_p(M, p: int) -> int:
    rows = [[int(x) % p for x in r] for r in M]
    r = 0
    for c in range(len(rows[0]) if rows else 0):
        pr = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        inv = pow(rows[r][c], -1, p)
        for i in range(r + 1, len(rows)):
            if rows[i][c]:
                f = rows[i][c] * inv
                rows[i] = [(x - f * y) % p for x, y in zip(rows[i], rows[r])]
        r += 1
    return r


def _padic(p, N, rows):
    # internal constructor for rows already reduced modulo p^N
    M = object.__new__(PadicMatrix)
    object.__setattr__(M, "p", p)
    object.__setattr__(M, "N", N)
    object.__setattr__(M, "rows", rows)
    return M


@dataclass(frozen=True)
class PadicMatrix:
    """Matrix of residues modulo p^N."""

    p: int
    N: int
    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        m = self.p**self.N
        if any(not 0 <= x < m for r in self.rows for x in r):
            object.__setattr__(
                self, "rows", tuple(tuple(x % m for x in r) for r in self.rows)
            )

    @classmethod
    def from_rows(cls, rows, p: int, N: int) -> "PadicMatrix":
        check_odd_prime(p)
        m = p**N
        return cls(p, N, tuple(tuple(rational_mod(x, m) for x in r) for r in rows))

    @classmethod
    def identity(cls, n: int, p: int, N: int) -> "PadicMatrix":
        return cls(p, N, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @property
    def modulus(self) -> int:
        return self.p**self.N

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.rows[0])

    def __matmul__(self, other):
        if isinstance(other, PadicMatrix):
            self._same_ring(other)
            return _padic(self.p, self.N, _mulmod(self.rows, other.rows, self.modulus))
        m = self.modulus
        return [sum(a * int(b) for a, b in zip(row, other)) % m for row in self.rows]

    def _same_ring(self, other):
        if (self.p, self.N) != (other.p, other.N):
            raise DomainError("matrices carry different primes or precisions")

    def __add__(self, other: "PadicMatrix") -> "PadicMatrix":
        self._same_ring(other)
        m = self.modulus
        return _padic(self.p, self.N, tuple([tuple([(a + b) % m for a, b in zip(r, s)]) for r, s in zip(self.rows, other.rows)]))

    def __sub__(self, other: "PadicMatrix") -> "PadicMatrix":
        self._same_ring(other)
        m = self.modulus
        return _padic(self.p, self.N, tuple([tuple([(a - b) % m for a, b in zip(r, s)]) for r, s in zip(self.rows, other.rows)]))

    def scale(self, c: int) -> "PadicMatrix":
        m = self.modulus
        return _padic(self.p, self.N, tuple([tuple([c * a % m for a in r]) for r in self.rows]))

    @property
    def T(self) -> "PadicMatrix":
        return _padic(self.p, self.N, tuple(zip(*self.rows)))

    def reduce(self, N: int) -> "PadicMatrix":
        if N > self.N:
            raise DomainError(f"cannot raise precision from {self.N} to {N}")
        return PadicMatrix(self.p, N, self.rows)

    def lift(self, N: int) -> "PadicMatrix":
        """Same integer representatives viewed at a higher precision."""
        return PadicMatrix(self.p, N, self.rows)

    def inverse(self) -> "PadicMatrix":
        return _padic(self.p, self.N, _inverse_mod(self.rows, self.p, self.modulus))

    def det(self) -> int:
        return _bareiss(self.rows) % self.modulus

    def residues(self):
        return [[Residue(x, self.p, self.N) for x in r] for r in self.rows]

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.rows for x in r)

    def valuation(self) -> int:
        """Minimal p-adic valuation of the entries, N when all vanish."""
        v = self.N
        for r in self.rows:
            for x in r:
                if x:
                    k = 0
                    while x % self.p == 0:
                        x //= self.p
                        k += 1
                    v = min(v, k)
        return v

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.rows]


def vec_mod(v: Sequence, m: int) -> list[int]:
    return [rational_mod(x, m) for x in v]
