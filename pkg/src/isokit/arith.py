"""Exact scalar arithmetic: rationals, p-adic valuations, square classes,
integer factorization and residues modulo p**N.

Rationals are plain :class:`fractions.Fraction` values.  Everything here is
immutable and side-effect free.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from typing import Iterable

DEFAULT_FACTOR_BOUND = 10**6


class DomainError(ValueError):
    """Raised for arithmetic requests outside an operation's domain."""


class FactorizationIncomplete(DomainError):
    def __init__(self, n: int, cofactor: int):
        super().__init__(f"factorization incomplete: cofactor {cofactor} of {n}")
        self.n = n
        self.cofactor = cofactor


def to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        raise TypeError("floating point values are not accepted")
    return Fraction(x)


def fmt_rational(x) -> str:
    """Serialize a rational as ``"num/den"`` (denominator omitted when 1)."""
    x = to_fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(s) -> Fraction:
    if isinstance(s, bool):
        raise TypeError("boolean is not a rational")
    if isinstance(s, int):
        return Fraction(s)
    if not isinstance(s, str):
        raise TypeError(f"expected a rational string, got {type(s).__name__}")
    num, sep, den = s.strip().partition("/")
    if sep and int(den) <= 0:
        raise ValueError(f"bad denominator in {s!r}")
    return Fraction(int(num), int(den) if sep else 1)


# ---------------------------------------------------------------- primes

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for n < 3.3e24."""
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for q in _MR_BASES:
        x = pow(q, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def check_odd_prime(p: int) -> int:
    if p == 2:
        raise DomainError("p=2 unsupported (standing hypothesis v(2)=0)")
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    return p


def _pollard_rho(n: int, max_iter: int = 200000) -> int | None:
    # Brent's variant with deterministic constants c = 1, 2, ...
    if n % 2 == 0:
        return 2
    for c in range(1, 20):
        y, r, q, g = 2, 1, 1, 1
        x = ys = y
        steps = 0
        while g == 1 and steps < max_iter:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(128, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += 128
            r *= 2
            steps += r
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if 1 < g < n:
            return g
    return None


@dataclass(frozen=True)
class Factorization:
    sign: int
    factors: tuple[tuple[int, int], ...]

    def value(self) -> int:
        out = self.sign
        for q, e in self.factors:
            out *= q**e
        return out

    def primes(self) -> list[int]:
        return [q for q, _ in self.factors]


def factorize(n: int, bound: int = DEFAULT_FACTOR_BOUND) -> Factorization:
    """Trial division by primes up to ``bound``, then Miller-Rabin and
    Pollard rho on the cofactor.  Never guesses: an unsplittable composite
    cofactor raises :class:`FactorizationIncomplete`."""
    if n == 0:
        raise DomainError("cannot factor zero")
    sign = -1 if n < 0 else 1
    m = abs(n)
    found: dict[int, int] = {}
    d = 2
    while d <= bound and d * d <= m:
        while m % d == 0:
            found[d] = found.get(d, 0) + 1
            m //= d
        d += 1 if d == 2 else 2
    stack = [m] if m > 1 else []
    while stack:
        c = stack.pop()
        if c == 1:
            continue
        if is_prime(c):
            found[c] = found.get(c, 0) + 1
            continue
        r = math.isqrt(c)
        if r * r == c:
            stack += [r, r]
            continue
        g = _pollard_rho(c)
        if g is None:
            raise FactorizationIncomplete(n, c)
        stack += [g, c // g]
    return Factorization(sign, tuple(sorted(found.items())))


# ------------------------------------------------------ valuations, squares


def padic_valuation(x, p: int) -> int:
    """v_p(x) for a nonzero rational x."""
    x = to_fraction(x)
    if x == 0:
        raise DomainError("valuation of zero undefined")
    return _int_val(x.numerator, p) - _int_val(x.denominator, p)


def _int_val(n: int, p: int) -> int:
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def squarefree_part(n: int, bound: int = DEFAULT_FACTOR_BOUND) -> int:
    """Signed squarefree kernel of a nonzero integer.

    Square cofactors are recognized without being factored.
    """
    if n == 0:
        raise DomainError("zero has no squarefree part")
    sign = -1 if n < 0 else 1
    m = abs(n)
    out = 1
    d = 2
    while d <= min(bound, 1000) and d * d <= m:
        e = 0
        while m % d == 0:
            m //= d
            e += 1
        if e % 2:
            out *= d
        d += 1 if d == 2 else 2
    return sign * _sqf_merge(out, _sqf_cofactor(m, n))


def class_representative(x, trial: int = 1000) -> int:
    """An integer in the square class of x with small square factors removed.

    Cheap: trial division only, so the result need not be squarefree.
    """
    x = to_fraction(x)
    if x == 0:
        raise DomainError("zero has no square class")
    n = x.numerator * x.denominator
    sign = -1 if n < 0 else 1
    m = abs(n)
    out = 1
    d = 2
    while d <= trial and d * d <= m:
        e = 0
        while m % d == 0:
            m //= d
            e += 1
        if e % 2:
            out *= d
        d += 1 if d == 2 else 2
    if math.isqrt(m) ** 2 == m:
        m = 1
    return sign * out * m


def _sqf_merge(s: int, t: int) -> int:
    g = math.gcd(s, t)
    return (s // g) * (t // g)


def _sqf_cofactor(c: int, n: int) -> int:
    if c == 1 or math.isqrt(c) ** 2 == c:
        return 1
    if is_prime(c):
        return c
    g = _pollard_rho(c)
    if g is None:
        raise FactorizationIncomplete(n, c)
    return _sqf_merge(_sqf_cofactor(g, n), _sqf_cofactor(c // g, n))


@total_ordering
@dataclass(frozen=True)
class SquareClass:
    """Element of Q^x / Q^x^2, represented by a signed squarefree integer."""

    representative: int

    def __post_init__(self):
        if self.representative == 0:
            raise DomainError("zero has no square class")

    def __mul__(self, other: "SquareClass") -> "SquareClass":
        return square_class(self.representative * other.representative)

    def __lt__(self, other: "SquareClass") -> bool:
        return self.representative < other.representative

    def __int__(self) -> int:
        return self.representative

    def is_trivial(self) -> bool:
        return self.representative == 1

    def __repr__(self) -> str:
        return f"SquareClass({self.representative})"


def square_class(x, bound: int = DEFAULT_FACTOR_BOUND) -> SquareClass:
    x = to_fraction(x)
    if x == 0:
        raise DomainError("zero has no square class")
    # x = n/d ~ n*d modulo squares
    return SquareClass(squarefree_part(x.numerator * x.denominator, bound))


def is_rational_square(x) -> bool:
    x = to_fraction(x)
    if x < 0:
        return False
    n, d = x.numerator, x.denominator
    return math.isqrt(n) ** 2 == n and math.isqrt(d) ** 2 == d


def legendre(a: int, p: int) -> int:
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def nonresidue(p: int) -> int:
    """Smallest quadratic non-residue modulo an odd prime."""
    return next(a for a in range(2, p) if legendre(a, p) == -1)


def sqrt_mod_prime(a: int, p: int) -> int:
    """A square root of a quadratic residue a modulo an odd prime p."""
    a %= p
    if a == 0:
        return 0
    if legendre(a, p) != 1:
        raise DomainError(f"{a} is not a square mod {p}")
    # Tonelli-Shanks
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = nonresidue(p)
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c, t, r = i, b * b % p, t * b * b % p, r * b % p
    return r


# ------------------------------------------------------------- residues


def rational_mod(x, m: int) -> int:
    """Image of a rational in Z/m; the denominator must be a unit mod m."""
    if type(x) is int:
        return x % m
    x = to_fraction(x)
    try:
        inv = pow(x.denominator, -1, m)
    except ValueError:
        raise DomainError(f"{fmt_rational(x)} is not integral at the modulus {m}") from None
    return x.numerator * inv % m


@dataclass(frozen=True)
class PAdicApprox:
    """A coset r + p^N Z_p of the p-adic integers."""

    prime: int
    precision: int
    residue: int

    def __post_init__(self):
        check_odd_prime(self.prime)
        if self.precision < 1:
            raise DomainError("precision must be positive")
        if not 0 <= self.residue < self.prime**self.precision:
            raise DomainError("residue out of range")

    @classmethod
    def from_rational(cls, x, p: int, N: int) -> "PAdicApprox":
        return cls(p, N, rational_mod(x, p**N))

    @property
    def modulus(self) -> int:
        return self.prime**self.precision

    def valuation(self) -> int:
        """Valuation of the residue, capped at the precision."""
        if self.residue == 0:
            return self.precision
        return min(_int_val(self.residue, self.prime), self.precision)

    def to_json(self) -> dict:
        return {"p": self.prime, "N": self.precision, "r": str(self.residue)}

    @classmethod
    def from_json(cls, d: dict) -> "PAdicApprox":
        return cls(int(d["p"]), int(d["N"]), int(d["r"]))


class Residue:
    """Element of Z/p^N Z supporting field-style arithmetic.

    With N = 1 this is the prime field F_p; for N > 1 division is only
    defined by units.  Generic linear algebra in :mod:`isokit.linalg` works
    on these and on :class:`~fractions.Fraction` alike.
    """

    __slots__ = ("v", "p", "N", "m")

    def __init__(self, v: int, p: int, N: int = 1, m: int | None = None):
        self.p = p
        self.N = N
        self.m = m if m is not None else p**N
        self.v = v % self.m

    def _coerce(self, other) -> int:
        if isinstance(other, Residue):
            if other.m != self.m:
                raise DomainError("mixing residues of different moduli")
            return other.v
        if isinstance(other, int):
            return other
        if isinstance(other, Fraction):
            return rational_mod(other, self.m)
        return NotImplemented

    def _new(self, v: int) -> "Residue":
        return Residue(v, self.p, self.N, self.m)

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._new(self.v + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._new(self.v - o)

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._new(o - self.v)

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._new(self.v * o)

    __rmul__ = __mul__

    def __neg__(self):
        return self._new(-self.v)

    def inverse(self) -> "Residue":
        if self.v % self.p == 0:
            raise ZeroDivisionError(f"{self.v} is not a unit mod {self.p}^{self.N}")
        return self._new(pow(self.v, -1, self.m))

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self * self._new(o).inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.inverse() * o

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return (self.v - o) % self.m == 0

    def __hash__(self):
        return hash((self.v, self.m))

    def __bool__(self):
        return self.v != 0

    def is_unit(self) -> bool:
        return self.v % self.p != 0

    def __int__(self):
        return self.v

    def __repr__(self):
        return f"{self.v} (mod {self.p}^{self.N})"


def is_unit(x) -> bool:
    """Whether x may serve as an elimination pivot."""
    if isinstance(x, Residue):
        return x.is_unit()
    return x != 0


def prod(xs: Iterable, start=1):
    out = start
    for x in xs:
        out = out * x
    return out


def _coprime_base(values: list[int]) -> list[int]:
    """Pairwise coprime integers > 1 multiplicatively generating ``values``."""
    base: list[int] = []
    for v in values:
        todo = [abs(v)]
        while todo:
            x = todo.pop()
            if x <= 1:
                continue
            for i, b in enumerate(base):
                g = math.gcd(x, b)
                if g > 1:
                    base.pop(i)
                    todo += [g, x // g, b // g]
                    break
            else:
                base.append(x)
    return base


def square_class_of_product(values: Iterable, bound: int = DEFAULT_FACTOR_BOUND) -> SquareClass:
    """Square class of a product of nonzero rationals.

    Works on a coprime base of the numerators and denominators, so a large
    factor that occurs to an even power never has to be factored.
    """
    fr = [to_fraction(v) for v in values]
    if any(v == 0 for v in fr):
        raise DomainError("zero has no square class")
    sign = -1 if sum(v < 0 for v in fr) % 2 else 1
    ints = [v.numerator for v in fr] + [v.denominator for v in fr]
    out = sign
    for b in _coprime_base(ints):
        e = 0
        for n in ints:
            n = abs(n)
            while n % b == 0:
                n //= b
                e += 1
        if e % 2:
            out *= squarefree_part(b, bound)
    return square_class(out, bound)
