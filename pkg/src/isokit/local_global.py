"""Local invariants of rational quadratic forms and the decisions built on
them: isotropy (local and global), bad primes, Z_p-points on the quadrics
Q_s, and the strong approximation criterion for quadrics.

A place is either the string ``"real"`` or a prime number.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .arith import (
    DomainError,
    SquareClass,
    check_odd_prime,
    factorize,
    is_prime,
    legendre,
    rational_mod,
    square_class,
    to_fraction,
)
from .forms import QuadraticForm, bil, diagonalize, orthogonal_complement, qval
from .linalg import PadicMatrix, kernel, solve_linear
from .arith import Residue

REAL = "real"


def check_place(place):
    if place == REAL:
        return REAL
    if isinstance(place, int) and not isinstance(place, bool) and is_prime(place):
        return place
    raise DomainError(f"invalid place {place!r}")


def parse_place(text) -> object:
    if str(text).lower() in ("real", "inf", "oo", "infinity"):
        return REAL
    try:
        return check_place(int(text))
    except ValueError:
        raise DomainError(f"invalid place {text!r}") from None


# ------------------------------------------------------------ symbols


def _int_class(x) -> int:
    """Integer in the same square class as the rational x."""
    x = to_fraction(x)
    if x == 0:
        raise DomainError("hilbert symbol of zero")
    return x.numerator * x.denominator


def _split(x: int, p: int) -> tuple[int, int]:
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v, x


def hilbert_symbol(x, y, place) -> int:
    """(x, y)_v in {+1, -1}."""
    place = check_place(place)
    a, b = _int_class(x), _int_class(y)
    if place == REAL:
        return -1 if a < 0 and b < 0 else 1
    p = place
    al, u = _split(a, p)
    be, w = _split(b, p)
    if p != 2:
        s = -1 if (al * be * (p - 1) // 2) % 2 else 1
        if be % 2:
            s *= legendre(u, p)
        if al % 2:
            s *= legendre(w, p)
        return s
    eps = lambda t: ((t - 1) // 2) % 2  # noqa: E731
    omega = lambda t: ((t * t - 1) // 8) % 2  # noqa: E731
    e = eps(u) * eps(w) + al * omega(w) + be * omega(u)
    return -1 if e % 2 else 1


def hasse_invariant(coeffs, place) -> int:
    """prod_{i<j} (d_i, d_j)_v."""
    ds = [to_fraction(d) for d in coeffs]
    if any(d == 0 for d in ds):
        raise DomainError("zero coefficient")
    out = 1
    for i, j in itertools.combinations(range(len(ds)), 2):
        out *= hilbert_symbol(ds[i], ds[j], place)
    return out


def is_local_square(x, place) -> bool:
    place = check_place(place)
    a = _int_class(x)
    if place == REAL:
        return a > 0
    v, u = _split(a, place)
    if v % 2:
        return False
    if place == 2:
        return u % 8 == 1
    return legendre(u, place) == 1


def _diag(f) -> list[Fraction]:
    G = f.matrix() if isinstance(f, QuadraticForm) else [[to_fraction(x) for x in r] for r in f]
    _, d = diagonalize(G)
    if any(x == 0 for x in d):
        raise DomainError("quadratic form is degenerate")
    return d


def _disc(d) -> Fraction:
    out = Fraction(1)
    for x in d:
        out *= x
    return out


def _isotropic_from_invariants(n: int, d, eps: int, p) -> bool:
    """Classification of isotropy over Q_p by (dim, disc, Hasse)."""
    if n <= 1:
        return False
    if n == 2:
        return is_local_square(-d, p)
    if n == 3:
        return eps == hilbert_symbol(-1, -d, p)
    if n == 4:
        return not (is_local_square(d, p) and eps == -hilbert_symbol(-1, -1, p))
    return True


def is_isotropic_local(f, place) -> bool:
    place = check_place(place)
    d = _diag(f)
    if place == REAL:
        return any(x > 0 for x in d) and any(x < 0 for x in d)
    return _isotropic_from_invariants(len(d), _disc(d), hasse_invariant(d, place), place)


def witt_index_local(f, place) -> int:
    place = check_place(place)
    d = _diag(f)
    if place == REAL:
        return min(sum(x > 0 for x in d), sum(x < 0 for x in d))
    n, disc, eps = len(d), _disc(d), hasse_invariant(d, place)
    i = 0
    while n >= 2 and _isotropic_from_invariants(n, disc, eps, place):
        # f = H + f', disc(f') = -disc(f), eps(f) = (-1, disc f') eps(f')
        n -= 2
        disc = -disc
        eps = eps * hilbert_symbol(-1, disc, place)
        i += 1
    return i


@dataclass(frozen=True)
class LocalInvariants:
    place: object
    dim: int
    discriminant: SquareClass
    hasse: int
    witt_index: int
    isotropic: bool

    def to_json(self) -> dict:
        return {
            "place": self.place,
            "disc": int(self.discriminant),
            "hasse": self.hasse,
            "witt_index": self.witt_index,
        }


def local_invariants(f, place) -> LocalInvariants:
    place = check_place(place)
    d = _diag(f)
    w = witt_index_local(f, place)
    return LocalInvariants(place, len(d), square_class(_disc(d)), hasse_invariant(d, place), w, w >= 1)


def relevant_primes(d, factor_bound: int | None = None) -> list[int]:
    """2 and the primes dividing a numerator or denominator of some d_i."""
    ps = {2}
    for x in d:
        x = to_fraction(x)
        for part in (x.numerator, x.denominator):
            fac = factorize(part) if factor_bound is None else factorize(part, factor_bound)
            ps.update(fac.primes())
    return sorted(ps)


def is_isotropic_global(f, factor_bound: int | None = None):
    """(True, None) if f is isotropic over Q, else (False, obstructing place)."""
    d = _diag(f)
    if not is_isotropic_local(d_form(d), REAL):
        return False, REAL
    for p in relevant_primes(d, factor_bound):
        if not _isotropic_from_invariants(len(d), _disc(d), hasse_invariant(d, p), p):
            return False, p
    return True, None


def d_form(d) -> list[list[Fraction]]:
    n = len(d)
    return [[d[i] if i == j else Fraction(0) for j in range(n)] for i in range(n)]


# ------------------------------------------------------------ bad places


def bad_places(f: QuadraticForm, S=(), factor_bound: int | None = None) -> list[int]:
    """{2} together with the primes dividing some coefficient, minus S."""
    ps = set(relevant_primes(f.alphas, factor_bound))
    return sorted(ps - {p for p in S if p != REAL})


# ------------------------------------------------------------ Z_p points


def quadric_zp_point(f: QuadraticForm, s, p: int, N: int, S=()) -> list[int]:
    """t with (t|a) = (t|s) = 0 and f(t) = f(b) modulo p^N, where a = e_n and
    b = e_(n-1) in the standard frame."""
    check_odd_prime(p)
    if p in S or p in bad_places(f):
        raise DomainError(f"p={p} lies in S or among the bad places")
    n = f.dim
    if n < 5:
        raise DomainError("quadric points need dimension >= 5")
    W = N + 2
    m = p**W
    F = PadicMatrix.from_rows(f.gram, p, W)
    s = [rational_mod(x, m) for x in s]
    if all(x % p**N == 0 for x in s):
        raise DomainError("s vanishes modulo p^N")
    alpha = rational_mod(f.alphas[-2], m)
    b = [int(i == n - 2) for i in range(n)]
    a = [int(i == n - 1) for i in range(n)]
    u = s[:-1] + [0]
    if all(x % p**N == 0 for x in u):
        return b
    d = min(_split(x, p)[0] for x in u if x)
    u0 = [x // p**d for x in u]
    M = [a, u0]
    q = lambda x: sum(y * z for y, z in zip(F @ x, x)) % m  # noqa: E731
    if q(u0) % p == 0:
        # hyperbolic partner: (u1|u0) = 1, (u1|a) = 0 modulo p
        rows = [[Residue(x, p) for x in F @ u0], [Residue(x, p) for x in F @ a]]
        sol, _ = solve_linear(rows, [Residue(1, p), Residue(0, p)])
        M.append([int(x) for x in sol])
    comp = kernel([[Residue(x, p, W) for x in F @ v] for v in M])
    K = [[int(x) for x in v] for v in comp]
    y = _represent_unit(F, K, alpha, p, W)
    t = [sum(yi * k[j] for yi, k in zip(y, K)) % m for j in range(n)]
    mN = p**N
    pair = lambda x, z: sum(u_ * v_ for u_, v_ in zip(F @ x, z))  # noqa: E731
    assert pair(t, a) % mN == 0 and pair(t, s) % mN == 0 and (q(t) - alpha) % mN == 0
    return [x % mN for x in t]


def _represent_unit(F, K, alpha, p, W):
    """y with q(y) = alpha mod p^W, q the form restricted to span(K)."""
    m = p**W
    r = len(K)
    G = [[sum(x * y for x, y in zip(F @ ki, kj)) % m for kj in K] for ki in K]
    qy = lambda y: sum(G[i][j] * y[i] * y[j] for i in range(r) for j in range(r)) % m  # noqa: E731
    for y in itertools.product(range(p), repeat=r):
        if (qy(y) - alpha) % p:
            continue
        grad = [2 * sum(G[j][k] * y[k] for k in range(r)) % m for j in range(r)]
        j = next((j for j in range(r) if grad[j] % p), None)
        if j is None:
            continue
        y = list(y)
        for _ in range(W.bit_length() + 2):
            # single-variable Newton in coordinate j
            val = (qy(y) - alpha) % m
            if val == 0:
                break
            dj = 2 * sum(G[j][k] * y[k] for k in range(r)) % m
            y[j] = (y[j] - val * pow(dj, -1, m)) % m
        assert qy(y) == alpha % m
        return y
    raise DomainError("complement does not represent f(b); p must be a bad place")


# ------------------------------------------------------------ quadrics


def _form_of(q) -> QuadraticForm:
    return q if isinstance(q, QuadraticForm) else QuadraticForm.from_gram(q)


def is_locally_solvable(q, a_val, place) -> bool:
    """q(x) = a has a solution over the completion."""
    q = _form_of(q)
    d = _diag(q) + [-to_fraction(a_val)]
    return is_isotropic_local(d_form(d), place)


def quadric_noncompact_places(q, a_val, S) -> list:
    q = _form_of(q)
    a_val = to_fraction(a_val)
    if a_val == 0:
        raise DomainError("value must be nonzero")
    out = []
    for v in S:
        v = check_place(v)
        if is_isotropic_local(q, v) and is_locally_solvable(q, a_val, v):
            out.append(v)
    return out


@dataclass(frozen=True)
class SAPVerdict:
    holds: bool
    reason: str
    witness_place: object = None

    def to_json(self) -> dict:
        return {"holds": self.holds, "reason": self.reason, "witness_place": self.witness_place}


class HypothesisFailure(DomainError):
    pass


def restriction_to_complement(q: QuadraticForm, x) -> list[list[Fraction]]:
    """Gram matrix of q on the orthogonal complement of x."""
    G = q.matrix()
    basis = orthogonal_complement(G, [[to_fraction(c) for c in x]])
    return [[bil(G, u, v) for v in basis] for u in basis]


def strong_approx_quadric(q, a_val, S, x) -> SAPVerdict:
    """Strong approximation for q(x) = a with respect to S (plus all
    infinite places, which over Q is the real place)."""
    q = _form_of(q)
    a_val = to_fraction(a_val)
    m = q.dim
    if m < 3:
        raise HypothesisFailure("hypothesis m >= 3 fails")
    x = [to_fraction(c) for c in x]
    if len(x) != m or qval(q.gram, x) != a_val:
        raise HypothesisFailure("witness fails equation")
    S = [check_place(v) for v in S]
    if REAL not in S:
        S = [REAL] + S
    if not quadric_noncompact_places(q, a_val, S):
        raise HypothesisFailure("hypothesis Q_S noncompact fails")
    if m >= 4:
        return SAPVerdict(True, "m>=4-noncompact")
    g = restriction_to_complement(q, x)
    if is_isotropic_global(g)[0]:
        return SAPVerdict(True, "g-K-isotropic")
    for v in S:
        if not is_isotropic_local(g, v) and (v != REAL or is_isotropic_local(q, v)):
            return SAPVerdict(True, "witness-place", v)
    return SAPVerdict(
        False,
        "g is K-anisotropic and isotropic at every place of S: no witness place",
    )
