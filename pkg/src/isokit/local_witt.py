"""Witt's theorem for unimodular lattices over Z_p, at finite precision.

Everything here is a congruence modulo p^N.  Matrices are
:class:`~isokit.linalg.PadicMatrix` (integers mod p^W at a working precision
W a little above the requested N); vectors are plain integer lists.

The lifting scheme:

* ``improve_orthogonality`` corrects X with tX F X = F (mod p^l) by
  Y = X + p^l Z, Z = (1/2) t(FX)^-1 A.  The new defect is divisible by p^(2l).
* ``refine_transporter`` fixes the next digit of the transport condition
  through a solution of the linearized (skew) problem over F_p.
* ``witt_lift`` starts from a classical Witt transporter over F_p, lifts
  it to an orthogonal matrix, then applies one refinement per digit in
  Cayley form (which keeps exact orthogonality, so no further lifting).
"""

from __future__ import annotations

import math
from operator import mul
from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction

from .arith import DomainError, Residue, check_odd_prime, legendre, nonresidue, rational_mod
from .forms import witt_transporter
from .linalg import PadicMatrix, kernel, rank, rank_mod_p, solve_linear, solve_mod_p


class PrecisionError(DomainError):
    pass


class NotAdmissible(DomainError):
    """The transporter problem violates its invariants."""


def working_precision(N: int, p: int, n: int) -> int:
    return N + math.ceil(math.log(max(n, 2), p)) + 2


def _val(x: int, p: int, cap: int) -> int:
    if x == 0:
        return cap
    k = 0
    while x % p == 0 and k < cap:
        x //= p
        k += 1
    return k


def vec_valuation(v, p: int, cap: int) -> int:
    return min((_val(x, p, cap) for x in v), default=cap)


# ------------------------------------------------------------- lattices


@lru_cache(maxsize=256)
def _gram_mod(gram, p: int, W: int) -> PadicMatrix:
    return PadicMatrix.from_rows(gram, p, W)


_F_CACHE: dict = {}


@dataclass(frozen=True)
class UnimodularLattice:
    """Z_p-lattice with a rational Gram matrix whose entries are p-integral
    and whose determinant is a p-adic unit."""

    prime: int
    gram: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        p = check_odd_prime(self.prime)
        G = tuple(tuple(Fraction(x) for x in r) for r in self.gram)
        object.__setattr__(self, "gram", G)
        if any(x.denominator % p == 0 for r in G for x in r):
            raise NotAdmissible(f"gram entries are not {p}-integral")
        if self.F(1).det() % p == 0:
            raise NotAdmissible(f"gram determinant is not a unit at p={p}")

    @classmethod
    def from_form(cls, form, p: int) -> "UnimodularLattice":
        return cls(p, form.gram)

    @property
    def dim(self) -> int:
        return len(self.gram)

    def F(self, W: int) -> PadicMatrix:
        key = (id(self), W)
        hit = _F_CACHE.get(key)
        if hit is None or hit[0] is not self:
            if len(_F_CACHE) > 512:
                _F_CACHE.clear()
            hit = _F_CACHE[key] = (self, _gram_mod(self.gram, self.prime, W))
        return hit[1]

    def pairing(self, x, y, W: int) -> int:
        m = self.prime**W
        Fx = self.F(W) @ [int(v) for v in x]
        return sum(a * int(b) for a, b in zip(Fx, y)) % m

    def qvalue(self, x, W: int) -> int:
        return self.pairing(x, x, W)


@dataclass(frozen=True)
class OrthogonalMapZp:
    """X with tX F X = F (mod p^N)."""

    lattice: UnimodularLattice
    matrix: PadicMatrix
    precision: int

    def __post_init__(self):
        X = self.matrix
        if X.N < self.precision:
            raise PrecisionError("matrix carries less precision than certified")
        if X.N > self.precision:
            object.__setattr__(self, "matrix", X.reduce(self.precision))
        if not orthogonality_holds(self.lattice, self.matrix, self.precision):
            raise DomainError("matrix is not orthogonal to the certified precision")

    @property
    def det(self) -> int:
        """+1 or -1 (the determinant is congruent to one of them)."""
        d = self.matrix.det()
        return 1 if (d - 1) % self.lattice.prime**self.precision == 0 else -1

    def __call__(self, v):
        return self.matrix @ v

    def tolist(self):
        return self.matrix.tolist()


def orthogonality_holds(lattice: UnimodularLattice, X: PadicMatrix, N: int) -> bool:
    F = lattice.F(N)
    X = X.reduce(N)
    return (X.T @ F @ X - F).is_zero()


def orthogonality_level(F: PadicMatrix, X: PadicMatrix) -> int:
    return (X.T @ F @ X - F).valuation()


# ------------------------------------------------------------- Newton lifting


def improve_orthogonality(F: PadicMatrix, X: PadicMatrix, l: int) -> PadicMatrix:
    """One correction step from level l; the result is orthogonal to level
    at least l + 1 (in fact 2l) and agrees with X modulo p^l."""
    if l < 1:
        raise DomainError("improvement needs level l >= 1")
    W = F.N
    D = F - X.T @ F @ X
    if D.valuation() < l:
        raise DomainError(f"input is not orthogonal modulo p^{l}")
    if l >= W:
        return X
    return _newton_step(F, X, D, l)


def _newton_step(F, X, D, l):
    # Y = X + p^l Z with Z = 1/2 t(FX)^-1 (D / p^l)
    p, W = F.p, F.N
    pl = p**l
    A = PadicMatrix(p, W, tuple(tuple(x // pl for x in r) for r in D.rows))
    try:
        FXti = (F @ X).T.inverse()
    except DomainError:
        raise DomainError("FX is not invertible modulo p") from None
    Z = (FXti @ A).scale(pow(2, -1, F.modulus))
    return X + Z.scale(pl)


def lift_to_orthogonal(lattice: UnimodularLattice, X: PadicMatrix, l: int, N: int,
                       W: int | None = None) -> PadicMatrix:
    """Orthogonal matrix mod p^W congruent to X mod p^l (W defaults to N).

    Each step corrects at the current defect valuation, so the result is the
    one the digit-by-digit iteration produces, reached in O(log N) steps.
    """
    if l < 1 or N < l:
        raise DomainError("lift needs 1 <= l <= N")
    W = N if W is None else W
    F = lattice.F(W)
    X = X.lift(W) if X.N < W else X.reduce(W)
    D = F - X.T @ F @ X
    v = D.valuation()
    if v < l:
        raise DomainError(f"input is not orthogonal modulo p^{l}")
    while v < W:
        X = _newton_step(F, X, D, v)
        D = F - X.T @ F @ X
        v2 = D.valuation()
        assert v2 > v
        v = v2
    return X


# ------------------------------------------------------------- skew spaces


def _fp(M, p):
    return [[Residue(int(x), p) for x in r] for r in M]


def _skew_index(n):
    return [(j, k) for j in range(n) for k in range(j + 1, n)]


def skew_solve(F, xs, ys, p: int):
    """Y over F_p with tY F + F Y = 0 and Y x_i = y_i.

    Y is parametrized as F^-1 S with S skew, which describes the whole
    solution space of the first condition.  Returns an integer matrix.
    """
    S = _skew_part(F, xs, ys, p)
    Finv = _gram_mod(tuple(map(tuple, F)), p, 1).inverse()
    return (Finv @ PadicMatrix(p, 1, tuple(map(tuple, S)))).tolist()


def _skew_part(F, xs, ys, p: int):
    # the skew S (entries in [0, p), antisymmetric as integers) with F^-1 S solving skew_solve
    Fp = [[rational_mod(x, p) for x in r] for r in F]
    n = len(Fp)
    xs = [[int(v) % p for v in x] for x in xs]
    ys = [[int(v) % p for v in y] for y in ys]
    if xs and rank_mod_p(xs, p) != len(xs):
        raise NotAdmissible("source vectors are dependent modulo p")
    Fys = [[sum(Fp[r][c] * y[c] for c in range(n)) % p for r in range(n)] for y in ys]
    for i in range(len(xs)):
        for j in range(i, len(xs)):
            if (sum(map(mul, xs[i], Fys[j])) + sum(map(mul, xs[j], Fys[i]))) % p:
                raise NotAdmissible("defect vectors violate (x_i|y_j) + (x_j|y_i) = 0")
    idx = _skew_index(n)
    if not xs or not idx:
        return [[0] * n for _ in range(n)]
    # S x = F y, row r: sum_k S[r][k] x[k]
    rows, rhs = [], []
    for x, Fy in zip(xs, Fys):
        for r in range(n):
            row = [0] * len(idx)
            for t, (j, k) in enumerate(idx):
                if j == r:
                    row[t] = x[k]
                elif k == r:
                    row[t] = -x[j]
            rows.append(row)
            rhs.append(Fy[r])
    sol = solve_mod_p(rows, rhs, p)
    if sol is None:
        raise NotAdmissible("skew system unsolvable")
    S = [[0] * n for _ in range(n)]
    for t, (j, k) in enumerate(idx):
        S[j][k] = sol[t]
        S[k][j] = -sol[t]
    return S


def _bil(G, x, y):
    n = len(G)
    return sum((x[i] * G[i][j] * y[j] for i in range(n) for j in range(n)), Residue(0, G[0][0].p))


def skew_space_dim(F, p: int) -> int:
    """dim of {Y : tY F + F Y = 0} over F_p, by kernel rank on n^2 unknowns."""
    Fp = _fp(F, p)
    n = len(Fp)
    rows = []
    for r in range(n):
        for c in range(n):
            # (tY F + F Y)[r][c] = sum_k Y[k][r] F[k][c] + F[r][k] Y[k][c]
            row = [Residue(0, p)] * (n * n)
            for k in range(n):
                row[k * n + r] = row[k * n + r] + Fp[k][c]
                row[k * n + c] = row[k * n + c] + Fp[r][k]
            rows.append(row)
    return len(kernel(rows))


def transporter_space_dim(F, xs, p: int) -> int:
    """dim of {(y_1..y_m) : (x_i|y_j) + (x_j|y_i) = 0 for i <= j} over F_p."""
    Fp = _fp(F, p)
    n, m = len(Fp), len(xs)
    Fx = [[sum((Fp[r][c] * int(x[c]) for c in range(n)), Residue(0, p)) for r in range(n)] for x in xs]
    rows = []
    for i in range(m):
        for j in range(i, m):
            row = [Residue(0, p)] * (m * n)
            for c in range(n):
                row[j * n + c] = row[j * n + c] + Fx[i][c]
                row[i * n + c] = row[i * n + c] + Fx[j][c]
            rows.append(row)
    if not rows:
        return m * n
    return len(kernel(rows))


def skew_image_dim(F, xs, p: int) -> int:
    """dim of {(Y x_1, ..., Y x_m) : Y in the skew space} over F_p."""
    Fp = _fp(F, p)
    n = len(Fp)
    Finv = PadicMatrix.from_rows(F, p, 1).inverse().tolist()
    cols = []
    for j, k in _skew_index(n):
        S = [[0] * n for _ in range(n)]
        S[j][k], S[k][j] = 1, -1
        Y = [[sum(Finv[r][t] * S[t][c] for t in range(n)) % p for c in range(n)] for r in range(n)]
        cols.append([Residue(sum(Y[r][c] * int(x[c]) for c in range(n)), p) for x in xs for r in range(n)])
    if not cols:
        return 0
    return rank(cols)


# ------------------------------------------------------------- problems


@dataclass(frozen=True)
class TransporterProblem:
    lattice: UnimodularLattice
    sources: tuple[tuple[int, ...], ...]
    targets: tuple[tuple[int, ...], ...]
    precision: int

    def __post_init__(self):
        p, N = self.lattice.prime, self.precision
        if N < 1:
            raise DomainError("precision must be >= 1")
        m = p**N
        n = self.lattice.dim
        conv = lambda vs: tuple(tuple(rational_mod(x, m) for x in v) for v in vs)  # noqa: E731
        object.__setattr__(self, "sources", conv(self.sources))
        object.__setattr__(self, "targets", conv(self.targets))
        if len(self.sources) != len(self.targets):
            raise NotAdmissible("source and target systems differ in length")
        if any(len(v) != n for v in self.sources + self.targets):
            raise NotAdmissible("vector dimension does not match the lattice")
        A, B = self.sources, self.targets
        for i in range(len(A)):
            for j in range(i, len(A)):
                if (self.lattice.pairing(A[i], A[j], N) - self.lattice.pairing(B[i], B[j], N)) % m:
                    raise NotAdmissible(f"gram mismatch at ({i + 1},{j + 1}) modulo p^{N}")
        for S in (A, B):
            if S and rank_mod_p(S, p) != len(S):
                raise NotAdmissible("reductions modulo p are linearly dependent")

    @property
    def m(self) -> int:
        return len(self.sources)


def transport_level(X: PadicMatrix, problem: TransporterProblem) -> int:
    cap = X.N
    out = cap
    for a, b in zip(problem.sources, problem.targets):
        Xa = X @ a
        out = min(out, vec_valuation([(u - v) % X.modulus for u, v in zip(Xa, b)], X.p, cap))
    return out


def refine_transporter(lattice: UnimodularLattice, Xs: PadicMatrix, problem: TransporterProblem,
                       s: int) -> PadicMatrix:
    """E + p^s Y with tY F + F Y = 0 (mod p) and Y (Xs a_i) = c_i (mod p),
    c_i = (b_i - Xs a_i) / p^s.  The result is orthogonal mod p^(s+1) and
    moves Xs a_i to b_i modulo p^(s+1)."""
    p, W = Xs.p, Xs.N
    ps = p**s
    Y = _refine_skew(lattice, Xs, problem, s)
    E = PadicMatrix.identity(lattice.dim, p, W)
    return E + Y.scale(ps)


def _refine_skew(lattice, Xs, problem, s):
    """The Y of refine_transporter as F^-1 S modulo p^W with S skew over Z,
    so that tY F + F Y = 0 holds exactly modulo p^W."""
    p, W = Xs.p, Xs.N
    ps = p**s
    xs, cs = [], []
    for a, b in zip(problem.sources, problem.targets):
        xa = Xs @ a
        d = [(int(v) - u) % Xs.modulus for u, v in zip(xa, b)]
        if any(x % ps for x in d):
            raise DomainError(f"transport does not hold modulo p^{s}")
        xs.append([u % p for u in xa])
        cs.append([(x // ps) % p for x in d])
    S = _skew_part(lattice.gram, xs, cs, p)
    return lattice.F(W).inverse() @ PadicMatrix(p, W, tuple(map(tuple, S)))


def _cayley(Y: PadicMatrix, s: int) -> PadicMatrix:
    """(E - hY)^-1 (E + hY), h = p^s / 2: orthogonal modulo p^W when Y is
    exactly F-skew, and congruent to E + p^s Y modulo p^(2s)."""
    p, W = Y.p, Y.N
    E = PadicMatrix.identity(Y.shape[0], p, W)
    hY = Y.scale(p**s * pow(2, -1, Y.modulus))
    return (E - hY).inverse() @ (E + hY)


def witt_base_step(lattice: UnimodularLattice, problem: TransporterProblem) -> PadicMatrix:
    """Classical Witt transporter over F_p, returned as integer matrix mod p."""
    p = lattice.prime
    if problem.m == 1:
        X = _single_reflection_step(lattice, problem.sources[0], problem.targets[0])
        if X is not None:
            return X
    G = _fp([[rational_mod(x, p) for x in r] for r in lattice.gram], p)
    A = [[Residue(x, p) for x in v] for v in problem.sources]
    B = [[Residue(x, p) for x in v] for v in problem.targets]
    M, _ = witt_transporter(G, A, B)
    return PadicMatrix(p, 1, tuple(tuple(int(x) for x in r) for r in M))


def _reflection_mod(F, c, fc, m):
    # tau_c(v) = v - 2 (v|c)/f(c) c as a matrix mod m; exact when f(c) is a unit
    n = len(F)
    Fc = [sum(F[j][k] * c[k] for k in range(n)) % m for j in range(n)]
    k = 2 * pow(fc, -1, m)
    return tuple(tuple((int(i == j) - k * c[i] * Fc[j]) % m for j in range(n)) for i in range(n))


def _single_reflection_step(lattice, a, b, W: int = 1):
    """The one-vector choice of the field-generic transporter, computed with
    the reflection vectors' integer lifts modulo p^W (hence orthogonal
    modulo p^W), or None when both candidates are isotropic mod p."""
    p = lattice.prime
    m = p**W
    F = lattice.F(W).rows
    a = [x % p for x in a]
    b = [x % p for x in b]
    n = len(a)
    if a == b:
        return PadicMatrix.identity(n, p, W)
    q = lambda v: sum(v[i] * F[i][j] * v[j] for i in range(n) for j in range(n)) % m  # noqa: E731
    d = [(x - y) % p for x, y in zip(a, b)]
    if q(d) % p:
        return PadicMatrix(p, W, _reflection_mod(F, d, q(d), m))
    s = [(x + y) % p for x, y in zip(a, b)]
    if q(s) % p and q(b) % p:
        return PadicMatrix(p, W, _reflection_mod(F, b, q(b), m)) @ PadicMatrix(p, W, _reflection_mod(F, s, q(s), m))
    return None


def _base_lift(lattice, problem, W):
    X = None
    if problem.m == 1:
        X = _single_reflection_step(lattice, problem.sources[0], problem.targets[0], W)
    if X is None:
        X = witt_base_step(lattice, problem).lift(W)
    return lift_to_orthogonal(lattice, X, 1, W)


def witt_lift(problem: TransporterProblem, N: int | None = None, trace: list | None = None) -> OrthogonalMapZp:
    """X with tX F X = F and X a_i = b_i, both modulo p^N.

    ``trace`` (a list) receives (level, iterate) pairs; successive iterates
    are asserted congruent modulo p^level.
    """
    X, N = _witt_lift_raw(problem, N, trace)
    return OrthogonalMapZp(problem.lattice, X, N)


def _witt_lift_raw(problem, N, trace):
    L = problem.lattice
    p = L.prime
    N = problem.precision if N is None else N
    if N > problem.precision:
        raise PrecisionError("requested precision exceeds the data's precision")
    W = working_precision(N, p, L.dim)
    X = _base_lift(L, problem, W)
    s = transport_level(X, problem)
    assert s >= 1
    if trace is not None:
        trace.append((s, X))
    while s < N:
        # Cayley form of E + p^s Y: already orthogonal, so no Newton lift is needed
        R = _cayley(_refine_skew(L, X, problem, s), s)
        Xn = R @ X
        assert (Xn - X).valuation() >= s, "stabilization X_t = X_s mod p^s failed"
        s2 = transport_level(Xn, problem)
        assert s2 > s
        X, s = Xn, s2
        if trace is not None:
            trace.append((s, X))
    return X, N


def _complete_nondegenerate(lattice: UnimodularLattice, vectors):
    """Extend the reductions of ``vectors`` to a basis of a nondegenerate
    subspace of F_p^n by hyperbolic partners of the radical."""
    p = lattice.prime
    G = _fp([[rational_mod(x, p) for x in r] for r in lattice.gram], p)
    V = [[Residue(x, p) for x in v] for v in vectors]
    zero = Residue(0, p)
    while V:
        GV = [[_bil(G, x, y) for y in V] for x in V]
        rad = kernel(GV)
        if not rad:
            break
        kappa = rad[0]
        j = next(i for i, k in enumerate(kappa) if k != 0)
        beta = [zero] * len(V)
        beta[j] = 1 / kappa[j]
        rows = [[sum((v[r] * G[r][c] for r in range(len(G))), zero) for c in range(len(G))] for v in V]
        w, _ = solve_linear(rows, beta)
        V.append(w)
    return [[int(x) for x in v] for v in V]


def correction_vector_zp(lattice: UnimodularLattice, sources, W: int):
    """c with (c|a_k) = 0 mod p^W for every source and f(c) a unit."""
    p = lattice.prime
    M = _complete_nondegenerate(lattice, sources)
    M = [list(a) for a in sources] + M[len(sources):]
    F = lattice.F(W)
    rows = [[Residue(x, p, W) for x in F @ v] for v in M]
    comp = kernel(rows)
    comp = [[int(x) for x in v] for v in comp]
    cands = comp + [[x + y for x, y in zip(u, v)] for i, u in enumerate(comp) for v in comp[i + 1:]]
    for c in cands:
        if lattice.qvalue(c, 1) % p:
            return c
    raise NotAdmissible("no unit-norm vector orthogonal to the sources")


def reflection_zp(lattice: UnimodularLattice, c, W: int) -> PadicMatrix:
    p = lattice.prime
    m = p**W
    F = lattice.F(W)
    Fc = F @ c
    fc = sum(a * b for a, b in zip(Fc, c)) % m
    k = 2 * pow(fc, -1, m)
    n = lattice.dim
    return PadicMatrix(p, W, tuple(tuple(int(i == j) - k * c[i] * Fc[j] for j in range(n)) for i in range(n)))


def witt_lift_special(problem: TransporterProblem, N: int | None = None) -> OrthogonalMapZp:
    """witt_lift with determinant +1 (needs 2m + 1 <= n)."""
    L = problem.lattice
    N = problem.precision if N is None else N
    if 2 * problem.m + 1 > L.dim:
        raise NotAdmissible(f"special lift needs 2m+1 <= n (m={problem.m}, n={L.dim})")
    X, N = _witt_lift_raw(problem, N, None)
    X = _fix_det(L, X, problem.sources)
    return OrthogonalMapZp(L, X, N)


def _fix_det(L, X, sources):
    W = X.N
    d = X.det()
    if (d + 1) % X.modulus == 0:
        c = correction_vector_zp(L, sources, W)
        X = X @ reflection_zp(L, c, W)
    return X


# ------------------------------------------------------------- spinor norm


def spinor_norm_zp(lattice: UnimodularLattice, X: PadicMatrix) -> int:
    """+1 if the spinor norm of X (det +1) is a square class of units, -1
    for the nonsquare unit class.

    For a unimodular lattice at odd p the spinor norm of an integral
    rotation is a unit class, and it is read off from the reduction mod p:
    the kernel of reduction is pro-p, so it has trivial spinor norm.
    """
    p = lattice.prime
    Xb = X.reduce(1)
    if Xb.det() != 1:
        raise DomainError("spinor norm defined on SO only")
    G = _fp([[rational_mod(x, p) for x in r] for r in lattice.gram], p)
    n = lattice.dim
    E = [[Residue(int(i == j), p) for j in range(n)] for i in range(n)]
    images = [[Residue(x, p) for x in col] for col in zip(*Xb.rows)]
    M, word = witt_transporter(G, E, images)
    assert [[int(x) for x in r] for r in M] == [list(r) for r in Xb.rows]
    prod = 1
    for c in word:
        prod = prod * int(_bil(G, c, c)) % p
    return legendre(prod, p)


def hyperbolic_rotation_zp(lattice: UnimodularLattice, lam: int, W: int) -> PadicMatrix:
    """e1 -> lam e1, e2 -> e2/lam for a standard-shape lattice; lam a unit."""
    p = lattice.prime
    m = p**W
    n = lattice.dim
    rows = [[int(i == j) for j in range(n)] for i in range(n)]
    rows[0][0] = lam % m
    rows[1][1] = pow(lam, -1, m)
    return PadicMatrix(p, W, tuple(map(tuple, rows)))


def fix_spinor_zp(lattice: UnimodularLattice, X: PadicMatrix) -> PadicMatrix:
    """Compose with a hyperbolic rotation by a nonresidue if needed."""
    if spinor_norm_zp(lattice, X) == 1:
        return X
    return X @ hyperbolic_rotation_zp(lattice, nonresidue(lattice.prime), X.N)


# ------------------------------------------------------------- orbits


def level(a, p: int, N: int) -> int:
    """Largest l with a in p^l L, read in standard coordinates."""
    m = p**N
    v = vec_valuation([rational_mod(x, m) for x in a], p, N)
    if v >= N:
        raise PrecisionError("level exceeds precision")
    return v


@dataclass(frozen=True)
class OrbitResult:
    transporter: OrthogonalMapZp | None
    levels: tuple[int, int]
    transport_level: int | None = None

    @property
    def exists(self) -> bool:
        return self.transporter is not None


def orbit_test(lattice: UnimodularLattice, a, b, N: int) -> OrbitResult:
    """Integral orthogonal transporter of a to b, or the level pair showing
    none exists.  A found X satisfies X a = b modulo p^(N - level)."""
    p = lattice.prime
    m = p**N
    a = [rational_mod(x, m) for x in a]
    b = [rational_mod(x, m) for x in b]
    if (lattice.qvalue(a, N) - lattice.qvalue(b, N)) % m:
        raise DomainError("f(a) and f(b) differ modulo p^N")
    # the zero vector gets level N
    la, lb = vec_valuation(a, p, N), vec_valuation(b, p, N)
    if la != lb:
        return OrbitResult(None, (la, lb))
    lam = la
    n = lattice.dim
    if N - 2 * lam <= 0:
        X = PadicMatrix.identity(n, p, N)
        return OrbitResult(OrthogonalMapZp(lattice, X, N), (la, lb), N - lam)
    a0 = [x // p**lam for x in a]
    b0 = [x // p**lam for x in b]
    prob = TransporterProblem(lattice, (tuple(a0),), (tuple(b0),), N - 2 * lam)
    X, _ = _witt_lift_raw(prob, N - 2 * lam, None)
    W = working_precision(N, p, n)
    if X.N < W:
        X = lift_to_orthogonal(lattice, X, 1, W)
    return OrbitResult(OrthogonalMapZp(lattice, X, N), (la, lb), N - lam)
