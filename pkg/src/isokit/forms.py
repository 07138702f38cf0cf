"""Quadratic spaces over Q: forms, reflections, spinor norms and Witt's
extension theorem.

The bilinear form is normalized so that ``(x|x) = f(x)``; for the standard
shape ``x1*x2 + a3*x3^2 + ... + an*xn^2`` the Gram matrix therefore carries
1/2 in positions (1,2) and (2,1).

The Witt and diagonalization routines at the bottom of the "generic"
section take a Gram matrix over any field of characteristic != 2 (Fractions
or F_p residues), which is how the lattice code reuses them modulo p.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .arith import (
    class_representative,
    DomainError,
    FactorizationIncomplete,
    SquareClass,
    is_rational_square,
    square_class_of_product,
    squarefree_part,
    to_fraction,
)
from .linalg import det, identity, kernel, mat_inverse, mat_mul, mat_vec, rank, transpose

HALF = Fraction(1, 2)


class GramMismatch(DomainError):
    def __init__(self, i: int, j: int):
        super().__init__(f"gram mismatch at ({i},{j})")
        self.i, self.j = i, j


class LinearlyDependent(DomainError):
    pass


class NotOrthogonal(DomainError):
    pass


class NoCorrection(DomainError):
    """No admissible vector exists for a determinant or spinor correction."""


# ------------------------------------------------------------ generic layer


def bil(G, x, y):
    """(x|y) = x^t G y."""
    Gy = mat_vec(G, y)
    return sum((xi * g for xi, g in zip(x, Gy)), G[0][0] * 0)


def qval(G, x):
    return bil(G, x, x)


def reflection_matrix(G, c):
    """Matrix of x -> x - 2 (x|c)/f(c) c."""
    fc = qval(G, c)
    if fc == 0:
        raise DomainError("reflection in an isotropic vector")
    Gc = mat_vec(G, c)  # (x|c) = Gc . x
    n = len(G)
    one = fc * 0 + 1
    I = identity(n, one)
    k = 2 / fc if isinstance(fc, Fraction) else fc.inverse() * 2
    return [[I[i][j] - k * c[i] * Gc[j] for j in range(n)] for i in range(n)]


def word_product(G, word, one=None):
    """tau_{c1} tau_{c2} ... tau_{ck} as a matrix (tau_{ck} acts first)."""
    if one is None:
        one = G[0][0] * 0 + 1
    M = identity(len(G), one)
    for c in word:
        M = mat_mul(M, reflection_matrix(G, c))
    return M


def diagonalize(G):
    """Congruence diagonalization: returns (P, d) with P^t G P = diag(d).

    Columns of P are the new basis.  Zero entries of d span the radical when
    G is degenerate.  Deterministic: first admissible index wins.
    """
    n = len(G)
    one = G[0][0] * 0 + 1
    zero = one - one
    V = [[one if i == j else zero for i in range(n)] for j in range(n)]  # basis vectors
    done, d = [], []
    while V:
        k = next((i for i, v in enumerate(V) if qval(G, v) != 0), None)
        if k is None:
            pair = next(
                ((i, j) for i in range(len(V)) for j in range(i + 1, len(V)) if bil(G, V[i], V[j]) != 0),
                None,
            )
            if pair is None:
                done += V
                d += [zero] * len(V)
                break
            i, j = pair
            V[i] = [a + b for a, b in zip(V[i], V[j])]
            k = i
        u = V.pop(k)
        fu = qval(G, u)
        V = [[a - (bil(G, v, u) / fu) * b for a, b in zip(v, u)] for v in V]
        done.append(u)
        d.append(fu)
    return transpose(done), d


def find_anisotropic(G, vectors):
    """First anisotropic vector among ``vectors`` and their pairwise sums."""
    for v in vectors:
        if qval(G, v) != 0:
            return v
    for v, w in itertools.combinations(vectors, 2):
        s = [a + b for a, b in zip(v, w)]
        if qval(G, s) != 0:
            return s
    return None


def orthogonal_complement(G, vectors):
    """Basis of {x : (x|v) = 0 for all v}."""
    if not vectors:
        one = G[0][0] * 0 + 1
        return identity(len(G), one)
    return kernel([mat_vec(G, v) for v in vectors])


def check_gram_match(G, A, B):
    m = len(A)
    if len(B) != m:
        raise DomainError("source and target systems differ in length")
    for i in range(m):
        for j in range(i, m):
            if bil(G, A[i], A[j]) != bil(G, B[i], B[j]):
                raise GramMismatch(i + 1, j + 1)


def witt_transporter(G, A, B):
    """An isometry sending A[i] to B[i], with its reflection word.

    ``G`` nondegenerate over a field of characteristic != 2; A and B linearly
    independent with equal Gram matrices.  Returns ``(M, word)`` where
    ``M == word_product(G, word)``.
    """
    n = len(G)
    A = [list(a) for a in A]
    B = [list(b) for b in B]
    one = G[0][0] * 0 + 1
    if any(len(v) != n for v in A + B):
        raise DomainError("vector dimension does not match the form")
    check_gram_match(G, A, B)
    if A and (rank(A) != len(A) or rank(B) != len(B)):
        raise LinearlyDependent("input system is linearly dependent")

    if len(A) == 1:
        # one vector: at most two reflections unless both candidates are isotropic
        x, y = A[0], B[0]
        if x == y:
            return identity(n, one), []
        d = [xi - yi for xi, yi in zip(x, y)]
        s = [xi + yi for xi, yi in zip(x, y)]
        if qval(G, d) != 0:
            word = [d]
        elif qval(G, s) != 0 and qval(G, y) != 0:
            word = [y, s]
        else:
            word = None
        if word is not None:
            return word_product(G, word, one), word

    # complete a degenerate span by hyperbolic partners of its radical
    while A:
        GA = [[bil(G, x, y) for y in A] for x in A]
        rad = kernel(GA)
        if not rad:
            break
        kappa = rad[0]
        j = next(i for i, k in enumerate(kappa) if k != 0)
        beta = [one * 0] * len(A)
        beta[j] = one / kappa[j]
        rA = [sum((k * a[i] for k, a in zip(kappa, A)), one * 0) for i in range(n)]
        rB = [sum((k * b[i] for k, b in zip(kappa, B)), one * 0) for i in range(n)]
        new = []
        for S, r in ((A, rA), (B, rB)):
            w = _solve_pairings(G, S, beta)
            fw = qval(G, w)
            new.append([wi - (fw / 2) * ri for wi, ri in zip(w, r)])
        A.append(new[0])
        B.append(new[1])

    word: list = []
    M = identity(n, one)
    if not A:
        return M, word
    GA = [[bil(G, x, y) for y in A] for x in A]
    P, _ = diagonalize(GA)
    m = len(A)
    Ao = [[sum((P[i][k] * A[i][t] for i in range(m)), one * 0) for t in range(n)] for k in range(m)]
    Bo = [[sum((P[i][k] * B[i][t] for i in range(m)), one * 0) for t in range(n)] for k in range(m)]
    for x0, y in zip(Ao, Bo):
        x = mat_vec(M, x0)
        if x == y:
            continue
        d = [xi - yi for xi, yi in zip(x, y)]
        if qval(G, d) != 0:
            step = [d]
        else:
            step = [y, [xi + yi for xi, yi in zip(x, y)]]
        M = mat_mul(word_product(G, step, one), M)
        word = step + word
    return M, word


def _solve_pairings(G, S, beta):
    from .linalg import solve_linear

    x, _ = solve_linear([mat_vec(G, s) for s in S], beta)
    if x is None:
        raise DomainError("pairing system unsolvable; form degenerate?")
    return x


# ------------------------------------------------------------ forms over Q


def _frac_matrix(M) -> tuple[tuple[Fraction, ...], ...]:
    return tuple(tuple(to_fraction(x) for x in row) for row in M)


def _frac_vec(v) -> list[Fraction]:
    return [to_fraction(x) for x in v]


def standard_gram(alphas: Sequence) -> tuple[tuple[Fraction, ...], ...]:
    alphas = [to_fraction(a) for a in alphas]
    n = len(alphas) + 2
    G = [[Fraction(0)] * n for _ in range(n)]
    G[0][1] = G[1][0] = HALF
    for i, a in enumerate(alphas, start=2):
        G[i][i] = a
    return _frac_matrix(G)


@dataclass(frozen=True)
class QuadraticForm:
    """Nondegenerate quadratic form over Q given by its Gram matrix."""

    gram: tuple[tuple[Fraction, ...], ...]
    standard_shape: tuple[Fraction, ...] | None = None

    def __post_init__(self):
        G = _frac_matrix(self.gram)
        object.__setattr__(self, "gram", G)
        n = len(G)
        if n == 0 or any(len(r) != n for r in G):
            raise DomainError("gram matrix must be square")
        if any(G[i][j] != G[j][i] for i in range(n) for j in range(i)):
            raise DomainError("gram matrix must be symmetric")
        if det([list(r) for r in G]) == 0:
            raise DomainError("quadratic form is degenerate")
        if self.standard_shape is not None:
            alphas = tuple(to_fraction(a) for a in self.standard_shape)
            object.__setattr__(self, "standard_shape", alphas)
            if standard_gram(alphas) != G:
                raise DomainError("gram does not match the declared standard shape")

    @classmethod
    def standard(cls, alphas: Sequence) -> "QuadraticForm":
        """x1 x2 + alphas[0] x3^2 + ... ; dimension len(alphas) + 2."""
        if len(alphas) < 1:
            raise DomainError("standard shape needs at least one coefficient")
        return cls(standard_gram(alphas), tuple(alphas))

    @classmethod
    def from_gram(cls, gram) -> "QuadraticForm":
        G = _frac_matrix(gram)
        alphas = _detect_standard(G)
        return cls(G, alphas)

    @classmethod
    def diagonal(cls, coeffs: Sequence) -> "QuadraticForm":
        n = len(coeffs)
        return cls.from_gram([[coeffs[i] if i == j else 0 for j in range(n)] for i in range(n)])

    @property
    def dim(self) -> int:
        return len(self.gram)

    @property
    def alphas(self) -> tuple[Fraction, ...]:
        if self.standard_shape is None:
            raise DomainError("form is not in standard shape")
        return self.standard_shape

    @property
    def is_standard(self) -> bool:
        return self.standard_shape is not None

    def matrix(self) -> list[list[Fraction]]:
        return [list(r) for r in self.gram]

    def basis_vector(self, i: int) -> list[Fraction]:
        """e_i, 1-based as in the standard basis."""
        return [Fraction(int(k == i - 1)) for k in range(self.dim)]

    def __call__(self, x) -> Fraction:
        return evaluate(self, x)

    def scaled(self, c) -> "QuadraticForm":
        c = to_fraction(c)
        return QuadraticForm.from_gram([[c * x for x in r] for r in self.gram])


def _detect_standard(G):
    n = len(G)
    if n < 3:
        return None
    try:
        alphas = tuple(G[i][i] for i in range(2, n))
        return alphas if standard_gram(alphas) == G else None
    except Exception:
        return None


def _check_dim(f: QuadraticForm, *vs):
    for v in vs:
        if len(v) != f.dim:
            raise DomainError(f"vector of length {len(v)} does not match form of dimension {f.dim}")


def evaluate(f: QuadraticForm, x) -> Fraction:
    x = _frac_vec(x)
    _check_dim(f, x)
    return qval(f.gram, x)


def bilinear(f: QuadraticForm, x, y) -> Fraction:
    x, y = _frac_vec(x), _frac_vec(y)
    _check_dim(f, x, y)
    return bil(f.gram, x, y)


@dataclass(frozen=True)
class ReflectionWord:
    form: QuadraticForm
    vectors: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        vs = tuple(tuple(_frac_vec(v)) for v in self.vectors)
        object.__setattr__(self, "vectors", vs)
        for v in vs:
            if qval(self.form.gram, v) == 0:
                raise DomainError("reflection word contains an isotropic vector")

    def __len__(self):
        return len(self.vectors)

    def matrix(self) -> list[list[Fraction]]:
        return word_product(self.form.gram, [list(v) for v in self.vectors], Fraction(1))

    def norm_product(self) -> Fraction:
        out = Fraction(1)
        for v in self.vectors:
            out *= qval(self.form.gram, v)
        return out


@dataclass(frozen=True)
class OrthogonalMapQ:
    """Exact isometry of a form over Q, checked on construction."""

    form: QuadraticForm
    matrix: tuple[tuple[Fraction, ...], ...]
    word: ReflectionWord | None = field(default=None, compare=False)

    def __post_init__(self):
        M = _frac_matrix(self.matrix)
        object.__setattr__(self, "matrix", M)
        n = self.form.dim
        if len(M) != n or any(len(r) != n for r in M):
            raise DomainError("matrix size does not match the form")
        L = [list(r) for r in M]
        G = self.form.matrix()
        if mat_mul(transpose(L), mat_mul(G, L)) != G:
            raise NotOrthogonal("matrix does not preserve the form")

    @property
    def det(self) -> int:
        return int(det([list(r) for r in self.matrix]))

    def rows(self) -> list[list[Fraction]]:
        return [list(r) for r in self.matrix]

    def __call__(self, x) -> list[Fraction]:
        return mat_vec(self.rows(), _frac_vec(x))

    def __matmul__(self, other: "OrthogonalMapQ") -> "OrthogonalMapQ":
        if other.form != self.form:
            raise DomainError("composing maps of different forms")
        word = None
        if self.word is not None and other.word is not None:
            word = ReflectionWord(self.form, self.word.vectors + other.word.vectors)
        return OrthogonalMapQ(self.form, mat_mul(self.rows(), other.rows()), word)

    def inverse(self) -> "OrthogonalMapQ":
        # M^{-1} = G^{-1} M^t G for an isometry
        G = self.form.matrix()
        word = None if self.word is None else ReflectionWord(self.form, self.word.vectors[::-1])
        return OrthogonalMapQ(self.form, mat_mul(mat_inverse(G), mat_mul(transpose(self.rows()), G)), word)

    def fixes(self, v) -> bool:
        return self(v) == _frac_vec(v)

    def is_identity(self) -> bool:
        return self.rows() == identity(self.form.dim)

    @classmethod
    def identity(cls, f: QuadraticForm) -> "OrthogonalMapQ":
        return cls(f, identity(f.dim), ReflectionWord(f, ()))


def reflection(f: QuadraticForm, c) -> OrthogonalMapQ:
    c = _frac_vec(c)
    _check_dim(f, c)
    return OrthogonalMapQ(f, reflection_matrix(f.gram, c), ReflectionWord(f, (tuple(c),)))


def _as_map(f: QuadraticForm, sigma) -> OrthogonalMapQ:
    if isinstance(sigma, OrthogonalMapQ):
        if sigma.form != f:
            raise DomainError("map belongs to a different form")
        return sigma
    return OrthogonalMapQ(f, sigma)


# ------------------------------------------------------ Cartan-Dieudonne


def cartan_dieudonne(f: QuadraticForm, sigma) -> ReflectionWord:
    """Factor an isometry into at most dim f reflections."""
    sigma = _as_map(f, sigma)
    G = f.matrix()
    word = _cd(G, sigma.rows(), identity(f.dim))
    return ReflectionWord(f, tuple(tuple(c) for c in word))


def _in_span(W, y):
    n = len(W[0])
    return [sum((yi * w[k] for yi, w in zip(y, W)), Fraction(0)) for k in range(n)]


def _cd(G, S, W):
    """Reflection word for S, an isometry that preserves span(W) and is the
    identity on its orthogonal complement."""
    if not W:
        return []
    SW = [mat_vec(S, w) for w in W]
    if all(sw == w for sw, w in zip(SW, W)):
        return []
    d = len(W)

    # anisotropic fixed vector: split it off for free
    fixed_coeffs = kernel([[SW[j][k] - W[j][k] for j in range(d)] for k in range(len(G))])
    x = find_anisotropic(G, [_in_span(W, y) for y in fixed_coeffs])
    if x is not None:
        return _cd(G, S, _restrict_perp(G, W, x))

    gram_w = [[bil(G, u, v) for v in W] for u in W]
    moved = [[(bil(G, SW[i], W[j]) + bil(G, W[i], SW[j])) / 2 for j in range(d)] for i in range(d)]
    if gram_w == moved:
        # exceptional: every anisotropic x has f(Sx - x) = 0; det(tau_c S) = -1
        # makes tau_c S non-exceptional and parity keeps the length <= dim
        c = find_anisotropic(G, W)
        return [c] + _cd(G, mat_mul(reflection_matrix(G, c), S), W)

    # q1(y) (q1(y) - q2(y)) is a nonzero quartic, so the grid {0..4}^d holds a non-root
    for y in _grid(d, 4):
        q1 = sum(gram_w[i][j] * y[i] * y[j] for i in range(d) for j in range(d))
        if q1 == 0:
            continue
        q2 = sum(moved[i][j] * y[i] * y[j] for i in range(d) for j in range(d))
        if q1 != q2:
            x = _in_span(W, y)
            c = [a - b for a, b in zip(mat_vec(S, x), x)]
            S2 = mat_mul(reflection_matrix(G, c), S)
            return [c] + _cd(G, S2, _restrict_perp(G, W, x))
    raise AssertionError("grid search exhausted for a non-exceptional isometry")


def _restrict_perp(G, W, x):
    coeffs = kernel([[bil(G, w, x) for w in W]])
    return [_in_span(W, y) for y in coeffs]


def _grid(d: int, h: int):
    """Nonzero points of {0..h}^d ordered by max-norm, then lexicographically."""
    for r in range(1, h + 1):
        for y in itertools.product(range(r + 1), repeat=d):
            if max(y) == r:
                yield y


# ------------------------------------------------------------ spinor norm


def _word_for(f, sigma, use_word):
    if use_word and sigma.word is not None:
        return sigma.word
    return cartan_dieudonne(f, sigma)


def spinor_norm_value(f: QuadraticForm, sigma, use_word: bool = True) -> Fraction:
    """A rational representing theta(sigma): the product of f over a
    reflection word.  Only its square class is meaningful.

    The word carried by ``sigma`` is used when present; ``use_word=False``
    forces a fresh factorization.
    """
    sigma = _as_map(f, sigma)
    if sigma.det != 1:
        raise DomainError("spinor norm defined on SO only")
    return _word_for(f, sigma, use_word).norm_product()


def spinor_norm(f: QuadraticForm, sigma, use_word: bool = True) -> SquareClass:
    sigma = _as_map(f, sigma)
    if sigma.det != 1:
        raise DomainError("spinor norm defined on SO only")
    word = _word_for(f, sigma, use_word)
    return square_class_of_product([qval(f.gram, list(c)) for c in word.vectors])


def in_spinor_kernel(f: QuadraticForm, sigma, use_word: bool = True) -> bool:
    """det = +1 and trivial spinor norm; decided without factoring."""
    sigma = _as_map(f, sigma)
    return sigma.det == 1 and is_rational_square(spinor_norm_value(f, sigma, use_word))


def _small_class_rep(x: Fraction) -> Fraction:
    return Fraction(class_representative(x))


# -------------------------------------------------- standard-shape helpers


def _require_standard(f: QuadraticForm):
    if not f.is_standard:
        raise DomainError("operation requires a form in standard shape")


def hyperbolic_rotation(f: QuadraticForm, lam) -> OrthogonalMapQ:
    """e1 -> lam e1, e2 -> e2 / lam, identity on e3..en."""
    _require_standard(f)
    lam = to_fraction(lam)
    if lam == 0:
        raise DomainError("hyperbolic rotation parameter must be nonzero")
    M = identity(f.dim)
    M[0][0] = lam
    M[1][1] = 1 / lam
    if lam == 1:
        return OrthogonalMapQ.identity(f)
    # tau_{e1 - e2} tau_{e1 - lam e2}, spinor norm (-1)(-lam)
    c1 = [Fraction(1), Fraction(-1)] + [Fraction(0)] * (f.dim - 2)
    c2 = [Fraction(1), -lam] + [Fraction(0)] * (f.dim - 2)
    return OrthogonalMapQ(f, M, ReflectionWord(f, (tuple(c1), tuple(c2))))


def represent_value(f: QuadraticForm, c, constraint: str = "ab") -> list[Fraction]:
    """Nonzero w in <a,b>-perp (``"ab"``) or <a>-perp (``"a"``) with f(w) = c.

    Uses the hyperbolic plane spanned by e1, e2, which lies in both.
    """
    _require_standard(f)
    if constraint not in ("ab", "a"):
        raise DomainError(f"unknown constraint {constraint!r}")
    c = to_fraction(c)
    w = [Fraction(0)] * f.dim
    if c == 0:
        w[0] = Fraction(1)
    else:
        w[0], w[1] = c, Fraction(1)
    return w


# ------------------------------------------------------------ Witt over Q


def witt_extend(f: QuadraticForm, A, B) -> OrthogonalMapQ:
    """An isometry sigma of f with sigma(A[i]) = B[i]."""
    A = [_frac_vec(a) for a in A]
    B = [_frac_vec(b) for b in B]
    _check_dim(f, *A, *B)
    M, word = witt_transporter(f.matrix(), A, B)
    return OrthogonalMapQ(f, M, ReflectionWord(f, tuple(tuple(c) for c in word)))


def correction_vector(f: QuadraticForm, sources) -> list[Fraction]:
    """Anisotropic c orthogonal to every source vector (first admissible)."""
    comp = orthogonal_complement(f.matrix(), [_frac_vec(a) for a in sources])
    c = find_anisotropic(f.matrix(), comp)
    if c is None:
        raise NoCorrection("no anisotropic vector orthogonal to the sources")
    return c


def witt_extend_special(f: QuadraticForm, A, B, target: str = "det") -> OrthogonalMapQ:
    """witt_extend with det +1 (``target="det"``) and, for
    ``target="spinor"``, trivial spinor norm as well."""
    if target not in ("det", "spinor"):
        raise DomainError(f"unknown target {target!r}")
    A = [_frac_vec(a) for a in A]
    if target == "spinor":
        _require_standard(f)
        if any(a[0] != 0 or a[1] != 0 for a in A):
            raise NoCorrection("spinor correction needs sources orthogonal to e1, e2")
    sigma = witt_extend(f, A, B)
    if sigma.det == -1:
        sigma = sigma @ reflection(f, correction_vector(f, A))
    if target == "spinor":
        lam = spinor_norm_value(f, sigma)
        if not is_rational_square(lam):
            sigma = sigma @ hyperbolic_rotation(f, 1 / _small_class_rep(lam))
    return sigma


# --------------------------------------------------- signature, normal form


def signature(f: QuadraticForm) -> tuple[int, int]:
    _, d = diagonalize(f.matrix())
    return sum(x > 0 for x in d), sum(x < 0 for x in d)


def primitive_vectors(n: int, height: int):
    """Primitive integer vectors up to sign, by increasing max-norm."""
    for h in range(1, height + 1):
        for v in itertools.product(range(-h, h + 1), repeat=n):
            if max(map(abs, v)) != h:
                continue
            first = next(x for x in v if x)
            if first < 0 or math.gcd(*v) != 1:
                continue
            yield [Fraction(x) for x in v]


def find_isotropic_vector(gram, height_bound: int):
    G = [[to_fraction(x) for x in r] for r in gram]
    for v in primitive_vectors(len(G), height_bound):
        if qval(G, v) == 0:
            return v
    return None


def _normal_standard(f: QuadraticForm) -> bool:
    if not f.is_standard:
        return False
    a = f.alphas
    if any(x.denominator != 1 for x in a) or a[-1] <= 0 or a[-2] <= 0:
        return False
    npos, nneg = signature(f)
    return npos >= nneg


def normalize_to_standard(g, witness=None, height_bound: int = 10):
    """Bring an isotropic form of dimension >= 5 into standard shape.

    Returns ``(form, T, s)`` with ``T^t G_new T = s G_old``, integer
    coefficients, the last two positive, and n+ >= n- for the new form.
    """
    f = g if isinstance(g, QuadraticForm) else QuadraticForm.from_gram(g)
    n = f.dim
    if n < 5:
        raise DomainError("normalization needs dimension >= 5")
    if _normal_standard(f):
        return f, identity(n), Fraction(1)
    npos, nneg = signature(f)
    if npos == 0 or nneg == 0:
        raise DomainError("not isotropic over R")
    s = Fraction(1 if npos >= nneg else -1)
    G = [[s * x for x in r] for r in f.gram]

    if witness is None:
        v = find_isotropic_vector(G, height_bound)
        if v is None:
            raise DomainError("witness required: no isotropic vector within the height bound")
    else:
        v = _frac_vec(witness)
        if len(v) != n or all(x == 0 for x in v) or qval(G, v) != 0:
            raise DomainError("witness is not a nonzero isotropic vector")

    k = next(i for i in range(n) if bil(G, v, identity(n)[i]) != 0)
    w = identity(n)[k]
    vw = bil(G, v, w)
    w = [wi - (qval(G, w) / (2 * vw)) * vi for wi, vi in zip(w, v)]
    e1, e2 = v, [wi / (2 * vw) for wi in w]

    comp = orthogonal_complement(G, [e1, e2])
    Gc = [[bil(G, x, y) for y in comp] for x in comp]
    P, d = diagonalize(Gc)
    cols = []
    for j, dj in enumerate(d):
        c = [sum((P[i][j] * comp[i][t] for i in range(len(comp))), Fraction(0)) for t in range(n)]
        c = [x * dj.denominator for x in c]
        alpha = dj * dj.denominator**2
        root = _square_root_part(int(alpha))
        c = [x / root for x in c]
        cols.append((alpha / root**2, c))
    cols.sort(key=lambda t: t[0] > 0)  # stable: positive coefficients last
    B = transpose([e1, e2] + [c for _, c in cols])
    new = QuadraticForm.standard([a for a, _ in cols])
    assert mat_mul(transpose(B), mat_mul(G, B)) == new.matrix()
    T = mat_inverse(B)
    return new, T, s


def _square_root_part(a: int) -> int:
    """Largest k with k^2 | a (1 when factoring is too expensive)."""
    try:
        sf = abs(squarefree_part(a))
    except FactorizationIncomplete:
        return 1
    return math.isqrt(abs(a) // sf)
