"""Four-factor decompositions g = x y z u with x, z fixing a = e_n and
y, u fixing b = e_(n-1), all factors in the spinor kernel O'(f).

The varieties involved:

    X = {s : f(s) = f(a)}
    Y = {(g, s) : s in X, (s | g(b)) = 0}
    Z = {(g, s, t) : (g, s) in Y, (t|a) = 0, f(t) = f(b), (s|t) = 0}

and phi(x, y, z, u) = (xyzu, xy(a), xy(b)) maps G(a) x G(b) x G(a) x G(b)
onto Z.  A point of Z over g is found first (psi-fiber), then a point of
the phi-fiber over it.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

from .arith import DomainError, rational_mod
from .forms import (
    OrthogonalMapQ,
    QuadraticForm,
    bil,
    hyperbolic_rotation,
    in_spinor_kernel,
    qval,
    reflection,
    represent_value,
    spinor_norm,
    witt_extend,
    witt_extend_special,
)
from .linalg import PadicMatrix
from .local_witt import (
    OrthogonalMapZp,
    TransporterProblem,
    UnimodularLattice,
    fix_spinor_zp,
    spinor_norm_zp,
    working_precision,
    _witt_lift_raw,
    _fix_det,
)


class NotInSpinorKernel(DomainError):
    def __init__(self, det: int, theta=None):
        msg = "not in spinor kernel"
        if det != 1:
            msg += " (det -1)"
        elif theta is not None:
            msg += f" (spinor norm {int(theta)})"
        super().__init__(msg)
        self.det, self.theta = det, theta


@dataclass(frozen=True)
class StandardFrame:
    form: QuadraticForm

    def __post_init__(self):
        if not self.form.is_standard:
            raise DomainError("frame needs a form in standard shape")
        if self.form.dim < 5:
            raise DomainError("frame needs dimension >= 5")

    @classmethod
    def standard(cls, alphas) -> "StandardFrame":
        return cls(QuadraticForm.standard(alphas))

    @property
    def n(self) -> int:
        return self.form.dim

    @property
    def a(self) -> list[Fraction]:
        return self.form.basis_vector(self.n)

    @property
    def b(self) -> list[Fraction]:
        return self.form.basis_vector(self.n - 1)

    def f(self, x) -> Fraction:
        return qval(self.form.gram, x)

    def pair(self, x, y) -> Fraction:
        return bil(self.form.gram, x, y)


def _vec(v):
    return [Fraction(x) for x in v]


# ------------------------------------------------------------ predicates


def is_in_X(frame: StandardFrame, s) -> bool:
    return frame.f(_vec(s)) == frame.f(frame.a)


def is_in_Y(frame: StandardFrame, g: OrthogonalMapQ, s) -> bool:
    return is_in_X(frame, s) and frame.pair(_vec(s), g(frame.b)) == 0


def is_in_Z(frame: StandardFrame, g: OrthogonalMapQ, s, t) -> bool:
    s, t = _vec(s), _vec(t)
    return (
        is_in_Y(frame, g, s)
        and frame.pair(t, frame.a) == 0
        and frame.f(t) == frame.f(frame.b)
        and frame.pair(s, t) == 0
    )


@dataclass(frozen=True)
class ZPoint:
    g: OrthogonalMapQ
    s: tuple[Fraction, ...]
    t: tuple[Fraction, ...]


def _zpoint(frame, g, s, t) -> ZPoint:
    z = ZPoint(g, tuple(_vec(s)), tuple(_vec(t)))
    assert is_in_Z(frame, g, z.s, z.t)
    return z


def _require_kernel(frame, g):
    if g.det != 1:
        raise NotInSpinorKernel(g.det)
    if not in_spinor_kernel(frame.form, g):
        raise NotInSpinorKernel(1, spinor_norm(frame.form, g))


# ------------------------------------------------------------ fibers


def psi_fiber_point(frame: StandardFrame, g: OrthogonalMapQ, check: bool = True) -> ZPoint:
    """A point (g, s, b) of Z over g."""
    if check:
        _require_kernel(frame, g)
    a, b = frame.a, frame.b
    gb = g(b)
    if gb == b or gb == [-x for x in b]:
        return _zpoint(frame, g, a, b)
    fb = frame.f(b)
    u1 = [frame.pair(gb, b) / fb * x for x in b]
    u2 = represent_value(frame.form, fb - frame.f(u1), "ab")
    u = [x + y for x, y in zip(u1, u2)]
    sigma = witt_extend(frame.form, [u, b], [gb, b])
    return _zpoint(frame, g, sigma(a), b)


def nu_fiber_point(frame: StandardFrame, s) -> ZPoint:
    """A point of Z with middle component s (s in X)."""
    s = _vec(s)
    if not is_in_X(frame, s):
        raise DomainError("s is not on X: f(s) != f(a)")
    a, b = frame.a, frame.b
    f = frame.form
    if s == a:
        return _zpoint(frame, OrthogonalMapQ.identity(f), a, b)
    if s == [-x for x in a]:
        g = reflection(f, a) @ reflection(f, b) @ hyperbolic_rotation(f, frame.f(a) * frame.f(b))
        return _zpoint(frame, g, s, b)
    g = witt_extend_special(f, [a], [s], "spinor")
    fa = frame.f(a)
    sa = frame.pair(s, a)
    w2 = represent_value(f, fa - sa * sa / fa, "ab")
    w = [sa / fa * x + y for x, y in zip(a, w2)]
    sigma = witt_extend(f, [w, a], [s, a])
    return _zpoint(frame, g, s, sigma(b))


def _stabilizer_element(frame: StandardFrame, k: int) -> OrthogonalMapQ:
    """A fixed element of O'(f) fixing a and b, used to vary fiber points."""
    f = frame.form
    e3 = f.basis_vector(3)
    c = [Fraction(1), Fraction(k)] + [Fraction(0)] * (frame.n - 2)
    h = reflection(f, e3) @ reflection(f, c) @ hyperbolic_rotation(f, 1 / (frame.f(e3) * frame.f(c)))
    return h


@dataclass(frozen=True)
class BorovoiCertificate:
    frame: StandardFrame
    g: OrthogonalMapQ
    x: OrthogonalMapQ
    y: OrthogonalMapQ
    z: OrthogonalMapQ
    u: OrthogonalMapQ
    s: tuple[Fraction, ...]
    t: tuple[Fraction, ...]

    @property
    def factors(self):
        return self.x, self.y, self.z, self.u

    @property
    def denominator_lcm(self) -> int:
        out = 1
        for M in self.factors:
            for r in M.matrix:
                for e in r:
                    out = math.lcm(out, e.denominator)
        return out


def phi_fiber_point(frame: StandardFrame, zeta: ZPoint, variant: int = 0,
                    check: bool = True) -> BorovoiCertificate:
    """(x, y, z, u) with phi(x, y, z, u) = zeta.

    ``variant`` > 0 twists the three auxiliary transporters by stabilizer
    elements, giving a different point of the same fiber.
    """
    g, s, t = zeta.g, list(zeta.s), list(zeta.t)
    if not is_in_Z(frame, g, s, t):
        raise DomainError("point is not on Z")
    if check:
        _require_kernel(frame, g)
    f = frame.form
    a, b = frame.a, frame.b
    rho = witt_extend_special(f, [a, b], [a, t], "spinor")
    eta = witt_extend_special(f, [a, b], [s, t], "spinor")
    sigma = witt_extend_special(f, [a, b], [s, g(b)], "spinor")
    if variant:
        rho = rho @ _stabilizer_element(frame, variant)
        eta = eta @ _stabilizer_element(frame, variant + 1)
        sigma = sigma @ _stabilizer_element(frame, variant + 2)
    x = rho
    y = rho.inverse() @ eta
    z = eta.inverse() @ sigma
    u = sigma.inverse() @ g
    return BorovoiCertificate(frame, g, x, y, z, u, tuple(s), tuple(t))


def _fixes_ab(frame, h) -> bool:
    return h.fixes(frame.a) and h.fixes(frame.b)


def h_action(frame: StandardFrame, h1, h2, h3, cert: BorovoiCertificate) -> BorovoiCertificate:
    """(x h1^-1, h1 y h2^-1, h2 z h3^-1, h3 u)."""
    for h in (h1, h2, h3):
        if not _fixes_ab(frame, h):
            raise DomainError("acting element does not fix a and b")
    return BorovoiCertificate(
        frame,
        cert.g,
        cert.x @ h1.inverse(),
        h1 @ cert.y @ h2.inverse(),
        h2 @ cert.z @ h3.inverse(),
        h3 @ cert.u,
        cert.s,
        cert.t,
    )


def difference_triple(c1: BorovoiCertificate, c2: BorovoiCertificate):
    """(h1, h2, h3) carrying c2 to c1 under h_action."""
    h1 = c2.x.inverse() @ c1.x
    h2 = (c2.x @ c2.y).inverse() @ (c1.x @ c1.y)
    h3 = (c2.x @ c2.y @ c2.z).inverse() @ (c1.x @ c1.y @ c1.z)
    return h1, h2, h3


def decompose(frame: StandardFrame, g) -> BorovoiCertificate:
    """Decompose g in O'(f) as x y z u."""
    if not isinstance(g, OrthogonalMapQ):
        g = OrthogonalMapQ(frame.form, g)
    _require_kernel(frame, g)
    return phi_fiber_point(frame, psi_fiber_point(frame, g, False), check=False)


# ------------------------------------------------------------ generators


def _random_vector(rng: random.Random, n: int, frame) -> list[Fraction]:
    while True:
        c = [Fraction(rng.randint(-2, 2)) for _ in range(n)]
        if frame.f(c) != 0:
            return c


def random_spinor_kernel_element(frame: StandardFrame, seed: int, word_length: int) -> OrthogonalMapQ:
    """Product of ``word_length`` random blocks tau_c tau_d hr(f(c) f(d)),
    each of trivial spinor norm.  Deterministic in ``seed``."""
    if word_length < 0:
        raise DomainError("word length must be >= 0")
    rng = random.Random(seed)
    f = frame.form
    g = OrthogonalMapQ.identity(f)
    for _ in range(word_length):
        c = _random_vector(rng, frame.n, frame)
        d = _random_vector(rng, frame.n, frame)
        g = g @ reflection(f, c) @ reflection(f, d) @ hyperbolic_rotation(f, frame.f(c) * frame.f(d))
    return g


# ------------------------------------------------------------ local fiber


@dataclass(frozen=True)
class LocalQuadruple:
    lattice: UnimodularLattice
    precision: int
    x: OrthogonalMapZp
    y: OrthogonalMapZp
    z: OrthogonalMapZp
    u: OrthogonalMapZp

    @property
    def factors(self):
        return self.x, self.y, self.z, self.u


LOCAL_GUARD = 2


def reduce_zpoint(zeta: ZPoint, p: int, N: int):
    """(g, s, t) modulo p^N; p must not divide any denominator."""
    m = p**N
    for e in [e for r in zeta.g.matrix for e in r] + list(zeta.s) + list(zeta.t):
        if e.denominator % p == 0:
            raise DomainError(f"point is not {p}-integral")
    G = PadicMatrix.from_rows(zeta.g.matrix, p, N)
    return G, [rational_mod(x, m) for x in zeta.s], [rational_mod(x, m) for x in zeta.t]


def phi_fiber_local(frame: StandardFrame, g: PadicMatrix, s, t, p: int, N: int, S=()) -> LocalQuadruple:
    """Local version of phi_fiber_point over Z_p, certified modulo
    p^(N - 2)."""
    from .local_global import bad_places

    if p in S or p in bad_places(frame.form):
        raise DomainError(f"p={p} lies in S or among the bad places")
    if N - LOCAL_GUARD < 1:
        raise DomainError(f"local precision needs N > {LOCAL_GUARD}")
    L = UnimodularLattice.from_form(frame.form, p)
    n = frame.n
    m = p**N
    a = tuple(int(i == n - 1) for i in range(n))
    b = tuple(int(i == n - 2) for i in range(n))
    s = tuple(x % m for x in s)
    t = tuple(x % m for x in t)
    W = working_precision(N, p, n)
    g = g.reduce(N) if g.N >= N else g
    gb = tuple(g @ list(b))

    def special(targets):
        prob = TransporterProblem(L, (a, b), targets, N)
        X, _ = _witt_lift_raw(prob, N, None)
        X = _fix_det(L, X, prob.sources)
        return fix_spinor_zp(L, X)

    rho = special((a, t))
    eta = special((s, t))
    sigma = special((s, gb))
    G = g.lift(W)
    x = rho
    y = rho.inverse() @ eta
    z = eta.inverse() @ sigma
    u = sigma.inverse() @ G
    Np = N - LOCAL_GUARD
    maps = [OrthogonalMapZp(L, M.reduce(Np) if M.N >= Np else M, Np) for M in (x, y, z, u)]
    return LocalQuadruple(L, Np, *maps)


def verify_local_quadruple(frame: StandardFrame, q: LocalQuadruple, g: PadicMatrix, s, t) -> list[str]:
    """Failed checks (empty when all congruences hold modulo p^N')."""
    L, Np = q.lattice, q.precision
    p = L.prime
    m = p**Np
    n = frame.n
    a = [int(i == n - 1) for i in range(n)]
    b = [int(i == n - 2) for i in range(n)]
    eqv = lambda u, v: all((x - y) % m == 0 for x, y in zip(u, v))  # noqa: E731
    X = [M.matrix for M in q.factors]
    fails = []
    from .local_witt import orthogonality_holds

    for name, M in zip("xyzu", X):
        if not orthogonality_holds(L, M, Np):
            fails.append(f"{name} not orthogonal")
        if (M.det() - 1) % m:
            fails.append(f"{name} det != 1")
        elif spinor_norm_zp(L, M) != 1:
            fails.append(f"{name} spinor norm nontrivial")
    if not eqv(X[0] @ a, a):
        fails.append("x(a) != a")
    if not eqv(X[1] @ b, b):
        fails.append("y(b) != b")
    if not eqv(X[2] @ a, a):
        fails.append("z(a) != a")
    if not eqv(X[3] @ b, b):
        fails.append("u(b) != b")
    xy = X[0] @ X[1]
    if not eqv(xy @ a, s):
        fails.append("xy(a) != s")
    if not eqv(xy @ b, t):
        fails.append("xy(b) != t")
    prod = xy @ X[2] @ X[3]
    if not (prod - g.reduce(Np)).is_zero():
        fails.append("xyzu != g")
    return fails
