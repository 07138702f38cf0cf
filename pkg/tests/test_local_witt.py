import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from isokit.arith import DomainError, rational_mod
from isokit.forms import QuadraticForm
from isokit.linalg import PadicMatrix, rank_mod_p
from isokit.local_witt import (
    NotAdmissible,
    PrecisionError,
    TransporterProblem,
    UnimodularLattice,
    improve_orthogonality,
    level,
    lift_to_orthogonal,
    orbit_test,
    orthogonality_holds,
    orthogonality_level,
    refine_transporter,
    skew_image_dim,
    skew_solve,
    skew_space_dim,
    spinor_norm_zp,
    transport_level,
    witt_lift,
    witt_lift_special,
)

F5 = QuadraticForm.standard([1, 1, 1])


def e(i, n=5):
    return tuple(int(k == i - 1) for k in range(n))


def lat(p, f=F5):
    return UnimodularLattice.from_form(f, p)


def is_id(X):
    return X == PadicMatrix.identity(X.shape[0], X.p, X.N)


def congruent(X, Y, k):
    return (X.reduce(k) - Y.reduce(k)).is_zero()


def test_lattice_rejects_bad_primes():
    with pytest.raises(DomainError):
        lat(2)
    with pytest.raises(NotAdmissible):
        lat(3, QuadraticForm.standard([3, 1, 1]))


def test_improve_identity_and_orthogonal():
    L = lat(5)
    F = L.F(8)
    E = PadicMatrix.identity(5, 5, 8)
    assert improve_orthogonality(F, E, 3) == E
    with pytest.raises(DomainError):
        improve_orthogonality(F, E, 0)


def _perturbed(L, p, W, seed):
    # E + p * (random non-skew strictly upper triangular): orthogonal mod p only
    rng = random.Random(seed)
    n = L.dim
    rows = [[int(i == j) + (p * rng.randrange(p) if j > i else 0) for j in range(n)] for i in range(n)]
    return PadicMatrix(p, W, tuple(map(tuple, rows)))


def test_improve_from_level_one():
    p, W = 3, 6
    L = lat(p)
    F = L.F(W)
    for seed in range(10):
        X = _perturbed(L, p, W, seed)
        lv = orthogonality_level(F, X)
        if lv != 1:
            continue
        Y = improve_orthogonality(F, X, 1)
        assert orthogonality_level(F, Y) >= 2
        assert congruent(X, Y, 1)


def test_lift_to_orthogonal_precision_20():
    p = 3
    L = lat(p)
    X = _perturbed(L, p, 1, 7).lift(20)
    Y = lift_to_orthogonal(L, X, 1, 20)
    assert orthogonality_holds(L, Y, 20)
    assert congruent(X, Y, 1)
    assert Y == lift_to_orthogonal(L, X, 1, 20)
    E = PadicMatrix.identity(5, p, 20)
    assert lift_to_orthogonal(L, E, 1, 20) == E


def test_skew_solve_zero_and_post():
    L = lat(7)
    G = [[rational_mod(x, 7) for x in r] for r in L.gram]
    xs = [list(e(3)), list(e(1))]
    Y = skew_solve(G, xs, [[0] * 5, [0] * 5], 7)
    assert all(all(v % 7 == 0 for v in r) for r in Y)
    # a target system satisfying the compatibility condition
    ys = [[0, 0, 0, 1, 0], [0, 0, 0, 0, 0]]
    Y = PadicMatrix(7, 1, tuple(map(tuple, skew_solve(G, xs, ys, 7))))
    F = L.F(1)
    assert (Y.T @ F + F @ Y).is_zero()
    for x, y in zip(xs, ys):
        assert [v % 7 for v in Y @ x] == [v % 7 for v in y]


@given(st.integers(2, 6), st.integers(0, 10**6))
def test_skew_dimensions(n, seed):
    rng = random.Random(seed)
    p = rng.choice([3, 5, 7])
    G = [[0] * n for _ in range(n)]
    for i in range(n):
        G[i][i] = rng.randrange(1, p)
    assert skew_space_dim(G, p) == n * (n - 1) // 2
    m = rng.randint(1, n)
    while True:
        xs = [[rng.randrange(p) for _ in range(n)] for _ in range(m)]
        if rank_mod_p(xs, p) == m:
            break
    assert skew_image_dim(G, xs, p) == m * n - m * (m + 1) // 2


def test_refine_single_vector_p5():
    p, W = 5, 6
    L = lat(p)
    # X_s = E moves e3 to e3 + 5 e1 modulo 5 only
    b = (5, 0, 1, 0, 0)
    prob = TransporterProblem(L, (e(3),), (b,), W)
    E = PadicMatrix.identity(5, p, W)
    assert transport_level(E, prob) == 1
    X = refine_transporter(L, E, prob, 1)
    assert congruent(X, E, 1)
    assert orthogonality_level(L.F(W), X) >= 2
    assert transport_level(X, prob) >= 2


def test_refine_zero_defect():
    p, W = 5, 4
    L = lat(p)
    prob = TransporterProblem(L, (e(3),), (e(3),), W)
    E = PadicMatrix.identity(5, p, W)
    assert refine_transporter(L, E, prob, 1) == E


def test_witt_lift_examples():
    L = lat(3)
    prob = TransporterProblem(L, (e(3),), (e(3),), 10)
    assert is_id(witt_lift(prob).matrix)
    prob = TransporterProblem(L, (e(3),), (e(4),), 10)
    X = witt_lift(prob)
    assert [x % 3**10 for x in X(e(3))] == list(e(4))
    assert orthogonality_holds(L, X.matrix, 10)
    L7 = lat(7)
    prob = TransporterProblem(L7, (e(5), e(3)), (e(4), e(3)), 12)
    X = witt_lift(prob)
    assert list(X(e(5))) == list(e(4)) and list(X(e(3))) == list(e(3))


def test_witt_lift_trace_and_coherence():
    L = lat(5)
    prob20 = TransporterProblem(L, (e(3),), ((1, 1, 0, 0, 0),), 20)
    trace = []
    X20 = witt_lift(prob20, trace=trace)
    for (s, Xs), (t, Xt) in zip(trace, trace[1:]):
        assert t > s and congruent(Xs, Xt, s)
    prob10 = TransporterProblem(L, (e(3),), ((1, 1, 0, 0, 0),), 10)
    assert witt_lift(prob10).matrix == X20.matrix.reduce(10)


def test_witt_lift_rejects_bad_problems():
    L = lat(5)
    with pytest.raises(NotAdmissible, match="gram mismatch"):
        TransporterProblem(L, (e(3),), (e(1),), 5)
    with pytest.raises(NotAdmissible):
        TransporterProblem(L, (e(3), e(3)), (e(4), e(4)), 5)
    prob = TransporterProblem(L, (e(3),), (e(4),), 5)
    with pytest.raises(PrecisionError):
        witt_lift(prob, 6)


def test_witt_lift_special():
    L = lat(5)
    prob = TransporterProblem(L, (e(3),), (e(4),), 8)
    X = witt_lift(prob)
    assert X.det in (1, -1)
    Y = witt_lift_special(prob)
    assert Y.det == 1
    assert list(Y(e(3))) == list(e(4))
    prob = TransporterProblem(L, (e(3),), (e(3),), 8)
    assert is_id(witt_lift_special(prob).matrix)
    prob = TransporterProblem(L, (e(3), e(4), e(5)), (e(3), e(4), e(5)), 4)
    with pytest.raises(NotAdmissible, match="2m\\+1"):
        witt_lift_special(prob)


def test_witt_lift_degenerate_span():
    # e1 is isotropic: span{e1} is degenerate mod p but the reduction is independent
    L = lat(7)
    prob = TransporterProblem(L, (e(1),), ((1, -49, 7, 0, 0),), 9)
    X = witt_lift(prob)
    assert transport_level(X.matrix.lift(X.precision), prob) >= 9


def test_spinor_norm_zp():
    L = lat(5)
    E = PadicMatrix.identity(5, 5, 6)
    assert spinor_norm_zp(L, E) == 1


@pytest.mark.parametrize("v,l", [((9, 0, 0, 0, 0), 2), ((1, 3, 0, 0, 0), 0), ((3, 0, 9, 0, 0), 1)])
def test_level(v, l):
    assert level(v, 3, 5) == l


def test_level_zero_vector():
    with pytest.raises(PrecisionError):
        level((0, 0, 0), 3, 4)


def test_orbit_examples():
    L = lat(3)
    r = orbit_test(L, e(1), (3, 0, 0, 0, 0), 6)
    assert not r.exists and r.levels == (0, 1)
    r = orbit_test(L, e(3), e(4), 6)
    assert r.exists and list(r.transporter(e(3))) == list(e(4))
    assert r.transport_level == 6
    r = orbit_test(L, e(3), e(3), 6)
    assert r.exists and is_id(r.transporter.matrix)
    with pytest.raises(DomainError):
        orbit_test(L, e(1), e(3), 6)


def test_orbit_divides_out_level():
    L = lat(5)
    a = (0, 0, 5, 0, 0)
    b = (0, 0, 0, 5, 0)
    r = orbit_test(L, a, b, 8)
    assert r.exists and r.transport_level == 7
    Xa = r.transporter(a)
    assert all((u - v) % 5**7 == 0 for u, v in zip(Xa, b))
