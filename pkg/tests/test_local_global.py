import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import hilbert_oracle, hilbert_real, ternary_zero

from isokit.arith import DomainError
from isokit.forms import QuadraticForm, bilinear, evaluate
from isokit.local_global import (
    REAL,
    HypothesisFailure,
    bad_places,
    hasse_invariant,
    hilbert_symbol,
    is_isotropic_global,
    is_isotropic_local,
    local_invariants,
    parse_place,
    quadric_noncompact_places,
    quadric_zp_point,
    restriction_to_complement,
    strong_approx_quadric,
    witt_index_local,
)

F5 = QuadraticForm.standard([1, 1, 1])
diag = QuadraticForm.diagonal
PLACES = [REAL, 2, 3, 5, 7]
nz = st.integers(-60, 60).filter(bool)


def test_parse_place():
    assert parse_place("real") == REAL and parse_place("7") == 7
    with pytest.raises(DomainError):
        parse_place("6")


def test_hilbert_examples():
    for v in PLACES:
        assert hilbert_symbol(1, 7, v) == 1
    assert hilbert_symbol(-1, -1, REAL) == -1
    assert hilbert_symbol(-1, -1, 2) == -1
    assert hilbert_symbol(Fraction(-1, 4), -9, 2) == -1
    with pytest.raises(DomainError):
        hilbert_symbol(0, 3, 5)


@given(nz, nz, nz, st.sampled_from(PLACES))
def test_hilbert_symmetric_bilinear(x, y, z, v):
    assert hilbert_symbol(x, y, v) == hilbert_symbol(y, x, v)
    assert hilbert_symbol(x * z, y, v) == hilbert_symbol(x, y, v) * hilbert_symbol(z, y, v)
    assert hilbert_symbol(x * z * z, y, v) == hilbert_symbol(x, y, v)


@given(nz, nz)
def test_hilbert_matches_oracle(x, y):
    assert hilbert_symbol(x, y, REAL) == hilbert_real(x, y)
    for p in (2, 3, 5, 7):
        assert hilbert_symbol(x, y, p) == hilbert_oracle(x, y, p)


def test_hasse_examples():
    for v in PLACES:
        assert hasse_invariant([1, 1, 1], v) == 1
    assert hasse_invariant([-1, -1], REAL) == -1
    with pytest.raises(DomainError):
        hasse_invariant([1, 0], 3)


@given(st.lists(nz, min_size=2, max_size=5), st.lists(st.integers(1, 9), min_size=5, max_size=5),
       st.sampled_from(PLACES))
def test_hasse_square_scaling(d, sq, v):
    scaled = [x * s * s for x, s in zip(d, sq)]
    assert hasse_invariant(d, v) == hasse_invariant(scaled, v)


def test_isotropy_examples():
    for p in (2, 3, 5, 7, 11):
        assert is_isotropic_local(diag([1, 2, 3, 5, 7]), p)
    assert not is_isotropic_local(diag([1, 1, 1, 1]), REAL)
    assert witt_index_local(diag([1, 1, 1, 1]), REAL) == 0
    for v in PLACES:
        assert witt_index_local(diag([1, -1]), v) == 1
    assert witt_index_local(F5, REAL) == 1
    inv = local_invariants(F5, 3)
    assert inv.isotropic and 1 <= inv.witt_index <= 2


def test_isotropic_global_examples():
    assert is_isotropic_global(F5) == (True, None)
    assert is_isotropic_global(diag([1, 1, 1])) == (False, REAL)
    ok, place = is_isotropic_global(diag([1, 1, -3]))
    assert not ok and place in (2, 3)
    assert ternary_zero(1, 1, -3, 60) is None


def _curated():
    rng = random.Random(11)
    out = [(1, 1, -2), (1, 1, -3), (1, -1, 5), (2, 3, -5), (1, 2, -7), (3, 5, -7), (1, 1, 1)]
    while len(out) < 30:
        t = tuple(rng.choice([-1, 1]) * rng.randint(1, 12) for _ in range(3))
        out.append(t)
    return out


@pytest.mark.parametrize("abc", _curated())
def test_isotropic_global_corpus(abc):
    a, b, c = abc
    ok, place = is_isotropic_global(diag(list(abc)))
    found = ternary_zero(a, b, c, 100)
    if found is not None:
        assert ok
    if not ok:
        assert found is None
        if place == REAL:
            assert len({x > 0 for x in abc}) == 1
        else:
            # c (a x^2 + b y^2 + c z^2) = 0 iff (cz)^2 = -ac x^2 - bc y^2
            assert hilbert_oracle(-a * c, -b * c, place) == -1


@pytest.mark.parametrize("alphas,S,expected", [
    ([1, 1, 1], (), [2]),
    ([6, 1, 1], (), [2, 3]),
    ([Fraction(1, 5), 1, 1], (5,), [2]),
])
def test_bad_places(alphas, S, expected):
    assert bad_places(QuadraticForm.standard(alphas), S) == expected


def _check_point(f, s, t, p, N):
    m = p**N
    n = f.dim
    a = [int(i == n - 1) for i in range(n)]
    for v in (a, s):
        x = bilinear(f, t, v)
        assert x.numerator * pow(x.denominator, -1, m) % m == 0
    d = evaluate(f, t) - f.alphas[-2]
    assert d.numerator * pow(d.denominator, -1, m) % m == 0


@pytest.mark.parametrize("s,p,N", [
    ([0, 0, 1, 0, 0], 5, 6),
    ([0, 0, 1, 5, 0], 5, 8),
    ([0, 0, 5, 0, 0], 5, 8),
    ([1, 2, 3, 4, 5], 7, 10),
    ([3, 0, 0, 0, 0], 3, 7),
])
def test_quadric_zp_point(s, p, N):
    t = quadric_zp_point(F5, s, p, N)
    _check_point(F5, s, t, p, N)


def test_quadric_zp_point_errors():
    with pytest.raises(DomainError):
        quadric_zp_point(F5, [0, 0, 1, 0, 0], 2, 4)
    with pytest.raises(DomainError):
        quadric_zp_point(QuadraticForm.standard([3, 1, 1]), [0, 0, 1, 0, 0], 3, 4)
    with pytest.raises(DomainError):
        quadric_zp_point(F5, [0, 0, 1, 0, 0], 5, 4, S=(5,))


def test_noncompact_places():
    assert quadric_noncompact_places(diag([1, 1, -2]), 1, [REAL]) == [REAL]
    assert quadric_noncompact_places(diag([1, 1, 1]), 1, [REAL]) == []
    hyp = QuadraticForm.standard([1])
    for a in (1, -3, Fraction(2, 7)):
        assert quadric_noncompact_places(hyp, a, [7]) == [7]


def test_sap_counterexample():
    q = diag([1, 1, -2])
    v = strong_approx_quadric(q, 1, [REAL], [1, 0, 0])
    assert not v.holds


def test_sap_with_seven_matches_binary_oracle():
    q = diag([1, 1, -2])
    v = strong_approx_quadric(q, 1, [REAL, 7], [1, 0, 0])
    g = restriction_to_complement(q, [1, 0, 0])
    det = g[0][0] * g[1][1] - g[0][1] ** 2
    # binary g is anisotropic over Q_7 iff -det is not a square there
    k = -det.numerator * det.denominator
    e = 0
    while k % 7 == 0:
        k //= 7
        e += 1
    square = e % 2 == 0 and pow(k % 7, 3, 7) == 1
    anisotropic_at_7 = not square
    assert v.holds == anisotropic_at_7
    assert v.holds == (not is_isotropic_local(g, 7))


def test_sap_m4_and_hypotheses():
    q = diag([1, 1, 1, -1])
    assert strong_approx_quadric(q, 1, [REAL], [1, 0, 0, 0]).holds
    with pytest.raises(HypothesisFailure, match="noncompact"):
        strong_approx_quadric(diag([1, 1, 1]), 1, [REAL], [1, 0, 0])
    with pytest.raises(HypothesisFailure, match="witness"):
        strong_approx_quadric(q, 1, [REAL], [1, 1, 0, 0])
    with pytest.raises(HypothesisFailure, match="m >= 3"):
        strong_approx_quadric(diag([1, -1]), 1, [REAL], [1, 0])


@given(st.integers(1, 12))
def test_sap_square_scaling(k):
    q = diag([1, 1, -2])
    q2 = diag([k * k, k * k, -2 * k * k])
    for S in ([REAL], [REAL, 7], [REAL, 3]):
        v1 = strong_approx_quadric(q, 1, S, [1, 0, 0])
        v2 = strong_approx_quadric(q2, k * k, S, [1, 0, 0])
        assert v1.holds == v2.holds
