from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from isokit.arith import DomainError, square_class
from isokit.forms import (
    GramMismatch,
    OrthogonalMapQ,
    QuadraticForm,
    bilinear,
    cartan_dieudonne,
    evaluate,
    hyperbolic_rotation,
    in_spinor_kernel,
    normalize_to_standard,
    reflection,
    represent_value,
    signature,
    spinor_norm,
    witt_extend,
    witt_extend_special,
)
from isokit.linalg import mat_mul, transpose

F5 = QuadraticForm.standard([1, 1, 1])


def e(i, n=5):
    return [int(k == i - 1) for k in range(n)]


def vec(n):
    return st.lists(st.integers(-3, 3), min_size=n, max_size=n)


def test_evaluate_examples():
    assert evaluate(F5, e(1)) == 0
    assert evaluate(F5, [1, 1, 0, 0, 0]) == 1
    assert bilinear(F5, e(1), e(2)) == Fraction(1, 2)


def test_reflection_examples():
    t = reflection(F5, e(3))
    assert t(e(3)) == [-x for x in e(3)] and t.fixes(e(4)) and t.fixes(e(5))
    c = [a - b for a, b in zip(e(5), e(4))]
    s = reflection(F5, c)
    assert s(e(5)) == e(4) and s(e(4)) == e(5)
    assert (t @ t).is_identity()
    with pytest.raises(DomainError):
        reflection(F5, e(1))


def test_cartan_dieudonne_examples():
    assert len(cartan_dieudonne(F5, OrthogonalMapQ.identity(F5))) == 0
    w = cartan_dieudonne(F5, reflection(F5, e(3)).matrix)
    assert len(w) == 1 and square_class(evaluate(F5, w.vectors[0])) == square_class(1)


@given(st.lists(vec(5), min_size=1, max_size=4))
def test_cartan_dieudonne_remultiplies(cs):
    cs = [c for c in cs if evaluate(F5, c) != 0]
    assume(cs)
    g = OrthogonalMapQ.identity(F5)
    for c in cs:
        g = g @ reflection(F5, c)
    w = cartan_dieudonne(F5, g.matrix)
    assert len(w) <= 5
    assert w.matrix() == g.rows()


def test_spinor_norm_examples():
    assert spinor_norm(F5, OrthogonalMapQ.identity(F5)).is_trivial()
    g = reflection(F5, e(3)) @ reflection(F5, e(4))
    assert spinor_norm(F5, g).is_trivial()
    assert int(spinor_norm(F5, hyperbolic_rotation(F5, 2))) == 2


def test_hyperbolic_rotation_examples():
    assert hyperbolic_rotation(F5, 1).is_identity()
    h = hyperbolic_rotation(F5, 2)
    assert h(e(1)) == [2, 0, 0, 0, 0] and h(e(2)) == [0, Fraction(1, 2), 0, 0, 0]
    h = hyperbolic_rotation(F5, -3)
    assert h.fixes(e(4)) and h.fixes(e(5))
    assert int(spinor_norm(F5, h)) == -3
    assert int(spinor_norm(F5, h, use_word=False)) == -3


small_q = st.builds(Fraction, st.integers(-10**6, 10**6).filter(bool), st.integers(1, 10**6))


@given(small_q, small_q)
def test_spinor_norm_multiplicative(x, y):
    h = hyperbolic_rotation(F5, x) @ hyperbolic_rotation(F5, y)
    assert spinor_norm(F5, h, use_word=False) == square_class(x * y)


@pytest.mark.parametrize("c,w", [(0, e(1)), (5, [5, 1, 0, 0, 0]), (Fraction(-3, 7), [Fraction(-3, 7), 1, 0, 0, 0])])
def test_represent_value(c, w):
    out = represent_value(F5, c)
    assert out == w and evaluate(F5, out) == c
    assert bilinear(F5, out, e(5)) == 0 and bilinear(F5, out, e(4)) == 0


def test_witt_extend_examples():
    assert witt_extend(F5, [e(5)], [e(5)]).is_identity()
    s = witt_extend(F5, [e(5)], [e(4)])
    assert s(e(5)) == e(4)
    assert s.rows() == reflection(F5, [a - b for a, b in zip(e(5), e(4))]).rows()
    s = witt_extend(F5, [e(5), e(4)], [e(4), e(5)])
    assert s(e(5)) == e(4) and s(e(4)) == e(5)


def test_witt_extend_gram_mismatch():
    with pytest.raises(GramMismatch, match=r"gram mismatch at \(1,2\)"):
        witt_extend(F5, [e(1), e(3)], [e(1), e(2)])


def test_witt_extend_special_examples():
    assert witt_extend_special(F5, [e(5)], [e(5)], "spinor").is_identity()
    s = witt_extend_special(F5, [e(5)], [e(4)])
    assert s.det == 1 and s(e(5)) == e(4)
    # start from a nontrivial stabilizer element of {e4, e5}: theta must be cleared
    g = reflection(F5, e(3)) @ reflection(F5, [2, 1, 0, 0, 0])
    assert not in_spinor_kernel(F5, g)
    s = witt_extend_special(F5, [e(5), e(4)], [g(e(5)), g(e(4))], "spinor")
    assert in_spinor_kernel(F5, s, use_word=False)
    assert s(e(5)) == e(5) and s(e(4)) == e(4)


@given(vec(5), vec(5))
def test_witt_extend_special_spinor(c, x):
    assume(evaluate(F5, c) != 0 and any(x[2:]))
    x = [0, 0] + x[2:]
    y = reflection(F5, c)(x)
    s = witt_extend_special(F5, [x], [y], "det")
    assert s.det == 1 and s(x) == y


def test_signature_examples():
    assert signature(F5) == (4, 1)
    assert signature(QuadraticForm.diagonal([-1, -1, -1])) == (0, 3)
    assert signature(QuadraticForm.from_gram([[0, Fraction(1, 2)], [Fraction(1, 2), 0]])) == (1, 1)


def _check_normalized(g, new, T, s):
    G = g.matrix()
    assert mat_mul(transpose(T), mat_mul(new.matrix(), T)) == [[s * x for x in r] for r in G]
    assert all(a.denominator == 1 for a in new.alphas)
    assert new.alphas[-1] > 0 and new.alphas[-2] > 0


def test_normalize_examples():
    new, T, s = normalize_to_standard(F5)
    assert new == F5 and s == 1
    g = QuadraticForm.diagonal([1, -1, 1, 1, 1])
    _check_normalized(g, *normalize_to_standard(g))
    with pytest.raises(DomainError):
        normalize_to_standard(QuadraticForm.diagonal([1, 1, 1, 1, 1]))


@settings(max_examples=25)
@given(st.lists(st.sampled_from([1, 2, 3, 5, -1, -2, -3, -7]), min_size=5, max_size=6))
def test_normalize_diagonal(coeffs):
    assume(any(c > 0 for c in coeffs) and any(c < 0 for c in coeffs))
    g = QuadraticForm.diagonal(coeffs)
    try:
        out = normalize_to_standard(g, height_bound=3)
    except DomainError as err:
        assert "witness required" in str(err)
        return
    _check_normalized(g, *out)


def test_composition_and_inverse():
    g = reflection(F5, [1, 2, 1, 0, 1]) @ hyperbolic_rotation(F5, 3)
    assert (g @ g.inverse()).is_identity()
    h = reflection(F5, e(3)) @ reflection(F5, [2, 1, 0, 0, 0])
    assert spinor_norm(F5, h @ h, use_word=False).is_trivial()
    assert int(spinor_norm(F5, h)) == 2
