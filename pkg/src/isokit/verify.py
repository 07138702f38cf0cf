"""Certificate verification.

Nothing here calls a construction routine: every claim is re-checked from
the stored data with plain matrix arithmetic, a fresh Cartan-Dieudonne
factorization for spinor norms, and (for decision certificates) a
recomputation of the decision.
"""

from __future__ import annotations

import math

from fractions import Fraction

from . import __version__
from .arith import DomainError, is_prime, is_rational_square, legendre, rational_mod
from .certificates import (
    INPUT_KEYS,
    CertificateFormatError,
    input_digest,
    parse_form,
    parse_mat,
    parse_residue_mat,
    parse_vec,
)
from .forms import QuadraticForm, cartan_dieudonne, qval, witt_transporter, word_product
from .linalg import PadicMatrix, det, mat_mul, mat_vec, transpose


class Failed(Exception):
    """A certificate claim that does not recompute."""


def _need(cond: bool, what: str):
    if not cond:
        raise Failed(what)


def _key(cert, k):
    if k not in cert:
        raise CertificateFormatError(f"missing field {k!r}")
    return cert[k]


def _int(x, what) -> int:
    if isinstance(x, bool) or not isinstance(x, (int, str)):
        raise CertificateFormatError(f"{what} must be an integer")
    try:
        return int(x)
    except ValueError:
        raise CertificateFormatError(f"{what} must be an integer") from None


# ------------------------------------------------------------ over Q


def _check_orth(G, M, name):
    n = len(G)
    _need(len(M) == n and all(len(r) == n for r in M), f"{name}: wrong size")
    _need(mat_mul(transpose(M), mat_mul(G, M)) == G, f"{name}: not orthogonal")


def _check_map(f: QuadraticForm, d, name, require_kernel=False):
    """Verify an orthogonal-map record; returns its matrix."""
    M = parse_mat(_key(d, "matrix"))
    G = f.matrix()
    _check_orth(G, M, name)
    dt = det(M)
    _need(d.get("det") == ("+1" if dt == 1 else "-1"), f"{name}: det claim wrong")
    word = d.get("reflection_word")
    if word is not None:
        if not isinstance(word, list):
            raise CertificateFormatError(f"{name}: reflection word must be a list")
        W = [parse_vec(c) for c in word]
        _need(all(qval(G, c) != 0 for c in W), f"{name}: isotropic vector in reflection word")
        _need(len(W) <= f.dim, f"{name}: reflection word longer than dim")
        _need(word_product(G, W, Fraction(1)) == M, f"{name}: reflection word does not multiply to matrix")
    else:
        W = [list(c) for c in cartan_dieudonne(f, M).vectors]
    claim = d.get("spinor_norm")
    if dt == 1:
        lam = Fraction(1)
        for c in W:
            lam *= qval(G, c)
        _need(claim is not None, f"{name}: spinor norm missing")
        _need(_int(claim, "spinor_norm") != 0 and is_rational_square(lam * _int(claim, "spinor_norm")),
              f"{name}: spinor norm claim wrong")
    else:
        _need(claim is None, f"{name}: spinor norm claimed for det -1")
    if require_kernel:
        _need(dt == 1, f"{name}: det != 1")
        _need(_int(claim, "spinor_norm") == 1, f"{name}: spinor norm nontrivial")
    return M


def verify_witt(cert):
    f = parse_form(_key(cert, "form"))
    A = [parse_vec(v) for v in _key(cert, "sources")]
    B = [parse_vec(v) for v in _key(cert, "targets")]
    _need(len(A) == len(B), "sources and targets differ in length")
    M = _check_map(f, _key(cert, "map"), "map")
    for i, (a, b) in enumerate(zip(A, B), 1):
        _need(mat_vec(M, a) == b, f"sigma(a_{i}) != b_{i}")


def _unit_e(n, i):
    return [Fraction(int(k == i)) for k in range(n)]


def verify_borovoi(cert):
    f = parse_form(_key(cert, "form"))
    _need(f.is_standard and f.dim >= 5, "form not in standard shape of dimension >= 5")
    n = f.dim
    G = f.matrix()
    a, b = _unit_e(n, n - 1), _unit_e(n, n - 2)
    g = _check_map(f, _key(cert, "g"), "g", require_kernel=True)
    X = {k: _check_map(f, _key(cert, k), k, require_kernel=True) for k in "xyzu"}
    s, t = parse_vec(_key(cert, "s")), parse_vec(_key(cert, "t"))
    _need(mat_vec(X["x"], a) == a, "x(a) != a")
    _need(mat_vec(X["y"], b) == b, "y(b) != b")
    _need(mat_vec(X["z"], a) == a, "z(a) != a")
    _need(mat_vec(X["u"], b) == b, "u(b) != b")
    xy = mat_mul(X["x"], X["y"])
    _need(mat_vec(xy, a) == s, "xy(a) != s")
    _need(mat_vec(xy, b) == t, "xy(b) != t")
    _need(mat_mul(mat_mul(xy, X["z"]), X["u"]) == g, "xyzu != g")
    bil = lambda x, y: sum(x[i] * G[i][j] * y[j] for i in range(n) for j in range(n))  # noqa: E731
    _need(bil(s, s) == bil(a, a), "s not on X")
    _need(bil(s, mat_vec(g, b)) == 0, "(g, s) not on Y")
    _need(bil(t, a) == 0 and bil(t, t) == bil(b, b) and bil(s, t) == 0, "(g, s, t) not on Z")
    lcm = 1
    for M in X.values():
        for r in M:
            for e in r:
                lcm = math.lcm(lcm, e.denominator)
    _need(_int(_key(cert, "denominator_lcm"), "denominator_lcm") == lcm, "denominator_lcm wrong")
    S = cert.get("S")
    if S is not None:
        rest = lcm
        for p in S:
            p = _int(p, "S entry")
            while rest % p == 0:
                rest //= p
        _need(rest == 1, "denominators not supported on S")
    if cert.get("local") is not None:
        _verify_local(f, cert["local"], g, s, t)


def _verify_local(f, loc, g, s, t):
    p, N, Np = _int(_key(loc, "p"), "p"), _int(_key(loc, "N"), "N"), _int(_key(loc, "certified"), "certified")
    _need(is_prime(p) and p != 2, "local prime invalid")
    # the construction keeps two guard digits
    _need(Np == N - 2 and Np >= 1, "certified precision is not N - 2")
    m = p**Np
    n = f.dim
    for e in [e for r in g for e in r] + s + t + [x for r in f.gram for x in r]:
        _need(e.denominator % p != 0, "global data not p-integral")
    F = PadicMatrix.from_rows(f.gram, p, Np)
    Gp = PadicMatrix.from_rows(g, p, Np)
    sp = [rational_mod(x, m) for x in s]
    tp = [rational_mod(x, m) for x in t]
    a = [int(i == n - 1) for i in range(n)]
    b = [int(i == n - 2) for i in range(n)]
    X = {k: parse_residue_mat(_key(loc, k), p, Np) for k in "xyzu"}
    eq = lambda u, v: all((x - y) % m == 0 for x, y in zip(u, v))  # noqa: E731
    for k, M in X.items():
        _need((M.T @ F @ M - F).is_zero(), f"local {k}: not orthogonal mod p^{Np}")
        _need((M.det() - 1) % m == 0, f"local {k}: det != 1")
        _need(_local_theta(F.reduce(1), M.reduce(1)) == 1, f"local {k}: spinor norm nontrivial")
    _need(eq(X["x"] @ a, a) and eq(X["z"] @ a, a), "local x or z does not fix a")
    _need(eq(X["y"] @ b, b) and eq(X["u"] @ b, b), "local y or u does not fix b")
    xy = X["x"] @ X["y"]
    _need(eq(xy @ a, sp) and eq(xy @ b, tp), "local xy(a), xy(b) mismatch")
    _need(((xy @ X["z"] @ X["u"]) - Gp).is_zero(), "local xyzu != g")


def _local_theta(F1: PadicMatrix, X1: PadicMatrix) -> int:
    from .arith import Residue

    p = F1.p
    n = len(F1.rows)
    G = [[Residue(x, p) for x in r] for r in F1.rows]
    E = [[Residue(int(i == j), p) for j in range(n)] for i in range(n)]
    imgs = [[Residue(x, p) for x in col] for col in zip(*X1.rows)]
    M, word = witt_transporter(G, E, imgs)
    _need([[int(x) for x in r] for r in M] == [list(r) for r in X1.rows], "local reduction factorization failed")
    prod = 1
    for c in word:
        q = sum(c[i] * G[i][j] * c[j] for i in range(n) for j in range(n))
        prod = prod * int(q) % p
    return legendre(prod, p)


# ------------------------------------------------------------ over Z_p


def _lattice_data(cert):
    p, N = _int(_key(cert, "p"), "p"), _int(_key(cert, "N"), "N")
    _need(is_prime(p) and p != 2, "p must be an odd prime")
    _need(N >= 1, "precision must be >= 1")
    gram = parse_mat(_key(cert, "gram"))
    _need(all(x.denominator % p for r in gram for x in r), "gram not p-integral")
    F = PadicMatrix.from_rows(gram, p, N)
    _need(F.reduce(1).det() % p != 0, "gram not unimodular")
    return p, N, F


def _res_vec(v, p, N):
    m = p**N
    out = [_int(x, "residue") for x in v]
    if any(not 0 <= x < m for x in out):
        raise CertificateFormatError("residue out of range")
    return out


def _check_transporter(F, X, pairs, N, tl, checks):
    p = F.p
    m = p**N
    _need(_int(checks.get("orthogonality_level"), "orthogonality_level") == N, "orthogonality level claim wrong")
    _need(_int(checks.get("transport_level"), "transport_level") == tl, "transport level claim wrong")
    _need((X.T @ F @ X - F).is_zero(), f"X not orthogonal mod p^{N}")
    d = X.det()
    sign = "+1" if (d - 1) % m == 0 else "-1"
    _need((d - 1) % m == 0 or (d + 1) % m == 0, "det not +-1")
    _need(checks.get("det") == sign, "det claim wrong")
    mt = p**tl
    for i, (a, b) in enumerate(pairs, 1):
        _need(all((x - y) % mt == 0 for x, y in zip(X @ a, b)), f"X a_{i} != b_{i} mod p^{tl}")
    return sign


def verify_lift(cert):
    p, N, F = _lattice_data(cert)
    A = [_res_vec(v, p, N) for v in _key(cert, "sources")]
    B = [_res_vec(v, p, N) for v in _key(cert, "targets")]
    _need(len(A) == len(B), "sources and targets differ in length")
    X = parse_residue_mat(_key(cert, "X"), p, N)
    sign = _check_transporter(F, X, list(zip(A, B)), N, N, _key(cert, "checks"))
    if _key(cert, "special") is True:
        _need(sign == "+1", "special lift has det -1")
    else:
        _need(cert["special"] is False, "special must be a boolean")


def _level(v, p, N):
    best = N
    for x in v:
        if x:
            k = 0
            while x % p == 0:
                x //= p
                k += 1
            best = min(best, k)
    return best


def verify_orbit(cert):
    p, N, F = _lattice_data(cert)
    a = _res_vec(_key(cert, "a"), p, N)
    b = _res_vec(_key(cert, "b"), p, N)
    la, lb = _level(a, p, N), _level(b, p, N)
    _need(la < N and lb < N, "vector vanishes mod p^N")
    _need(_key(cert, "levels") == [la, lb], "level claim wrong")
    exists = _key(cert, "exists")
    if exists is False:
        _need(la != lb, "no-transporter claim with equal levels")
        return
    _need(exists is True, "exists must be a boolean")
    _need(la == lb, "transporter claimed for different levels")
    X = parse_residue_mat(_key(cert, "X"), p, N)
    _check_transporter(F, X, [(a, b)], N, N - la, _key(cert, "checks"))


# ------------------------------------------------------------ decisions


def verify_sap(cert):
    from .local_global import HypothesisFailure, parse_place, strong_approx_quadric

    q = QuadraticForm.from_gram(parse_mat(_key(cert, "gram")))
    places = [parse_place(v) for v in _key(cert, "places")]
    x = parse_vec(_key(cert, "witness"))
    try:
        v = strong_approx_quadric(q, parse_vec([_key(cert, "value")])[0], places, x)
    except HypothesisFailure as e:
        raise Failed(f"hypothesis fails: {e}") from None
    _need(_key(cert, "verdict") == v.to_json(), "verdict does not recompute")


def verify_invariants(cert):
    from .local_global import local_invariants, parse_place

    f = parse_form(_key(cert, "form"))
    places = [parse_place(v) for v in _key(cert, "places")]
    invs = [local_invariants(f, v) for v in places]
    _need(_key(cert, "invariants") == [i.to_json() for i in invs], "invariants do not recompute")
    _need(_key(cert, "isotropic") == [i.isotropic for i in invs], "isotropy flags do not recompute")


def verify_normalize(cert):
    g = parse_mat(_key(cert, "gram"))
    new = parse_form(_key(cert, "form"))
    _need(new.is_standard, "result form not in standard shape")
    T = parse_mat(_key(cert, "T"))
    s = parse_vec([_key(cert, "scale")])[0]
    _need(s in (1, -1), "scale must be +-1")
    n = len(g)
    _need(len(T) == n and new.dim == n, "dimension mismatch")
    _need(mat_mul(transpose(T), mat_mul(new.matrix(), T)) == [[s * x for x in r] for r in g],
          "tT G_new T != s G_old")
    al = new.alphas
    _need(all(x.denominator == 1 for x in al), "coefficients not integral")
    _need(al[-1] > 0 and al[-2] > 0, "last two coefficients not positive")
    from .forms import signature

    npos, nneg = signature(new)
    _need(npos >= nneg, "n+ < n-")
    w = cert.get("witness")
    _need(isinstance(_int(_key(cert, "height_bound"), "height_bound"), int), "height bound")
    if w is not None:
        wv = parse_vec(w)
        _need(len(wv) == n and qval(g, wv) == 0 and any(wv), "witness not isotropic")


VERIFIERS = {
    "witt": verify_witt,
    "lift": verify_lift,
    "orbit": verify_orbit,
    "borovoi": verify_borovoi,
    "sap": verify_sap,
    "invariants": verify_invariants,
    "normalize": verify_normalize,
}


def verify_certificate(cert) -> tuple[int, str]:
    """(exit code, message): 0 valid, 1 a check failed, 2 malformed."""
    if not isinstance(cert, dict):
        return 2, "certificate must be a JSON object"
    kind = cert.get("kind")
    if kind not in VERIFIERS:
        return 2, f"unknown certificate kind {kind!r}"
    try:
        for k in INPUT_KEYS[kind]:
            _key(cert, k)
    except (Failed, CertificateFormatError) as e:
        return 2, f"malformed certificate: {e}"
    # from here on the file is structurally a certificate: any bad entry is a failed claim
    try:
        if cert.get("version") != __version__:
            return 1, f"version mismatch: {cert.get('version')!r}"
        if cert.get("input_digest") != input_digest(cert):
            return 1, "input digest mismatch"
        VERIFIERS[kind](cert)
    except Failed as e:
        return 1, f"check failed: {e}"
    except CertificateFormatError as e:
        return 1, f"check failed: invalid entry: {e}"
    except DomainError as e:
        return 1, f"check failed: {e}"
    except (KeyError, TypeError, ValueError, IndexError, AttributeError, ZeroDivisionError) as e:
        return 2, f"malformed certificate: {type(e).__name__}: {e}"
    return 0, "ok"
