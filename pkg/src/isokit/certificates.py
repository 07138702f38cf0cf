"""JSON certificates: construction side.

Every certificate is a dict with ``kind``, ``version``, the full input, the
result, and ``input_digest`` (sha256 of the canonical input fields) so that
edits to the input are detected even when the altered statement happens to
remain true.  Verification lives in :mod:`isokit.verify` and shares nothing
with this module beyond the parsers.
"""

from __future__ import annotations

import hashlib
import json
import math
from fractions import Fraction

from . import __version__
from .arith import fmt_rational, is_rational_square, parse_rational
from .forms import (
    OrthogonalMapQ,
    QuadraticForm,
    cartan_dieudonne,
    normalize_to_standard,
    spinor_norm,
    spinor_norm_value,
    witt_extend,
)
from .linalg import PadicMatrix

INPUT_KEYS = {
    "witt": ("form", "sources", "targets"),
    "lift": ("p", "N", "gram", "sources", "targets", "special"),
    "orbit": ("p", "N", "gram", "a", "b"),
    "borovoi": ("form", "g", "S"),
    "sap": ("gram", "value", "places", "witness"),
    "invariants": ("form", "places"),
    "normalize": ("gram", "witness", "height_bound"),
}


class CertificateFormatError(ValueError):
    """Unparseable or structurally invalid certificate or input file."""


# ------------------------------------------------------------ primitives


def rat(x) -> str:
    return fmt_rational(x)


def vec_json(v) -> list[str]:
    return [rat(x) for x in v]


def mat_json(M) -> list[list[str]]:
    return [[rat(x) for x in r] for r in M]


def parse_vec(v) -> list[Fraction]:
    if not isinstance(v, list):
        raise CertificateFormatError("expected a list of rationals")
    try:
        return [parse_rational(x) for x in v]
    except (TypeError, ValueError) as e:
        raise CertificateFormatError(str(e)) from None


def parse_mat(M) -> list[list[Fraction]]:
    if not isinstance(M, list) or not M:
        raise CertificateFormatError("expected a nonempty matrix")
    return [parse_vec(r) for r in M]


def residue_mat_json(X: PadicMatrix) -> list[list[str]]:
    return [[str(x) for x in r] for r in X.rows]


def parse_residue_mat(M, p: int, N: int) -> PadicMatrix:
    rows = []
    m = p**N
    try:
        for r in M:
            row = [int(x) for x in r]
            if any(not 0 <= x < m for x in row):
                raise CertificateFormatError("residue out of range [0, p^N)")
            rows.append(tuple(row))
    except (TypeError, ValueError) as e:
        raise CertificateFormatError(f"bad residue matrix: {e}") from None
    return PadicMatrix(p, N, tuple(rows))


def residue_vec_json(v) -> list[str]:
    return [str(int(x)) for x in v]


def form_json(f: QuadraticForm) -> dict:
    if f.is_standard:
        return {"n": f.dim, "alphas": vec_json(f.alphas)}
    return {"gram": mat_json(f.gram)}


def parse_form(d) -> QuadraticForm:
    if not isinstance(d, dict):
        raise CertificateFormatError("form must be an object")
    if "alphas" in d:
        alphas = parse_vec(d["alphas"])
        if "n" in d and int(d["n"]) != len(alphas) + 2:
            raise CertificateFormatError("n does not match the number of alphas")
        return QuadraticForm.standard(alphas)
    if "gram" in d:
        return QuadraticForm.from_gram(parse_mat(d["gram"]))
    raise CertificateFormatError("form needs 'alphas' or 'gram'")


def orth_json(f: QuadraticForm, M: OrthogonalMapQ, word: bool = True) -> dict:
    d = M.det
    theta = None
    if d == 1:
        lam = spinor_norm_value(f, M)
        theta = 1 if is_rational_square(lam) else int(spinor_norm(f, M))
    w = None
    if word:
        w = [vec_json(c) for c in cartan_dieudonne(f, M).vectors]
    return {"matrix": mat_json(M.matrix), "det": "+1" if d == 1 else "-1", "spinor_norm": theta,
            "reflection_word": w}


def place_json(v):
    return v


def canonical(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def dumps(cert: dict) -> str:
    return json.dumps(cert, sort_keys=True, indent=1) + "\n"


def input_digest(cert: dict) -> str:
    keys = INPUT_KEYS[cert["kind"]]
    payload = {k: cert.get(k) for k in keys}
    payload["kind"] = cert["kind"]
    return hashlib.sha256(canonical(payload).encode()).hexdigest()


def finalize(cert: dict) -> dict:
    cert["version"] = __version__
    cert["input_digest"] = input_digest(cert)
    return cert


# ------------------------------------------------------------ builders


def witt_certificate(f: QuadraticForm, A, B) -> dict:
    sigma = witt_extend(f, A, B)
    cert = {
        "kind": "witt",
        "form": form_json(f),
        "sources": [vec_json(a) for a in A],
        "targets": [vec_json(b) for b in B],
        "map": orth_json(f, sigma),
    }
    return finalize(cert)


def lift_certificate(problem, X, special: bool) -> dict:
    L = problem.lattice
    cert = {
        "kind": "lift",
        "p": L.prime,
        "N": X.precision,
        "gram": mat_json(L.gram),
        "sources": [residue_vec_json(a) for a in problem.sources],
        "targets": [residue_vec_json(b) for b in problem.targets],
        "special": special,
        "X": residue_mat_json(X.matrix),
        "checks": {
            "orthogonality_level": X.precision,
            "transport_level": X.precision,
            "det": "+1" if X.det == 1 else "-1",
        },
    }
    return finalize(cert)


def orbit_certificate(lattice, a, b, N: int, result) -> dict:
    m = lattice.prime**N
    cert = {
        "kind": "orbit",
        "p": lattice.prime,
        "N": N,
        "gram": mat_json(lattice.gram),
        "a": residue_vec_json([x % m for x in a]),
        "b": residue_vec_json([x % m for x in b]),
        "levels": list(result.levels),
        "exists": result.exists,
    }
    if result.exists:
        X = result.transporter
        cert["X"] = residue_mat_json(X.matrix)
        cert["checks"] = {
            "orthogonality_level": X.precision,
            "transport_level": result.transport_level,
            "det": "+1" if X.det == 1 else "-1",
        }
    return finalize(cert)


def borovoi_certificate(cert_obj, S=None, local=None) -> dict:
    f = cert_obj.frame.form
    out = {
        "kind": "borovoi",
        "form": form_json(f),
        "g": orth_json(f, cert_obj.g, word=False),
        "S": None if S is None else sorted(S),
        "x": orth_json(f, cert_obj.x, word=False),
        "y": orth_json(f, cert_obj.y, word=False),
        "z": orth_json(f, cert_obj.z, word=False),
        "u": orth_json(f, cert_obj.u, word=False),
        "s": vec_json(cert_obj.s),
        "t": vec_json(cert_obj.t),
        "denominator_lcm": cert_obj.denominator_lcm,
    }
    if local is not None:
        q, p, N = local
        out["local"] = {
            "p": p,
            "N": N,
            "certified": q.precision,
            **{k: residue_mat_json(M.matrix) for k, M in zip("xyzu", q.factors)},
        }
    return finalize(out)


def sap_certificate(q: QuadraticForm, value, places, witness, verdict) -> dict:
    cert = {
        "kind": "sap",
        "gram": mat_json(q.gram),
        "value": rat(value),
        "places": [place_json(v) for v in places],
        "witness": vec_json(witness),
        "verdict": verdict.to_json(),
    }
    return finalize(cert)


def invariants_certificate(f: QuadraticForm, places, invs) -> dict:
    cert = {
        "kind": "invariants",
        "form": form_json(f),
        "places": list(places),
        "invariants": [i.to_json() for i in invs],
        "isotropic": [i.isotropic for i in invs],
    }
    return finalize(cert)


def normalize_certificate(g: QuadraticForm, witness, height_bound: int) -> dict:
    new, T, s = normalize_to_standard(g, witness, height_bound)
    cert = {
        "kind": "normalize",
        "gram": mat_json(g.gram),
        "witness": None if witness is None else vec_json(witness),
        "height_bound": height_bound,
        "form": form_json(new),
        "T": mat_json(T),
        "scale": rat(s),
    }
    return finalize(cert)


def lcm_denominators(matrices) -> int:
    out = 1
    for M in matrices:
        for r in M:
            for e in r:
                out = math.lcm(out, Fraction(e).denominator)
    return out
