"""Command line interface.

Exit codes: 0 success (or verdict true), 1 verified negative (verdict false,
element outside the spinor kernel, certificate rejected), 2 error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile

from . import __version__
from .arith import DomainError, check_odd_prime, parse_rational
from .certificates import (
    CertificateFormatError,
    borovoi_certificate,
    dumps,
    invariants_certificate,
    lift_certificate,
    normalize_certificate,
    orbit_certificate,
    parse_form,
    parse_mat,
    parse_vec,
    sap_certificate,
    witt_certificate,
)


class UsageError(Exception):
    pass


class Negative(Exception):
    """A verified negative outcome (exit code 1)."""


def _load(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise UsageError(f"{path}: no such file") from None
    except json.JSONDecodeError as e:
        raise UsageError(f"{path}: line {e.lineno}: {e.msg}") from None


def _emit(args, cert: dict, summary: str):
    text = dumps(cert)
    if args.output:
        d = os.path.dirname(os.path.abspath(args.output))
        fd, tmp = tempfile.mkstemp(dir=d, prefix=".isokit-")
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, args.output)
        print(summary)
    else:
        sys.stdout.write(text)


def _field(d, key, path):
    if not isinstance(d, dict) or key not in d:
        raise UsageError(f"{path}: missing field {key!r}")
    return d[key]


def _form(path):
    try:
        return parse_form(_load(path))
    except CertificateFormatError as e:
        raise UsageError(f"{path}: {e}") from None


def _vectors(d, key, path):
    try:
        return [parse_vec(v) for v in _field(d, key, path)]
    except CertificateFormatError as e:
        raise UsageError(f"{path}: field {key!r}: {e}") from None


def _prime(args):
    if args.prime is None:
        raise UsageError("--prime is required")
    check_odd_prime(args.prime)
    return args.prime


def _precision(args):
    if args.precision is None or args.precision < 1:
        raise UsageError("--precision must be >= 1")
    return args.precision


def _rational_list(text):
    return [parse_rational(x) for x in text.split(",") if x.strip()]


# ------------------------------------------------------------ commands


def cmd_form_normalize(args):
    f = _form(args.form)
    witness = _rational_list(args.witness) if args.witness else None
    cert = normalize_certificate(f, witness, args.height_bound)
    _emit(args, cert, f"normalized: alphas {cert['form']['alphas']}, scale {cert['scale']}")
    return 0


def cmd_witt_extend(args):
    f = _form(args.form)
    d = _load(args.vectors)
    A, B = _vectors(d, "sources", args.vectors), _vectors(d, "targets", args.vectors)
    cert = witt_certificate(f, A, B)
    _emit(args, cert, f"witt: det {cert['map']['det']}, word length {len(cert['map']['reflection_word'])}")
    return 0


def _lattice(f, p):
    from .local_witt import UnimodularLattice

    if f.is_standard:
        for i, al in enumerate(f.alphas, start=3):
            if al.numerator % p == 0 or al.denominator % p == 0:
                raise DomainError(f"p={p} is a bad place: it divides alpha_{i} = {al}")
    return UnimodularLattice.from_form(f, p)


def cmd_lift(args):
    from .local_witt import TransporterProblem, witt_lift, witt_lift_special

    p, N = _prime(args), _precision(args)
    f = _form(args.form)
    L = _lattice(f, p)
    d = _load(args.vectors)
    A, B = _vectors(d, "sources", args.vectors), _vectors(d, "targets", args.vectors)
    prob = TransporterProblem(L, tuple(map(tuple, A)), tuple(map(tuple, B)), N)
    X = witt_lift_special(prob, N) if args.special else witt_lift(prob, N)
    cert = lift_certificate(prob, X, args.special)
    _emit(args, cert, f"lift: p={p} N={N} det {cert['checks']['det']}")
    return 0


def cmd_orbit_test(args):
    from .local_witt import orbit_test

    p, N = _prime(args), _precision(args)
    f = _form(args.form)
    L = _lattice(f, p)
    d = _load(args.vectors)
    a = _vectors({"a": [_field(d, "a", args.vectors)]}, "a", args.vectors)[0]
    b = _vectors({"b": [_field(d, "b", args.vectors)]}, "b", args.vectors)[0]
    from .arith import rational_mod

    m = p**N
    a = [rational_mod(x, m) for x in a]
    b = [rational_mod(x, m) for x in b]
    res = orbit_test(L, a, b, N)
    cert = orbit_certificate(L, a, b, N, res)
    if res.exists:
        _emit(args, cert, f"orbit: transporter found, levels {res.levels}, valid mod p^{res.transport_level}")
        return 0
    _emit(args, cert, f"orbit: no transporter, levels {res.levels}")
    return 1


def cmd_borovoi(args):
    from .borovoi import (
        NotInSpinorKernel,
        StandardFrame,
        ZPoint,
        decompose,
        phi_fiber_local,
        random_spinor_kernel_element,
        reduce_zpoint,
    )
    from .forms import OrthogonalMapQ

    f = _form(args.form)
    frame = StandardFrame(f)
    if args.element:
        d = _load(args.element)
        M = parse_mat(_field(d, "matrix", args.element)) if isinstance(d, dict) else parse_mat(d)
        g = OrthogonalMapQ(f, M)
    else:
        if args.seed is None:
            raise UsageError("give an element file or --seed")
        g = random_spinor_kernel_element(frame, args.seed, args.length)
    try:
        cert = decompose(frame, g)
    except NotInSpinorKernel as e:
        print(f"borovoi: {e}")
        raise Negative(str(e)) from None
    local = None
    if args.local:
        p, N = args.local
        check_odd_prime(p)
        if cert.denominator_lcm % p == 0:
            raise UsageError(f"--local {p}: the certificate has denominators divisible by {p}")
        Gp, s, t = reduce_zpoint(ZPoint(cert.g, cert.s, cert.t), p, N)
        q = phi_fiber_local(frame, Gp, s, t, p, N)
        local = (q, p, N)
    S = [int(x) for x in args.S.split(",")] if args.S else None
    out = borovoi_certificate(cert, S=S, local=local)
    den = str(out["denominator_lcm"])
    den = den if len(den) <= 20 else f"{den[:8]}... ({len(den)} digits)"
    _emit(args, out, f"borovoi: 4 factors, denominator lcm {den}")
    return 0


def cmd_sap(args):
    from .local_global import parse_place, strong_approx_quadric

    q = _form(args.form)
    value = parse_rational(args.value)
    places = [parse_place(v) for v in args.places.split(",") if v.strip()]
    x = _rational_list(args.witness)
    v = strong_approx_quadric(q, value, places, x)
    cert = sap_certificate(q, value, places, x, v)
    where = f" at {v.witness_place}" if v.witness_place is not None else ""
    _emit(args, cert, f"sap: holds={v.holds} ({v.reason}{where})")
    return 0 if v.holds else 1


def cmd_invariants(args):
    from .local_global import REAL, _diag, local_invariants, parse_place, relevant_primes

    f = _form(args.form)
    if args.places:
        places = [parse_place(v) for v in args.places.split(",") if v.strip()]
    else:
        places = [REAL] + relevant_primes(_diag(f), args.factor_bound)
    invs = [local_invariants(f, v) for v in places]
    cert = invariants_certificate(f, places, invs)
    _emit(args, cert, "invariants: " + ", ".join(f"{i.place}: i={i.witt_index}" for i in invs))
    return 0


def cmd_verify(args):
    from .verify import verify_certificate

    try:
        with open(args.certificate) as fh:
            cert = json.load(fh)
    except FileNotFoundError:
        raise UsageError(f"{args.certificate}: no such file") from None
    except json.JSONDecodeError as e:
        print(f"verify: malformed JSON: line {e.lineno}: {e.msg}", file=sys.stderr)
        return 2
    code, msg = verify_certificate(cert)
    print(f"verify: {msg}", file=sys.stdout if code == 0 else sys.stderr)
    return code


def cmd_selftest(args):
    from .selftest import run

    return run(seed=args.seed or 0)


# ------------------------------------------------------------ parser


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="isokit", description="Constructive isometries of quadratic forms.")
    ap.add_argument("--version", action="version", version=f"isokit {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--output", "-o", help="write the certificate here (stdout gets a summary)")
        p.add_argument("--factor-bound", type=int, default=10**6)
        return p

    p = common(sub.add_parser("form-normalize", help="bring an isotropic form into standard shape"))
    p.add_argument("form")
    p.add_argument("--witness", help="isotropic vector, comma separated")
    p.add_argument("--height-bound", type=int, default=10)
    p.set_defaults(func=cmd_form_normalize)

    p = common(sub.add_parser("witt-extend", help="isometry over Q carrying sources to targets"))
    p.add_argument("form")
    p.add_argument("vectors", help='JSON with "sources" and "targets"')
    p.set_defaults(func=cmd_witt_extend)

    p = common(sub.add_parser("lift", help="transporter over Z_p modulo p^N"))
    p.add_argument("form")
    p.add_argument("vectors")
    p.add_argument("--prime", type=int)
    p.add_argument("--precision", type=int)
    p.add_argument("--special", action="store_true", help="require det +1 (needs 2m+1 <= n)")
    p.set_defaults(func=cmd_lift)

    p = common(sub.add_parser("orbit-test", help="decide whether a and b lie in one integral orbit"))
    p.add_argument("form")
    p.add_argument("vectors", help='JSON with "a" and "b"')
    p.add_argument("--prime", type=int)
    p.add_argument("--precision", type=int)
    p.set_defaults(func=cmd_orbit_test)

    p = common(sub.add_parser("borovoi", help="four-factor decomposition of a spinor-kernel element"))
    p.add_argument("form")
    p.add_argument("element", nargs="?", help='JSON with "matrix"')
    p.add_argument("--seed", type=int, help="decompose a generated element instead")
    p.add_argument("--length", type=int, default=3, help="word length of the generated element")
    p.add_argument("--local", type=int, nargs=2, metavar=("P", "N"), help="also produce the mod p^N quadruple")
    p.add_argument("--S", help="declared finite places for denominators, comma separated")
    p.set_defaults(func=cmd_borovoi)

    p = common(sub.add_parser("sap", help="strong approximation verdict for q(x) = value"))
    p.add_argument("form")
    p.add_argument("value")
    p.add_argument("places", help="comma separated, e.g. real,7")
    p.add_argument("witness", help="rational point, comma separated")
    p.set_defaults(func=cmd_sap)

    p = common(sub.add_parser("invariants", help="local invariants at given places"))
    p.add_argument("form")
    p.add_argument("--places")
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser("verify", help="re-check a certificate")
    p.add_argument("certificate")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("selftest", help="run quick property checks")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_selftest)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code == 0 else 2
    try:
        return args.func(args)
    except Negative:
        return 1
    except (UsageError, DomainError, CertificateFormatError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
