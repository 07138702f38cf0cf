"""Split a rotation of trivial spinor norm into four stabilizer factors,
then reduce the result modulo 7^12 and redo the split over Z_7."""

import argparse

from isokit.borovoi import (
    StandardFrame,
    ZPoint,
    decompose,
    phi_fiber_local,
    random_spinor_kernel_element,
    reduce_zpoint,
    verify_local_quadruple,
)
from isokit.certificates import borovoi_certificate
from isokit.verify import verify_certificate


def show(name, M):
    print(f"{name} =")
    for r in M.matrix:
        print("   ", "  ".join(f"{str(x):>8}" for x in r))


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--seed", type=int, default=3)
    ap.add_argument("--length", type=int, default=1)
    args = ap.parse_args()

    frame = StandardFrame.standard([1, 1, 1])
    g = random_spinor_kernel_element(frame, args.seed, args.length)
    show("g", g)
    cert = decompose(frame, g)
    for name, M in zip("xyzu", cert.factors):
        show(name, M)
    print("x, z fix a = e5; y, u fix b = e4; xyzu == g:",
          (cert.x @ cert.y @ cert.z @ cert.u).matrix == g.matrix)
    print("independent check:", verify_certificate(borovoi_certificate(cert)))

    p = next(q for q in (7, 11, 13, 17) if cert.denominator_lcm % q)
    Gp, s, t = reduce_zpoint(ZPoint(cert.g, cert.s, cert.t), p, 12)
    local = phi_fiber_local(frame, Gp, s, t, p, 12)
    fails = verify_local_quadruple(frame, local, Gp, s, t)
    print(f"over Z_{p}: certified mod {p}^{local.precision}, failed checks: {fails or 'none'}")


if __name__ == "__main__":
    main()
