"""Strong approximation verdicts for a few quadrics q(x) = a.

The ternary sphere-like example x^2 + y^2 - 2z^2 = 1 fails with S = {real};
adding one prime can change that, and four variables always suffice.
"""

from isokit.forms import QuadraticForm
from isokit.local_global import REAL, restriction_to_complement, strong_approx_quadric


def run(coeffs, a, S, x):
    q = QuadraticForm.diagonal(coeffs)
    v = strong_approx_quadric(q, a, S, x)
    where = f" (at {v.witness_place})" if v.witness_place is not None else ""
    print(f"diag{tuple(coeffs)} = {a}, S = {S}: holds={v.holds}  {v.reason}{where}")
    return q


q = run([1, 1, -2], 1, [REAL], [1, 0, 0])
print("  complement of the witness:", [[str(x) for x in r] for r in restriction_to_complement(q, [1, 0, 0])])
for p in (3, 5, 7, 11):
    run([1, 1, -2], 1, [REAL, p], [1, 0, 0])
run([1, 1, 1, -1], 1, [REAL], [1, 0, 0, 0])
