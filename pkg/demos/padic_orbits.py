"""Transporters over Z_p: lift e3 -> e4 digit by digit and decide a few
orbit questions by comparing levels."""

from isokit.forms import QuadraticForm
from isokit.local_witt import TransporterProblem, UnimodularLattice, orbit_test, witt_lift

f = QuadraticForm.standard([1, 1, 1])
L = UnimodularLattice.from_form(f, 3)
prob = TransporterProblem(L, ((0, 0, 1, 0, 0),), ((0, 0, 0, 1, 0),), 12)
trace = []
X = witt_lift(prob, trace=trace)
print("levels reached:", [s for s, _ in trace])
print("X mod 3^12 =")
for r in X.tolist():
    print("   ", r)

for a, b in [((1, 0, 0, 0, 0), (3, 0, 0, 0, 0)),
             ((0, 0, 1, 0, 0), (0, 0, 0, 1, 0)),
             ((0, 0, 3, 0, 0), (3, 3, 0, 0, 0))]:
    r = orbit_test(L, a, b, 8)
    msg = f"transporter valid mod 3^{r.transport_level}" if r.exists else "no transporter"
    print(f"{a} -> {b}: levels {r.levels}, {msg}")
