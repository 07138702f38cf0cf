"""Quick randomized checks, run by ``isokit selftest``."""

from __future__ import annotations

import random
import time
from fractions import Fraction

from .forms import QuadraticForm, evaluate, reflection, witt_extend
from .local_global import REAL, hilbert_symbol
from .local_witt import TransporterProblem, UnimodularLattice, witt_lift


def _witt(rng):
    f = QuadraticForm.standard([rng.choice([1, -1, 2, 3, -5]) for _ in range(rng.randint(1, 3))])
    n = f.dim
    a = [Fraction(rng.randint(-5, 5)) for _ in range(n)]
    # a target of the same value: image of a under a random reflection
    c = [Fraction(rng.randint(-5, 5)) for _ in range(n)]
    if evaluate(f, c) == 0 or not any(a):
        return True
    b = reflection(f, c)(a)
    s = witt_extend(f, [a], [b])
    return list(s(a)) == list(b)


def _hilbert(rng):
    x, y = rng.randint(1, 200) * rng.choice([1, -1]), rng.randint(1, 200) * rng.choice([1, -1])
    places = [REAL] + [p for p in range(2, 200) if all(p % q for q in range(2, p))]
    out = 1
    for v in places:
        out *= hilbert_symbol(x, y, v)
    return out == 1


def _lift(rng):
    p = rng.choice([3, 5, 7])
    f = QuadraticForm.standard([1, 1])
    L = UnimodularLattice.from_form(f, p)
    prob = TransporterProblem(L, ((0, 0, 1, 0),), ((0, 0, 0, 1),), 10)
    X = witt_lift(prob, 10)
    m = p**10
    return [x % m for x in X((0, 0, 1, 0))] == [0, 0, 0, 1]


def run(seed: int = 0, rounds: int = 20) -> int:
    rng = random.Random(seed)
    failed = 0
    for name, check in (("witt", _witt), ("hilbert", _hilbert), ("lift", _lift)):
        t = time.perf_counter()
        ok = all(check(rng) for _ in range(rounds))
        failed += not ok
        print(f"{name:8s} {'ok' if ok else 'FAIL'}  {time.perf_counter() - t:.2f}s")
    return 1 if failed else 0
