"""Single-leaf tampering of JSON certificates."""

import copy
from fractions import Fraction


def leaves(obj, path=()):
    if isinstance(obj, dict):
        for k, v in obj.items():
            yield from leaves(v, path + (k,))
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            yield from leaves(v, path + (i,))
    else:
        yield path, obj


def bump(x):
    if isinstance(x, bool):
        return not x
    if isinstance(x, int):
        return x + 1
    if x is None:
        return 1
    if x in ("+1", "-1"):
        return "-1" if x == "+1" else "+1"
    try:
        return str(Fraction(x) + 1)
    except (ValueError, ZeroDivisionError):
        return x + "x"


def perturbed(cert):
    """Yield (path, tampered copy) for every leaf of cert."""
    for path, val in leaves(cert):
        d = copy.deepcopy(cert)
        o = d
        for k in path[:-1]:
            o = o[k]
        o[path[-1]] = bump(val)
        yield path, d
