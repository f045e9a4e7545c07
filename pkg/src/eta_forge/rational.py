"""Exact rationals used throughout the symbolic part of the package."""
from fractions import Fraction

from gmpy2 import mpq

Rat = type(mpq(0))

ZERO = mpq(0)
ONE = mpq(1)


def Q(value, den=None):
    """Coerce ints, ``"p/q"`` strings, Fractions and mpq values to an exact rational."""
    if den is not None:
        return mpq(value, den)
    if isinstance(value, Rat):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, (int, Fraction)):
        return mpq(value)
    if isinstance(value, str):
        return mpq(value.strip())
    if isinstance(value, float):
        if not value.is_integer():
            raise TypeError(f"refusing to convert inexact float {value!r} to a rational")
        return mpq(int(value))
    raise TypeError(f"cannot convert {type(value).__name__} to a rational")


def rat_str(x):
    """Canonical ``p/q`` text (``p`` for integers)."""
    return str(Q(x))
