"""Exact rational scalars for the whole engine.

Every coefficient in the algebra kernel is an arbitrary-precision rational;
no floating point is allowed anywhere.  gmpy2's ``mpq`` is used when
available (it is much faster than ``fractions.Fraction``), with a stdlib
fallback so the package still works without it.
"""

from __future__ import annotations

try:
    from gmpy2 import mpq as Rational
except ImportError:  # pragma: no cover - exercised only without gmpy2
    from fractions import Fraction as Rational

ZERO = Rational(0)
ONE = Rational(1)


def rat(value, den=None) -> Rational:
    """Coerce ints, "p/q" strings, or rationals into a Rational."""
    if den is not None:
        return Rational(value, den)
    if isinstance(value, str):
        text = value.strip()
        if "/" in text:
            p, q = text.split("/", 1)
            return Rational(int(p), int(q))
        return Rational(int(text))
    return Rational(value)


def rat_str(value) -> str:
    """Render exactly, as "p" or "p/q" with positive denominator."""
    return str(Rational(value))
