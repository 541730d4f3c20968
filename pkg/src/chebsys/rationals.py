"""Exact rational scalar backend.

All structural identities in this package are checked with exact rational
arithmetic.  When gmpy2 is importable its GMP-backed ``mpq`` is used (roughly
an order of magnitude faster on the dense recurrence and Gram-matrix runs);
otherwise the pure-Python ``fractions.Fraction`` is a drop-in fallback.  Both
store values in lowest terms with a positive denominator.

Set ``CHEBSYS_RATIONAL_BACKEND=fractions`` in the environment to force the
pure-Python backend (used by the backend benchmark and useful for debugging).
"""

from __future__ import annotations

import fractions
import os

if os.environ.get("CHEBSYS_RATIONAL_BACKEND", "").lower() == "fractions":
    Rational = fractions.Fraction
    BACKEND = "fractions"
else:
    try:
        from gmpy2 import mpq as Rational  # type: ignore[no-redef]

        BACKEND = "gmpy2"
    except ImportError:  # pragma: no cover - exercised via env override
        Rational = fractions.Fraction  # type: ignore[misc]
        BACKEND = "fractions"

ZERO = Rational(0)
ONE = Rational(1)


def as_rational(value) -> Rational:
    """Coerce to the backend rational type.

    Accepts backend rationals, ints, ``fractions.Fraction`` and strings such
    as ``"3"`` or ``"-5/7"``.  Floats are rejected: they would silently smuggle
    binary roundoff into computations whose whole point is exactness.
    """
    if isinstance(value, Rational):
        return value
    if isinstance(value, float):
        raise TypeError(
            "float %r rejected for exact arithmetic; pass a 'p/q' string instead" % (value,)
        )
    if isinstance(value, (int, str, fractions.Fraction)):
        return Rational(value)
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def rat_str(q) -> str:
    """Canonical lossless string form ``"p/q"`` (denominator always shown)."""
    q = as_rational(q)
    return f"{q.numerator}/{q.denominator}"


def is_integer(q) -> bool:
    return as_rational(q).denominator == 1


def rat_to_mpf(q):
    """Round an exact rational to an mpmath float at the current precision."""
    import mpmath

    q = as_rational(q)
    return mpmath.mpf(int(q.numerator)) / mpmath.mpf(int(q.denominator))
