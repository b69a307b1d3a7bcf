"""Exact rationals.

``Q`` is gmpy2's ``mpq`` when gmpy2 is installed and ``fractions.Fraction``
otherwise.  Both are always reduced with a positive denominator and compare
and hash equal to each other.
"""

from fractions import Fraction

try:
    from gmpy2 import mpq as Q
except ImportError:  # pragma: no cover - exercised only without gmpy2
    Q = Fraction

RATIONAL_BACKEND = "gmpy2" if Q is not Fraction else "fractions"


def as_rational(value):
    """Coerce int, Fraction, mpq or a ``"p/q"`` string to ``Q``."""
    if isinstance(value, str):
        value = Fraction(value.strip())
    if isinstance(value, float):
        raise TypeError("floating point values are not accepted")
    if isinstance(value, Fraction):
        return Q(value.numerator, value.denominator)
    return Q(value)


def rational_str(q):
    q = as_rational(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"
