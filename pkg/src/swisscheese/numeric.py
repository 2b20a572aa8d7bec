"""Precision plumbing shared by every module.

All floating computation runs through mpmath at a configurable binary
precision (default 128 bits).  Strict inequalities are never reported as
"pass" on the strength of rounding noise: every check goes through
:func:`strict_less`, which returns the achieved margin and fails when the
margin falls below a relative epsilon (default 2**-64).
"""

from __future__ import annotations

from contextlib import contextmanager
from fractions import Fraction

from mpmath import mp, mpf, mpc

DEFAULT_PRECISION_BITS = 128
DEFAULT_REL_EPS = Fraction(1, 2**64)

# conditioning threshold for boundary distances (see browder module)
TINY_DISTANCE = mpf(2) ** -40


class PreconditionError(ValueError):
    """An operation was called outside its documented domain."""


def set_precision(bits: int) -> None:
    if bits < 53:
        raise PreconditionError(f"precision must be >= 53 bits, got {bits}")
    mp.prec = bits


@contextmanager
def working_precision(bits: int):
    old = mp.prec
    mp.prec = bits
    try:
        yield
    finally:
        mp.prec = old


def to_real(x) -> mpf:
    """Convert to mpf at the current precision, rejecting non-finite input."""
    if isinstance(x, Fraction):
        v = mpf(x.numerator) / x.denominator
    else:
        v = mpf(x) if not isinstance(x, mpf) else x
    if not _finite(v):
        raise PreconditionError(f"non-finite real value: {x!r}")
    return v


def to_complex(z) -> mpc:
    """Convert to mpc at the current precision, rejecting non-finite input."""
    if isinstance(z, Fraction):
        return mpc(to_real(z))
    v = mpc(z)
    if not (_finite(v.real) and _finite(v.imag)):
        raise PreconditionError(f"non-finite complex value: {z!r}")
    return v


def _finite(x: mpf) -> bool:
    return mp.isfinite(x)


def strict_less(lhs, rhs, rel_eps=DEFAULT_REL_EPS):
    """Check lhs < rhs with a reported margin.

    Returns (ok, margin).  The margin is rhs - lhs; the check passes only
    when the margin exceeds rel_eps * max(|rhs|, 1), so a "pass" is robust
    against rounding at the working precision.
    """
    lhs = to_real(lhs)
    rhs = to_real(rhs)
    margin = rhs - lhs
    scale = max(abs(rhs), mpf(1))
    return bool(margin > to_real(rel_eps) * scale), margin


def rel_close(x, y, rel_eps=DEFAULT_REL_EPS) -> bool:
    """|x - y| <= rel_eps * max(|x|, |y|, 1)."""
    x = to_complex(x)
    y = to_complex(y)
    scale = max(abs(x), abs(y), mpf(1))
    return bool(abs(x - y) <= to_real(rel_eps) * scale)


def rel_error(x, y):
    """Relative discrepancy used in verdicts; 0 when both vanish."""
    x = to_complex(x)
    y = to_complex(y)
    scale = max(abs(x), abs(y))
    if scale == 0:
        return mpf(0)
    return abs(x - y) / scale


def num_str(x, digits: int | None = None) -> str:
    """Deterministic decimal rendering of an mpf/mpc for serialization."""
    from mpmath import nstr

    if digits is None:
        digits = mp.dps + 5
    if isinstance(x, Fraction):
        return str(x)
    return nstr(x, digits)
