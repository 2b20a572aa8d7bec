"""Rational functions, Taylor functionals, and the even-part descent.

Coefficients are stored in ascending powers and may be exact (int or
Fraction) or floating (mpmath).  All arithmetic is generic over the
coefficient type, so the exact path (used for the road-runner witnesses,
where the Taylor-coefficient identities hold as equalities of rationals)
and the working-precision path share one implementation.

Taylor coefficients are computed by power-series division of the shifted
numerator by the shifted denominator, never by repeated differentiation.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
from mpmath import mp, mpf, mpc, exp, pi, polyroots

from .families import CheeseSpec
from .numeric import PreconditionError, num_str, rel_error, to_complex, to_real


def _c(x) -> mpc:
    """Coefficient to mpc (handles int/Fraction/mpf/mpc)."""
    return to_complex(x)


class PoleEvaluationError(ValueError):
    """Evaluation requested at (or numerically on top of) a pole."""


class TheoremViolationError(RuntimeError):
    """A certified inequality failed; signals an implementation bug."""


# ---------------------------------------------------------------------------
# Generic dense polynomial helpers (ascending powers)
# ---------------------------------------------------------------------------


def poly_trim(c):
    c = list(c)
    while c and _is_zero(c[-1]):
        c.pop()
    return tuple(c)


def _is_zero(x) -> bool:
    return x == 0


def _is_exact(coeffs) -> bool:
    return all(isinstance(x, (int, Fraction)) for x in coeffs)


def poly_add(a, b):
    n = max(len(a), len(b))
    return tuple(
        (a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)
    )


def poly_sub(a, b):
    n = max(len(a), len(b))
    return tuple(
        (a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)
    )


def poly_mul(a, b):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return tuple(out)


def poly_eval(c, z):
    acc = 0
    for coeff in reversed(c):
        acc = acc * z + coeff
    return acc


def poly_shift(c, a):
    """Coefficients of p(a + t) as a polynomial in t (Taylor shift)."""
    out = list(c)
    n = len(out)
    for i in range(n - 1):
        for j in range(n - 2, i - 1, -1):
            out[j] = out[j] + a * out[j + 1]
    return tuple(out)


def poly_neg_arg(c):
    """Coefficients of p(-z); exact sign flips."""
    return tuple(x if i % 2 == 0 else -x for i, x in enumerate(c))


def series_div(num, den, order):
    """First order+1 power-series coefficients of num/den; den[0] must be nonzero."""
    if not den or _is_zero(den[0]):
        raise PoleEvaluationError("series division: constant term of denominator vanishes")
    b0 = den[0]
    out = []
    for k in range(order + 1):
        acc = num[k] if k < len(num) else 0
        for j in range(1, min(k, len(den) - 1) + 1):
            acc = acc - den[j] * out[k - j]
        out.append(acc / b0)
    return tuple(out)


def _poly_divmod_exact(a, b):
    a = [Fraction(x) for x in a]
    b = [Fraction(x) for x in b]
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    while len(a) >= len(b) and any(a):
        if a[-1] == 0:
            a.pop()
            continue
        shift = len(a) - len(b)
        factor = a[-1] / b[-1]
        q[shift] = factor
        for i in range(len(b)):
            a[shift + i] -= factor * b[i]
        a.pop()
    while a and a[-1] == 0:
        a.pop()
    return tuple(q), tuple(a)


def _poly_gcd_exact(a, b):
    a = poly_trim(a)
    b = poly_trim(b)
    while b:
        _, r = _poly_divmod_exact(a, b)
        a, b = b, poly_trim(r)
    if a:
        lead = Fraction(a[-1])
        a = tuple(Fraction(x) / lead for x in a)
    return a


def _deflate(c, root):
    """Synthetic division of p by (z - root); returns (quotient, remainder)."""
    acc = 0
    out = []
    for coeff in reversed(c):
        acc = acc * root + coeff
        out.append(acc)
    rem = out.pop()
    out.reverse()
    return tuple(out), rem


# ---------------------------------------------------------------------------
# Rational functions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RationalFunction:
    num: tuple
    den: tuple

    def __post_init__(self):
        num = poly_trim(self.num)
        den = poly_trim(self.den)
        if not den:
            raise PreconditionError("rational function: denominator is identically zero")
        num, den = _reduce(num, den)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    @property
    def exact(self) -> bool:
        return _is_exact(self.num) and _is_exact(self.den)

    def __call__(self, z):
        return evaluate(self, z)

    def to_json(self) -> dict:
        def pair(x):
            if isinstance(x, (int, Fraction)):
                return [str(Fraction(x)), "0"]
            x = _c(x)
            return [num_str(x.real), num_str(x.imag)]

        return {"num": [pair(x) for x in self.num], "den": [pair(x) for x in self.den]}


def rational_from_json(obj: dict) -> RationalFunction:
    def coeff(p):
        re, im = p
        re = mpf(str(re))
        im = mpf(str(im))
        return mpc(re, im)

    try:
        return RationalFunction(
            tuple(coeff(p) for p in obj["num"]), tuple(coeff(p) for p in obj["den"])
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise PreconditionError(f"malformed rational-function spec: {exc}") from exc


def _reduce(num, den):
    """Remove common roots of numerator and denominator.

    Exact coefficients get an exact polynomial gcd; floating coefficients
    get best-effort deflation of denominator roots where the numerator also
    vanishes within tolerance.  With no common roots this is the identity.
    """
    if not num:
        return num, den
    if _is_exact(num) and _is_exact(den):
        g = _poly_gcd_exact(num, den)
        if len(g) > 1:
            num, _ = _poly_divmod_exact(num, g)
            den, _ = _poly_divmod_exact(den, g)
        return poly_trim(num), poly_trim(den)
    if len(den) <= 1:
        return num, den
    tol = mpf(2) ** -(mp.prec // 2)
    num_scale = max(abs(_c(x)) for x in num)
    try:
        roots = polyroots([_c(x) for x in reversed(den)], maxsteps=200, extraprec=mp.prec)
    except Exception:
        return num, den
    for root in roots:
        if len(num) < 2:
            break
        if abs(poly_eval(num, root)) < tol * num_scale:
            q_num, r_num = _deflate(num, root)
            q_den, r_den = _deflate(den, root)
            if abs(r_den) < tol * max(abs(_c(x)) for x in den):
                num, den = poly_trim(q_num), poly_trim(q_den)
    return num, den


@lru_cache(maxsize=256)
def poles(f: RationalFunction) -> tuple:
    """Pole locations (with multiplicity as repetitions) of the denominator."""
    den = f.den
    if len(den) <= 1:
        return ()
    if f.exact and len(den) == 2:
        return (-Fraction(den[0]) / Fraction(den[1]),)
    coeffs = [_c(x) for x in reversed(den)]
    return tuple(polyroots(coeffs, maxsteps=200, extraprec=mp.prec))


def evaluate(f: RationalFunction, z):
    """f(z) = num(z)/den(z); raises when z is numerically at a pole."""
    if isinstance(z, (int, Fraction)) and f.exact:
        d = poly_eval(f.den, Fraction(z))
        if d == 0:
            raise PoleEvaluationError(f"evaluation at pole z={z}")
        return poly_eval(f.num, Fraction(z)) / d
    z = to_complex(z)
    d = mpc(poly_eval(tuple(_c(x) for x in f.den), z))
    scale = max(abs(_c(x)) for x in f.den) * max(mpf(1), abs(z)) ** (len(f.den) - 1)
    if abs(d) <= mpf(2) ** (-mp.prec + 8) * scale:
        raise PoleEvaluationError(f"evaluation within tolerance of a pole at z={z}")
    return mpc(poly_eval(tuple(_c(x) for x in f.num), z)) / d


def taylor_functional(f: RationalFunction, a, m: int):
    """mth Taylor coefficient of f at a (the functional f -> f^(m)(a)/m!).

    Computed by shifting numerator and denominator to a and dividing the
    power series to order m; exact for exact inputs at exact points.
    """
    if m < 0:
        raise PreconditionError(f"taylor_functional: order must be >= 0, got {m}")
    if isinstance(a, (int, Fraction)) and f.exact:
        num_s = poly_shift(f.num, Fraction(a))
        den_s = poly_shift(f.den, Fraction(a))
        if not den_s or den_s[0] == 0:
            raise PoleEvaluationError(f"taylor_functional: {a} is a pole")
        return series_div(num_s, den_s, m)[m]
    a = to_complex(a)
    num_s = poly_shift(tuple(_c(x) for x in f.num), a)
    den_s = poly_shift(tuple(_c(x) for x in f.den), a)
    scale = max(abs(x) for x in den_s) if den_s else mpf(0)
    if not den_s or abs(den_s[0]) <= mpf(2) ** (-mp.prec + 8) * scale:
        raise PoleEvaluationError(f"taylor_functional: {a} is (numerically) a pole")
    if not num_s:
        num_s = (mpc(0),)
    return series_div(num_s, den_s, m)[m]


def taylor_coefficient_contour(f: RationalFunction, a, m: int, radius, nodes: int = 256):
    """Independent contour-integral route to the mth Taylor coefficient.

    Trapezoidal quadrature of f(z)/(z-a)^(m+1) on the circle |z-a| = radius,
    which is spectrally accurate for radii inside the nearest pole.
    """
    a = to_complex(a)
    radius = mpf(radius)
    total = mpc(0)
    for k in range(nodes):
        theta = 2 * pi * k / nodes
        z = a + radius * exp(1j * theta)
        total += evaluate(f, z) * exp(-1j * m * theta)
    return total / (nodes * radius**m)


@dataclass
class ShiftVerdict:
    ok: bool
    lhs: object
    rhs: object
    relative_error: mpf


def relation_delta_shift(f: RationalFunction, a, k: int, m: int, tol=Fraction(1, 2**64)) -> ShiftVerdict:
    """Check delta_{a,k}(f) == delta_{a,m}((z-a)^(m-k) f)."""
    if not 1 <= k <= m:
        raise PreconditionError("relation_delta_shift: need 1 <= k <= m")
    lhs = taylor_functional(f, a, k)
    if f.exact and isinstance(a, (int, Fraction)):
        factor = (Fraction(-a), Fraction(1))
    else:
        factor = (-to_complex(a), mpc(1))
    shifted_num = f.num
    for _ in range(m - k):
        shifted_num = poly_mul(shifted_num, factor)
    g = RationalFunction(shifted_num, f.den)
    rhs = taylor_functional(g, a, m)
    err = rel_error(lhs, rhs)
    return ShiftVerdict(ok=bool(err <= to_real(tol)) or lhs == rhs, lhs=lhs, rhs=rhs, relative_error=err)


# ---------------------------------------------------------------------------
# Even part and descent through z -> z^2
# ---------------------------------------------------------------------------


def even_part(f: RationalFunction) -> RationalFunction:
    """g with g(z) = (f(z) + f(-z))/2, built coefficient-wise.

    Writing f = p/q, g = (p(z)q(-z) + p(-z)q(z)) / (2 q(z)q(-z)); both
    polynomials come out with exactly zero odd coefficients because the
    sign flips cancel term by term.
    """
    p, q = f.num, f.den
    qn = poly_neg_arg(q)
    pn = poly_neg_arg(p)
    num = poly_add(poly_mul(p, qn), poly_mul(pn, q))
    den = tuple(2 * x for x in poly_mul(q, qn))
    # the odd entries are identically zero; drop any accumulation residue
    # (q(z)q(-z) sums its cancelling convolution terms in interleaved order)
    num = tuple(x if i % 2 == 0 else 0 * x for i, x in enumerate(num))
    den = tuple(x if i % 2 == 0 else 0 * x for i, x in enumerate(den))
    if not poly_trim(num):
        zero = Fraction(0) if f.exact else mpc(0)
        one = Fraction(1) if f.exact else mpc(1)
        return RationalFunction((zero,), (one,))
    return RationalFunction(num, den)


def _even_entries(c):
    return tuple(c[0::2])


def _odd_scale(c) -> mpf:
    odd = [abs(_c(x)) for x in c[1::2]]
    return max(odd) if odd else mpf(0)


def is_even_function(f: RationalFunction, tol=None) -> bool:
    """True when f(z) == f(-z) up to tolerance (exactly, for exact input)."""
    diff = poly_sub(poly_mul(f.num, poly_neg_arg(f.den)), poly_mul(poly_neg_arg(f.num), f.den))
    diff = poly_trim(diff)
    if not diff:
        return True
    if f.exact:
        return False
    if tol is None:
        tol = mpf(2) ** -(mp.prec // 2)
    scale = max(abs(_c(x)) for x in poly_mul(f.num, f.den)) if poly_trim(f.num) else mpf(1)
    return max(abs(_c(x)) for x in diff) <= to_real(tol) * max(scale, mpf(1))


def descend_even(g: RationalFunction, tol=None) -> RationalFunction:
    """h with g(z) = h(z^2), for even g.

    If numerator and denominator are already coefficient-even the even
    entries descend directly; otherwise g is symmetrized first (quotient of
    two even polynomials) and then descended.  Rejects g that is not even
    within tolerance.
    """
    if not is_even_function(g, tol):
        raise PreconditionError("descend_even: the function is not even within tolerance")
    num, den = g.num, g.den
    if _coeff_even(num, tol) and _coeff_even(den, tol):
        return RationalFunction(_even_entries(num), _even_entries(den))
    sym = even_part(g)  # same function; structurally even representation
    return RationalFunction(_even_entries(sym.num), _even_entries(sym.den))


def _coeff_even(c, tol=None) -> bool:
    if all(_is_zero(x) for x in c[1::2]):
        return True
    if _is_exact(c):
        return False
    if tol is None:
        tol = mpf(2) ** -(mp.prec // 2)
    scale = max(abs(_c(x)) for x in c) or mpf(1)
    return _odd_scale(c) <= to_real(tol) * scale


def compose_square(h: RationalFunction) -> RationalFunction:
    """h(z^2); left inverse of descend_even on even functions."""

    def interleave(c):
        out = []
        for x in c:
            out.append(x)
            out.append(0 if isinstance(x, (int, Fraction)) else mpc(0))
        return tuple(out[:-1]) if out else ()

    return RationalFunction(interleave(h.num), interleave(h.den))


@dataclass
class DescentVerdict:
    ok: bool
    value_direct: object  # delta_{0,2m}(f)
    value_even: object  # delta_{0,2m}(even part)
    value_descended: object  # delta_{0,m}(h)
    max_relative_error: mpf


def delta_descent_check(f: RationalFunction, m: int, tol=Fraction(1, 2**40)) -> DescentVerdict:
    """Verify delta_{0,2m}(f) = delta_{0,2m}(g) = delta_{0,m}(h) with g the
    even part of f and h its descent through z -> z^2."""
    if m < 1:
        raise PreconditionError("delta_descent_check: m must be >= 1")
    v1 = taylor_functional(f, 0, 2 * m)
    g = even_part(f)
    v2 = taylor_functional(g, 0, 2 * m)
    h = descend_even(g)
    v3 = taylor_functional(h, 0, m)
    err = max(rel_error(v1, v2), rel_error(v1, v3), rel_error(v2, v3))
    exact_equal = v1 == v2 == v3
    return DescentVerdict(
        ok=exact_equal or bool(err <= to_real(tol)),
        value_direct=v1,
        value_even=v2,
        value_descended=v3,
        max_relative_error=err,
    )


# ---------------------------------------------------------------------------
# Sup-norm estimation over a cheese (lower bounds only)
# ---------------------------------------------------------------------------

_GOLDEN = 0.6180339887498949  # frac(golden ratio); angle sequence is prefix-stable
_BOUNDARY_PUSH = 2.0**-34  # keeps float samples strictly on the correct side


def _halton(i: int, base: int) -> float:
    out = 0.0
    f = 1.0
    while i > 0:
        f /= base
        out += f * (i % base)
        i //= base
    return out


def check_poles_off_cheese(f: RationalFunction, cheese: CheeseSpec, depth: int) -> None:
    """Every pole must sit inside a realized deleted disc or outside the
    closed unit disc (with the documented pole-membership tolerance)."""
    discs = cheese.family.realize(depth)
    eps_rel = mpf(2) ** -32
    for p in poles(f):
        p = to_complex(p)
        if abs(p) > 1:
            continue
        covered = any(abs(p - d.center) < d.radius * (1 - eps_rel) for d in discs)
        if not covered:
            raise PreconditionError(
                f"pole {p} lies in the closed unit disc but inside no realized deleted disc"
            )


def sup_norm_estimate(
    f: RationalFunction, cheese: CheeseSpec, samples: int, depth: int
):
    """Lower-bound estimate of sup |f| over the cheese.

    Samples the unit circle (nudged inward), the boundary circles of the
    realized deleted discs (nudged outward, clipped to membership), and a
    low-discrepancy grid over the cheese.  The point sets are prefixes of
    fixed sequences, so the estimate is monotone nondecreasing in
    `samples`.  The best float candidate is re-evaluated at the working
    precision and its membership re-verified before being returned.
    """
    if samples < 1:
        raise PreconditionError("sup_norm_estimate: samples must be >= 1")
    if not f.num:
        return mpf(0)
    check_poles_off_cheese(f, cheese, depth)
    discs = cheese.family.realize(depth)
    centers = np.array([complex(d.center) for d in discs])
    radii = np.array([float(d.radius) for d in discs])

    pts = []
    k = np.arange(samples)
    theta = 2.0 * np.pi * ((k * _GOLDEN) % 1.0)
    pts.append((1.0 - _BOUNDARY_PUSH) * np.exp(1j * theta))
    per_disc = max(16, samples // max(1, len(discs)))
    for c, r in zip(centers, radii):
        kk = np.arange(per_disc)
        th = 2.0 * np.pi * ((kk * _GOLDEN) % 1.0)
        pts.append(c + r * (1.0 + _BOUNDARY_PUSH) * np.exp(1j * th))
    grid = np.array(
        [complex(2 * _halton(i + 1, 2) - 1, 2 * _halton(i + 1, 3) - 1) for i in range(samples)]
    )
    pts.append(grid)
    z = np.concatenate(pts)

    # membership (conservative: strictly inside the closed disc, outside holes)
    keep = np.abs(z) <= 1.0
    for c, r in zip(centers, radii):
        keep &= np.abs(z - c) >= r
    z = z[keep]
    if len(z) == 0:
        raise PreconditionError("sup_norm_estimate: no sample point landed in the cheese")

    num_f = np.array([complex(x) for x in f.num])
    den_f = np.array([complex(x) for x in f.den])
    with np.errstate(all="ignore"):
        vals = np.abs(np.polyval(num_f[::-1], z) / np.polyval(den_f[::-1], z))
    vals = np.where(np.isfinite(vals), vals, -1.0)
    order = np.argsort(vals)[::-1][:8]

    best = mpf(0)
    for idx in order:
        zz = mpc(complex(z[idx]))
        if abs(zz) > 1 or any(d.contains(zz) for d in discs):
            continue
        try:
            v = abs(evaluate(f, zz))
        except PoleEvaluationError:
            continue
        best = max(best, v)
    return best


# ---------------------------------------------------------------------------
# Norm-bound experiment against a certified Browder sum
# ---------------------------------------------------------------------------


@dataclass
class FunctionalSample:
    function: RationalFunction
    norm_estimate: object  # sup-norm lower bound; exact value when flagged
    norm_is_exact: bool
    delta_value: object = None  # filled by the experiment


@dataclass
class NormBoundVerdict:
    ok: bool
    browder_upper: mpf
    max_ratio: mpf  # empirical lower bound on the functional's operator norm
    witness_count: int
    inflated_norms: int  # witnesses whose sampled norm needed the safety factor


def road_runner_witness(m_family: int, n: int) -> FunctionalSample:
    """Exact witness f_n = r_n / (z - a_n) on the road-runner cheese.

    Its sup-norm over the cheese is exactly 1: the boundary circle of the
    nth deleted disc lies in the cheese (closures are disjoint), where
    |f_n| = 1, and |z - a_n| >= r_n on the whole cheese.
    """
    from .families import road_runner_disc_exact

    a, r = road_runner_disc_exact(m_family, n)
    f = RationalFunction((r,), (-a, Fraction(1)))
    return FunctionalSample(function=f, norm_estimate=Fraction(1), norm_is_exact=True)


def browder_norm_experiment(
    cheese: CheeseSpec,
    a,
    m: int,
    witnesses: list,
    depth: int = 64,
    inflation=Fraction(1, 2**20),
) -> NormBoundVerdict:
    """Check |delta_{a,m}(f)| <= B * ||f|| for every witness.

    B is the certified upper bound on the order-m Browder sum at a
    (realized plus analytic tail; required finite).  Sampled (non-exact)
    norms are inflated by 1 + `inflation` before use, since sampling only
    underestimates sup-norms.  A violation raises TheoremViolationError.
    """
    from .browder import browder_sum

    report = browder_sum(cheese.family, m, a, depth)
    upper = report.certified_upper
    if upper is None or not mp.isfinite(upper):
        raise PreconditionError(
            "browder_norm_experiment: the Browder sum is not certified finite"
        )
    max_ratio = mpf(0)
    inflated = 0
    for w in witnesses:
        w.delta_value = taylor_functional(w.function, a, m)
        norm = to_real(w.norm_estimate)
        if not w.norm_is_exact:
            norm *= 1 + to_real(inflation)
            inflated += 1
        value = abs(to_complex(w.delta_value))
        if norm > 0:
            max_ratio = max(max_ratio, value / norm)
        if value > upper * norm:
            raise TheoremViolationError(
                f"|delta| = {num_str(value, 12)} exceeds B*||f|| = "
                f"{num_str(upper * norm, 12)}; this contradicts the norm bound"
            )
    return NormBoundVerdict(
        ok=True,
        browder_upper=upper,
        max_ratio=max_ratio,
        witness_count=len(witnesses),
        inflated_norms=inflated,
    )
