"""Browder sums with certified truncation tails.

The mth order Browder sum of a disc family at a point a is the sum of
r(D)/s_a(D)^(m+1) over the family's discs together with the unit disc.
Realized prefixes are summed in fixed order at the working precision;
parametric families contribute an analytic bound on the unrealized tail,
so strict comparisons can pair a certified upper bound on one side with a
realized lower bound on the other.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

from mpmath import mp, mpf, mpc, fsum, inf

from .families import DiscFamily, road_runner_disc_exact, sqrt_family
from .geometry import s_dist, sqrt_disc
from .numeric import (
    PreconditionError,
    TINY_DISTANCE,
    num_str,
    strict_less,
    to_complex,
)


@dataclass
class BrowderReport:
    order: int
    point: mpc
    realized_sum: mpf
    tail_bound: mpf | None  # None means truncated-only (no certified tail)
    includes_unit_disc_term: bool
    unit_term: mpf
    depth: int
    realized_count: int

    @property
    def certified_upper(self):
        if self.tail_bound is None:
            return None
        return self.realized_sum + self.tail_bound

    def to_json(self) -> dict:
        return {
            "order": self.order,
            "point": [num_str(self.point.real), num_str(self.point.imag)],
            "realized_sum": num_str(self.realized_sum),
            "tail_bound": None if self.tail_bound is None else num_str(self.tail_bound),
            "includes_unit_disc_term": self.includes_unit_disc_term,
            "unit_term": num_str(self.unit_term),
            "depth": self.depth,
            "realized_count": self.realized_count,
        }


def browder_sum(fam: DiscFamily, m: int, a, depth: int) -> BrowderReport:
    """Realized Browder sum of order m at a over the first `depth` discs.

    The unit-disc term is always included.  Raises if a lies inside a
    realized disc (the sum is only defined for points of the cheese).
    """
    if m < 0:
        raise PreconditionError(f"browder_sum: order must be >= 0, got {m}")
    a = to_complex(a)
    if abs(a) > 1:
        raise PreconditionError("browder_sum: the point must lie in the closed unit disc")
    discs = fam.realize(depth)
    terms = []
    for i, d in enumerate(discs):
        if d.contains(a):
            raise PreconditionError(
                f"browder_sum: point {a} lies inside realized disc #{i} "
                f"D({d.center}, {d.radius})"
            )
        s = s_dist(d, a)
        # cancellation guard: s is a difference of |center - a| and radius
        if s < TINY_DISTANCE * max(abs(d.center - a), d.radius):
            warnings.warn(
                f"browder_sum: boundary distance {num_str(s, 8)} for disc #{i} "
                "is tiny relative to the disc; the term is ill-conditioned"
            )
        terms.append(d.radius / s ** (m + 1))
    s_unit = abs(1 - abs(a))
    unit_term = inf if s_unit == 0 else 1 / s_unit ** (m + 1)
    realized = fsum(terms) + unit_term
    return BrowderReport(
        order=m,
        point=a,
        realized_sum=realized,
        tail_bound=fam.tail_bound(m, a, depth),
        includes_unit_disc_term=True,
        unit_term=unit_term,
        depth=depth,
        realized_count=len(discs),
    )


def road_runner_tail(m_family: int, m_order: int, n_realized: int) -> mpf:
    """Certified bound on the road-runner Browder tail beyond index n_realized.

    Bounds sum_{n > N} r_n / (a_n - r_n)^(k+1) for k = m_order, using
    a_n - r_n >= a_n / 2 (checked at the first tail index; the ratio
    r_n/a_n decreases in n) and then a_n <= 2^-n, which leaves a geometric
    series with ratio 2^-(m_family - k).  Infinite when k >= m_family,
    where the series diverges.
    """
    if m_family < 1:
        raise PreconditionError("road_runner_tail: family exponent must be >= 1")
    if m_order < 0 or n_realized < 0:
        raise PreconditionError("road_runner_tail: order and index must be >= 0")
    n0 = n_realized + 1
    a, r = road_runner_disc_exact(m_family, n0)
    if not a - r >= a / 2:
        raise PreconditionError(f"road_runner_tail: a_n - r_n < a_n/2 at index {n0}")
    k = m_order
    if k >= m_family:
        return inf
    q = mpf(2) ** -(m_family - k)
    return mpf(2) ** (k + 1) * q ** n0 / (1 - q)


@dataclass
class DecreaseVerdict:
    ok: bool
    certified: bool
    margin: mpf
    left_realized: mpf
    left_tail: mpf | None
    right_realized: mpf
    termwise_ok: bool
    min_term_margin: mpf


def sqrt_decrease_check(fam: DiscFamily, m: int, depth: int) -> DecreaseVerdict:
    """Strict decrease of the Browder sum under the square-root transform.

    Compares a certified upper bound on the order-2m sum of the transformed
    family against the realized (lower-bound) order-m sum of the source.
    Each source term r/s^(m+1) is also checked against its two transformed
    terms, which are each strictly below r/(2 s^(m+1)); term-wise strictness
    is what makes the sum comparison strict.
    """
    if m < 1:
        raise PreconditionError("sqrt_decrease_check: m must be >= 1")
    src = fam.realize(depth)
    if not src:
        raise PreconditionError("sqrt_decrease_check: the family must be nonempty")
    realized = DiscFamily(tuple(src), label=fam.label)
    right = browder_sum(realized, m, 0, depth=len(src))

    transformed = sqrt_family(realized)
    left = browder_sum(transformed, 2 * m, 0, depth=len(transformed.finite))

    # the source tail at order m dominates the transformed tail at order 2m
    left_tail = fam.tail_bound(m, 0, depth)

    termwise_ok = True
    min_margin = inf
    for d in src:
        pair = sqrt_disc(d)
        s = pair.s
        lhs = 2 * pair.delta1.radius / s_dist(pair.delta1, 0) ** (2 * m + 1)
        rhs = d.radius / s ** (m + 1)
        # ratio form so strictness is judged relative to the term's own size
        ok_t, margin_t = strict_less(lhs / rhs, 1)
        termwise_ok = termwise_ok and ok_t
        min_margin = min(min_margin, margin_t)

    # a divergent tail bound is vacuous; fall back to the realized-only verdict
    certified = left_tail is not None and bool(mp.isfinite(left_tail))
    upper = left.realized_sum + (left_tail if certified else mpf(0))
    ok, margin = strict_less(upper, right.realized_sum)
    return DecreaseVerdict(
        ok=ok and termwise_ok,
        certified=certified,
        margin=margin,
        left_realized=left.realized_sum,
        left_tail=left_tail,
        right_realized=right.realized_sum,
        termwise_ok=termwise_ok,
        min_term_margin=min_margin,
    )


@dataclass
class MonotoneVerdict:
    ok: bool
    per_order: dict  # k -> (B_k realized, 2^(m-k) * B_m realized, ok)


def monotone_order_check(fam: DiscFamily, m: int, a, depth: int) -> MonotoneVerdict:
    """Order monotonicity on realized terms: B_k <= 2^(m-k) B_m for k <= m.

    Valid because every disc meets the unit disc, so s_a(D) <= 2 for a in
    the closed unit disc; checked term-wise, including the unit-disc term.
    """
    if m < 1:
        raise PreconditionError("monotone_order_check: m must be >= 1")
    a = to_complex(a)
    reports = {k: browder_sum(fam, k, a, depth) for k in range(m + 1)}
    eps = mpf(2) ** -(mp.prec // 2)
    per_order = {}
    ok_all = True
    # term-wise: r/s^(k+1) <= 2^(m-k) r/s^(m+1)  iff  s^(m-k) <= 2^(m-k)
    discs = fam.realize(depth)
    for k in range(m + 1):
        for d in discs:
            s = s_dist(d, a)
            lhs = d.radius / s ** (k + 1)
            rhs = mpf(2) ** (m - k) * d.radius / s ** (m + 1)
            if lhs > rhs * (1 + eps):
                ok_all = False
        bk = reports[k].realized_sum
        bound = mpf(2) ** (m - k) * reports[m].realized_sum
        ok_k = bk <= bound * (1 + eps)
        per_order[k] = (bk, bound, ok_k)
        ok_all = ok_all and ok_k
    return MonotoneVerdict(ok=ok_all, per_order=per_order)


@dataclass
class GroupEstimate:
    n: int
    disc_count: int
    group_sum: mpf
    majorant: mpf
    min_boundary_distance: mpf | None
    ok: bool


@dataclass
class InfiniteOrderVerdict:
    ok: bool
    m: int
    groups: list
    total: mpf
    majorant_total: mpf


def infinite_order_estimate(
    n_max: int, m: int, count: int = 32, seed: int = 0
) -> InfiniteOrderVerdict:
    """Grouped majorant check for the infinite-order Browder construction.

    For each n, an annulus-filtered radius-budgeted family (total radius
    below 1/(4 n^n), discs meeting 1/n <= |z| <= 1) has every boundary
    distance to the origin at least 1/(2n), so its order-m group sum is
    bounded by (1/(4 n^n)) (2n)^(m+1) = 2^(m-1) / n^(n-(m+1)).
    """
    from .families import annulus_filter, synthetic_budget_family

    if n_max < 1 or m < 1:
        raise PreconditionError("infinite_order_estimate: n_max and m must be >= 1")
    groups = []
    total = mpf(0)
    majorant_total = mpf(0)
    ok_all = True
    for n in range(1, n_max + 1):
        fam = annulus_filter(synthetic_budget_family(n, count, seed), n)
        floor = mpf(1) / (2 * n)
        min_s = None
        group_sum = mpf(0)
        ok = True
        for d in fam.finite:
            s = s_dist(d, 0)
            min_s = s if min_s is None else min(min_s, s)
            if s < floor:
                # would contradict the construction's radius/annulus bookkeeping
                ok = False
            group_sum += d.radius / s ** (m + 1)
        majorant = mpf(2) ** (m - 1) / mpf(n) ** (n - (m + 1))
        ok = ok and group_sum <= majorant
        groups.append(
            GroupEstimate(
                n=n,
                disc_count=len(fam.finite),
                group_sum=group_sum,
                majorant=majorant,
                min_boundary_distance=min_s,
                ok=ok,
            )
        )
        total += group_sum
        majorant_total += majorant
        ok_all = ok_all and ok
    return InfiniteOrderVerdict(
        ok=ok_all, m=m, groups=groups, total=total, majorant_total=majorant_total
    )
