"""Disc families and Swiss cheeses.

A family is a finite list of discs plus an optional parametric tail (a
closed-form rule index -> disc).  Infinite families are never materialized:
every consumer realizes a finite prefix and pairs it with an analytic tail
bound, or marks its result truncated-only.  A cheese is the closed unit
disc minus the union of the family's discs, carried as a membership
predicate.
"""

from __future__ import annotations

import json
import random
import warnings
from dataclasses import dataclass
from fractions import Fraction

from mpmath import mpf, mpc

from .geometry import Disc, affine_disc, sqrt_disc
from .numeric import PreconditionError, num_str, to_complex, to_real


@dataclass(frozen=True)
class ParametricTail:
    """Closed-form rule n -> Disc for the infinite part of a family."""

    generator: str
    params: dict
    start: int = 1

    def disc(self, n: int) -> Disc:
        try:
            gen = _GENERATORS[self.generator]
        except KeyError:
            raise PreconditionError(f"unknown tail generator {self.generator!r}")
        return gen(self.params, n)


@dataclass(frozen=True)
class DiscFamily:
    finite: tuple = ()
    tail: ParametricTail | None = None
    label: str = ""

    def __post_init__(self):
        kept = []
        for d in self.finite:
            if d.intersects_unit_disc():
                kept.append(d)
            else:
                warnings.warn(
                    f"dropping disc D({d.center}, {d.radius}): "
                    "it does not intersect the open unit disc"
                )
        object.__setattr__(self, "finite", tuple(kept))

    def realize(self, depth: int) -> list[Disc]:
        """The first `depth` discs: the finite list, then the tail rule."""
        discs = list(self.finite[:depth])
        if self.tail is not None:
            need = depth - len(discs)
            for k in range(max(0, need)):
                discs.append(self.tail.disc(self.tail.start + k))
        return discs

    def last_realized_index(self, depth: int) -> int | None:
        """Largest tail index produced by realize(depth); None if no tail used."""
        if self.tail is None:
            return None
        need = depth - len(self.finite)
        if need <= 0:
            return self.tail.start - 1
        return self.tail.start + need - 1

    def tail_bound(self, order: int, a, depth: int):
        """Certified upper bound on the unrealized Browder terms at a.

        Returns an mpf (0 for purely finite families once exhausted), or
        None when no analytic bound is available (truncated-only).
        """
        if self.tail is None:
            return mpf(0) if depth >= len(self.finite) else None
        a = to_complex(a)
        if self.tail.generator == "road_runner" and a == 0:
            from .browder import road_runner_tail

            n_last = self.last_realized_index(depth)
            return road_runner_tail(self.tail.params["m"], order, max(n_last, 0))
        return None

    def radius_tail_bound(self, depth: int):
        """Certified upper bound on the sum of unrealized radii, or None."""
        if self.tail is None:
            return mpf(0) if depth >= len(self.finite) else None
        if self.tail.generator == "road_runner":
            m = self.tail.params["m"]
            n_last = max(self.last_realized_index(depth), 0)
            # r_n = a_n^m / 2^n <= 2^-n(m+1); geometric tail
            q = mpf(2) ** -(m + 1)
            return q ** (n_last + 1) / (1 - q)
        return None


@dataclass(frozen=True)
class CheeseSpec:
    """Closed unit disc minus the discs of a family."""

    family: DiscFamily
    label: str = ""

    def contains(self, z, depth: int = 128) -> bool:
        z = to_complex(z)
        if abs(z) > 1:
            return False
        return not any(d.contains(z) for d in self.family.realize(depth))


def sqrt_membership(z, cheese: CheeseSpec, depth: int = 128) -> bool:
    """True iff z^2 lies in the cheese (membership in the square-root set)."""
    z = to_complex(z)
    return cheese.contains(z * z, depth)


# ---------------------------------------------------------------------------
# Generators
# ---------------------------------------------------------------------------


def road_runner_disc_exact(m: int, n: int) -> tuple[Fraction, Fraction]:
    """Exact center/radius of the nth road-runner disc: a_n = 1/(2^n n), r_n = a_n^m / 2^n."""
    a = Fraction(1, 2**n * n)
    r = a**m * Fraction(1, 2**n)
    return a, r


def _road_runner_gen(params: dict, n: int) -> Disc:
    a, r = road_runner_disc_exact(int(params["m"]), n)
    return Disc(a, r)


_GENERATORS = {"road_runner": _road_runner_gen}


def road_runner(m: int) -> DiscFamily:
    """Road-runner family: discs on the positive real axis marching to 0.

    Centers a_n = 1/(2^n n) and radii r_n = a_n^m / 2^n.  Disjointness of
    the realized closures is verified (adjacency along the axis) rather
    than assumed.
    """
    if m < 1:
        raise PreconditionError(f"road_runner: m must be >= 1, got {m}")
    fam = DiscFamily(tail=ParametricTail("road_runner", {"m": int(m)}), label=f"road_runner(m={m})")
    # centers strictly decrease, so adjacent separation implies pairwise disjointness
    for n in range(1, 64):
        a1, r1 = road_runner_disc_exact(m, n)
        a2, r2 = road_runner_disc_exact(m, n + 1)
        if not a2 + r2 < a1 - r1:
            raise PreconditionError(f"road_runner: closures of discs {n},{n + 1} are not disjoint")
    return fam


def synthetic_budget_family(n: int, count: int, seed: int) -> DiscFamily:
    """Deterministic pseudo-random family with total radius < 1/(4 n^n).

    Stand-in for externally supplied radius-budgeted families: `count`
    discs meeting the open unit disc, centers at modulus in (1/n, 1), radii
    summing strictly below the budget.  Keyed by (n, count, seed) only.
    """
    if n < 1 or count < 1:
        raise PreconditionError("synthetic_budget_family: n and count must be >= 1")
    budget = mpf(1) / (4 * mpf(n) ** n)
    discs = []
    lo = 1 / mpf(n)
    for i in range(count):
        rng = random.Random(f"synthetic_budget/{seed}/{n}/{i}")
        # radii r_i < budget * 2^-(i+1); total < budget/ (and strictly below it)
        r = budget * mpf(2) ** -(i + 1) * mpf(rng.uniform(0.5, 0.99))
        mag = lo + (1 - float(lo)) * mpf(rng.uniform(0.05, 0.95))
        theta = mpf(rng.uniform(0.0, 6.283185307179586))
        center = mag * mpc(_cos(theta), _sin(theta))
        discs.append(Disc(center, r))
    return DiscFamily(tuple(discs), label=f"synthetic_budget(n={n},count={count},seed={seed})")


def _cos(x):
    from mpmath import cos

    return cos(x)


def _sin(x):
    from mpmath import sin

    return sin(x)


# ---------------------------------------------------------------------------
# Transforms
# ---------------------------------------------------------------------------


def sqrt_family(fam: DiscFamily) -> DiscFamily:
    """Square-root transform: each disc is replaced by its two covering discs.

    Requires a realized (finite) family whose discs all keep the origin
    strictly outside their closures.  The output cheese contains the origin
    and is included in the square root of the source cheese.
    """
    if fam.tail is not None:
        raise PreconditionError("sqrt_family: realize the parametric tail first")
    out = []
    for d in fam.finite:
        pair = sqrt_disc(d)  # raises if the origin touches the closure
        out.append(pair.delta1)
        out.append(pair.delta2)
    return DiscFamily(tuple(out), label=f"sqrt({fam.label})")


def annulus_filter(fam: DiscFamily, n: int) -> DiscFamily:
    """Keep the discs meeting the annulus 1/n <= |z| <= 1."""
    if n < 1:
        raise PreconditionError(f"annulus_filter: n must be >= 1, got {n}")
    if fam.tail is not None:
        raise PreconditionError("annulus_filter: realize the parametric tail first")
    inner = mpf(1) / n
    kept = tuple(
        d
        for d in fam.finite
        if abs(d.center) + d.radius >= inner and abs(d.center) - d.radius <= 1
    )
    return DiscFamily(kept, label=f"annulus_filter({fam.label}, n={n})")


def merge_families(fams: list[DiscFamily], label: str = "") -> DiscFamily:
    """Concatenate families; the merged cheese is the intersection of the cheeses.

    Discs are kept as a multiset (no deduplication): Browder sums over the
    merged family then over-count at worst, so upper bounds stay valid.
    """
    finite = []
    tails = []
    for f in fams:
        finite.extend(f.finite)
        if f.tail is not None:
            tails.append(f.tail)
    if len(tails) > 1:
        raise PreconditionError("merge_families: at most one parametric tail is supported")
    tail = tails[0] if tails else None
    if not label:
        label = " + ".join(f.label or "?" for f in fams) or "empty"
    return DiscFamily(tuple(finite), tail=tail, label=label)


def affine_family(fam: DiscFamily, a, rho, depth: int | None = None) -> DiscFamily:
    """Elementwise image under z -> a + rho*z (rho > 0)."""
    rho = to_real(rho)
    if not rho > 0:
        raise PreconditionError(f"affine_family: rho must be positive, got {rho}")
    if fam.tail is not None:
        if depth is None:
            raise PreconditionError("affine_family: give a depth to realize the tail")
        discs = fam.realize(depth)
    else:
        discs = list(fam.finite)
    mapped = tuple(affine_disc(d, a, rho) for d in discs)
    return DiscFamily(mapped, label=f"affine({fam.label}, a={num_str(to_complex(a), 8)}, rho={num_str(rho, 8)})")


def check_disjoint_copies(copies: list[tuple]):
    """Verify the closed discs a_i + rho_i * unit-disc are pairwise disjoint.

    `copies` is a list of (a, rho).  Returns (ok, violating_pair) where the
    pair is None on success and (i, j) for the first failing pair.
    """
    pts = [(to_complex(a), to_real(rho)) for a, rho in copies]
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            if not abs(pts[i][0] - pts[j][0]) > pts[i][1] + pts[j][1]:
                return False, (i, j)
    return True, None


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------


@dataclass
class CheeseReport:
    label: str
    realized_count: int
    total_radius_realized: mpf
    radius_tail_bound: mpf | None
    origin_in_cheese: bool
    all_intersect_unit_disc: bool
    disjoint_closures: bool | None
    radius_sum_below_one: bool | None


def validate_cheese(spec: CheeseSpec, realize_n: int) -> CheeseReport:
    """Desk-scale validity checks for a cheese.

    Reports realized radius totals (with certified tail when available),
    origin membership, the unit-disc intersection convention, and, for
    road-runner inputs, disjointness of the realized closures.  Makes no
    claim about empty interior or nontriviality of the function algebra.
    """
    discs = spec.family.realize(realize_n)
    total = mpf(0)
    for d in discs:
        total += d.radius
    tail = spec.family.radius_tail_bound(realize_n)

    origin_ok = spec.contains(0, depth=realize_n)
    intersect_ok = all(d.intersects_unit_disc() for d in discs)

    disjoint = None
    if spec.family.tail is not None and spec.family.tail.generator == "road_runner":
        disjoint = True
        ordered = sorted(discs, key=lambda d: -d.center.real)
        for d1, d2 in zip(ordered, ordered[1:]):
            if not d2.center.real + d2.radius < d1.center.real - d1.radius:
                disjoint = False
                break

    below_one = None
    if tail is not None:
        below_one = bool(total + tail < 1)
    return CheeseReport(
        label=spec.label or spec.family.label,
        realized_count=len(discs),
        total_radius_realized=total,
        radius_tail_bound=tail,
        origin_in_cheese=origin_ok,
        all_intersect_unit_disc=intersect_ok,
        disjoint_closures=disjoint,
        radius_sum_below_one=below_one,
    )


# ---------------------------------------------------------------------------
# JSON family-spec format
#
# {"label": str,
#  "finite": [{"cx": <num|str>, "cy": <num|str>, "r": <num|str>}, ...],
#  "parametric": {"id": "road_runner"|"synthetic_budget",
#                 "params": {...}, "start": int} | null}
#
# Numbers are written as decimal strings so the round trip is lossless at
# the working precision; plain JSON numbers are accepted on input.
# ---------------------------------------------------------------------------


def family_to_json(fam: DiscFamily) -> dict:
    return {
        "label": fam.label,
        "finite": [
            {
                "cx": num_str(d.center.real),
                "cy": num_str(d.center.imag),
                "r": num_str(d.radius),
            }
            for d in fam.finite
        ],
        "parametric": (
            None
            if fam.tail is None
            else {
                "id": fam.tail.generator,
                "params": dict(fam.tail.params),
                "start": fam.tail.start,
            }
        ),
    }


def family_from_json(obj: dict) -> DiscFamily:
    try:
        finite = tuple(
            Disc(mpc(mpf(str(e["cx"])), mpf(str(e["cy"]))), mpf(str(e["r"])))
            for e in obj.get("finite", [])
        )
        par = obj.get("parametric")
    except (KeyError, TypeError, ValueError) as exc:
        raise PreconditionError(f"malformed family spec: {exc}") from exc
    tail = None
    if par is not None:
        gen = par.get("id")
        params = par.get("params", {})
        start = int(par.get("start", 1))
        if gen == "road_runner":
            tail = ParametricTail("road_runner", {"m": int(params["m"])}, start)
        elif gen == "synthetic_budget":
            # finite generator: expand eagerly
            extra = synthetic_budget_family(
                int(params["n"]), int(params["count"]), int(params["seed"])
            )
            finite = finite + extra.finite
        else:
            raise PreconditionError(f"unknown parametric generator id {gen!r}")
    return DiscFamily(finite, tail=tail, label=obj.get("label", ""))


def save_family(fam: DiscFamily, path) -> None:
    with open(path, "w") as fh:
        json.dump(family_to_json(fam), fh, indent=2)
        fh.write("\n")


def load_family(path) -> DiscFamily:
    with open(path) as fh:
        return family_from_json(json.load(fh))
