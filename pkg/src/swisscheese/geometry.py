"""Disc primitives: boundary distances, the square-root disc transform, affine maps.

The square-root transform takes an open disc whose closure avoids the
origin and produces the two symmetric discs that cover the preimage of the
disc under z -> z^2, together with the quantitative data (the distance
from the origin to the source boundary, and the strict radius bounds)
that the rest of the package certifies.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from mpmath import mp, mpf, mpc, sqrt as msqrt

from .numeric import PreconditionError, to_complex, to_real, strict_less


@dataclass(frozen=True)
class Disc:
    """Open disc D(center, radius) in the plane."""

    center: mpc
    radius: mpf

    def __post_init__(self):
        object.__setattr__(self, "center", to_complex(self.center))
        object.__setattr__(self, "radius", to_real(self.radius))
        if not self.radius > 0:
            raise PreconditionError(f"disc radius must be positive, got {self.radius}")

    def contains(self, z) -> bool:
        return abs(to_complex(z) - self.center) < self.radius

    def closure_contains(self, z) -> bool:
        return abs(to_complex(z) - self.center) <= self.radius

    def intersects_unit_disc(self) -> bool:
        return abs(self.center) - self.radius < 1

    def as_floats(self) -> tuple[complex, float]:
        return complex(self.center), float(self.radius)


@dataclass(frozen=True)
class SqrtDiscPair:
    """The two discs covering the square root of a source disc.

    `s` is the distance from the origin to the boundary of the *source*
    disc; both output discs sit at the two square roots of the source
    center and have equal radius.
    """

    delta1: Disc
    delta2: Disc
    s: mpf


def s_dist(d: Disc, a) -> mpf:
    """Distance from the point a to the boundary circle of d."""
    a = to_complex(a)
    return abs(abs(d.center - a) - d.radius)


def sqrt_disc(d: Disc) -> SqrtDiscPair:
    """Square-root transform of a disc whose closure excludes the origin.

    Requires 0 < radius < |center|.  With s = |center| - radius, the output
    discs are D(+/-sqrt(center), sqrt(|center|) - sqrt(s)); they cover the
    preimage of d under z -> z^2, their boundary distance to the origin is
    sqrt(s), and their radius r/(sqrt(|center|)+sqrt(s)) is strictly below
    r/(2 sqrt(s)).
    """
    mag = abs(d.center)
    if mag == 0:
        raise PreconditionError("sqrt_disc: center must be nonzero")
    if not d.radius < mag:
        raise PreconditionError(
            f"sqrt_disc: requires radius < |center| (got r={d.radius}, |a|={mag})"
        )
    s = mag - d.radius
    root = msqrt(d.center)  # principal square root; the pair carries both signs
    radius = d.radius / (msqrt(mag) + msqrt(s))
    return SqrtDiscPair(
        delta1=Disc(root, radius),
        delta2=Disc(-root, radius),
        s=s,
    )


def sqrt_disc_inequalities(d: Disc, pair: SqrtDiscPair, max_order: int = 8):
    """Margins for the strict bounds satisfied by a square-root disc pair.

    Returns a dict with the margin of r_i < r/(2 sqrt(s)) and, for each
    order 1..max_order, the margin of r_i / sqrt(s)^(2m+1) < r/(2 s^(m+1)).
    """
    s = pair.s
    r = d.radius
    ri = pair.delta1.radius
    root_s = msqrt(s)
    ok_b, margin_b = strict_less(ri, r / (2 * root_s))
    out = {"b": (ok_b, margin_b), "c": {}}
    for m in range(1, max_order + 1):
        lhs = ri / root_s ** (2 * m + 1)
        rhs = r / (2 * s ** (m + 1))
        out["c"][m] = strict_less(lhs, rhs)
    return out


def affine_disc(d: Disc, a, rho) -> Disc:
    """Image of d under z -> a + rho*z with rho > 0."""
    rho = to_real(rho)
    if not rho > 0:
        raise PreconditionError(f"affine_disc: rho must be positive, got {rho}")
    a = to_complex(a)
    return Disc(a + rho * d.center, rho * d.radius)


# ---------------------------------------------------------------------------
# Bulk samplers for the inclusion sqrt(Delta) subseteq Delta_1 u Delta_2.
# These run in float64 (numpy) for throughput; any near-boundary point is
# re-checked in mpmath before it may count as a violation.
# ---------------------------------------------------------------------------


def sample_sqrt_points(d: Disc, n: int, rng: np.random.Generator) -> np.ndarray:
    """n points w with w^2 in d, covering both sheets of the square root.

    Draws z uniformly from d and takes a random square root of each z.
    """
    c, r = d.as_floats()
    u = rng.random(n)
    theta = rng.random(n) * 2.0 * np.pi
    z = c + r * np.sqrt(u) * np.exp(1j * theta)
    w = np.sqrt(z)
    signs = np.where(rng.random(n) < 0.5, 1.0, -1.0)
    return w * signs


def sample_sqrt_points_rejection(
    d: Disc, n: int, rng: np.random.Generator, max_batches: int = 10_000
) -> np.ndarray:
    """n points of sqrt(d) by rejection from the enclosing annulus.

    The annulus sqrt(s) < |w| < sqrt(|a|+r) provably contains sqrt(d); we
    draw uniformly from it and keep the points whose square lands in d.
    """
    c, r = d.as_floats()
    mag = abs(c)
    lo2 = mag - r  # = s
    hi2 = mag + r
    kept: list[np.ndarray] = []
    total = 0
    batch = max(4 * n, 4096)
    for _ in range(max_batches):
        rad = np.sqrt(rng.random(batch) * (hi2 - lo2) + lo2)
        theta = rng.random(batch) * 2.0 * np.pi
        w = rad * np.exp(1j * theta)
        mask = np.abs(w * w - c) < r
        if mask.any():
            kept.append(w[mask])
            total += int(mask.sum())
        if total >= n:
            break
    if total < n:
        raise RuntimeError("rejection sampler failed to accumulate enough points")
    return np.concatenate(kept)[:n]


def check_sqrt_inclusion(
    d: Disc, pair: SqrtDiscPair, n: int, seed: int, rejection: bool = False
) -> tuple[int, int]:
    """Sample n points of sqrt(d) and count those outside delta1 u delta2.

    Candidate violations found in float64 are re-verified in mpmath so that
    float rounding near a boundary cannot produce a spurious violation.
    Returns (checked, violations).
    """
    rng = np.random.default_rng(seed)
    sampler = sample_sqrt_points_rejection if rejection else sample_sqrt_points
    w = sampler(d, n, rng)
    c1, r1 = pair.delta1.as_floats()
    c2, r2 = pair.delta2.as_floats()
    inside = (np.abs(w - c1) < r1) | (np.abs(w - c2) < r2)
    suspects = w[~inside]
    violations = 0
    for wv in suspects:
        with mp.workprec(2 * mp.prec):
            wz = mpc(complex(wv))
            # only points that truly map into d count
            if abs(wz * wz - d.center) >= d.radius:
                continue
            if not (pair.delta1.contains(wz) or pair.delta2.contains(wz)):
                violations += 1
    return len(w), violations
