"""Orchestrated property suites, certificates, and rendering.

Each suite re-checks one cluster of quantitative claims (square-root disc
bounds, road-runner identities, strict Browder decrease, descent identity,
norm bounds, grouped majorants, end-to-end pipelines) and emits one
certificate per constituent check.  Certificates are reproducible: with a
fixed seed and precision the JSON is byte-identical apart from the
timestamp.
"""

from __future__ import annotations

import csv
import hashlib
import json
import random
from dataclasses import dataclass
from datetime import datetime, timezone
from fractions import Fraction
from importlib import resources

import numpy as np
from mpmath import mp, mpf, mpc, sqrt as msqrt

from .browder import (
    browder_sum,
    infinite_order_estimate,
    monotone_order_check,
    sqrt_decrease_check,
)
from .families import (
    CheeseSpec,
    DiscFamily,
    annulus_filter,
    check_disjoint_copies,
    affine_family,
    family_from_json,
    merge_families,
    road_runner,
    sqrt_family,
    synthetic_budget_family,
    validate_cheese,
)
from .geometry import Disc, check_sqrt_inclusion, s_dist, sqrt_disc, sqrt_disc_inequalities
from .numeric import PreconditionError, num_str, rel_close, strict_less, to_real
from .rational import (
    FunctionalSample,
    RationalFunction,
    browder_norm_experiment,
    delta_descent_check,
    road_runner_witness,
    taylor_functional,
)

SUITES = (
    "sqrt_disc",
    "sqrt_cheese",
    "road_runner",
    "infinite_order",
    "descent",
    "norm_bound",
    "pipeline_main_theorem",
    "pipeline_m_to_infinity",
)


@dataclass
class Certificate:
    claim_id: str
    inputs_digest: str
    verdict: str  # "pass" | "fail" | "truncated-only"
    margin: str  # decimal string, "" when not applicable
    precision_bits: int
    seed: int
    timestamp: str

    def to_dict(self) -> dict:
        return {
            "claim_id": self.claim_id,
            "inputs_digest": self.inputs_digest,
            "verdict": self.verdict,
            "margin": self.margin,
            "precision_bits": self.precision_bits,
            "seed": self.seed,
            "timestamp": self.timestamp,
        }


def _digest(suite_id: str, config: dict) -> str:
    blob = json.dumps({"suite": suite_id, "config": config}, sort_keys=True, default=str)
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


class _Emitter:
    def __init__(self, suite_id: str, config: dict):
        self.digest = _digest(suite_id, config)
        self.seed = int(config.get("seed", 0))
        self.timestamp = datetime.now(timezone.utc).isoformat()
        self.certs: list[Certificate] = []

    def emit(self, claim_id: str, ok: bool, margin=None, truncated: bool = False):
        if truncated:
            verdict = "truncated-only"
        else:
            verdict = "pass" if ok else "fail"
        self.certs.append(
            Certificate(
                claim_id=claim_id,
                inputs_digest=self.digest,
                verdict=verdict,
                margin="" if margin is None else num_str(margin, 24),
                precision_bits=mp.prec,
                seed=self.seed,
                timestamp=self.timestamp,
            )
        )


def toy_seed_family() -> DiscFamily:
    """Bundled stand-in seed family for pipeline smoke tests.

    Not derived from any construction with proven ideal properties; it only
    exercises the square-root iteration step.
    """
    data = resources.files("swisscheese.data").joinpath("toy_seed_family.json").read_text()
    return family_from_json(json.loads(data))


def _random_valid_disc(rng: random.Random, ratio_lo=0.05, ratio_hi=0.9) -> Disc:
    """Random disc with 0 < r < |center| that meets the open unit disc."""
    from mpmath import cos, sin

    mag = mpf(rng.uniform(0.15, 1.2))
    theta = mpf(rng.uniform(0.0, 6.283185307179586))
    center = mag * mpc(cos(theta), sin(theta))
    r = mpf(rng.uniform(ratio_lo, ratio_hi)) * mag
    if mag - r >= 1:  # must meet the open unit disc
        r = mag - mpf("0.999")
    return Disc(center, r)


# ---------------------------------------------------------------------------
# Suites
# ---------------------------------------------------------------------------


def _suite_sqrt_disc(config: dict, em: _Emitter) -> None:
    trials = int(config.get("trials", 100))
    samples = int(config.get("samples", 100_000))
    seed = int(config.get("seed", 0))
    rng = random.Random(f"sqrt_disc/{seed}")
    for t in range(trials):
        d = _random_valid_disc(rng)
        pair = sqrt_disc(d)
        ok = True
        worst = None
        # (a) boundary distance of each output disc equals sqrt(s)
        root_s = msqrt(pair.s)
        ok &= rel_close(s_dist(pair.delta1, 0), root_s)
        ok &= rel_close(s_dist(pair.delta2, 0), root_s)
        # (b) radius formula and strict bound, (c) strict bound for m = 1..8
        ok &= rel_close(pair.delta1.radius, d.radius / (msqrt(abs(d.center)) + root_s))
        ineq = sqrt_disc_inequalities(d, pair, max_order=8)
        ok_b, margin_b = ineq["b"]
        ok &= ok_b
        worst = margin_b
        for m_ord, (ok_c, margin_c) in ineq["c"].items():
            ok &= ok_c
            worst = min(worst, margin_c)
        checked, violations = check_sqrt_inclusion(d, pair, samples, seed=seed * 1_000_003 + t)
        ok &= checked >= samples and violations == 0
        em.emit(f"sqrt-disc/trial-{t:03d}", bool(ok), worst)


def _suite_sqrt_cheese(config: dict, em: _Emitter) -> None:
    seed = int(config.get("seed", 0))
    depth = int(config.get("depth", 10))
    samples = int(config.get("samples", 10_000))
    rng = random.Random(f"sqrt_cheese/{seed}")

    base = DiscFamily(tuple(road_runner(2).realize(depth)), label="road_runner(2) prefix")
    extra = DiscFamily(
        tuple(_random_valid_disc(rng) for _ in range(6)), label="random valid discs"
    )
    for fam in (base, extra):
        src = fam.finite
        out = sqrt_family(fam)
        em.emit(f"sqrt-cheese/count-doubles[{fam.label}]", len(out.finite) == 2 * len(src))

        sym_ok = True
        for i in range(0, len(out.finite), 2):
            d1, d2 = out.finite[i], out.finite[i + 1]
            sym_ok &= d2.center == -d1.center and d2.radius == d1.radius
        em.emit(f"sqrt-cheese/pair-symmetry[{fam.label}]", bool(sym_ok))

        cover_ok = True
        for i, d in enumerate(src):
            pair = sqrt_disc(d)
            checked, violations = check_sqrt_inclusion(
                d, pair, max(1000, samples // max(1, len(src))), seed=seed + i
            )
            cover_ok &= violations == 0
        em.emit(f"sqrt-cheese/cover[{fam.label}]", bool(cover_ok))

        # subset property: z in the sqrt cheese implies z^2 in the source cheese
        nprng = np.random.default_rng(seed + 17)
        pts = []
        while sum(len(p) for p in pts) < samples:
            w = nprng.uniform(-1, 1, 4 * samples) + 1j * nprng.uniform(-1, 1, 4 * samples)
            w = w[np.abs(w) <= 1]
            for d in out.finite:
                c, r = d.as_floats()
                w = w[np.abs(w - c) >= r]
            pts.append(w)
        w = np.concatenate(pts)[:samples]
        z2 = w * w
        bad = np.zeros(len(z2), dtype=bool)
        for d in src:
            c, r = d.as_floats()
            bad |= np.abs(z2 - c) < r
        subset_ok = True
        for wz in w[bad]:  # float suspects re-verified at working precision
            wz = mpc(complex(wz))
            if any(d.contains(wz) for d in out.finite) or abs(wz) > 1:
                continue
            if any(d.contains(wz * wz) for d in src):
                subset_ok = False
        em.emit(f"sqrt-cheese/subset[{fam.label}]", bool(subset_ok))

        em.emit(
            f"sqrt-cheese/origin-membership[{fam.label}]",
            CheeseSpec(out).contains(0, depth=len(out.finite)),
        )

    # strict Browder decrease under the transform, certified upper vs realized lower;
    # the comparand is the finite depth-20 prefix so both sides are fully certified
    fam_rr = DiscFamily(tuple(road_runner(2).realize(20)), label="road_runner(2)[:20]")
    for m in (1, 2, 3):
        v = sqrt_decrease_check(fam_rr, m, depth=20)
        em.emit(
            f"sqrt-cheese/browder-decrease[road_runner(2),m={m}]",
            v.ok and v.certified,
            v.margin,
        )
    trials = int(config.get("trials", 50))
    for t in range(trials):
        fam_t = DiscFamily(
            tuple(_random_valid_disc(rng) for _ in range(4)), label=f"random[{t}]"
        )
        for m in (1, 2, 3):
            v = sqrt_decrease_check(fam_t, m, depth=len(fam_t.finite))
            em.emit(
                f"sqrt-cheese/browder-decrease[random-{t:02d},m={m}]",
                v.ok and v.certified,
                v.margin,
            )


def _suite_road_runner(config: dict, em: _Emitter) -> None:
    m = int(config.get("m", 2))
    depth = int(config.get("depth", 30))
    fam = road_runner(m)

    delta_ok = True
    for n in range(1, 21):
        w = road_runner_witness(m, n)
        value = taylor_functional(w.function, 0, m)
        delta_ok &= abs(value) == Fraction(n)
        delta_ok &= w.norm_is_exact and w.norm_estimate == 1
    em.emit(f"road-runner/delta-identity[m={m}]", delta_ok)

    report = validate_cheese(CheeseSpec(fam, label=fam.label), realize_n=50)
    em.emit("road-runner/disjoint-closures", bool(report.disjoint_closures))
    em.emit("road-runner/origin-membership", report.origin_in_cheese)

    rep = browder_sum(fam, m - 1, 0, depth)
    closed_form = 1 + mpf(2) ** (m - 1) - mpf(2) ** (m - 1 - depth)
    ok, margin = strict_less(rep.realized_sum, closed_form)
    em.emit(f"road-runner/browder-sum-bound[m={m}]", ok and rep.tail_bound is not None, margin)

    mono = monotone_order_check(fam, m - 1, 0, depth)
    em.emit(f"road-runner/order-monotonicity[m={m}]", mono.ok)


def _suite_infinite_order(config: dict, em: _Emitter) -> None:
    m = int(config.get("m", 2))
    n_max = int(config.get("n_max", 10))
    count = int(config.get("count", 32))
    seed = int(config.get("seed", 0))
    verdict = infinite_order_estimate(n_max, m, count=count, seed=seed)
    for g in verdict.groups:
        em.emit(
            f"infinite-order/group[n={g.n},m={m}]",
            g.ok,
            g.majorant - g.group_sum,
        )
    em.emit(f"infinite-order/total[m={m}]", verdict.ok, verdict.majorant_total - verdict.total)


def _random_rational(rng: random.Random, n_poles: int = 4, deg_num: int = 4) -> RationalFunction:
    """Random rational function with poles bounded away from the origin."""
    from mpmath import cos, sin

    num = tuple(mpc(rng.uniform(-1, 1), rng.uniform(-1, 1)) for _ in range(deg_num + 1))
    den = (mpc(1),)
    from .rational import poly_mul

    for _ in range(n_poles):
        mag = mpf(rng.uniform(0.3, 2.0))
        th = mpf(rng.uniform(0.0, 6.283185307179586))
        p = mag * mpc(cos(th), sin(th))
        den = poly_mul(den, (-p, mpc(1)))
    return RationalFunction(num, den)


def _suite_descent(config: dict, em: _Emitter) -> None:
    trials = int(config.get("trials", 200))
    seed = int(config.get("seed", 0))
    tol = Fraction(1, 2**40)
    rng = random.Random(f"descent/{seed}")
    ok_all = True
    worst = mpf(0)
    for t in range(trials):
        f = _random_rational(rng)
        m = 1 + t % 3
        verdict = delta_descent_check(f, m, tol=tol)
        ok_all &= verdict.ok
        worst = max(worst, verdict.max_relative_error)
    em.emit("descent/random-functions", bool(ok_all), to_real(tol) - worst)

    odd_ok = True
    for t in range(20):
        # odd numerator over even denominator: an odd function
        num = tuple(mpc(rng.uniform(-1, 1)) if i % 2 == 1 else mpc(0) for i in range(6))
        den = tuple(mpc(rng.uniform(0.5, 2.0)) if i % 2 == 0 else mpc(0) for i in range(5))
        f = RationalFunction(num, den)
        verdict = delta_descent_check(f, 1 + t % 3, tol=tol)
        odd_ok &= verdict.value_direct == 0 and verdict.value_descended == 0
    em.emit("descent/odd-functions-vanish", bool(odd_ok))


def _suite_norm_bound(config: dict, em: _Emitter) -> None:
    m_family = int(config.get("m", 3))
    witness_count = int(config.get("witnesses", 1000))
    depth = int(config.get("depth", 64))
    fam = road_runner(m_family)
    cheese = CheeseSpec(fam, label=fam.label)
    witnesses = [road_runner_witness(m_family, n) for n in range(1, witness_count + 1)]
    # the constant 1 has exact sup-norm 1 (the unit circle lies in the cheese)
    witnesses.append(
        FunctionalSample(RationalFunction((Fraction(1),), (Fraction(1),)), Fraction(1), True)
    )
    for k in range(1, m_family):
        verdict = browder_norm_experiment(cheese, 0, k, witnesses, depth=depth)
        em.emit(
            f"norm-bound/order-{k}",
            verdict.ok,
            verdict.browder_upper - verdict.max_ratio,
        )
    # at order m the witness ratios grow without bound: |delta(f_n)| / ||f_n|| = n
    growth_ok = True
    for n in range(1, 21):
        w = road_runner_witness(m_family, n)
        growth_ok &= abs(taylor_functional(w.function, 0, m_family)) == Fraction(n)
    em.emit(f"norm-bound/unbounded-at-order-{m_family}", growth_ok)


def _suite_pipeline_main_theorem(config: dict, em: _Emitter) -> None:
    m = int(config.get("m", 2))
    seed = int(config.get("seed", 0))
    depth = int(config.get("depth", 40))
    count = int(config.get("count", 16))
    seed_family = config.get("seed_family")

    groups = [
        annulus_filter(synthetic_budget_family(n, count, seed), n) for n in range(1, 5)
    ]
    k1 = merge_families(groups, label="budgeted groups")
    k2 = road_runner(m)
    base = toy_seed_family() if seed_family is None else seed_family
    k3 = sqrt_family(base)
    merged = merge_families([k1, k3, k2], label="pipeline intersection")

    total_depth = len(merged.finite) + depth
    spec = CheeseSpec(merged, label=merged.label)
    em.emit("pipeline-main/origin-membership", spec.contains(0, depth=total_depth))

    rep = browder_sum(merged, m - 1, 0, total_depth)
    certified = rep.certified_upper
    em.emit(
        f"pipeline-main/browder-order-{m - 1}-certified-finite",
        certified is not None and mp.isfinite(certified),
        certified,
    )

    parts = [
        browder_sum(k1, m - 1, 0, len(k1.finite)),
        browder_sum(k3, m - 1, 0, len(k3.finite)),
        browder_sum(k2, m - 1, 0, total_depth - len(k1.finite) - len(k3.finite)),
    ]
    bound = sum(p.realized_sum for p in parts) - 2
    eps = mpf(2) ** -(mp.prec // 2)
    em.emit(
        "pipeline-main/multiset-additivity",
        rep.realized_sum <= bound * (1 + eps),
        bound - rep.realized_sum,
    )


def _suite_pipeline_m_to_infinity(config: dict, em: _Emitter) -> None:
    depth = int(config.get("depth", 12))
    copies = []
    placements = []
    for m in range(2, 7):
        a = mpf(1) / m
        rho = mpf(1) / (10 * m * m)
        placements.append((a, rho))
        copies.append(affine_family(road_runner(m), a, rho, depth=depth))
    ok, violating = check_disjoint_copies(placements)
    em.emit("pipeline-m-to-infinity/pairwise-disjoint", ok)
    for (a, rho), fam in zip(placements, copies):
        inside = all(abs(d.center - a) + d.radius <= rho for d in fam.finite)
        em.emit(f"pipeline-m-to-infinity/copy-contained[a={num_str(a, 6)}]", inside)


_SUITE_FNS = {
    "sqrt_disc": _suite_sqrt_disc,
    "sqrt_cheese": _suite_sqrt_cheese,
    "road_runner": _suite_road_runner,
    "infinite_order": _suite_infinite_order,
    "descent": _suite_descent,
    "norm_bound": _suite_norm_bound,
    "pipeline_main_theorem": _suite_pipeline_main_theorem,
    "pipeline_m_to_infinity": _suite_pipeline_m_to_infinity,
}


def run_suite(suite_id: str, config: dict | None = None) -> list[Certificate]:
    if suite_id not in _SUITE_FNS:
        raise PreconditionError(f"unknown suite {suite_id!r}; choose from {sorted(_SUITE_FNS)}")
    config = dict(config or {})
    em = _Emitter(suite_id, config)
    _SUITE_FNS[suite_id](config, em)
    return em.certs


# ---------------------------------------------------------------------------
# Output: certificates to JSON/CSV, cheeses to SVG and matplotlib figures
# ---------------------------------------------------------------------------


def certificates_to_json(certs: list[Certificate]) -> str:
    return json.dumps([c.to_dict() for c in certs], indent=2) + "\n"


def write_certificates(certs: list[Certificate], json_path=None, csv_path=None) -> None:
    if json_path is not None:
        with open(json_path, "w") as fh:
            fh.write(certificates_to_json(certs))
    if csv_path is not None:
        with open(csv_path, "w", newline="") as fh:
            writer = csv.DictWriter(
                fh,
                fieldnames=[
                    "claim_id",
                    "verdict",
                    "margin",
                    "precision_bits",
                    "seed",
                    "inputs_digest",
                    "timestamp",
                ],
            )
            writer.writeheader()
            for c in certs:
                writer.writerow(c.to_dict())


def render_svg(cheese: CheeseSpec, depth: int, width_px: int) -> str:
    """SVG picture of the cheese: unit circle outline plus deleted discs."""
    if depth < 1 or width_px < 1:
        raise PreconditionError("render_svg: depth and width must be >= 1")
    discs = cheese.family.realize(depth)
    half = width_px / 2.0
    scale = half / 1.1

    def sx(x: float) -> str:
        return f"{half + scale * x:.3f}"

    def sy(y: float) -> str:
        return f"{half - scale * y:.3f}"

    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{width_px}" height="{width_px}" viewBox="0 0 {width_px} {width_px}">',
        f'<circle cx="{sx(0)}" cy="{sy(0)}" r="{scale:.3f}" '
        'fill="#f4e9c9" stroke="#333333" stroke-width="1.5"/>',
    ]
    for d in discs:
        c, r = d.as_floats()
        lines.append(
            f'<circle cx="{sx(c.real)}" cy="{sy(c.imag)}" r="{scale * r:.3f}" '
            'fill="#ffffff" stroke="#8888aa" stroke-width="0.5"/>'
        )
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def render_figure(cheese: CheeseSpec, depth: int, path, title: str | None = None) -> None:
    """Matplotlib rendering of the cheese, written to `path`."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    from matplotlib.patches import Circle as MplCircle

    fig, ax = plt.subplots(figsize=(6, 6))
    ax.add_patch(MplCircle((0, 0), 1.0, facecolor="#f4e9c9", edgecolor="#333333", lw=1.5))
    for d in cheese.family.realize(depth):
        c, r = d.as_floats()
        ax.add_patch(
            MplCircle((c.real, c.imag), r, facecolor="white", edgecolor="#8888aa", lw=0.5)
        )
    ax.set_xlim(-1.1, 1.1)
    ax.set_ylim(-1.1, 1.1)
    ax.set_aspect("equal")
    ax.set_title(title or cheese.label or cheese.family.label)
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
