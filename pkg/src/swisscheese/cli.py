"""Command-line front end.

Subcommands: build families, apply the square-root transform, compute
Browder reports, evaluate Taylor functionals, run verification suites, and
render cheeses.  Exit codes are the contract: 0 on success/pass, 1 on a
verification failure, 2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from mpmath import mpc, mpf

from .browder import browder_sum
from .families import (
    CheeseSpec,
    DiscFamily,
    family_to_json,
    load_family,
    road_runner,
    sqrt_family,
    synthetic_budget_family,
)
from .numeric import PreconditionError, set_precision
from .rational import rational_from_json, taylor_functional
from .verify import (
    SUITES,
    render_figure,
    render_svg,
    run_suite,
    write_certificates,
)

DEFAULT_SEED = 7


def _parse_point(text: str) -> mpc:
    parts = text.split(",")
    try:
        if len(parts) == 1:
            return mpc(mpf(parts[0].strip()))
        if len(parts) == 2:
            return mpc(mpf(parts[0].strip()), mpf(parts[1].strip()))
    except ValueError:
        pass
    raise PreconditionError(f"cannot parse point {text!r}; expected 're' or 're,im'")


def _write_or_print(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="swisscheese",
        description="Build, transform, and numerically certify Swiss-cheese disc families.",
    )
    parser.add_argument("--precision", type=int, default=128, help="working precision in bits (>= 53)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="emit a family JSON from a generator")
    p.add_argument("generator", choices=["road_runner", "synthetic_budget"])
    p.add_argument("--m", type=int, default=2, help="road-runner exponent")
    p.add_argument("--depth", type=int, default=20, help="realized disc count")
    p.add_argument("--n", type=int, default=2, help="synthetic budget group index")
    p.add_argument("--count", type=int, default=16, help="synthetic disc count")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--out", help="output path (stdout when omitted)")

    p = sub.add_parser("sqrt", help="square-root transform of a family file")
    p.add_argument("--family", required=True)
    p.add_argument("--depth", type=int, default=20, help="realization depth for parametric tails")
    p.add_argument("--out")

    p = sub.add_parser("browder", help="Browder sum report for a family")
    p.add_argument("--family", help="family JSON path (empty family when omitted)")
    p.add_argument("--order", type=int, default=1)
    p.add_argument("--point", default="0", help="base point as 're' or 're,im'")
    p.add_argument("--depth", type=int, default=50)
    p.add_argument("--format", choices=["json", "text"], default="json")
    p.add_argument("--out")

    p = sub.add_parser("delta", help="Taylor functional of a rational-function file")
    p.add_argument("--function", required=True, help="rational-function JSON path")
    p.add_argument("--point", default="0")
    p.add_argument("--order", type=int, default=1)
    p.add_argument("--out")

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("suite", choices=list(SUITES))
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--trials", type=int)
    p.add_argument("--samples", type=int)
    p.add_argument("--depth", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--out", help="directory for certificates.json / certificates.csv")
    p.add_argument(
        "--figures", action="store_true", help="also render figures of the involved cheeses"
    )

    p = sub.add_parser("render", help="render a cheese")
    p.add_argument("--family", required=True)
    p.add_argument("--depth", type=int, default=20)
    p.add_argument("--width", type=int, default=800)
    p.add_argument("--format", choices=["svg", "png"], default="svg")
    p.add_argument("--out")
    return parser


def _cmd_build(args) -> int:
    if args.generator == "road_runner":
        fam = road_runner(args.m)
        realized = fam.realize(args.depth)
        out = DiscFamily(
            tuple(realized),
            tail=type(fam.tail)(fam.tail.generator, fam.tail.params, start=args.depth + 1),
            label=fam.label,
        )
    else:
        out = synthetic_budget_family(args.n, args.count, args.seed)
    _write_or_print(json.dumps(family_to_json(out), indent=2) + "\n", args.out)
    return 0


def _cmd_sqrt(args) -> int:
    fam = load_family(args.family)
    if fam.tail is not None:
        fam = DiscFamily(tuple(fam.realize(args.depth)), label=fam.label)
    out = sqrt_family(fam)
    _write_or_print(json.dumps(family_to_json(out), indent=2) + "\n", args.out)
    return 0


def _cmd_browder(args) -> int:
    fam = load_family(args.family) if args.family else DiscFamily(label="empty")
    report = browder_sum(fam, args.order, _parse_point(args.point), args.depth)
    if args.format == "json":
        text = json.dumps(report.to_json(), indent=2) + "\n"
    else:
        tail = "unknown (truncated-only)" if report.tail_bound is None else str(report.tail_bound)
        text = (
            f"order {report.order} at {report.point}: realized_sum = {report.realized_sum}\n"
            f"tail bound: {tail}\nrealized discs: {report.realized_count}\n"
        )
    _write_or_print(text, args.out)
    return 0


def _cmd_delta(args) -> int:
    with open(args.function) as fh:
        f = rational_from_json(json.load(fh))
    value = taylor_functional(f, _parse_point(args.point), args.order)
    value = mpc(value)
    text = json.dumps(
        {"order": args.order, "point": args.point, "value": [str(value.real), str(value.imag)]},
        indent=2,
    )
    _write_or_print(text + "\n", args.out)
    return 0


def _cmd_verify(args) -> int:
    config = {"seed": args.seed}
    for key in ("trials", "samples", "depth", "m"):
        value = getattr(args, key)
        if value is not None:
            config[key] = value
    certs = run_suite(args.suite, config)
    failed = [c for c in certs if c.verdict == "fail"]
    if args.out:
        outdir = Path(args.out)
        outdir.mkdir(parents=True, exist_ok=True)
        write_certificates(
            certs, json_path=outdir / "certificates.json", csv_path=outdir / "certificates.csv"
        )
        if args.figures:
            _render_suite_figures(args.suite, config, outdir)
    else:
        from .verify import certificates_to_json

        sys.stdout.write(certificates_to_json(certs))
    for c in failed:
        print(f"FAIL {c.claim_id}", file=sys.stderr)
    return 1 if failed else 0


def _render_suite_figures(suite: str, config: dict, outdir: Path) -> None:
    cheeses = []
    if suite in ("road_runner", "norm_bound"):
        m = int(config.get("m", 2 if suite == "road_runner" else 3))
        cheeses.append((f"{suite}", CheeseSpec(road_runner(m))))
    elif suite == "sqrt_cheese":
        fam = DiscFamily(tuple(road_runner(2).realize(10)), label="road_runner(2) prefix")
        cheeses.append(("source", CheeseSpec(fam)))
        cheeses.append(("sqrt", CheeseSpec(sqrt_family(fam))))
    elif suite in ("infinite_order", "pipeline_main_theorem"):
        from .families import annulus_filter, merge_families

        groups = [
            annulus_filter(synthetic_budget_family(n, int(config.get("count", 16)), int(config["seed"])), n)
            for n in range(1, 5)
        ]
        cheeses.append(("budgeted-groups", CheeseSpec(merge_families(groups))))
    for name, cheese in cheeses:
        render_figure(cheese, depth=int(config.get("depth", 20)), path=outdir / f"{suite}_{name}.png")
        (outdir / f"{suite}_{name}.svg").write_text(
            render_svg(cheese, depth=int(config.get("depth", 20)), width_px=800)
        )


def _cmd_render(args) -> int:
    fam = load_family(args.family)
    cheese = CheeseSpec(fam, label=fam.label)
    if args.format == "svg":
        _write_or_print(render_svg(cheese, args.depth, args.width), args.out)
    else:
        if not args.out:
            raise PreconditionError("render --format png requires --out")
        render_figure(cheese, args.depth, args.out)
    return 0


_COMMANDS = {
    "build": _cmd_build,
    "sqrt": _cmd_sqrt,
    "browder": _cmd_browder,
    "delta": _cmd_delta,
    "verify": _cmd_verify,
    "render": _cmd_render,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        set_precision(args.precision)
        return _COMMANDS[args.command](args)
    except (PreconditionError, FileNotFoundError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
