"""Command-line entry point.

Exit codes: 0 success or positive verdict, 2 negative verdict, 3 input error,
4 internal invariant breach.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from . import bounds, charging, factory, interchange, plot, search
from .autobidder import verify_equilibrium
from .mechanism import InstanceError, PaymentUndefined, opt_stats, welfare_summary
from .reports import Renderer
from .scalar import ParseError, to_scalar

EXIT_OK = 0
EXIT_NEGATIVE = 2
EXIT_INPUT = 3
EXIT_INTERNAL = 4


@dataclass
class CommandResult:
    status: int
    report: str
    artifacts: list = field(default_factory=list)


class UsageError(ValueError):
    pass


def _rational(text: str, name: str) -> Fraction:
    try:
        return to_scalar(text, field=name)
    except ParseError as exc:
        raise UsageError(str(exc)) from exc


def _write(path: str, text: str, artifacts: list) -> None:
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc.strerror}") from exc
    artifacts.append(path)


def cmd_bound(args, r: Renderer) -> CommandResult:
    inst, _ = interchange.load(args.file)
    artifacts: list = []
    if args.simplified:
        value, (j, k) = bounds.bound_simplified_value(inst)
        doc = {"simplified": r.num(value), "simplified_argmin": {"auction": j, "slot": k}}
        return CommandResult(EXIT_OK, interchange.dumps(doc))
    try:
        rep = bounds.bound_closed_form(inst)
    except bounds.BoundUndefined as exc:
        raise UsageError(str(exc)) from exc
    pts = bounds.pareto_points(inst)
    if args.svg:
        _write(args.svg, plot.envelope_svg(pts, rep.envelope), artifacts)
    if args.csv:
        _write(args.csv, plot.points_csv(pts), artifacts)
    doc = r.bound(rep)
    if artifacts:
        doc["artifacts"] = artifacts
    status = EXIT_OK if rep.agree else EXIT_INTERNAL
    return CommandResult(status, interchange.dumps(doc), artifacts)


def cmd_verify(args, r: Renderer) -> CommandResult:
    inst, bids = interchange.load(args.file)
    if bids is None:
        raise UsageError(f"{args.file}: bids: required by verify")
    tol = _rational(args.tol, "--tol")
    rep = verify_equilibrium(inst, bids, tol)
    doc = {"equilibrium": r.equilibrium(rep), "welfare": r.welfare(welfare_summary(inst, bids))}
    return CommandResult(EXIT_OK if rep.verdict else EXIT_NEGATIVE, interchange.dumps(doc))


def cmd_charge(args, r: Renderer) -> CommandResult:
    inst, bids = interchange.load(args.file)
    if bids is None:
        raise UsageError(f"{args.file}: bids: required by charge")
    if args.auction is not None:
        if not 0 <= args.auction < inst.m:
            raise UsageError(f"--auction must be in 0..{inst.m - 1}")
        auctions = [args.auction]
    else:
        per = opt_stats(inst).opt_per_auction
        auctions = [j for j in range(inst.m) if per[j] > 0]
    certs = []
    ok = True
    for j in auctions:
        try:
            cert = charging.build_certificate(inst, bids, j)
        except charging.CertificateError as exc:
            raise UsageError(str(exc)) from exc
        problems = charging.check_certificate(cert)
        ok = ok and not problems
        certs.append(r.certificate(cert, not problems, problems))
    return CommandResult(EXIT_OK if ok else EXIT_INTERNAL, interchange.dumps({"certificates": certs}))


def cmd_tight(args, r: Renderer) -> CommandResult:
    t = _rational(args.t, "--t")
    eps = _rational(args.eps, "--eps")
    try:
        spec = factory.tight_spec(t, eps, args.s)
        inst, bids, limit = factory.tight_instance(spec)
    except factory.FamilyError as exc:
        raise UsageError(str(exc)) from exc
    extra = {}
    if args.emit_report:
        w = welfare_summary(inst, bids)
        extra["report"] = {
            "t": r.num(spec.t),
            "s": spec.s,
            "x": r.num(spec.x),
            "x_exact": spec.exact,
            "limit_ratio": r.num(limit),
            "limit_deviation": r.num(spec.deviation),
            "eps": r.num(spec.eps),
            "welfare_ratio": r.num(w.ratio),
            "bound_closed_form": r.num(bounds.bound_closed_form_value(inst)[0]),
            "bound_simplified": r.num(bounds.bound_simplified(inst)),
        }
    if not spec.exact:
        print(
            f"note: x for t = {t} is irrational; using rational x = {spec.x} "
            f"whose limit ratio deviates from t by {float(spec.deviation):.3g}",
            file=sys.stderr,
        )
    text = interchange.dumps(interchange.instance_doc(inst, bids, extra))
    artifacts: list = []
    if args.output:
        _write(args.output, text, artifacts)
        return CommandResult(EXIT_OK, interchange.dumps({"written": args.output, **extra}), artifacts)
    return CommandResult(EXIT_OK, text)


def cmd_zero(args, r: Renderer) -> CommandResult:
    delta = _rational(args.delta, "--delta")
    try:
        inst = factory.poa_zero_family(delta)
    except factory.FamilyError as exc:
        raise UsageError(str(exc)) from exc
    value = bounds.bound_closed_form_value(inst)[0]
    expected = delta / (1 + delta + delta * delta)
    doc = interchange.instance_doc(inst, extra={
        "report": {"delta": r.num(delta), "bound_closed_form": r.num(value), "expected": r.num(expected)}
    })
    return CommandResult(EXIT_OK if value == expected else EXIT_INTERNAL, interchange.dumps(doc))


def _grid(text: str, inst) -> tuple:
    vals = []
    tokens = [tok.strip() for tok in text.split(",") if tok.strip()]
    plain = [_rational(tok, "--grid") for tok in tokens if tok.lower() != "big"]
    for tok in tokens:
        if tok.lower() == "big":
            vals.append(search.big_bid(inst, plain))
        else:
            vals.append(_rational(tok, "--grid"))
    return tuple(sorted(set(vals)))


def cmd_enumerate(args, r: Renderer) -> CommandResult:
    inst, _ = interchange.load(args.file)
    try:
        grid = search.GridSpec(_grid(args.grid, inst), max_profiles=args.max_profiles)
        rep = search.enumerate_equilibria(inst, grid, workers=args.workers)
    except search.SearchError as exc:
        raise UsageError(str(exc)) from exc
    artifacts: list = []
    if args.csv:
        rows = ["profile,ratio"]
        for f in rep.equilibria:
            flat = ";".join(r.num(b) for row in f.bids.bids for b in row)
            rows.append(f"{flat},{r.num(f.ratio)}")
        _write(args.csv, "\n".join(rows) + "\n", artifacts)
    doc = r.search(rep)
    status = EXIT_INTERNAL if rep.dominates is False else EXIT_OK
    return CommandResult(status, interchange.dumps(doc), artifacts)


def cmd_random(args, r: Renderer) -> CommandResult:
    smooth = _rational(args.smoothness, "--smoothness")
    if smooth > 1:
        raise UsageError("--smoothness must lie in [0, 1]")
    try:
        inst = factory.random_instance(args.seed, args.n, args.m, args.s, max_value=args.max_value,
                                       smoothness=smooth, zero_percent=args.zero_percent)
    except factory.FamilyError as exc:
        raise UsageError(str(exc)) from exc
    text = interchange.dumps(interchange.instance_doc(inst))
    artifacts: list = []
    if args.output:
        _write(args.output, text, artifacts)
        return CommandResult(EXIT_OK, interchange.dumps({"written": args.output}), artifacts)
    return CommandResult(EXIT_OK, text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gsp-poa", description="GSP autobidding price-of-anarchy toolkit")
    parser.add_argument("--approx", action="store_true", help="render numbers as decimals instead of p/q")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bound", help="closed-form and simplified welfare bounds")
    p.add_argument("file")
    p.add_argument("--simplified", action="store_true", help="only the simplified bound (works for s = 1)")
    p.add_argument("--svg", help="write the hull picture here")
    p.add_argument("--csv", help="write tradeoff point coordinates here")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("verify", help="check a bid profile is an equilibrium")
    p.add_argument("file")
    p.add_argument("--tol", default="0", help="allowed best-response gap (default 0)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("charge", help="build and check per-auction charging certificates")
    p.add_argument("file")
    p.add_argument("--auction", type=int)
    p.set_defaults(func=cmd_charge)

    p = sub.add_parser("tight", help="emit a tight instance with its bad equilibrium")
    p.add_argument("--t", required=True)
    p.add_argument("--eps", default=str(factory.DEFAULT_EPS))
    p.add_argument("--s", type=int, help="slot count (default: smallest admissible)")
    p.add_argument("-o", "--output")
    p.add_argument("--emit-report", action="store_true")
    p.set_defaults(func=cmd_tight)

    p = sub.add_parser("zero", help="single auction with discounts (1, delta)")
    p.add_argument("--delta", required=True)
    p.set_defaults(func=cmd_zero)

    p = sub.add_parser("enumerate", help="search a bid grid for exact equilibria")
    p.add_argument("file")
    p.add_argument("--grid", required=True, help="comma-separated bids; 'big' adds a surrogate for inf")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--max-profiles", type=int, default=search.DEFAULT_MAX_PROFILES)
    p.add_argument("--csv")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("random", help="emit a seeded random instance")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--s", type=int, default=2)
    p.add_argument("--max-value", type=int, default=10)
    p.add_argument("--smoothness", default="0")
    p.add_argument("--zero-percent", type=int, default=0)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_random)
    return parser


def dispatch(argv) -> CommandResult:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code if isinstance(exc.code, int) else EXIT_INPUT
        return CommandResult(EXIT_OK if code == 0 else EXIT_INPUT, "")
    renderer = Renderer(approx=args.approx)
    try:
        return args.func(args, renderer)
    except (UsageError, interchange.InputError, InstanceError, PaymentUndefined) as exc:
        return CommandResult(EXIT_INPUT, f"error: {exc}\n")


def main(argv: Optional[list] = None) -> int:
    result = dispatch(sys.argv[1:] if argv is None else argv)
    stream = sys.stderr if result.status == EXIT_INPUT else sys.stdout
    stream.write(result.report)
    return result.status


if __name__ == "__main__":
    sys.exit(main())
