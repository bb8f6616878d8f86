"""Command-line entry point: ``parity-lab``."""

from __future__ import annotations

import argparse
import json
import sys

from .corpus import THREE, TWO, CorpusSpec, EmptyCorpus, InvalidSpec, run
from .curves import WeierstrassModel, tate_normal_form, three_isogeny, two_isogeny_pair
from .localred import tate_algorithm
from .parity import HypothesisViolated, check_identity
from .symbols import as_place
from .tatecurve import (
    DEFAULT_ORDER,
    MismatchAtDegree,
    a4_series,
    a6_series,
    isogenous_tate_check,
)

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2


def _range(text: str) -> tuple[int, int]:
    try:
        lo, hi = text.split(":")
        return int(lo), int(hi)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LO:HI, got {text!r}") from None


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="parity-lab", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="verify the parity identities over a corpus")
    r.add_argument("--family", choices=[TWO, THREE], required=True)
    r.add_argument("--a-range", type=_range, default=(-10, 10), help="a (or a1) box, LO:HI")
    r.add_argument("--b-range", type=_range, default=(-10, 10), help="b (or a3) box, LO:HI")
    r.add_argument("--b-scale", type=int, default=1, help="multiply every b by this (two-isogeny family)")
    r.add_argument("--duals", action="store_true", help="also verify the dual pair (two-isogeny family)")
    r.add_argument("--twists", type=_int_list, default=(1,), help="comma-separated twist list")
    r.add_argument("--out", required=True, help="JSONL output file")
    r.add_argument("--csv", help="also write a flat CSV summary")
    r.add_argument("--place", help="only report this place (a prime or 'inf')")
    r.add_argument("--fail-fast", action="store_true")
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--jobs", type=int, default=1)
    r.add_argument("--no-oracle", action="store_true", help="skip the descent oracle")

    s = sub.add_parser("series-check", help="Tate-curve q-series checks")
    s.add_argument("--order", type=int, default=DEFAULT_ORDER)

    loc = sub.add_parser("local", help="local data of one curve at one place")
    loc.add_argument("--curve", required=True, help='JSON: {"a":..,"b":..}, {"a1":..,"a3":..,"d0":..} or {"ainvs":[..]}')
    loc.add_argument("--prime", required=True, help="a prime or 'inf'")
    return parser


def _cmd_run(args) -> int:
    spec = CorpusSpec(
        family=args.family,
        a_range=args.a_range,
        b_range=args.b_range,
        twists=args.twists,
        b_scale=args.b_scale,
        include_duals=args.duals,
    )
    csv_file = open(args.csv, "w", newline="") if args.csv else None
    try:
        with open(args.out, "w") as out:
            summary = run(
                spec,
                out,
                seed=args.seed,
                jobs=args.jobs,
                fail_fast=args.fail_fast,
                csv_out=csv_file,
                place=args.place,
                with_oracle=not args.no_oracle,
            )
    finally:
        if csv_file:
            csv_file.close()
    print(json.dumps(summary.to_json()))
    return summary.exit_code


def _cmd_series(args) -> int:
    n = args.order
    a4, a6 = a4_series(n), a6_series(n)
    print(f"{'n':>3} {'a4':>12} {'a6':>12}")
    for i in range(1, n + 1):
        print(f"{i:>3} {str(a4[i]):>12} {str(a6[i]):>12}")
    try:
        rep = isogenous_tate_check(max(n, 8))
    except MismatchAtDegree as exc:
        print(f"isogenous curve check FAILED: {exc}")
        return EXIT_VIOLATION
    print("isogenous curve: y^2 + xy = x^3 + A4 x + A6")
    print(f"{'n':>3} {'A4':>12} {'A6':>12}")
    for i, x, y in rep.rows():
        if i:
            print(f"{i:>3} {str(x):>12} {str(y):>12}")
    print(f"equals E_(q^2): {rep.matches_square_parameter}")
    return EXIT_OK if rep.matches_square_parameter else EXIT_VIOLATION


def _parse_curve(text: str):
    obj = json.loads(text)
    if "ainvs" in obj:
        return WeierstrassModel.from_list(obj["ainvs"])
    if "a1" in obj:
        ctx = three_isogeny(tate_normal_form(obj["a1"], obj["a3"]), 0)
        d0 = obj.get("d0", 1)
        return ctx.twist(d0) if d0 != 1 else ctx
    return two_isogeny_pair(obj["a"], obj["b"])


def _cmd_local(args) -> int:
    obj = _parse_curve(args.curve)
    place = as_place(args.prime)
    out = {}
    model = obj if isinstance(obj, WeierstrassModel) else obj.curve
    if not place.is_real:
        out["reduction"] = tate_algorithm(model, place.l).to_json()
    if not isinstance(obj, WeierstrassModel):
        try:
            out["parity"] = check_identity(obj, place).to_json()
        except HypothesisViolated as exc:
            out["parity"] = {"skipped": exc.reason}
    print(json.dumps(out, indent=2))
    return EXIT_OK if out.get("parity", {}).get("identityHolds", True) else EXIT_VIOLATION


_VALUE_FLAGS = ("--a-range", "--b-range", "--twists", "--prime")


def _attach_negative_values(argv: list[str]) -> list[str]:
    """Turn ``--a-range -5:5`` into ``--a-range=-5:5`` so argparse does not
    read the value as an option."""
    out: list[str] = []
    it = iter(argv)
    for tok in it:
        if tok in _VALUE_FLAGS:
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(_attach_negative_values(list(sys.argv[1:] if argv is None else argv)))
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "series-check":
            return _cmd_series(args)
        return _cmd_local(args)
    except (InvalidSpec, EmptyCorpus, ValueError, KeyError, json.JSONDecodeError) as exc:
        print(f"parity-lab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
