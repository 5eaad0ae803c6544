"""Command line entry point: ``qbailey verify | list | expand``.

Exit codes: 0 when every requested identity matches, 1 on any mismatch,
2 on usage errors, unknown ids or identities that fail to build.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor

from . import bailey, catalog, report
from .products import PochSpec, poch, poch_reciprocal
from .series import SeriesError

ENV_ORDER = "QBAILEY_DEFAULT_ORDER"
BASE_ORDER = 50


class UsageError(Exception):
    pass


def default_order(entry: catalog.IdentityEntry, env: dict | None = None) -> int:
    """Order used when ``--order`` is absent.

    ``QBAILEY_DEFAULT_ORDER=N`` replaces the base order 50: entries on the
    half-integer lattice get ``2N`` units, and entries whose own default is
    below the base (eq-4.8, eq-4.2) keep ``min(N, own)``.
    """
    env = os.environ if env is None else env
    raw = env.get(ENV_ORDER)
    if not raw:
        return entry.default_order
    try:
        n = int(raw)
    except ValueError:
        raise UsageError(f"{ENV_ORDER} must be an integer, got {raw!r}") from None
    if n < 1:
        raise UsageError(f"{ENV_ORDER} must be positive, got {n}")
    if entry.default_order < BASE_ORDER * entry.denom:
        return min(n, entry.default_order)
    return n * entry.denom


def _verify_one(id: str, order: int) -> report.VerifyReport:
    return catalog.verify(id, order)


def cmd_verify(args) -> int:
    if args.all:
        ids = list(catalog.REGISTRY)
    else:
        ids = args.ids
    if not ids:
        raise UsageError("give identity ids or --all")
    entries = []
    for id in ids:
        try:
            entries.append(catalog.get(id))
        except catalog.UnknownEntry:
            raise UsageError(f"unknown identity id {id!r}; see 'qbailey list'") from None
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    orders = [args.order if args.order is not None else default_order(e) for e in entries]
    if any(o < 1 for o in orders):
        raise UsageError("--order must be positive")

    if args.jobs > 1 and len(entries) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            futures = [pool.submit(_verify_one, e.id, o) for e, o in zip(entries, orders)]
            # collected in submission order, so output order is the registry order
            reports = [f.result() for f in futures]
    else:
        reports = [catalog.verify_entry(e, o) for e, o in zip(entries, orders)]

    if args.format == "json":
        print(report.dumps(reports))
    else:
        for r in reports:
            print(r.to_text())
        bad = sum(not r.ok for r in reports)
        print(f"{len(reports) - bad}/{len(reports)} identities match")

    if any(r.status == report.ERROR for r in reports):
        return 2
    if any(r.status == report.MISMATCH for r in reports):
        return 1
    return 0


def cmd_list(args) -> int:
    rows = [(e.id, e.description) for e in catalog.REGISTRY.values()]
    if args.format == "json":
        print(json.dumps([{"id": i, "description": d} for i, d in rows], indent=2))
        return 0
    width = max(len(r[0]) for r in rows)
    for id, desc in rows:
        print(f"{id:<{width}}  {desc}")
    print()
    print("series: " + ", ".join(catalog.MOCK_THETA))
    print("pairs:  " + ", ".join(catalog.PAIRS))
    print("family: even-power-M (M >= 1), the 1/(q)_inf^(2M) multi-sums")
    return 0


def _parse_index(text: str | None) -> tuple[int, ...] | None:
    if text is None:
        return None
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise UsageError(f"index must be comma-separated integers, got {text!r}") from None


def _parse_length(text: str) -> int | None:
    if text in ("inf", "infinity"):
        return None
    try:
        return int(text)
    except ValueError:
        raise UsageError(f"--n must be an integer or 'inf', got {text!r}") from None


def _expand_series(args):
    target = args.target
    order = args.order
    if target == "poch":
        for flag in ("sign", "e", "base", "n"):
            if getattr(args, flag) is None:
                raise UsageError(f"expand poch needs --{flag}")
        spec = PochSpec(args.sign, args.e, args.base, _parse_length(args.n))
        fn = poch_reciprocal if args.reciprocal else poch
        return fn(spec, args.denom, order or 20)
    if target in ("pair-alpha", "pair-beta"):
        if args.name is None or args.n is None:
            raise UsageError(f"expand {target} needs --name and --n")
        try:
            pair = catalog.get_pair(args.name)
        except catalog.UnknownEntry:
            raise UsageError(f"unknown pair {args.name!r}") from None
        idx = _parse_index(args.n)
        if isinstance(pair, bailey.OnefoldPair):
            if len(idx) != 1:
                raise UsageError(f"{args.name} is one-fold; give a single index")
            idx = idx[0]
        elif len(idx) != pair.l:
            raise UsageError(f"{args.name} is {pair.l}-fold; give {pair.l} indices")
        if any(i < 0 for i in (idx if isinstance(idx, tuple) else (idx,))):
            raise UsageError("pair indices must be nonnegative")
        seq = pair.alpha if target == "pair-alpha" else pair.beta
        return seq(idx, order or 20)
    if target in catalog.MOCK_THETA:
        return catalog.MOCK_THETA[target].builder(order or BASE_ORDER)
    try:
        entry = catalog.get(target)
    except catalog.UnknownEntry:
        raise UsageError(f"unknown expand target {target!r}") from None
    return entry.build(args.side, order or entry.default_order, _parse_index(args.index))


def cmd_expand(args) -> int:
    if args.order is not None and args.order < 1:
        raise UsageError("--order must be positive")
    try:
        s = _expand_series(args)
    except (SeriesError, ValueError) as exc:
        raise UsageError(str(exc)) from None
    if args.format == "csv":
        sys.stdout.write(s.to_csv())
    else:
        print(s.render())
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qbailey", description="Exact q-series verification of Bailey pair identities.")
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="verify identities coefficientwise")
    v.add_argument("ids", nargs="*")
    v.add_argument("--all", action="store_true", help="every registered identity")
    v.add_argument("--order", type=int, default=None,
                   help=f"truncation in lattice units (default per entry, or ${ENV_ORDER})")
    v.add_argument("--jobs", type=int, default=1)
    v.add_argument("--format", choices=("text", "json"), default="text")
    v.set_defaults(func=cmd_verify)

    ls = sub.add_parser("list", help="list registered identities")
    ls.add_argument("--format", choices=("text", "json"), default="text")
    ls.set_defaults(func=cmd_list)

    e = sub.add_parser("expand", help="print a series")
    e.add_argument("target", help="identity id, mock theta id, 'poch', 'pair-alpha' or 'pair-beta'")
    e.add_argument("--side", choices=(catalog.LHS, catalog.RHS), default=catalog.LHS)
    e.add_argument("--index", help="family index for eq-4.2, e.g. 2,3")
    e.add_argument("--order", type=int, default=None)
    e.add_argument("--format", choices=("text", "csv"), default="text")
    e.add_argument("--sign", type=int, choices=(1, -1))
    e.add_argument("--e", type=int, help="start exponent numerator")
    e.add_argument("--base", type=int, help="base exponent numerator")
    e.add_argument("--n", help="length ('inf' allowed) or pair index like 1,1")
    e.add_argument("--denom", type=int, default=1)
    e.add_argument("--reciprocal", action="store_true")
    e.add_argument("--name", help="pair name for pair-alpha / pair-beta")
    e.set_defaults(func=cmd_expand)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "jobs", 1) < 1:
        parser.error("--jobs must be at least 1")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"qbailey: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
