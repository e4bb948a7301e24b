"""Command-line entry point: plan, find, bench, verify.

Exit codes: 0 success, 1 semantic failure (verify found no near-collision),
2 usage error, 3 search exhausted its run budget.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from .cycle_finder import ENGINE_NAMES
from .planner import format_pretty, render_table1, render_table3, table1_csv, table3_csv, tables_json
from .search import MaxRunsExceeded, SearchConfig, Strategy, bench, find_near_collision, verify_pair

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_EXHAUSTED = 0, 1, 2, 3

_EPILOG = "exit codes: 0 success, 1 not a near-collision, 2 usage error, 3 run budget exhausted"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _int_range(text: str) -> list[int]:
    if ".." in text:
        lo, _, hi = text.partition("..")
        try:
            a, b = int(lo), int(hi)
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad range {text!r}") from None
        if a > b:
            raise argparse.ArgumentTypeError(f"empty range {text!r}")
        return list(range(a, b + 1))
    return _int_list(text)


def _hex16(text: str) -> bytes:
    try:
        data = bytes.fromhex(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"malformed hex {text!r}") from None
    if len(data) != 16:
        raise argparse.ArgumentTypeError(f"messages are 16 bytes, got {len(data)}")
    return data


def _search_flags(p: argparse.ArgumentParser):
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--eps", type=int, required=True)
    p.add_argument("--strategy", choices=[s.value for s in Strategy], default=Strategy.TRUNC_OPT.value)
    p.add_argument("--mu", type=int, help="truncated bits for trunc-fixed")
    p.add_argument("--engine", choices=ENGINE_NAMES, default="brent")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-runs", type=int, dest="max_runs")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="nearcoll", description=__doc__.splitlines()[0], epilog=_EPILOG)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("plan", help="complexity tables", epilog=_EPILOG)
    p.add_argument("--n", type=_int_list, help="comma-separated hash widths")
    p.add_argument("--eps", type=_int_range, required=True, help="range a..b or comma list")
    p.add_argument("--format", choices=["csv", "json", "pretty"], default="pretty")

    p = sub.add_parser("find", help="search for one near-collision", epilog=_EPILOG)
    _search_flags(p)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("bench", help="repeat searches and compare with the model", epilog=_EPILOG)
    _search_flags(p)
    p.add_argument("--trials", type=int, required=True)

    p = sub.add_parser("verify", help="check a candidate pair", epilog=_EPILOG)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--eps", type=int, required=True)
    p.add_argument("--m", type=_hex16, required=True)
    p.add_argument("--mstar", type=_hex16, required=True)
    return parser


def _config(args) -> SearchConfig:
    try:
        return SearchConfig(
            n=args.n,
            eps=args.eps,
            strategy=args.strategy,
            mu=args.mu,
            engine=args.engine,
            seed=args.seed,
            max_runs=args.max_runs,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_plan(args, out) -> int:
    if any(e < 1 for e in args.eps):
        raise UsageError("eps must be >= 1")
    n_list = args.n
    if n_list is not None:
        for n in n_list:
            if any(not e < n / 2 for e in args.eps):
                raise UsageError("eps must satisfy eps < n/2 for bound E")
        if any(not 16 <= n <= 1024 for n in n_list):
            raise UsageError("n values must lie in [16, 1024]")
    t1 = render_table1(args.eps)
    t3 = render_table3(n_list, args.eps) if n_list else None
    if args.format == "csv":
        text = table1_csv(t1)
        if t3 is not None:
            text += "\n" + table3_csv(t3, n_list)
    elif args.format == "json":
        text = tables_json(t1, t3, n_list or ()) + "\n"
    else:
        text = format_pretty(t1, t3, n_list or ())
    out.write(text)
    return EXIT_OK


def _print_report(rep, as_json: bool, out):
    if as_json:
        out.write(rep.to_json() + "\n")
        return
    out.write(f"strategy  {rep.strategy} {rep.params}\n")
    out.write(f"m         {rep.m}\nm*        {rep.m_star}\n")
    out.write(f"H(m)      {rep.digest}\nH(m*)     {rep.digest_star}\n")
    out.write(f"distance  {rep.distance} (eps={rep.eps})\n")
    out.write(f"runs      {rep.runs}\nqueries   {rep.queries}\n")


def cmd_find(args, out) -> int:
    cfg = _config(args)
    try:
        rep = find_near_collision(cfg)
    except MaxRunsExceeded as exc:
        print(f"nearcoll: {exc}", file=sys.stderr)
        return EXIT_EXHAUSTED
    _print_report(rep, args.json, out)
    return EXIT_OK


def cmd_bench(args, out) -> int:
    if args.trials < 1:
        raise UsageError("--trials must be >= 1")
    cfg = _config(args)
    stats = bench(cfg, args.trials)
    doc = {"config": {"n": cfg.n, "eps": cfg.eps, "engine": cfg.engine, "seed": cfg.seed, **cfg.describe()}}
    doc.update(stats.to_dict())
    out.write(json.dumps(doc, sort_keys=True) + "\n")
    return EXIT_OK if stats.successes == stats.trials else EXIT_EXHAUSTED


def cmd_verify(args, out) -> int:
    try:
        res = verify_pair(args.m, args.mstar, args.n, args.eps)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    out.write(f"distance {res.distance} {'<=' if res.valid else '>'} eps={args.eps}\n")
    return EXIT_OK if res.valid else EXIT_FAIL


_COMMANDS = {"plan": cmd_plan, "find": cmd_find, "bench": cmd_bench, "verify": cmd_verify}


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out if out is not None else sys.stdout
    try:
        args = build_parser().parse_args(argv)
        return _COMMANDS[args.command](args, out)
    except UsageError as exc:
        print(f"nearcoll: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
