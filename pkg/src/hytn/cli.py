"""Command line interface.

Exit codes follow one convention everywhere: 0 for consistent or verified,
1 for inconsistent or a failed verification, 2 for structural and I/O
errors, including networks of the mixed class that no solver here accepts.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import bench as benchmod
from . import formats, generate, solver
from .model import HyTN, MixedNetworkError, reverse_network, verify_negative_cycle, verify_schedule
from .mpg import QueuePolicy

_POLICIES = {p.value: p for p in QueuePolicy}


def _read(path: str) -> str:
    return Path(path).read_text()


def _load_net(path: str) -> HyTN:
    return formats.parse_hytn(_read(path))


def _write_out(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _cmd_check(args) -> int:
    consistent, _ = solver.check_consistency(_load_net(args.file), args.policy)
    print("CONSISTENT" if consistent else "INCONSISTENT")
    return 0 if consistent else 1


def _cmd_schedule(args) -> int:
    net = _load_net(args.file)
    try:
        if args.method == "proj":
            schedule = solver.compute_schedule_via_projection(net)
        else:
            schedule = solver.compute_schedule(net)
    except solver.InconsistentNetworkError as exc:
        sys.stdout.write(formats.serialize_certificate(net, exc.certificate))
        return 1
    sys.stdout.write(formats.serialize_schedule(schedule))
    return 0


def _cmd_certify(args) -> int:
    net = _load_net(args.file)
    verdict = solver.solve(net)
    if verdict.consistent:
        print("CONSISTENT: no negative cycle exists", file=sys.stderr)
        return 1
    sys.stdout.write(formats.serialize_certificate(net, verdict.certificate))
    return 0


def _cmd_verify(args) -> int:
    net = _load_net(args.file)
    if args.schedule:
        witness = formats.parse_schedule(_read(args.schedule), net.n)
        ok = verify_schedule(net, witness)
    else:
        cert = formats.parse_certificate(_read(args.cycle), net)
        ok = verify_negative_cycle(net, cert)
    print("VERIFIED" if ok else "REJECTED")
    return 0 if ok else 1


def _cmd_convert(args) -> int:
    if args.from_mpg:
        game = formats.parse_mpg(_read(args.file))
        _write_out(formats.serialize_hytn(solver.mpg_to_hytn(game)), args.out)
        return 0
    net = _load_net(args.file)
    if args.reverse:
        _write_out(formats.serialize_hytn(reverse_network(net)), args.out)
    else:
        game, _ = solver.hytn_to_mpg(net)
        _write_out(formats.serialize_mpg(game), args.out)
    return 0


def _cmd_generate(args) -> int:
    if args.family == "random":
        spec = generate.GenSpec(args.n, args.max_weight, args.frac, args.deg, args.seed)
        net = generate.gen_random(spec)
    elif args.family == "slow":
        net = generate.gen_slow_family(args.w)
    else:
        formula = generate.random_cnf(args.vars, args.clauses, args.seed)
        net = generate.encode_3sat(formula)
    _write_out(formats.serialize_hytn(net), args.out)
    return 0


def _cmd_bench(args) -> int:
    policies = benchmod.ALL_POLICIES if args.compare_policies else (args.policy,)
    spec = benchmod.BenchSpec(
        family=generate.Family(args.family),
        count=args.count,
        seed=args.seed,
        n=args.n,
        max_weight=args.max_weight,
        hyper_fraction=args.frac,
        out_degree=args.deg,
        slow_w0=args.w0,
        policies=policies,
    )
    rows = benchmod.run_bench(spec)
    if args.csv:
        with open(args.csv, "w") as out:
            benchmod.write_csv(rows, out)
    else:
        benchmod.write_csv(rows, sys.stdout)
    return 0


def _policy(value: str) -> QueuePolicy:
    if value not in _POLICIES:
        raise argparse.ArgumentTypeError(
            f"unknown policy {value!r}; choose from {', '.join(_POLICIES)}"
        )
    return _POLICIES[value]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hytn",
        description="Consistency, schedules and certificates for hyper temporal networks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="decide consistency")
    p.add_argument("file")
    p.add_argument("--policy", type=_policy, default=QueuePolicy.LIFO_EARLY_STOP)
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("schedule", help="print a feasible schedule or a certificate")
    p.add_argument("file")
    p.add_argument("--method", choices=("pm", "proj"), default="pm")
    p.set_defaults(func=_cmd_schedule)

    p = sub.add_parser("certify", help="print a negative-cycle certificate")
    p.add_argument("file")
    p.set_defaults(func=_cmd_certify)

    p = sub.add_parser("verify", help="check a schedule or certificate file")
    p.add_argument("file")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--schedule")
    group.add_argument("--cycle")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("convert", help="reverse a network or translate to/from a game")
    p.add_argument("file")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--reverse", action="store_true")
    group.add_argument("--to-mpg", action="store_true")
    group.add_argument("--from-mpg", action="store_true")
    p.add_argument("-o", "--out")
    p.set_defaults(func=_cmd_convert)

    p = sub.add_parser("generate", help="write a generated instance")
    gsub = p.add_subparsers(dest="family", required=True)
    g = gsub.add_parser("random")
    g.add_argument("--n", type=int, default=100)
    g.add_argument("--max-weight", type=int, default=1000)
    g.add_argument("--frac", type=float, default=0.1)
    g.add_argument("--deg", type=int, default=3)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("-o", "--out")
    g.set_defaults(func=_cmd_generate)
    g = gsub.add_parser("slow")
    g.add_argument("--w", type=int, default=1000)
    g.add_argument("-o", "--out")
    g.set_defaults(func=_cmd_generate)
    g = gsub.add_parser("sat3")
    g.add_argument("--vars", type=int, default=5)
    g.add_argument("--clauses", type=int, default=10)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("-o", "--out")
    g.set_defaults(func=_cmd_generate)

    p = sub.add_parser("bench", help="decide a generated batch and emit CSV rows")
    p.add_argument("--family", choices=("random", "slow"), required=True)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--policy", type=_policy, default=QueuePolicy.LIFO_EARLY_STOP)
    p.add_argument("--compare-policies", action="store_true")
    p.add_argument("--csv")
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--max-weight", type=int, default=1000)
    p.add_argument("--frac", type=float, default=0.1)
    p.add_argument("--deg", type=int, default=3)
    p.add_argument("--w0", type=int, default=16)
    p.set_defaults(func=_cmd_bench)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse reports usage errors itself
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (MixedNetworkError, formats.ParseError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
