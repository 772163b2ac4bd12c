"""Command-line front end.

Exit status: 0 on success, 1 when decoding fails, 2 on usage, key or frame
errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import bench
from .decode import DecodeLimits, decode
from .errors import SketchError
from .hashing import HashParams
from .oracle import InjectedHashTable
from .reconcile import deserialize, reconcile_local, serialize
from .sketch import Sketch


def _int(text: str) -> int:
    return int(text, 0)


def _int_list(text: str) -> list[int]:
    return [_int(t) for t in text.split(",") if t.strip()]


def _float_list(text: str) -> list[float]:
    return [float(t) for t in text.split(",") if t.strip()]


def _read_keys(path) -> list[int]:
    keys = []
    for line in Path(path).read_text().splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            keys.append(int(line, 0))
    return keys


def _load(path, inject_table=None) -> Sketch:
    s = deserialize(Path(path).read_bytes())
    if inject_table:
        table = InjectedHashTable.from_file(s.params, inject_table)
        s.family = table
    return s


def _write(s: Sketch, path) -> None:
    Path(path).write_bytes(serialize(s))


def cmd_create(args) -> int:
    params = HashParams(w=args.w, k=args.k, n=args.n, seed=args.seed, r=args.r)
    _write(Sketch(params), args.out)
    return 0


def cmd_toggle(args) -> int:
    s = _load(args.sketch, args.inject_table)
    keys = list(args.key or [])
    if args.keys_file:
        keys += _read_keys(args.keys_file)
    for x in keys:
        s.toggle(x)
    _write(s, args.out or args.sketch)
    return 0


def cmd_merge(args) -> int:
    a = _load(args.a)
    a.merge(_load(args.b))
    _write(a, args.out)
    return 0


def _emit_outcome(out, fmt) -> None:
    stream = sys.stdout
    keys = sorted(out.keys)
    if fmt == "json":
        doc = {
            "status": out.status.value,
            "reason": out.reason.value if out.reason else None,
            "rounds": out.rounds_used,
            "keys": keys,
        }
        if out.trace is not None:
            doc["trace"] = [
                {"queue": list(rnd.queue), "steps": [[st.bucket, st.key] for st in rnd.steps]}
                for rnd in out.trace.rounds
            ]
        json.dump(doc, stream)
        stream.write("\n")
        return
    if out.trace is not None:
        print(out.trace.format(), file=sys.stderr)
    reason = f" ({out.reason.value})" if out.reason else ""
    print(f"{out.status.value}{reason} after {out.rounds_used} rounds", file=sys.stderr)
    for x in keys:
        print(x, file=stream)


def cmd_decode(args) -> int:
    s = _load(args.sketch, args.inject_table)
    out = decode(s, DecodeLimits(args.max_rounds), trace=args.trace)
    _emit_outcome(out, args.format)
    return 0 if out.success else 1


def cmd_reconcile(args) -> int:
    report = reconcile_local(
        _read_keys(args.local_keys), Path(args.remote_sketch).read_bytes(), DecodeLimits(args.max_rounds)
    )
    _emit_outcome(report.outcome, args.format)
    print(f"bytes on wire: {report.bytes_on_wire}", file=sys.stderr)
    return 0 if report.success else 1


def _emit_rows(rows, args) -> None:
    text = bench.format_rows(rows, args.format)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_bench(args) -> int:
    if args.bench_cmd == "sweep":
        spec = bench.SweepSpec(
            n=args.n, loads=args.loads, k=args.k, trials=args.trials, base_seed=args.seed, w=args.w, r=args.r
        )
        rows = bench.run_sweep(spec)
    elif args.bench_cmd == "threshold":
        est = bench.estimate_threshold(args.k, args.n, args.trials, args.tol, args.seed)
        rows = bench.estimate_as_rows(est)
    elif args.bench_cmd == "timing":
        rows = bench.time_decode(args.k, args.c, args.ns, args.repeats, args.seed)
    else:
        rows = [bench.anomaly_stats(args.n, args.c, args.k, args.trials, args.seed)]
    _emit_rows(rows, args)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="setsketch", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("create", help="write an empty sketch")
    p.add_argument("--w", type=int, default=64)
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=int, default=32)
    p.add_argument("--seed", type=_int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_create)

    p = sub.add_parser("toggle", help="toggle keys in a sketch file")
    p.add_argument("--sketch", required=True)
    p.add_argument("--key", type=_int, action="append", help="key to toggle (repeatable)")
    p.add_argument("--keys", dest="key", type=_int_list, action="extend", help="comma-separated keys")
    p.add_argument("--keys-file")
    p.add_argument("--out", help="output path (default: overwrite --sketch)")
    p.add_argument("--inject-table", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_toggle)

    p = sub.add_parser("merge", help="XOR two sketches (symmetric difference)")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_merge)

    p = sub.add_parser("decode", help="decode a sketch and print its keys")
    p.add_argument("--sketch", required=True)
    p.add_argument("--trace", action="store_true")
    p.add_argument("--max-rounds", type=int)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--inject-table", help="test only: file of 'key: b1,...,bk' lines")
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("reconcile", help="recover the symmetric difference with a remote sketch")
    p.add_argument("--local-keys", required=True)
    p.add_argument("--remote-sketch", required=True)
    p.add_argument("--max-rounds", type=int)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_reconcile)

    p = sub.add_parser("bench", help="experiments")
    bsub = p.add_subparsers(dest="bench_cmd", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--k", type=int, default=3)
    common.add_argument("--seed", type=_int, default=0)
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--out")

    b = bsub.add_parser("sweep", parents=[common], help="success rate over a load grid")
    b.add_argument("--n", type=int, default=2**16)
    b.add_argument("--loads", type=_float_list, default=[0.5, 0.6, 0.7, 0.75, 0.8, 0.85, 0.9, 0.95])
    b.add_argument("--trials", type=int, default=100)
    b.add_argument("--w", type=int, default=64)
    b.add_argument("--r", type=int, default=32)

    b = bsub.add_parser("threshold", parents=[common], help="bisect the peeling threshold")
    b.add_argument("--n", type=int, default=2**17)
    b.add_argument("--trials", type=int, default=30)
    b.add_argument("--tol", type=float, default=0.01)

    b = bsub.add_parser("timing", parents=[common], help="decode wall time against n")
    b.add_argument("--c", type=float, default=0.75)
    b.add_argument("--ns", type=_int_list, default=[2**16, 2**17, 2**18, 2**19])
    b.add_argument("--repeats", type=int, default=5)

    b = bsub.add_parser("anomalies", parents=[common], help="native anomaly counts and anomalous steps")
    b.add_argument("--n", type=int, default=32)
    b.add_argument("--c", type=float, default=0.5)
    b.add_argument("--trials", type=int, default=500)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (SketchError, OSError, ValueError) as exc:
        print(f"setsketch: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
