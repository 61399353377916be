"""Command line entry point: ``spiderbv gen|build|verify|bench|accuracy``."""
from __future__ import annotations

import argparse
import logging
import sys
import time
from pathlib import Path

from . import datagen
from .bench import accuracy_report, make_workload, run_bench, verify, write_csv
from .serialize import load_bitvector, load_index, save_bitvector, save_index
from .variants import STRUCTURES, build_structure

log = logging.getLogger("spiderbv")


def _cmd_gen(args):
    if args.text_file or args.synthetic_bytes:
        if not args.preset:
            raise SystemExit("--preset is required with --text-file/--synthetic-bytes")
        if args.text_file:
            data = Path(args.text_file).read_bytes()
        else:
            data = datagen.synthetic_corpus(args.preset, args.synthetic_bytes, args.seed)
        bv = datagen.text_to_bits(data, args.preset)
    else:
        if args.n is None or args.density is None:
            raise SystemExit("give --n and --density, or --preset with --text-file/--synthetic-bytes")
        bv = datagen.gen_random(args.n, args.density, args.seed)
    save_bitvector(bv, args.out)
    print(f"wrote {args.out}: n={bv.n} n1={bv.n1} density={bv.n1 / bv.n:.6f}")


def _cmd_build(args):
    bv = load_bitvector(args.input)
    t0 = time.perf_counter()
    idx = build_structure(args.structure, bv)
    ms = 1e3 * (time.perf_counter() - t0)
    space = idx.space()
    print(f"{args.structure}: n={idx.n} n1={idx.n1} build_ms={ms:.2f} space_pct={space.overhead_pct:.4f}")
    for name, nbytes in space.component_bytes.items():
        print(f"  {name}: {nbytes} bytes")
    if args.out:
        save_index(idx, args.out)
        print(f"wrote {args.out}")


def _cmd_verify(args):
    bv = load_bitvector(args.input)
    idx = load_index(args.index) if args.index else build_structure(args.structure, bv)
    sample = "full" if args.sample == "full" else int(args.sample)
    res = verify(idx, bv, sample, seed=args.seed)
    if res.ok:
        print(f"PASS {idx.name}: {res.checked_rank} rank and {res.checked_select} select queries match the oracle")
        return 0
    print(f"FAIL {idx.name}: {res.counterexample}")
    return 1


def _cmd_bench(args):
    bv = load_bitvector(args.input)
    kinds = ["rank", "select"] if args.kind == "both" else [args.kind]
    structures = args.structures or list(STRUCTURES)
    reports = []
    for name in structures:
        rep = run_bench(bv, name, kinds, warmup=args.warmup, queries=args.queries,
                        reps=args.reps, seed=args.seed, dataset=args.dataset or Path(args.input).stem)
        reports.append(rep)
        for kind, res in rep.kinds.items():
            wrong = "" if res.mean_wrong_blocks is None else f" wrong_blocks={res.mean_wrong_blocks:.4f}"
            same = len(set(res.checksums)) == 1
            print(f"{name:20s} {kind:6s} {res.mean_ns:9.2f} ns  build {rep.build_ms:9.2f} ms  "
                  f"space {rep.space_pct:.3f}%{wrong}  checksum {'stable' if same else 'UNSTABLE'}")
    if args.csv:
        write_csv(reports, args.csv)
        print(f"wrote {args.csv}")


def _cmd_accuracy(args):
    bv = load_bitvector(args.input)
    idx = build_structure(args.structure, bv)
    queries = make_workload("select", bv.n, bv.n1, args.queries, args.seed).queries
    print(f"{args.structure}: mean wrong_blocks = {accuracy_report(idx, queries):.6f} over {args.queries} queries")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="spiderbv", description="SPIDER rank/select bit vectors")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)
    structures = sorted(STRUCTURES)

    g = sub.add_parser("gen", help="generate a bit vector file")
    g.add_argument("--n", type=int)
    g.add_argument("--density", type=float)
    g.add_argument("--text-file")
    g.add_argument("--synthetic-bytes", type=int, help="generate a synthetic corpus of this many bytes for --preset")
    g.add_argument("--preset", choices=sorted(datagen.PRESETS))
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", required=True)
    g.set_defaults(func=_cmd_gen)

    b = sub.add_parser("build", help="build an index and report its space")
    b.add_argument("--structure", choices=structures, default="spider")
    b.add_argument("--in", dest="input", required=True)
    b.add_argument("--out", help="write the index (spider and ni-spider only)")
    b.set_defaults(func=_cmd_build)

    v = sub.add_parser("verify", help="check an index against the oracle")
    v.add_argument("--structure", choices=structures, default="spider")
    v.add_argument("--in", dest="input", required=True)
    v.add_argument("--index", help="verify a saved index instead of building one")
    v.add_argument("--sample", default="full", help="'full' or a number of random queries per kind")
    v.add_argument("--seed", type=int, default=0)
    v.set_defaults(func=_cmd_verify)

    be = sub.add_parser("bench", help="time queries and builds")
    be.add_argument("--structure", "--structures", dest="structures", nargs="+", choices=structures)
    be.add_argument("--in", dest="input", required=True)
    be.add_argument("--warmup", type=int, default=10**6)
    be.add_argument("--queries", type=int, default=10**6)
    be.add_argument("--reps", type=int, default=5)
    be.add_argument("--kind", choices=["rank", "select", "both"], default="both")
    be.add_argument("--seed", type=int, default=0)
    be.add_argument("--dataset")
    be.add_argument("--csv")
    be.set_defaults(func=_cmd_bench)

    a = sub.add_parser("accuracy", help="mean wrong blocks of select predictions")
    a.add_argument("--structure", choices=structures, default="spider")
    a.add_argument("--in", dest="input", required=True)
    a.add_argument("--queries", type=int, default=10**6)
    a.add_argument("--seed", type=int, default=0)
    a.set_defaults(func=_cmd_accuracy)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.command == "build" and args.out and args.structure not in ("spider", "ni-spider"):
        raise SystemExit(f"{args.structure} has no serialized form; only spider and ni-spider can be saved")
    return args.func(args) or 0


if __name__ == "__main__":
    sys.exit(main())
