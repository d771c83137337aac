"""Command line entry point: construct, verify, pack, gdd, census, bounds.

Exit status is 0 on success, 1 when a design fails validation or
certification, and 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from pathlib import Path

from . import __version__
from .constructions import construct_any
from .design import FourCycleSystem, format_packing, read_packing, validate_packing, validate_system
from .errors import BadCPrime, DesignError, NotAdmissible, Unsupported
from .gdd import format_gdd, format_type, load_gdd, parse_gdd, search_gdd, validate_gdd
from .packer import PackerConfig, expected_bounds, median_retained, run_trials
from .scanner import DEFAULT_MAX_R, DEFAULT_WITNESS_CAP, census_pairs, is_strictly_r_sparse

USAGE_ERRORS = (NotAdmissible, BadCPrime, Unsupported)


def _emit(text: str, path: str | None) -> None:
    if path and path != "-":
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_construct(args) -> int:
    gdd = load_gdd(args.gdd_file) if args.gdd_file else None
    route = "composition" if gdd is not None and args.route == "auto" else args.route
    s = construct_any(args.order, route=route, gdd=gdd, search_budget=args.search_budget,
                      certify_limit=args.certify_limit)
    provenance = {"order": s.v, "cycles": len(s.cycles), **s.meta}
    if args.emit:
        _emit(format_packing(s), args.emit)
        if args.json:
            print(json.dumps(provenance, indent=2))
        else:
            for k, v in provenance.items():
                print(f"{k}: {v}")
    else:
        _emit(format_packing(s), None)
    return 0


def cmd_verify(args) -> int:
    p = read_packing(args.file)
    rep = validate_system(p) if isinstance(p, FourCycleSystem) else validate_packing(p)
    if not rep:
        print(f"invalid: {rep.message}", file=sys.stderr)
        if args.json:
            print(json.dumps({"order": p.v, "cycles": len(p.cycles), "valid": False,
                              "error": rep.message}))
        return 1
    scan = is_strictly_r_sparse(p, args.r, exhaustive=args.exhaustive, census=args.census,
                                witness_cap=args.witness_cap, max_r=args.max_r, threads=args.threads)
    if args.json:
        d = scan.to_dict()
        d["valid"] = True
        print(json.dumps(d, indent=2))
    else:
        kind = "4CS" if isinstance(p, FourCycleSystem) else "packing"
        print(f"{kind} of order {p.v}: {len(p.cycles)} cycles, {rep.message}")
        print(f"strict (no double-diamond): {scan.strict}")
        print(f"r-sparse up to: {scan.r_max} (requested {args.r}, {scan.method})")
        for tag, cc in scan.classes.items():
            print(f"  {tag}: {cc.count}")
        print("certified" if scan.strictly_sparse else "NOT strictly %d-sparse" % args.r)
    return 0 if scan.strictly_sparse else 1


def cmd_census(args) -> int:
    p = read_packing(args.file)
    rep = validate_packing(p)
    if not rep:
        print(f"invalid: {rep.message}", file=sys.stderr)
        return 1
    counts = census_pairs(p)
    if args.json:
        print(json.dumps({"order": p.v, "cycles": len(p.cycles), "census": counts}, indent=2))
    else:
        for tag, n in counts.items():
            print(f"{tag}: {n}")
    return 0


def cmd_pack(args) -> int:
    seed = args.seed
    if seed is None:
        seed = random.SystemRandom().randrange(2**31)
        print(f"seed: {seed}", file=sys.stderr)
    cfg = PackerConfig(args.order, args.r, args.cprime, seed, args.trials)
    outcomes = run_trials(cfg, threads=args.threads)
    best = max(outcomes, key=lambda o: (o.retained, o.seed))
    if args.emit:
        _emit(format_packing(best.packing), args.emit)
    if args.json:
        d = best.to_dict(with_cycles=not args.emit)
        d["trials"] = [o.to_dict(with_cycles=False) for o in outcomes]
        d["medianRetained"] = median_retained(outcomes)
        print(json.dumps(d, indent=2))
    else:
        for o in outcomes:
            print(f"seed {o.seed}: sampled {o.sampled}, bad pairs {o.bad_pair_count}, "
                  f"dense {o.bad_dense_count}, deleted {o.deleted}, retained {o.retained}")
        print(f"best seed {best.seed}: {best.retained} cycles; median {median_retained(outcomes)}; "
              f"guaranteed coefficient bound {best.bound} ~ {float(best.bound):.2f}")
        if not args.emit:
            sys.stdout.write(format_packing(best.packing))
    return 0 if all(o.certified for o in outcomes) else 1


def cmd_bounds(args) -> int:
    b = expected_bounds(args.order, args.cprime, args.r)
    print(json.dumps(b.to_dict(), indent=2))
    return 0


def cmd_gdd_find(args) -> int:
    symmetry = None if args.symmetry <= 1 else args.symmetry
    g = search_gdd(args.type, seed=args.seed, budget=args.budget, symmetry=symmetry)
    note = (f"generated by search_gdd(type={format_type(args.type)}, seed={args.seed}, "
            f"budget={args.budget}, symmetry={args.symmetry})")
    _emit(format_gdd(g, [note]), args.emit)
    if args.emit:
        print(f"4-GDD of type {g.type_string}: {len(g.blocks)} blocks -> {args.emit}")
    return 0


def cmd_gdd_verify(args) -> int:
    g = parse_gdd(Path(args.file).read_text(), validate=False)
    rep = validate_gdd(g)
    print(("valid: " if rep else "invalid: ") + rep.message)
    return 0 if rep else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="sparse4cs", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    ap.add_argument("--threads", type=int, default=os.cpu_count() or 1,
                    help="worker processes for scans and packer trials (default: all cores)")
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("construct", help="build a strictly 4-sparse 4CS(v)")
    c.add_argument("--order", type=int, required=True)
    c.add_argument("--route", choices=["auto", "cyclic", "character", "composition"], default="auto")
    c.add_argument("--gdd-file")
    c.add_argument("--emit", help="write the system here instead of stdout")
    c.add_argument("--search-budget", type=int, default=0,
                   help="allow GDD search with this node budget when no construction applies")
    c.add_argument("--certify-limit", type=int, default=500,
                   help="run the full scan on composed systems up to this order")
    c.add_argument("--json", action="store_true")
    c.set_defaults(func=cmd_construct)

    v = sub.add_parser("verify", help="validate and scan a packing or system file")
    v.add_argument("file")
    v.add_argument("--r", type=int, default=4)
    v.add_argument("--census", action="store_true")
    v.add_argument("--json", action="store_true")
    v.add_argument("--exhaustive", action="store_true",
                   help="run the dense search even when the r=4 fast path applies")
    v.add_argument("--witness-cap", type=int, default=DEFAULT_WITNESS_CAP)
    v.add_argument("--max-r", type=int, default=DEFAULT_MAX_R)
    v.add_argument("--threads", type=int, default=argparse.SUPPRESS,
                   help="same as the global --threads")
    v.set_defaults(func=cmd_verify)

    ce = sub.add_parser("census", help="count two-cycle configurations")
    ce.add_argument("file")
    ce.add_argument("--json", action="store_true")
    ce.set_defaults(func=cmd_census)

    p = sub.add_parser("pack", help="strictly r-sparse packing by random deletion")
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--r", type=int, default=4)
    p.add_argument("--cprime", default="1/88")
    p.add_argument("--seed", type=int)
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--emit")
    p.add_argument("--json", action="store_true")
    p.add_argument("--threads", type=int, default=argparse.SUPPRESS,
                   help="same as the global --threads")
    p.set_defaults(func=cmd_pack)

    b = sub.add_parser("bounds", help="exact expectations from the deletion argument")
    b.add_argument("--order", type=int, required=True)
    b.add_argument("--cprime", default="1/88")
    b.add_argument("--r", type=int, default=4)
    b.set_defaults(func=cmd_bounds)

    g = sub.add_parser("gdd", help="find or verify 4-GDDs")
    gsub = g.add_subparsers(dest="gdd_command", required=True)
    gf = gsub.add_parser("find")
    gf.add_argument("--type", required=True, help="e.g. 2^9,5^1")
    gf.add_argument("--seed", type=int, default=0)
    gf.add_argument("--budget", type=int, default=1_000_000)
    gf.add_argument("--symmetry", type=int, default=3,
                    help="order of the cyclic symmetry imposed (1 for none)")
    gf.add_argument("--emit")
    gf.set_defaults(func=cmd_gdd_find)
    gv = gsub.add_parser("verify")
    gv.add_argument("file")
    gv.set_defaults(func=cmd_gdd_verify)
    return ap


def run(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return args.func(args)
    except USAGE_ERRORS as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return 2
    except DesignError as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return 1
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())
