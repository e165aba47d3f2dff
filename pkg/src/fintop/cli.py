"""Command line interface.

Subcommands:
  generate   write per-level sample points and a tower config
  build      build a tower and write a self-contained dump (and DOT files)
  homology   Betti numbers per level as CSV, plus component counts
  verify     schedule, bonding and thread certificates

Exit codes: 0 success, 1 usage error, 2 validation failure, 3 resource cap.
All numeric output is printed to 12 significant digits.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import __version__
from . import finite_space as F
from . import homology as H
from . import limit as Lim
from . import metric as M
from . import tower as T

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VALIDATION = 2
EXIT_RESOURCE = 3

DOT_CAP = 500


def fmt(v: float) -> str:
    return f"{float(v):.12g}"


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _add_common(p: argparse.ArgumentParser, space: bool = True) -> None:
    if space:
        p.add_argument("--space", choices=["circle", "cantor", "interval",
                                           "two_squares"],
                       help="named generator space")
        p.add_argument("--config", help="tower config JSON")
        p.add_argument("--depth", type=int, default=3,
                       help="number of levels for --space (default 3)")
    p.add_argument("--out", help="output path (default: stdout)")
    p.add_argument("--tolerance", type=float, default=1e-9,
                   help="relative tolerance for distance comparisons")
    p.add_argument("--max-dim", type=int, default=3,
                   help="largest stored element cardinality minus one")
    p.add_argument("--k-max", type=int, default=1,
                   help="top homology degree")
    p.add_argument("--relaxed", action="store_true",
                   help="use the halved-epsilon schedule without gamma")
    p.add_argument("--seed", type=int, default=7,
                   help="seed for randomized generators")
    p.add_argument("--max-elements", type=int, default=T.DEFAULT_MAX_ELEMENTS,
                   help="resource cap on stored simplices per level")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="fintop",
        description="Finite topological approximation of compact metric spaces")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write sample points and a config")
    _add_common(g)

    b = sub.add_parser("build", help="build a tower and dump it")
    _add_common(b)
    b.add_argument("--dot", type=int, metavar="LEVEL",
                   help="also write the Hasse diagram of one level as DOT")

    h = sub.add_parser("homology", help="Betti numbers per level as CSV")
    _add_common(h)
    h.add_argument("--field", default="q",
                   help="coefficients: q, z, or p:PRIME (default q)")
    h.add_argument("--induced", action="store_true",
                   help="also print ranks of the bonding maps on homology")

    v = sub.add_parser("verify", help="schedule, bonding and thread checks")
    _add_common(v)
    v.add_argument("--thread", metavar="COORDS",
                   help="comma-separated point to thread through the tower")
    return ap


def make_tower(args) -> T.Tower:
    if getattr(args, "config", None):
        cfg = T.load_config(args.config)
        if args.relaxed:
            cfg["mode"] = T.RELAXED
        cfg.setdefault("max_dim", args.max_dim)
        cfg.setdefault("k_max", args.k_max)
        cfg.setdefault("tolerance", args.tolerance)
        cfg.setdefault("max_elements", args.max_elements)
        return T.tower_from_config(cfg, base_dir=os.path.dirname(args.config) or ".")
    if getattr(args, "space", None):
        mode = T.RELAXED if args.relaxed else None
        return T.build_tower(args.space, args.depth, max_dim=args.max_dim,
                             k_max=args.k_max, mode=mode, seed=args.seed,
                             max_elements=args.max_elements, tol=args.tolerance)
    raise CliError("one of --space or --config is required", EXIT_USAGE)


def _open_out(args):
    return open(args.out, "w") if args.out else sys.stdout


def cmd_generate(args) -> int:
    if not args.space:
        raise CliError("generate needs --space", EXIT_USAGE)
    outdir = args.out or "."
    os.makedirs(outdir, exist_ok=True)
    levels = []
    for n in range(1, args.depth + 1):
        if args.space == "two_squares":
            sample = M.two_squares_sample(n, 336 * 4 ** (n - 1), args.seed)
        else:
            sample = T.GENERATORS[args.space](n)
        fname = f"{args.space}_level{n}.csv"
        M.save_points_csv(os.path.join(outdir, fname), sample.points,
                          header=f"{args.space} level {n} "
                                 f"epsilon={fmt(sample.epsilon)}")
        entry = {"points_file": fname, "epsilon": sample.epsilon}
        if sample.gamma is not None:
            entry["gamma"] = sample.gamma
            entry["gamma_exact"] = sample.gamma_exact
        levels.append(entry)
        for w in sample.warnings:
            print(f"warning: level {n}: {w}", file=sys.stderr)
    mode = T.RELAXED if (args.relaxed or args.space in ("cantor", "two_squares")) \
        else T.STRICT
    if args.space == "circle":
        context = {"kind": "circle_geodesic"}
    else:
        context = {"kind": "euclidean"}
    cfg = {"mode": mode, "max_dim": args.max_dim, "k_max": args.k_max,
           "tolerance": args.tolerance, "label": args.space,
           "context": context, "levels": levels}
    cfg_path = os.path.join(outdir, f"{args.space}_tower.json")
    with open(cfg_path, "w") as fh:
        json.dump(cfg, fh, indent=2)
    print(f"wrote {args.depth} point files and {cfg_path}")
    return EXIT_OK


def cmd_build(args) -> int:
    tower = make_tower(args)
    dump = T.dump_tower(tower)
    if args.dot is not None:
        if not 1 <= args.dot <= len(tower):
            raise CliError(f"--dot level {args.dot} out of range", EXIT_USAGE)
        term = tower.term(args.dot)
        try:
            dot = F.to_dot(term.space(), name=f"level_{args.dot}",
                           max_elements=DOT_CAP)
        except F.FiniteSpaceError as exc:
            raise CliError(str(exc), EXIT_RESOURCE)
        base = args.out or "tower.json"
        dot_path = os.path.splitext(base)[0] + f"_level{args.dot}.dot"
        with open(dot_path, "w") as fh:
            fh.write(dot + "\n")
        print(f"wrote {dot_path}", file=sys.stderr)
    fh = _open_out(args)
    json.dump(dump, fh, indent=2)
    fh.write("\n")
    if args.out:
        fh.close()
        print(f"wrote {args.out}")
    return EXIT_OK


def cmd_homology(args) -> int:
    tower = make_tower(args)
    try:
        H.parse_field(args.field)
    except H.HomologyError as exc:
        raise CliError(str(exc), EXIT_USAGE)
    rows = []
    torsion_notes = []
    comps = []
    for n in range(1, len(tower) + 1):
        term = tower.term(n)
        try:
            res = H.betti_numbers(term.complex, tower.k_max, args.field,
                                  max_simplices=args.max_elements)
        except H.HomologyError as exc:
            raise CliError(str(exc), EXIT_RESOURCE)
        rows.append(res.betti)
        comps.append(H.component_count(term.sample.pairwise(), term.threshold))
        if res.torsion and any(res.torsion):
            torsion_notes.append(f"level {n}: torsion {res.torsion}")
    fh = _open_out(args)
    header = "degree," + ",".join(f"level_{n}" for n in range(1, len(tower) + 1))
    fh.write(header + "\n")
    for k in range(tower.k_max + 1):
        fh.write(f"H_{k}," + ",".join(str(r[k]) for r in rows) + "\n")
    fh.write("components," + ",".join(str(c) for c in comps) + "\n")
    if args.induced:
        for n in range(1, len(tower)):
            for k in range(tower.k_max + 1):
                r = induced_bonding_rank(tower, n, n + 1, k, args.field)
                fh.write(f"rank H_{k}(q_{n}_{n + 1}),"
                         f"{'capped' if r is None else r}\n")
    if args.out:
        fh.close()
        print(f"wrote {args.out}")
    for note in torsion_notes:
        print(note, file=sys.stderr)
    return EXIT_OK


def induced_bonding_rank(tower: T.Tower, n: int, m: int, k: int,
                         field_spec: str = "q"):
    """Rank of a bonding map on degree-k homology of the order complexes.

    Returns None when some image payload falls outside the stored
    enumeration of the lower level (cardinality cap).
    """
    assignment, report = tower.bonding_element_map(n, m)
    if report.capped_images or report.empty_images:
        return None
    src = tower.term(m).space().order_complex(max_chain=tower.k_max + 2)
    dst = tower.term(n).space().order_complex(max_chain=tower.k_max + 2)
    vmap = {i: assignment[i] for i in range(len(assignment))}
    return H.induced_rank(src, dst, vmap, k, field_spec)


def cmd_verify(args) -> int:
    tower = make_tower(args)
    failures = 0
    for p in tower.schedule_problems:
        print(f"FAIL schedule: {p}")
        failures += 1
    if not tower.schedule_problems:
        print(f"ok schedule: {tower.mode} inequalities hold on "
              f"{len(tower)} levels")
    for n, rep in enumerate(tower.verify_bondings(), start=1):
        tag = "ok" if rep.well_defined else "FAIL"
        if not rep.well_defined:
            failures += 1
        print(f"{tag} bonding {n + 1}->{n}: worst diameter "
              f"{fmt(rep.worst_diameter)} < {fmt(rep.bound)}, "
              f"empty={rep.empty_images}, capped={rep.capped_images}")
    for n in range(1, len(tower) - 1):
        ok, worst = tower.projection_square_certificate(n)
        tag = "ok" if ok else "FAIL"
        if not ok:
            failures += 1
        print(f"{tag} square at level {n}: union diameter {fmt(worst)} < "
              f"{fmt(tower.term(n).threshold)}")
    if args.thread:
        coords = [float(v) for v in args.thread.split(",")]
        ctx = tower.term(1).sample.context
        x = coords[0] if ctx.kind == "circle_geodesic" else np.array(coords)
        th = Lim.canonical_thread(tower, x, tol=args.tolerance)
        rep = Lim.verify_thread(tower, th, tol=args.tolerance)
        checks = [("compatible", rep.compatible),
                  ("element-bounds", all(rep.element_levels)),
                  ("convergence", rep.convergence_ok),
                  ("ball-bound", rep.ball_bound_ok),
                  ("inter-level", rep.inter_level_ok)]
        for name, ok in checks:
            tag = "ok" if ok else "FAIL"
            if not ok:
                failures += 1
            print(f"{tag} thread {name}")
        print("thread convergence: " +
              ", ".join(fmt(v) for v in rep.convergence))
    return EXIT_VALIDATION if failures else EXIT_OK


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        # argparse uses exit code 2 for usage errors; remap to the contract
        return EXIT_USAGE if exc.code not in (0,) else EXIT_OK
    handlers = {"generate": cmd_generate, "build": cmd_build,
                "homology": cmd_homology, "verify": cmd_verify}
    try:
        return handlers[args.command](args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except (M.MetricError, T.TowerError, F.FiniteSpaceError,
            H.HomologyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except T.ResourceCap as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE


if __name__ == "__main__":
    sys.exit(main())
