"""Command line entry point.

Exit codes: 0 success, 1 malformed input, 2 search exhausted, 3 an internal
invariant check tripped.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import io
from .curves import arrangement_dot, dual_cubication, extract_curves
from .flips import (DualPath, FlipKind, apply_flip, diagonal_rotation, diagonal_slide, flip_sites,
                    site_at, stabilize)
from .gmap import BoundarySignature, InvalidComplex, classify_surface
from .homology import MarkedCubication, j_invariant
from .canonical import is_isomorphic
from .models import MODELS, standard_model
from .search import Budget, InvariantViolation, census, flip_path, surface_class

EXIT_OK, EXIT_INPUT, EXIT_EXHAUSTED, EXIT_INTERNAL = 0, 1, 2, 3


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _write_complex(G, out: str | None) -> None:
    _emit(io.dumps(G), out)


def cmd_check(args) -> int:
    text = Path(args.file).read_text()
    try:
        G = io.loads(text)
    except InvalidComplex as ex:
        for v in ex.report.violations:
            print(f"violation {v}")
        return EXIT_INPUT
    print(f"ok darts={G.n_darts}")
    return EXIT_OK


def cmd_info(args) -> int:
    G = io.load(args.file)
    sc = classify_surface(G)
    V, E, F = G.counts
    kind = "orientable" if sc.orientable else "non-orientable"
    print(f"{sc.name} {kind} χ={sc.euler} V={V} E={E} F={F} b={sc.boundary_count}")
    return EXIT_OK


def cmd_curves(args) -> int:
    cs = extract_curves(io.load(args.file))
    if args.dot:
        _emit(arrangement_dot(cs) + "\n", args.out)
    else:
        _emit("\n".join(cs.lines()) + "\n", args.out)
    return EXIT_OK


def cmd_invariant(args) -> int:
    j = j_invariant(MarkedCubication(io.load(args.file)))
    pairs = "".join(map(str, j.j1_pairings)) or "-"
    print(f"j2={j.j2} j1_zero={'true' if j.j1_is_zero else 'false'} pairings={pairs}")
    print(f"boundary={j.boundary}")
    return EXIT_OK


def cmd_flip(args) -> int:
    G = io.load(args.file)
    if args.action == "list":
        kinds = [FlipKind.parse(args.kind)] if args.kind else list(FlipKind)
        for k in kinds:
            for s in flip_sites(G, k):
                print(s)
        return EXIT_OK
    if args.sequence:
        steps = io.parse_sequence(Path(args.sequence).read_text())
        H = io.replay_sequence(G, steps)
    else:
        if args.kind is None or args.site is None:
            raise ValueError("flip apply needs --kind and --site, or --sequence")
        H = apply_flip(G, site_at(G, args.kind, args.site))
    _write_complex(H, args.out)
    return EXIT_OK


def cmd_diag(args) -> int:
    G = io.load(args.file)
    if args.action == "slide":
        H = diagonal_slide(G, args.site, args.shift)
    else:
        H = diagonal_rotation(G, args.site)
    _write_complex(H, args.out)
    return EXIT_OK


def cmd_stabilize(args) -> int:
    G = io.load(args.file)
    turns = tuple(int(t) for t in args.turns.split(",")) if args.turns else ()
    M = stabilize(MarkedCubication(G), DualPath(args.dart, turns))
    _write_complex(M.complex, args.out)
    return EXIT_OK


def cmd_dual(args) -> int:
    G = io.load(args.file)
    H = dual_cubication(extract_curves(G))
    if not is_isomorphic(G, H):
        raise InvariantViolation("dual of the curve arrangement differs from the input")
    _write_complex(H, args.out)
    return EXIT_OK


def cmd_path(args) -> int:
    A, B = io.load(args.source), io.load(args.target)
    max_faces = args.max_faces or max(A.n_faces, B.n_faces) + 8
    res = flip_path(A, B, Budget(max_faces, args.max_states, args.max_seconds))
    print(res, file=sys.stderr)
    if not res.found:
        return EXIT_EXHAUSTED
    _emit(io.dumps_sequence(res.sequence), args.out)
    return EXIT_OK


def cmd_census(args) -> int:
    max_faces = args.max_faces
    budget = Budget(args.budget_faces or max_faces + 8, args.max_states, args.max_seconds)
    bd = BoundarySignature.parse(args.boundary) if args.boundary else None
    report = census(surface_class(args.surface), max_faces, budget, bd)
    _emit(str(report) + "\n", args.out)
    return EXIT_OK if not report.unresolved else EXIT_EXHAUSTED


def cmd_model(args) -> int:
    _write_complex(standard_model(args.name, *args.params), args.out)
    return EXIT_OK


def cmd_export(args) -> int:
    G = io.load(args.file)
    if args.arrangement:
        _emit(arrangement_dot(extract_curves(G)) + "\n", args.out)
    else:
        _emit(io.skeleton_dot(G), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cubiflip", description="Surface cubications and cubical flips.")
    p.add_argument("--seed", type=int, default=0,
                   help="accepted for reproducibility; every operation is deterministic")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("check", help="validate a QGM file")
    s.add_argument("file")
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("info", help="surface type and cell counts")
    s.add_argument("file")
    s.set_defaults(func=cmd_info)

    s = sub.add_parser("curves", help="curve system report")
    s.add_argument("file")
    s.add_argument("--dot", action="store_true")
    s.add_argument("--out")
    s.set_defaults(func=cmd_curves)

    s = sub.add_parser("invariant", help="the flip invariant j")
    s.add_argument("file")
    s.set_defaults(func=cmd_invariant)

    s = sub.add_parser("flip", help="list or apply flips")
    s.add_argument("action", choices=["list", "apply"])
    s.add_argument("file")
    s.add_argument("--kind", choices=[k.value for k in FlipKind])
    s.add_argument("--site", type=int, help="anchor dart of the site")
    s.add_argument("--sequence", help="file of 'KIND ANCHOR' lines to replay")
    s.add_argument("--out")
    s.set_defaults(func=cmd_flip)

    s = sub.add_parser("diag", help="diagonal slide or rotation")
    s.add_argument("action", choices=["slide", "rotate"])
    s.add_argument("file")
    s.add_argument("--site", type=int, required=True)
    s.add_argument("--shift", type=int, default=1, choices=[1, 2])
    s.add_argument("--out")
    s.set_defaults(func=cmd_diag)

    s = sub.add_parser("stabilize", help="add a circle around a dual path")
    s.add_argument("file")
    s.add_argument("--dart", type=int, required=True, help="first dart of the path")
    s.add_argument("--turns", default="", help="comma-separated turns at inner vertices")
    s.add_argument("--out")
    s.set_defaults(func=cmd_stabilize)

    s = sub.add_parser("dual", help="rebuild the cubication from its curve arrangement")
    s.add_argument("file")
    s.add_argument("--out")
    s.set_defaults(func=cmd_dual)

    s = sub.add_parser("path", help="search for a flip sequence")
    s.add_argument("source")
    s.add_argument("target")
    s.add_argument("--max-faces", type=int)
    s.add_argument("--max-states", type=int, default=1_000_000)
    s.add_argument("--max-seconds", type=float)
    s.add_argument("--out")
    s.set_defaults(func=cmd_path)

    s = sub.add_parser("census", help="flip classes of small cubications")
    s.add_argument("--surface", required=True)
    s.add_argument("--max-faces", type=int, required=True)
    s.add_argument("--boundary")
    s.add_argument("--budget-faces", type=int, help="size cap while searching (default max-faces + 8)")
    s.add_argument("--max-states", type=int, default=1_000_000)
    s.add_argument("--max-seconds", type=float)
    s.add_argument("--out")
    s.set_defaults(func=cmd_census)

    s = sub.add_parser("model", help="write a standard model as QGM")
    s.add_argument("name", choices=sorted(MODELS))
    s.add_argument("params", nargs="*", type=int)
    s.add_argument("--out")
    s.set_defaults(func=cmd_model)

    s = sub.add_parser("export", help="DOT export")
    s.add_argument("file")
    s.add_argument("--dot", action="store_true", required=True)
    s.add_argument("--arrangement", action="store_true", help="export the curve arrangement")
    s.add_argument("--out")
    s.set_defaults(func=cmd_export)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InvariantViolation as ex:
        print(f"internal error: {ex}", file=sys.stderr)
        return EXIT_INTERNAL
    except InvalidComplex as ex:
        for v in ex.report.violations:
            print(f"invalid: {v}", file=sys.stderr)
        return EXIT_INPUT
    except (ValueError, OSError) as ex:
        print(f"error: {ex}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
