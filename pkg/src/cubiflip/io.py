"""Text formats: QGM v1 complexes, flip-sequence files, DOT graphs."""

from __future__ import annotations

from pathlib import Path
from typing import Iterable

import numpy as np

from .flips import FlipKind, FlipSite, site_at
from .gmap import InvalidComplex, QuadGMap, validate


class FormatError(ValueError):
    pass


def dumps(G: QuadGMap) -> str:
    lines = ["qgm 1", f"darts {G.n_darts}"]
    for i in range(3):
        lines.append(f"a{i}: " + " ".join(str(int(x)) for x in G.alpha[i]))
    return "\n".join(lines) + "\n"


def loads(text: str) -> QuadGMap:
    """Parse QGM v1; the result is validated and rejected with the report."""
    tokens = []
    for line in text.splitlines():
        tokens += line.split("#", 1)[0].split()
    if tokens[:2] != ["qgm", "1"]:
        raise FormatError("missing 'qgm 1' header")
    if len(tokens) < 4 or tokens[2] != "darts":
        raise FormatError("missing 'darts N' line")
    try:
        n = int(tokens[3])
    except ValueError:
        raise FormatError("dart count is not an integer") from None
    if n < 0:
        raise FormatError("negative dart count")
    pos = 4
    rows = []
    for i in range(3):
        if pos >= len(tokens) or tokens[pos] != f"a{i}:":
            raise FormatError(f"expected 'a{i}:'")
        vals = tokens[pos + 1:pos + 1 + n]
        if len(vals) != n:
            raise FormatError(f"a{i} has fewer than {n} entries")
        try:
            rows.append([int(v) for v in vals])
        except ValueError:
            raise FormatError(f"a{i} has a non-integer entry") from None
        pos += 1 + n
    if pos != len(tokens):
        raise FormatError("trailing data after a2")
    alpha = np.array(rows, dtype=np.int64).reshape(3, n)
    if n and (alpha.min() < 0 or alpha.max() >= n):
        raise FormatError("dart index out of range")
    G = QuadGMap.from_alpha(alpha.astype(np.int32))
    report = validate(G)
    if not report:
        raise InvalidComplex(report)
    return G


def load(path: str | Path) -> QuadGMap:
    return loads(Path(path).read_text())


def save(G: QuadGMap, path: str | Path) -> None:
    Path(path).write_text(dumps(G))


def dumps_sequence(sites: Iterable[FlipSite]) -> str:
    return "".join(f"{s.kind.value} {s.anchor}\n" for s in sites)


def parse_sequence(text: str) -> list[tuple[FlipKind, int]]:
    out = []
    for n, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise FormatError(f"line {n}: expected 'KIND ANCHOR'")
        try:
            out.append((FlipKind.parse(parts[0]), int(parts[1])))
        except ValueError as ex:
            raise FormatError(f"line {n}: {ex}") from None
    return out


def replay_sequence(M, steps: list[tuple[FlipKind, int]]):
    """Apply ``KIND ANCHOR`` steps one after another."""
    from .flips import _unmark, apply_flip

    for kind, anchor in steps:
        M = apply_flip(M, site_at(_unmark(M), kind, anchor))
    return M


def skeleton_dot(G: QuadGMap, name: str = "cubication") -> str:
    """DOT text of the 1-skeleton; boundary edges are drawn bold."""
    ends = G.edge_endpoints()
    bd = G.boundary_edges
    lines = [f"graph {name} {{"]
    for v in range(G.counts[0]):
        lines.append(f"  v{v};")
    for e, (x, y) in enumerate(ends):
        style = " [style=bold]" if e in bd else ""
        lines.append(f"  v{x} -- v{y}{style};")
    lines.append("}")
    return "\n".join(lines) + "\n"
