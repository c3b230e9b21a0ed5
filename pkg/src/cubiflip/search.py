"""Enumeration of small cubications, flip-path search, and the flip census."""

from __future__ import annotations

import time
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Iterator

import numpy as np

from . import _enum
from .canonical import canonical_code, from_code
from .flips import FlipKind, FlipSite, apply_flip, flip_rule, flip_sites
from .gmap import BoundarySignature, QuadGMap, SurfaceClass, boundary_signature, classify_surface
from .homology import j1_is_zero


class InvariantViolation(RuntimeError):
    """A watchdog tripped: some flip changed an invariant or left the enumerated set."""


SURFACES = {
    "sphere": SurfaceClass(2, True, 0, 0),
    "torus": SurfaceClass(0, True, 0, 1),
    "disk": SurfaceClass(1, True, 1, 0),
    "annulus": SurfaceClass(0, True, 2, 0),
    "projective plane": SurfaceClass(1, False, 0, 1),
    "Klein bottle": SurfaceClass(0, False, 0, 2),
    "Moebius strip": SurfaceClass(0, False, 1, 1),
}
_ALIASES = {"rp2": "projective plane", "klein": "Klein bottle", "moebius": "Moebius strip",
            "mobius": "Moebius strip", "möbius": "Moebius strip"}


def surface_class(name: SurfaceClass | str) -> SurfaceClass:
    if isinstance(name, SurfaceClass):
        return name
    key = _ALIASES.get(name.lower().replace("_", " "), name.replace("_", " "))
    for label, sc in SURFACES.items():
        if label.lower() == key.lower():
            return sc
    raise ValueError(f"unknown surface {name!r}; choose from {sorted(SURFACES)}")


def relative_h1_dimension(surface: SurfaceClass) -> int:
    return 2 - surface.euler if surface.boundary_count == 0 else 1 - surface.euler


# ------------------------------------------------------------------ codes

def _code_dtype(n_darts: int):
    return np.uint8 if n_darts <= 256 else np.uint16


def code_bytes(row: np.ndarray) -> bytes:
    n = row.shape[0] // 3
    return n.to_bytes(4, "little") + row.astype(_code_dtype(n)).tobytes()


def code_row(code: bytes) -> np.ndarray:
    n = int.from_bytes(code[:4], "little")
    return np.frombuffer(code[4:], dtype=_code_dtype(n)).astype(np.int32)


def code_faces(code: bytes) -> int:
    return int.from_bytes(code[:4], "little") // 8


# ------------------------------------------------------------------ enumeration

def _boundary_sizes(surface: SurfaceClass, n_faces: int, lengths: tuple[int, ...] | None) -> list[int]:
    if lengths is not None:
        return [sum(lengths)]
    if surface.boundary_count == 0:
        return [0]
    return [nb for nb in range(2, 4 * n_faces + 1, 2) if nb >= surface.boundary_count]


def iter_layer(surface: SurfaceClass | str, n_faces: int, prescribed_boundary=None,
               chunk: int = 1 << 16) -> Iterator[np.ndarray]:
    """Canonical transcripts of all cubications with exactly ``n_faces`` squares,
    in blocks of at most ``chunk`` rows; generation order is deterministic."""
    surface = surface_class(surface)
    lengths = _lengths(prescribed_boundary)
    want = np.array(lengths if lengths is not None else (), dtype=np.int64)
    mode = 1 if surface.orientable else 0
    n = 8 * n_faces
    for nb in _boundary_sizes(surface, n_faces, lengths):
        E = (4 * n_faces + nb) // 2
        V = surface.euler + E - n_faces
        if V < 1:
            continue
        state = _enum.new_state(n_faces)
        stats = np.zeros(1, dtype=np.int64)
        out = np.empty((chunk, 3 * n), dtype=np.int32)
        while True:
            k = _enum.run(n_faces, V, nb, mode, surface.boundary_count, want, *state, out, stats)
            if k:
                yield out[:k].astype(_code_dtype(n))
            if state[-1][_enum.DONE]:
                break


def _lengths(prescribed) -> tuple[int, ...] | None:
    if prescribed is None:
        return None
    if isinstance(prescribed, BoundarySignature):
        return prescribed.edge_counts
    if isinstance(prescribed, str):
        return BoundarySignature.parse(prescribed).edge_counts
    return tuple(sorted(int(x) for x in prescribed))


def layer_codes(surface, n_faces: int, prescribed_boundary=None) -> np.ndarray:
    blocks = list(iter_layer(surface, n_faces, prescribed_boundary))
    n = 8 * n_faces
    if not blocks:
        return np.empty((0, 3 * n), dtype=_code_dtype(n))
    return np.concatenate(blocks)


def enumerate_cubications(surface: SurfaceClass | str, max_faces: int,
                          prescribed_boundary=None) -> list[QuadGMap]:
    """One representative per isomorphism class with 1 <= F <= max_faces.

    Squares are glued side by side in every possible way (a depth-first
    search with a vertex-count bound); only gluings whose root dart yields
    the least canonical transcript are kept.  Results are ordered by F and
    then by canonical code.
    """
    if max_faces < 1:
        raise ValueError("max_faces must be at least 1")
    surface = surface_class(surface)
    out = []
    for F in range(1, max_faces + 1):
        rows = layer_codes(surface, F, prescribed_boundary)
        codes = sorted(code_bytes(r) for r in rows)
        out += [from_code(c) for c in codes]
    return out


# ------------------------------------------------------------------ path search

@dataclass(frozen=True)
class Budget:
    max_faces: int
    max_states: int = 1_000_000
    max_seconds: float | None = None

    def __post_init__(self):
        if self.max_states <= 0:
            raise ValueError("max_states must be positive")


@dataclass
class PathResult:
    outcome: str  # "found" or "exhausted"
    sequence: list[FlipSite] = field(default_factory=list)
    states_visited: int = 0
    exhausted: str | None = None  # which budget dimension ran out

    @property
    def found(self) -> bool:
        return self.outcome == "found"

    def __str__(self) -> str:
        if self.found:
            return f"found length={len(self.sequence)} states={self.states_visited}"
        return f"exhausted by={self.exhausted} states={self.states_visited}"


_RULE_CACHE: dict = {}


def _rule_arrays(kind: FlipKind):
    if kind not in _RULE_CACHE:
        r = flip_rule(kind)
        _RULE_CACHE[kind] = (r.source.alpha, *r.source.steps, r.target.alpha, r.bmap)
    return _RULE_CACHE[kind]


def neighbour_codes(G: QuadGMap, max_faces: int | None = None) -> list[tuple[FlipKind, bytes]]:
    """Distinct (kind, canonical code) pairs reachable by one flip, in a fixed order."""
    out = []
    seen = set()
    for kind in FlipKind:
        if max_faces is not None and G.n_faces + kind.face_change > max_faces:
            continue
        if G.n_faces + kind.face_change < 1:
            continue
        rows = _enum.neighbour_codes(G.alpha, *_rule_arrays(kind))
        for r in rows:
            c = code_bytes(r)
            if c not in seen:
                seen.add(c)
                out.append((kind, c))
    return out


def _check_same_class(A: QuadGMap, B: QuadGMap) -> None:
    if classify_surface(A) != classify_surface(B):
        raise ValueError("complexes live on different surfaces; no flip path exists")
    if boundary_signature(A) != boundary_signature(B):
        raise ValueError("boundary signatures differ; no flip path exists")
    if A.n_faces % 2 != B.n_faces % 2:
        raise ValueError("numbers of squares have different parity; no flip path exists")
    if j1_is_zero(A) != j1_is_zero(B):
        raise ValueError("mid-curve classes differ (one bounds, one does not); no flip path exists")


def flip_path(A: QuadGMap, B: QuadGMap, budget: Budget | None = None) -> PathResult:
    """Bidirectional breadth-first search for a flip sequence from A to B.

    States are canonical codes.  A found sequence is replayed on A and
    checked against B before it is returned.
    """
    A, B = getattr(A, "complex", A), getattr(B, "complex", B)
    _check_same_class(A, B)
    if budget is None:
        budget = Budget(max(A.n_faces, B.n_faces) + 8)
    if budget.max_faces < max(A.n_faces, B.n_faces):
        raise ValueError("budget.max_faces is below an endpoint")
    start, goal = canonical_code(A), canonical_code(B)
    if start == goal:
        return PathResult("found", [], 1)
    parity = A.n_faces % 2
    bsig = boundary_signature(A)
    t0 = time.monotonic()
    # parents[side][code] = (previous code, kind applied to previous)
    parents: list[dict[bytes, tuple[bytes, FlipKind] | None]] = [{start: None}, {goal: None}]
    frontier = [[start], [goal]]
    while frontier[0] and frontier[1]:
        side = 0 if len(frontier[0]) <= len(frontier[1]) else 1
        nxt: list[bytes] = []
        for code in frontier[side]:
            G = from_code(code)
            for kind, c in neighbour_codes(G, budget.max_faces):
                if c in parents[side]:
                    continue
                if code_faces(c) % 2 != parity:
                    raise InvariantViolation("a flip changed the parity of the number of squares")
                parents[side][c] = (code, kind)
                nxt.append(c)
                if c in parents[1 - side]:
                    seq = _replay(A, B, _splice(parents, c))
                    return PathResult("found", seq, len(parents[0]) + len(parents[1]))
                if len(parents[0]) + len(parents[1]) >= budget.max_states:
                    return PathResult("exhausted", [], len(parents[0]) + len(parents[1]), "max_states")
            if budget.max_seconds is not None and time.monotonic() - t0 > budget.max_seconds:
                return PathResult("exhausted", [], len(parents[0]) + len(parents[1]), "max_seconds")
        for c in nxt[:1]:
            if boundary_signature(from_code(c)) != bsig:
                raise InvariantViolation("a flip changed the boundary")
        frontier[side] = sorted(nxt)
    return PathResult("exhausted", [], len(parents[0]) + len(parents[1]), "max_faces")


def _splice(parents, meet: bytes) -> list[tuple[FlipKind, bytes]]:
    """Steps (kind, resulting code) from the start to the goal through ``meet``."""
    fwd = []
    c = meet
    while parents[0][c] is not None:
        prev, kind = parents[0][c]
        fwd.append((kind, c))
        c = prev
    fwd.reverse()
    c = meet
    while parents[1][c] is not None:
        prev, kind = parents[1][c]
        fwd.append((kind.inverse, prev))
        c = prev
    return fwd


def _replay(A: QuadGMap, B: QuadGMap, steps: list[tuple[FlipKind, bytes]]) -> list[FlipSite]:
    G = A
    seq = []
    for kind, want in steps:
        for site in flip_sites(G, kind):
            H = apply_flip(G, site)
            if canonical_code(H) == want:
                seq.append(site)
                G = H
                break
        else:
            raise InvariantViolation(f"could not replay a {kind.value} step")
    if canonical_code(G) != canonical_code(B):
        raise InvariantViolation("replayed sequence does not end at the target")
    return seq


def replay(A, sequence: list[FlipSite]):
    G = A
    for site in sequence:
        G = apply_flip(G, site)
    return G


# ------------------------------------------------------------------ census

@dataclass
class Component:
    representative: bytes
    size: int
    min_faces: int
    invariant: tuple[int, bool, str]  # (j2, j1_is_zero, boundary)


@dataclass
class CensusReport:
    surface: SurfaceClass
    max_faces: int
    boundary: BoundarySignature | None
    class_counts: dict[int, int]
    invariant_counts: dict[tuple[int, bool, str], int]
    components: list[Component]
    unresolved: list[tuple[int, str]] = field(default_factory=list)  # (component, reason)
    searches: int = 0

    @property
    def n_classes(self) -> int:
        return sum(self.class_counts.values())

    @property
    def n_components(self) -> int:
        return len(self.components)

    def components_by_invariant(self) -> dict[tuple[int, bool, str], int]:
        return dict(Counter(c.invariant for c in self.components))

    @property
    def consistent(self) -> bool:
        """Every invariant class is one component and no search ran out."""
        by = self.components_by_invariant()
        return not self.unresolved and all(v == 1 for v in by.values())

    def lines(self) -> list[str]:
        bd = "any" if self.boundary is None else str(self.boundary)
        out = [f"surface={self.surface.name} max_faces={self.max_faces} boundary={bd}",
               "classes_by_F=" + ",".join(f"{F}:{n}" for F, n in sorted(self.class_counts.items())),
               f"classes={self.n_classes} components={self.n_components}"]
        by = self.components_by_invariant()
        for key in sorted(self.invariant_counts):
            j2, zero, b = key
            out.append(f"class j2={j2} j1_zero={'true' if zero else 'false'} boundary={b} "
                       f"cubications={self.invariant_counts[key]} components={by.get(key, 0)}")
        for i, why in self.unresolved:
            out.append(f"unresolved component={i} reason={why}")
        return out

    def __str__(self) -> str:
        return "\n".join(self.lines())


class _UnionFind:
    def __init__(self, n: int):
        self.parent = np.arange(n, dtype=np.int64)

    def find(self, x: int) -> int:
        return int(_enum.uf_find(self.parent, x))

    def union(self, a: int, b: int) -> None:
        _enum.uf_union(self.parent, a, b)


def _collect(blocks: Iterator[np.ndarray], width: int, dtype) -> np.ndarray:
    """Concatenate blocks while holding at most one spare block in memory."""
    held = list(blocks)
    total = sum(len(b) for b in held)
    out = np.empty((total, width), dtype=dtype)
    at = 0
    while held:
        b = held.pop(0)
        out[at:at + len(b)] = b
        at += len(b)
    return out


class _Layers:
    """Stored code matrices, one per face count, with hash tables and global ids."""

    def __init__(self):
        self.rows: dict[int, np.ndarray] = {}
        self.tables: dict[int, np.ndarray] = {}
        self.base: dict[int, int] = {}
        self.total = 0

    def add(self, F: int, rows: np.ndarray) -> None:
        self.rows[F] = rows
        self.tables[F] = _enum.build_table(rows)
        self.base[F] = self.total
        self.total += len(rows)

    def get(self, F: int):
        if F in self.rows:
            return self.rows[F], self.tables[F], self.base[F]
        return np.empty((0, 24 * max(F, 1)), np.uint8), np.full(1, -1, np.int64), 0

    def ident(self, code: bytes) -> int:
        F = code_faces(code)
        if F not in self.rows:
            return -1
        j = _enum.lookup(self.rows[F], self.tables[F], code_row(code))
        return -1 if j < 0 else self.base[F] + int(j)

    def code(self, i: int) -> bytes:
        for F, b in self.base.items():
            if b <= i < b + len(self.rows[F]):
                return code_bytes(self.rows[F][i - b])
        raise IndexError(i)


def census(surface: SurfaceClass | str, max_faces: int, budget: Budget | None = None,
           prescribed_boundary=None, progress: Callable[[str], None] | None = None) -> CensusReport:
    """Flip classes among all cubications of a surface with at most ``max_faces`` squares.

    Every class is first joined to its flip neighbours inside the enumerated
    set (a union-find over canonical codes).  Each remaining component then
    searches outward, through complexes of up to ``budget.max_faces``
    squares, for a class owned by another component of the same invariant
    class.  A flip neighbour missing from the enumeration is an internal
    error.
    """
    surface = surface_class(surface)
    lengths = _lengths(prescribed_boundary)
    if budget is None:
        budget = Budget(max_faces + 8)
    if budget.max_faces < max_faces:
        raise ValueError("budget.max_faces is below the census size")
    say = progress or (lambda msg: None)
    h1_trivial = relative_h1_dimension(surface) == 0

    layers = _Layers()
    counts: dict[int, int] = {}
    for F in range(1, max_faces + 1):
        rows = _collect(iter_layer(surface, F, lengths), 24 * F, _code_dtype(8 * F))
        layers.add(F, rows)
        counts[F] = len(rows)
        say(f"F={F}: {len(rows)} classes")
    faces = np.concatenate([np.full(counts[F], F, np.int16) for F in counts]) if counts else np.empty(0, np.int16)
    if h1_trivial:
        j1z = np.ones(layers.total, dtype=bool)
    else:
        j1z = np.array([j1_is_zero(from_code(code_bytes(r))) for F in counts for r in layers.rows[F]],
                       dtype=bool)
    uf = _UnionFind(layers.total)

    for F in range(1, max_faces + 1):
        has_nb = np.zeros(counts[F], dtype=np.uint8)
        for kind in (FlipKind.B1_collapse, FlipKind.B2_collapse, FlipKind.B3, FlipKind.B31):
            G = F + kind.face_change
            if G < 1 or counts.get(G, 0) == 0 or counts[F] == 0:
                continue
            misses = _enum.connect_block(layers.rows[F], layers.base[F], *_rule_arrays(kind),
                                         *layers.get(G), uf.parent, has_nb)
            if misses:
                raise InvariantViolation(f"{misses} {kind.value} neighbours of F={F} classes "
                                         "are missing from the enumeration")
        say(f"F={F}: linked")

    if lengths is not None:
        bkeys = np.full(layers.total, str(BoundarySignature(lengths)), dtype=object)
    elif surface.boundary_count == 0:
        bkeys = np.full(layers.total, "none", dtype=object)
    else:
        bkeys = np.array([str(boundary_signature(from_code(code_bytes(r))))
                          for F in counts for r in layers.rows[F]], dtype=object)

    def key_of(i: int) -> tuple[int, bool, str]:
        return (int(faces[i]) % 2, bool(j1z[i]), bkeys[i])

    parity = faces % 2
    roots = _enum.uf_roots(uf.parent)
    if np.any(parity != parity[roots]) or np.any(j1z != j1z[roots]) or np.any(bkeys != bkeys[roots]):
        raise InvariantViolation("a flip component mixes invariant classes")
    firsts = np.flatnonzero(roots == np.arange(layers.total))
    sizes = np.bincount(roots, minlength=layers.total)
    # small components first: they are the likeliest to find a way out quickly
    order = sorted((int(sizes[r]), int(r)) for r in firsts)
    open_count = Counter(key_of(r) for _, r in order)
    say(f"{len(firsts)} components inside the census")
    failed: dict[int, str] = {}
    searches = 0
    for _, r in order:
        key = key_of(r)
        if open_count[key] <= 1:
            continue
        searches += 1
        hit, why = _search_out(r, layers, uf, budget)
        if hit >= 0:
            uf.union(r, hit)
            open_count[key] -= 1
        else:
            failed[r] = why
    unresolved = {}
    for r, why in failed.items():
        if open_count[key_of(r)] > 1:
            unresolved.setdefault(uf.find(r), why)
    say(f"{searches} outward searches, {len(unresolved)} without result")

    roots = _enum.uf_roots(uf.parent)
    firsts, sizes = np.unique(roots, return_counts=True)
    # ids grow with F, so a component's root is also one of its smallest members
    components = sorted((Component(layers.code(int(r)), int(n), int(faces[r]), key_of(int(r)))
                         for r, n in zip(firsts, sizes)),
                        key=lambda c: (c.invariant, c.min_faces, c.representative))
    rep_index = {c.representative: k for k, c in enumerate(components)}
    report = CensusReport(surface, max_faces, BoundarySignature(lengths) if lengths is not None else None,
                          counts, dict(Counter(zip(parity.tolist(), j1z.tolist(), bkeys.tolist()))), components,
                          searches=searches)
    for r, why in sorted(unresolved.items()):
        report.unresolved.append((rep_index[layers.code(r)], why))
    return report


def _probe(node: int, layers: _Layers, uf: _UnionFind, budget: Budget) -> int:
    """Two-flip probes: expand ``node`` once and collapse again into a stored layer."""
    F = code_faces(layers.code(node))
    alpha = _enum.alpha_from_code(code_row(layers.code(node)))
    plans = ((FlipKind.B2_expand, (FlipKind.B2_collapse, F), (FlipKind.B1_collapse, F - 2)),
             (FlipKind.B1_expand, (FlipKind.B1_collapse, F), (FlipKind.B2_collapse, F + 2)))
    for up, (d1, f1), (d2, f2) in plans:
        if F + up.face_change > budget.max_faces:
            continue
        hit = _enum.probe_up_down(alpha, *_rule_arrays(up), *_rule_arrays(d1), *layers.get(f1),
                                  *_rule_arrays(d2), *layers.get(f2), uf.parent, node)
        if hit >= 0:
            return int(hit)
    return -1


def _search_out(node: int, layers: _Layers, uf: _UnionFind, budget: Budget) -> tuple[int, str | None]:
    """Id of a stored class in another component reachable from ``node``, or -1 and the reason."""
    hit = _probe(node, layers, uf, budget)
    if hit >= 0:
        return hit, None
    roots = _enum.uf_roots(uf.parent)
    root = int(roots[node])
    for m in np.flatnonzero(roots == root):
        if m != node:
            hit = _probe(int(m), layers, uf, budget)
            if hit >= 0:
                return hit, None
    # breadth-first search beyond the stored layers
    code = layers.code(node)
    seen = {code}
    frontier = [code]
    t0 = time.monotonic()
    while frontier:
        nxt = []
        for c in frontier:
            for _, nc in neighbour_codes(from_code(c), budget.max_faces):
                if nc in seen:
                    continue
                seen.add(nc)
                j = layers.ident(nc)
                if j >= 0 and uf.find(j) != root:
                    return j, None
                nxt.append(nc)
                if len(seen) >= budget.max_states:
                    return -1, "max_states"
            if budget.max_seconds is not None and time.monotonic() - t0 > budget.max_seconds:
                return -1, "max_seconds"
        frontier = sorted(nxt)
    return -1, "max_faces"


# ------------------------------------------------------------------ diagonal moves as flips

@dataclass
class DiagonalRealization:
    kind: str
    model: QuadGMap
    direct: QuadGMap
    result: PathResult
    replayed: QuadGMap | None

    @property
    def matches(self) -> bool:
        return self.replayed is not None and canonical_code(self.replayed) == canonical_code(self.direct)


def rotation_model() -> tuple[QuadGMap, int]:
    """A small torus with a degree-2 vertex whose rotation changes the complex."""
    from .flips import degree2_sites, diagonal_rotation

    for G in enumerate_cubications("torus", 4):
        for anchor, _ in degree2_sites(G):
            if canonical_code(diagonal_rotation(G, anchor)) != canonical_code(G):
                return G, anchor
    raise RuntimeError("no rotation model found")


def realize_diagonal_as_flips(kind: str, model: QuadGMap | None = None, site: int | None = None,
                              shift: int = 1, extra_faces: int = 10,
                              max_states: int = 1_000_000) -> DiagonalRealization:
    """Find flips turning a model complex into its image under a diagonal move."""
    from .flips import diagonal_rotation, diagonal_slide, hexagon_sites
    from .models import grid_torus

    if kind == "slide":
        if model is None:
            model = grid_torus(2, 2)
        if site is None:
            site = hexagon_sites(model)[0][0]
        direct = diagonal_slide(model, site, shift)
    elif kind == "rotation":
        if model is None:
            model, site = rotation_model()
        elif site is None:
            from .flips import degree2_sites
            site = degree2_sites(model)[0][0]
        direct = diagonal_rotation(model, site)
    else:
        raise ValueError("kind is 'slide' or 'rotation'")
    res = flip_path(model, direct, Budget(model.n_faces + extra_faces, max_states))
    replayed = replay(model, res.sequence) if res.found else None
    return DiagonalRealization(kind, model, direct, res, replayed)
