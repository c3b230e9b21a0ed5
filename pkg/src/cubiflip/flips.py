"""Cubical flips: swapping complementary disk patches of the cube boundary.

The boundary of the 3-cube splits into two complementary disks in four
ways, up to symmetry: one square against the other five, two adjacent
squares against the other four, the three squares at a corner against the
three at the opposite corner, and a strip of three squares against the
crosswise strip.  A flip finds one side of a split inside a cubication and
replaces it by the other side, gluing along the common boundary polygon
exactly as the two halves are glued in the cube.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from . import _kernels, gf2
from .gmap import A0, A1, A2, InvalidComplex, QuadGMap, from_faces
from .models import CUBE_FACES, cube_sphere


class FlipKind(enum.Enum):
    B1_expand = "b1"
    B1_collapse = "b1c"
    B2_expand = "b2"
    B2_collapse = "b2c"
    B3 = "b3"
    B31 = "b31"

    @classmethod
    def parse(cls, text: str) -> "FlipKind":
        for k in cls:
            if text in (k.value, k.name):
                return k
        raise ValueError(f"unknown flip kind {text!r}")

    @property
    def inverse(self) -> "FlipKind":
        return _INVERSE[self]

    @property
    def face_change(self) -> int:
        return {"b1": 4, "b1c": -4, "b2": 2, "b2c": -2, "b3": 0, "b31": 0}[self.value]


_INVERSE = {
    FlipKind.B1_expand: FlipKind.B1_collapse,
    FlipKind.B1_collapse: FlipKind.B1_expand,
    FlipKind.B2_expand: FlipKind.B2_collapse,
    FlipKind.B2_collapse: FlipKind.B2_expand,
    FlipKind.B3: FlipKind.B3,
    FlipKind.B31: FlipKind.B31,
}


class Pattern:
    """A connected quad patch, with a spanning walk for anchored matching."""

    def __init__(self, name: str, alpha: np.ndarray):
        self.name = name
        self.alpha = np.ascontiguousarray(alpha, dtype=np.int32)
        n = self.alpha.shape[1]
        parent, via, child = [], [], []
        seen = {0}
        queue = [0]
        for d in queue:
            for i in range(3):
                e = int(self.alpha[i, d])
                if e not in seen:
                    seen.add(e)
                    queue.append(e)
                    parent.append(d)
                    via.append(i)
                    child.append(e)
        if len(seen) != n:
            raise ValueError("pattern must be connected")
        self.steps = tuple(np.array(x, dtype=np.int32) for x in (parent, via, child))
        self.gmap = QuadGMap.from_alpha(self.alpha)
        self.is_boundary = self.alpha[2] == np.arange(n)
        _, auts = _kernels.match_pattern(self.alpha, *self.steps, self.alpha)
        self.automorphisms = [a for a in auts if np.array_equal(self.is_boundary[a], self.is_boundary)]

    @property
    def n_darts(self) -> int:
        return self.alpha.shape[1]

    def boundary_walk(self) -> list[int]:
        """Boundary darts of a disk patch in cyclic order, side by side."""
        a0, a1, a2 = self.alpha
        start = int(np.flatnonzero(self.is_boundary)[0])
        walk, d = [], start
        while True:
            walk += [d, int(a0[d])]
            x = int(a1[a0[d]])
            while a2[x] != x:
                x = int(a1[a2[x]])
            d = x
            if d == start:
                return walk


@dataclass(frozen=True, eq=False)
class Rule:
    """Replace ``source`` by ``target``; ``bmap[s]`` is the target dart taking
    the place of boundary dart s of the source (-1 on interior darts)."""

    source: Pattern
    target: Pattern
    bmap: np.ndarray


def _cube_patch(faces: Sequence[int]) -> tuple[Pattern, np.ndarray]:
    cube = cube_sphere()
    darts = np.concatenate([np.arange(8 * q, 8 * q + 8) for q in faces])
    local = np.full(cube.n_darts, -1, dtype=np.int32)
    local[darts] = np.arange(len(darts), dtype=np.int32)
    alpha = local[cube.alpha[:, darts]]
    outside = alpha[2] < 0
    alpha[2, outside] = np.flatnonzero(outside)
    return Pattern("".join(f"F{q}" for q in faces), alpha), darts


def _cube_rule(src_faces: Sequence[int]) -> Rule:
    rest = [q for q in range(6) if q not in src_faces]
    src, src_darts = _cube_patch(src_faces)
    tgt, tgt_darts = _cube_patch(rest)
    where = {int(c): i for i, c in enumerate(tgt_darts)}
    a2 = cube_sphere().a2
    bmap = np.full(src.n_darts, -1, dtype=np.int32)
    for s in np.flatnonzero(src.is_boundary):
        bmap[s] = where[int(a2[src_darts[s]])]
    return Rule(src, tgt, bmap)


def _rotation_rule(pattern: Pattern, shift: int) -> Rule:
    """Same patch, glued back after turning its boundary by ``shift`` sides."""
    walk = pattern.boundary_walk()
    m = len(walk)
    bmap = np.full(pattern.n_darts, -1, dtype=np.int32)
    for i, d in enumerate(walk):
        bmap[d] = walk[(i + 2 * shift) % m]
    return Rule(pattern, pattern, bmap)


@lru_cache(maxsize=None)
def flip_rule(kind: FlipKind) -> Rule:
    # bottom, top, front, back, left, right are faces 0..5 of the model cube
    if kind is FlipKind.B1_expand:
        return _cube_rule([0])
    if kind is FlipKind.B1_collapse:
        return _cube_rule([1, 2, 3, 4, 5])
    if kind is FlipKind.B2_expand:
        return _cube_rule([0, 2])
    if kind is FlipKind.B2_collapse:
        return _cube_rule([1, 3, 4, 5])
    if kind is FlipKind.B3:
        return _cube_rule([0, 2, 4])
    return _cube_rule([2, 0, 3])


@lru_cache(maxsize=None)
def slide_rule(shift: int) -> Rule:
    if shift not in (1, 2):
        raise ValueError("a hexagon has two other diameters: shift is 1 or 2")
    return _rotation_rule(flip_rule(FlipKind.B2_expand).source, shift)


@lru_cache(maxsize=None)
def rotation_rule() -> Rule:
    # squares (v, a, x, b) and (v, b, y, a): v has degree 2 inside quadrilateral a x b y
    d = from_faces([("v", "a", "x", "b"), ("v", "b", "y", "a")])
    return _rotation_rule(Pattern("D", d.alpha), 1)


@dataclass(frozen=True)
class FlipSite:
    """An occurrence of a rule's source patch; ``image[s]`` is the map dart of
    pattern dart s and ``anchor == image[0]``."""

    kind: FlipKind
    anchor: int
    image: tuple[int, ...]
    immersed: bool = False

    def __str__(self) -> str:
        tag = " immersed" if self.immersed else ""
        return f"{self.kind.value} {self.anchor}{tag}"


def match(G: QuadGMap, pattern: Pattern) -> list[tuple[int, np.ndarray]]:
    """Occurrences of ``pattern`` in G up to pattern symmetry, least anchor first."""
    anchors, images = _kernels.match_pattern(pattern.alpha, *pattern.steps, G.alpha)
    seen = set()
    out = []
    auts = np.array(pattern.automorphisms)
    for a, img in zip(anchors, images):
        perm = img[auts]
        key = tuple(perm[np.lexsort(perm.T[::-1])[0]].tolist())
        if key in seen:
            continue
        seen.add(key)
        out.append((int(a), img))
    return out


def _substitute(G: QuadGMap, rule: Rule, image: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """New involution array and the old-to-new dart map (-1 for removed darts)."""
    image = np.asarray(image, dtype=np.int32)
    alpha, keep = _kernels.substitute(G.alpha, image, rule.target.alpha, rule.bmap)
    k = int((keep >= 0).sum())
    dart_map = keep.copy()
    bnd = rule.bmap >= 0
    dart_map[image[bnd]] = k + rule.bmap[bnd]
    return alpha, dart_map


def _is_immersed(G: QuadGMap, pattern: Pattern, image: np.ndarray) -> bool:
    for mask, labels in ((A1 | A2, G.vertex_of), (A0 | A2, G.edge_of)):
        own = _kernels.orbit_labels(pattern.alpha, mask)
        if len(set(labels[image].tolist())) != own.max() + 1:
            return True
    return False


def _sites(G: QuadGMap, rule: Rule, kind: FlipKind) -> list[FlipSite]:
    out = []
    for anchor, img in match(G, rule.source):
        alpha, _ = _substitute(G, rule, img)
        if not _kernels.is_valid_quad(alpha):
            continue
        out.append(FlipSite(kind, anchor, tuple(img.tolist()), _is_immersed(G, rule.source, img)))
    return out


def flip_sites(G: QuadGMap, kind: FlipKind | str) -> list[FlipSite]:
    """All sites of one flip kind, ordered by anchor dart.

    Only interior cells of the patch are removed; the patch boundary may run
    along the surface boundary.  Occurrences whose substitution would not be
    a valid cubication are dropped.
    """
    if isinstance(kind, str):
        kind = FlipKind.parse(kind)
    return _sites(_unmark(G), flip_rule(kind), kind)


def all_flip_sites(G: QuadGMap, max_faces: int | None = None) -> list[FlipSite]:
    out = []
    for kind in FlipKind:
        if max_faces is not None and G.n_faces + kind.face_change > max_faces:
            continue
        out += flip_sites(G, kind)
    return out


def site_at(G: QuadGMap, kind: FlipKind | str, anchor: int) -> FlipSite:
    """The site of ``kind`` anchored at ``anchor``; ValueError if there is none."""
    if isinstance(kind, str):
        kind = FlipKind.parse(kind)
    for s in flip_sites(G, kind):
        if s.anchor == anchor:
            return s
    raise ValueError(f"no {kind.value} site anchored at dart {anchor}")


def _unmark(M):
    return getattr(M, "complex", M)


def _check_site(G: QuadGMap, rule: Rule, image: Sequence[int]) -> np.ndarray:
    img = np.asarray(image, dtype=np.int32)
    pat = rule.source
    if img.shape != (pat.n_darts,) or img.min() < 0 or img.max() >= G.n_darts:
        raise ValueError("site does not fit this complex")
    if len(set(img.tolist())) != len(img):
        raise ValueError("site is not dart-injective")
    for i in range(3):
        t = pat.alpha[i]
        mask = slice(None) if i < 2 else ~pat.is_boundary
        if not np.array_equal(G.alpha[i][img][mask], img[t][mask]):
            raise ValueError("site is not an occurrence of the pattern")
    return img


def substitute_patch(G: QuadGMap, rule: Rule, image: Sequence[int]) -> tuple[QuadGMap, np.ndarray]:
    img = _check_site(G, rule, image)
    alpha, dart_map = _substitute(G, rule, img)
    H = QuadGMap.from_alpha(alpha)
    if not _kernels.is_valid_quad(alpha):
        from .gmap import validate
        raise InvalidComplex(validate(H))
    return H, dart_map


def apply_flip(M, site: FlipSite):
    """Apply a flip to a QuadGMap or a MarkedCubication (same type out)."""
    from .homology import MarkedCubication

    rule = flip_rule(site.kind)
    G = _unmark(M)
    H, dart_map = substitute_patch(G, rule, site.image)
    if not isinstance(M, MarkedCubication):
        return H
    cycles = [reroute_cycle(G, H, rule, site.image, dart_map, rho) for rho in M.reference_cycles]
    return MarkedCubication(H, cycles)


@lru_cache(maxsize=None)
def _reroute_data(rule: Rule):
    """Per-rule tables for :func:`reroute_cycle`."""
    src, tgt = rule.source, rule.target
    s_edge = _kernels.orbit_labels(src.alpha, A0 | A2)
    s_vert = _kernels.orbit_labels(src.alpha, A1 | A2)
    interior = np.ones(s_edge.max() + 1, dtype=bool)
    interior[s_edge[src.is_boundary]] = False
    inner_sides = []
    done = set()
    for d in range(src.n_darts):
        p = int(s_edge[d])
        if interior[p] and p not in done:
            done.add(p)
            inner_sides.append((d, (1 << int(s_vert[d])) ^ (1 << int(s_vert[src.alpha[0, d]]))))

    t_vert = _kernels.orbit_labels(tgt.alpha, A1 | A2)
    t_edge = _kernels.orbit_labels(tgt.alpha, A0 | A2)
    vert_image = {}
    for d in np.flatnonzero(src.is_boundary):
        vert_image.setdefault(int(s_vert[d]), int(t_vert[rule.bmap[d]]))

    # target edges, interior ones first, as vertex-incidence columns
    t_int = np.ones(t_edge.max() + 1, dtype=bool)
    t_int[t_edge[tgt.is_boundary]] = False
    first: dict[int, int] = {}
    for y in range(tgt.n_darts):
        first.setdefault(int(t_edge[y]), y)
    order = sorted(first, key=lambda e: (not t_int[e], e))
    span = gf2.Eliminator()
    for e in order:
        span.add((1 << int(t_vert[first[e]])) ^ (1 << int(t_vert[tgt.alpha[0, first[e]]])))
    return inner_sides, vert_image, span, [first[e] for e in order]


def reroute_cycle(G: QuadGMap, H: QuadGMap, rule: Rule, image: Sequence[int],
                  dart_map: np.ndarray, rho: frozenset[int]) -> frozenset[int]:
    """Carry an edge cycle of G across a substitution.

    Kept edges map directly.  The part running through removed edges is
    replaced by a chain of replacement edges with the same endpoints,
    computed on the patch itself so that immersed patches are handled too.
    """
    inner_sides, vert_image, span, reps = _reroute_data(rule)
    edge_of = G.edge_of
    # removed part of rho, pulled back to the source patch, and its boundary
    removed_bd = 0
    for d, ends in inner_sides:
        if int(edge_of[image[d]]) in rho:
            removed_bd ^= ends
    target_bd = 0
    for u in gf2.bits(removed_bd):
        if u not in vert_image:
            raise RuntimeError("reference cycle is not closed inside the patch")
        target_bd ^= 1 << vert_image[u]
    combo = span.solve(target_bd)
    if combo is None:
        raise RuntimeError("could not reroute reference cycle through the new patch")

    k = H.n_darts - rule.target.n_darts
    h_edge = H.edge_of
    out: set[int] = set()
    kept = dart_map >= 0
    for e in rho:
        mapped = dart_map[(edge_of == e) & kept]
        if len(mapped):
            out ^= {int(h_edge[mapped[0]])}
    for i in gf2.bits(combo):
        out ^= {int(h_edge[k + reps[i]])}
    return frozenset(out)


def _move(G: QuadGMap, rule: Rule, image) -> QuadGMap:
    H, _ = substitute_patch(G, rule, image)
    return H


def hexagon_sites(G: QuadGMap) -> list[tuple[int, np.ndarray]]:
    """Pairs of squares sharing an edge (the diameter of their hexagon)."""
    return match(_unmark(G), slide_rule(1).source)


def diagonal_slide(G: QuadGMap, site: int | Sequence[int], shift: int = 1) -> QuadGMap:
    """Exchange the shared edge of two squares for another diameter of their hexagon.

    ``site`` is an anchor from :func:`hexagon_sites` or an explicit image;
    ``shift`` (1 or 2) picks which of the two other diameters is used.
    """
    G = _unmark(G)
    rule = slide_rule(shift)
    return _move(G, rule, _resolve(G, rule.source, site))


def degree2_sites(G: QuadGMap) -> list[tuple[int, np.ndarray]]:
    """Interior degree-2 vertices whose two squares form a quadrilateral."""
    return match(_unmark(G), rotation_rule().source)


def diagonal_rotation(G: QuadGMap, site: int | Sequence[int]) -> QuadGMap:
    """Reconnect a degree-2 vertex to the other two corners of its quadrilateral."""
    G = _unmark(G)
    rule = rotation_rule()
    return _move(G, rule, _resolve(G, rule.source, site))


def _resolve(G: QuadGMap, pattern: Pattern, site) -> np.ndarray:
    if np.ndim(site) == 0:
        anchors, images = _kernels.match_pattern(pattern.alpha, *pattern.steps, G.alpha)
        hit = np.flatnonzero(anchors == int(site))
        if len(hit) == 0:
            raise ValueError(f"no {pattern.name} occurrence anchored at dart {site}")
        return images[hit[0]]
    return np.asarray(site, dtype=np.int32)


# ---------------------------------------------------------------- stabilization

@dataclass(frozen=True)
class DualPath:
    """An edge path v0 - v1 - ... - vk with a chosen left side.

    ``start`` is a dart of the first edge at v0 lying in the left square.
    At each inner vertex the path turns through ``turns[i]`` squares of the
    left sector before leaving along the next edge.  The empty path of one
    edge is the trivial case: a small circle around one arc of the curve
    system.
    """

    start: int
    turns: tuple[int, ...] = ()

    @classmethod
    def trivial(cls, dart: int) -> "DualPath":
        return cls(int(dart), ())

    def darts(self, G: QuadGMap) -> list[int]:
        a0, a1, a2 = G.a0, G.a1, G.a2
        out = [self.start]
        for t in self.turns:
            if t < 1:
                raise ValueError("turns must be positive")
            d = int(a1[a0[out[-1]]])
            for _ in range(t - 1):
                if a2[d] == d:
                    raise ValueError("dual path turns across the boundary")
                d = int(a1[a2[d]])
            out.append(d)
        return out


def stabilize(M, path: DualPath | int):
    """Add a circle running around a thin band along ``path``.

    The new circle crosses every arc met by the band twice.  On the
    cubication this cuts the surface open along the k edges of the path
    and sews in a ladder of 2k squares, so F grows by 2k.  A MarkedCubication
    keeps its reference cycles, rerouted across the ladder where the cut
    separated them.
    """
    from .homology import MarkedCubication

    if not isinstance(path, DualPath):
        path = DualPath.trivial(int(path))
    G = _unmark(M)
    darts = path.darts(G)
    k = len(darts)
    a0, a2 = G.a0, G.a2
    edges = [int(G.edge_of[d]) for d in darts]
    for d in darts:
        if a2[d] == d or a2[a0[d]] == a0[d]:
            raise ValueError("dual path runs along the boundary")
    if len(set(edges)) != k:
        raise ValueError("dual path repeats an edge")
    if k > 1:
        verts = [int(G.vertex_of[darts[0]])] + [int(G.vertex_of[a0[d]]) for d in darts]
        if len(set(verts)) != k + 1:
            raise ValueError("dual path must visit distinct vertices")
    n, F = G.n_darts, G.n_faces
    alpha = np.empty((3, n + 16 * k), dtype=np.int32)
    alpha[:, :n] = G.alpha
    for j in range(n, n + 16 * k):
        r = j % 8
        alpha[0, j] = j ^ 1
        alpha[1, j] = j - r + (r + 1) % 8 if r % 2 else j - r + (r + 7) % 8
    new2 = alpha[2]

    def pair(x: int, y: int) -> None:
        new2[x], new2[y] = y, x

    L = [8 * (F + 2 * i) for i in range(k)]
    R = [8 * (F + 2 * i + 1) for i in range(k)]
    for i, d in enumerate(darts):
        e = int(a0[d])
        pair(d, L[i])
        pair(e, L[i] + 1)
        pair(int(a2[d]), R[i])
        pair(int(a2[e]), R[i] + 1)
        pair(L[i] + 4, R[i] + 4)
        pair(L[i] + 5, R[i] + 5)
        if i + 1 < k:
            for S in (L, R):
                pair(S[i] + 2, S[i + 1] + 7)
                pair(S[i] + 3, S[i + 1] + 6)
    pair(L[0] + 6, R[0] + 6)
    pair(L[0] + 7, R[0] + 7)
    pair(L[-1] + 2, R[-1] + 2)
    pair(L[-1] + 3, R[-1] + 3)
    H = QuadGMap.from_alpha(alpha, check=True)
    if not isinstance(M, MarkedCubication):
        return H
    ladder = set(range(n, n + 16 * k))
    cycles = [_carry_across_cut(G, H, rho, darts, ladder) for rho in M.reference_cycles]
    return MarkedCubication(H, cycles)


def _carry_across_cut(G: QuadGMap, H: QuadGMap, rho: frozenset[int], path_darts: list[int],
                      ladder: set[int]) -> frozenset[int]:
    rep = {}
    for d in range(G.n_darts):
        rep.setdefault(int(G.edge_of[d]), d)
    for d in path_darts:
        rep[int(G.edge_of[d])] = d  # the copy on the left of the cut
    chain = 0
    for e in rho:
        chain ^= 1 << int(H.edge_of[rep[e]])
    ends = H.edge_endpoints()
    odd = 0
    for e in gf2.bits(chain):
        odd ^= (1 << int(ends[e, 0])) ^ (1 << int(ends[e, 1]))
    if not odd:
        return frozenset(gf2.bits(chain))
    lad_edges = sorted({int(H.edge_of[d]) for d in ladder})
    cols = [(1 << int(ends[e, 0])) ^ (1 << int(ends[e, 1])) for e in lad_edges]
    x = gf2.solve(cols, odd)
    if x is None:
        raise RuntimeError("could not close a reference cycle across the ladder")
    for i in gf2.bits(x):
        chain ^= 1 << lad_edges[i]
    return frozenset(gf2.bits(chain))
