"""Mod-2 homology of cubications and the flip invariant j = (j1, j2).

Everything runs on the barycentric-style subdivision that cuts each square
into four: the new vertices are edge midpoints and face centres, the new
edges are half-edges (vertex to midpoint) and spokes (centre to midpoint).
The spokes of all squares together form the mid-curve system, whose class
in H1(surface, boundary; Z/2) is j1.  j2 is the parity of the number of
squares, which is also the number of double points of the mid-curves.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

import numpy as np

from . import _kernels, gf2
from .gmap import A0, A1, A2, BoundarySignature, QuadGMap, boundary_signature, classify_surface


class SubdividedComplex:
    """The 4-fold subdivision of a cubication, with provenance of every cell.

    Vertex ids: original vertices ``0..V-1``, then edge midpoints ``V + e``,
    then face centres ``V + E + f``.  Edge ids: the 2E half-edges (one per
    a2-orbit of darts) followed by the 4F spokes (one per a0-orbit).  Small
    faces are the a1-orbits (square corners).
    """

    def __init__(self, G: QuadGMap):
        self.source = G
        V, E, F = G.counts
        self.counts_original = (V, E, F)
        alpha = G.alpha
        half = _kernels.orbit_labels(alpha, A2)
        spoke = _kernels.orbit_labels(alpha, A0)
        corner = _kernels.orbit_labels(alpha, A1)
        n_half = int(half.max()) + 1
        n_spoke = int(spoke.max()) + 1
        self.n_vertices = V + E + F
        self.n_half_edges = n_half
        self.n_spokes = n_spoke
        self.n_faces = int(corner.max()) + 1
        n_edges = n_half + n_spoke

        ends = np.empty((n_edges, 2), dtype=np.int64)
        ends[half, 0] = G.vertex_of
        ends[half, 1] = V + G.edge_of
        ends[n_half + spoke, 0] = V + E + G.face_of
        ends[n_half + spoke, 1] = V + G.edge_of
        self.edge_ends = ends
        self.edge_kind = np.array(["half"] * n_half + ["spoke"] * n_spoke)
        self.edge_origin = np.empty(n_edges, dtype=np.int64)
        self.edge_origin[half] = G.edge_of
        self.edge_origin[n_half + spoke] = G.face_of

        face_edges = np.empty((self.n_faces, 4), dtype=np.int64)
        d = np.arange(G.n_darts)
        first = d[alpha[1] > d]
        face_edges[corner[first]] = np.stack(
            [half[first], n_half + spoke[first], n_half + spoke[alpha[1][first]], half[alpha[1][first]]], axis=1)
        self.face_edges = face_edges
        self.face_origin = np.empty(self.n_faces, dtype=np.int64)
        self.face_origin[corner] = G.face_of

        bd_edges = np.zeros(E, dtype=bool)
        bd_edges[G.edge_of[G.boundary_darts]] = True
        bd_verts = np.zeros(V, dtype=bool)
        bd_verts[G.vertex_of[G.boundary_darts]] = True
        self.vertex_on_boundary = np.concatenate([bd_verts, bd_edges, np.zeros(F, dtype=bool)])
        self.edge_on_boundary = np.zeros(n_edges, dtype=bool)
        self.edge_on_boundary[:n_half] = bd_edges[self.edge_origin[:n_half]]

    @property
    def n_edges(self) -> int:
        return self.n_half_edges + self.n_spokes

    def vertex_kind(self, v: int) -> str:
        V, E, _ = self.counts_original
        return "vertex" if v < V else "midpoint" if v < V + E else "centre"

    def euler(self) -> int:
        return self.n_vertices - self.n_edges + self.n_faces

    @cached_property
    def rel_edges(self) -> np.ndarray:
        return np.flatnonzero(~self.edge_on_boundary)

    @cached_property
    def rel_vertices(self) -> np.ndarray:
        return np.flatnonzero(~self.vertex_on_boundary)

    def boundary1(self, chain: int, relative: bool = True) -> int:
        """Vertex chain bounding an edge chain (boundary vertices dropped when relative)."""
        out = 0
        for e in gf2.bits(chain):
            u, v = self.edge_ends[e]
            out ^= (1 << int(u)) ^ (1 << int(v))
        if relative:
            for v in gf2.bits(out):
                if self.vertex_on_boundary[v]:
                    out ^= 1 << v
        return out

    def boundary2(self, chain: int, relative: bool = True) -> int:
        out = 0
        for f in gf2.bits(chain):
            for e in self.face_edges[f]:
                out ^= 1 << int(e)
        if relative:
            out &= ~self.boundary_edge_mask
        return out

    @cached_property
    def boundary_edge_mask(self) -> int:
        return gf2.from_bits(np.flatnonzero(self.edge_on_boundary).tolist())

    @cached_property
    def face_columns(self) -> list[int]:
        return [self.boundary2(1 << f) for f in range(self.n_faces)]

    @cached_property
    def face_span(self) -> gf2.Eliminator:
        e = gf2.Eliminator()
        for c in self.face_columns:
            e.add(c)
        return e

    def spokes(self) -> int:
        return ((1 << self.n_spokes) - 1) << self.n_half_edges


def subdivide(G: QuadGMap) -> SubdividedComplex:
    return SubdividedComplex(G)


Chain = int


@dataclass(frozen=True)
class RelH1:
    """H1 of the subdivided surface relative to its boundary, mod 2."""

    complex: SubdividedComplex = field(repr=False)
    dimension: int
    basis: tuple[int, ...]

    def coordinates(self, z: Chain) -> tuple[int, ...]:
        """Coordinates of a relative cycle in :attr:`basis`."""
        S = self.complex
        if S.boundary1(z):
            raise ValueError("chain is not a relative cycle")
        span = gf2.Eliminator()
        for c in S.face_columns:
            span.add(c)
        for b in self.basis:
            span.add(b)
        combo = span.solve(z)
        if combo is None:
            raise RuntimeError("basis does not span the relative cycles")
        m = len(S.face_columns)
        return tuple((combo >> (m + i)) & 1 for i in range(self.dimension))

    def is_zero(self, z: Chain) -> bool:
        return self.complex.face_span.contains(z)


def h1_rel(S: SubdividedComplex | QuadGMap) -> RelH1:
    if isinstance(S, QuadGMap):
        S = subdivide(S)
    cols = [S.boundary1(1 << int(e)) for e in S.rel_edges]
    cycles = [gf2.from_bits(S.rel_edges[gf2.bits(k)].tolist()) for k in gf2.kernel(cols)]
    span = gf2.Eliminator()
    for c in S.face_columns:
        span.add(c)
    basis = [z for z in cycles if span.add(z)]
    rel = RelH1(S, len(basis), tuple(basis))
    chi = S.euler()
    expected = 2 - chi if not S.source.boundary_darts.size else 1 - chi
    if rel.dimension != expected:
        raise RuntimeError(f"relative H1 has dimension {rel.dimension}, expected {expected}")
    return rel


def midcurve_chain(S: SubdividedComplex) -> Chain:
    return S.spokes()


def intersection(S: SubdividedComplex, z: Chain, rho: Iterable[int]) -> int:
    """Mod-2 intersection of a relative 1-cycle of S with an edge cycle of the
    original 1-skeleton.

    z is first moved off the half-edges by adding face boundaries, so that it
    runs on spokes only and meets the original edges at midpoints.
    """
    inner = [int(e) for e in range(S.n_half_edges) if not S.edge_on_boundary[e]]
    pos = {e: i for i, e in enumerate(inner)}

    def restrict(c: int) -> int:
        return gf2.from_bits(pos[e] for e in gf2.bits(c) if e in pos)

    combo = gf2.solve([restrict(c) for c in S.face_columns], restrict(z))
    if combo is None:
        raise ValueError("chain cannot be pushed onto the spokes; not a relative cycle?")
    moved = z ^ S.boundary2(combo)
    V = S.counts_original[0]
    touched = set()
    for e in gf2.bits(moved >> S.n_half_edges):
        touched.add(int(S.edge_ends[S.n_half_edges + e, 1]) - V)
    return sum(1 for e in rho if e in touched) % 2


def _face_boundaries(G: QuadGMap) -> list[int]:
    """Each square's boundary as an edge bit set (a side per a0-pair of darts)."""
    d = np.flatnonzero(np.arange(G.n_darts) < G.a0)
    E = G.counts[1]
    odd = np.bincount(G.face_of[d] * E + G.edge_of[d], minlength=G.n_faces * E) % 2
    out = [0] * G.n_faces
    for k in np.flatnonzero(odd):
        f, e = divmod(int(k), E)
        out[f] |= 1 << e
    return out


def absolute_h1_dimension(G: QuadGMap) -> int:
    V, E, F = G.counts
    chi = V - E + F
    return 2 - chi if G.boundary_darts.size == 0 else 1 - chi


def is_edge_cycle(G: QuadGMap, edges: Iterable[int]) -> bool:
    ends = G.edge_endpoints()[np.fromiter(edges, dtype=np.int64)]
    deg = np.bincount(ends.ravel(), minlength=G.counts[0])
    return not (deg % 2).any()


def default_reference_cycles(G: QuadGMap) -> list[frozenset[int]]:
    """A basis of H1(surface; Z/2) made of edge cycles of the 1-skeleton.

    Fundamental cycles of a breadth-first spanning tree, kept when they are
    independent of the square boundaries and of the cycles kept so far.
    """
    V, E, _ = G.counts
    ends = G.edge_endpoints()
    adj: list[list[int]] = [[] for _ in range(V)]
    for e, (u, v) in enumerate(ends):
        adj[u].append(e)
        adj[v].append(e)
    parent_edge = [-1] * V
    depth = [-1] * V
    depth[0] = 0
    queue = [0]
    tree = set()
    for u in queue:
        for e in adj[u]:
            a, b = ends[e]
            w = b if a == u else a
            if depth[w] < 0:
                depth[w] = depth[u] + 1
                parent_edge[w] = e
                tree.add(e)
                queue.append(int(w))

    def path_to_root(v: int) -> int:
        out = 0
        while parent_edge[v] >= 0:
            e = parent_edge[v]
            out ^= 1 << e
            a, b = ends[e]
            v = int(a if b == v else b)
        return out

    span = gf2.Eliminator()
    for c in _face_boundaries(G):
        span.add(c)
    cycles = []
    for e in range(E):
        if e in tree:
            continue
        u, v = ends[e]
        z = (1 << e) ^ path_to_root(int(u)) ^ path_to_root(int(v))
        if span.add(z):
            cycles.append(frozenset(gf2.bits(z)))
    return cycles


class MarkedCubication:
    """A cubication with reference cycles fixing a basis of H1(surface; Z/2).

    The cycles stand in for a marking: pairing the mid-curve class against
    them determines j1, and flips carry them along.  Cycles may run along
    the surface boundary; pushed slightly inward they meet the mid-curves
    the same number of times.
    """

    def __init__(self, complex: QuadGMap, reference_cycles: Sequence[Iterable[int]] | None = None,
                 *, check: bool = True):
        self.complex = complex
        if reference_cycles is None:
            reference_cycles = default_reference_cycles(complex)
        self.reference_cycles = [frozenset(int(e) for e in z) for z in reference_cycles]
        if check:
            self.check()

    def check(self) -> None:
        G = self.complex
        E = G.counts[1]
        for z in self.reference_cycles:
            if any(e < 0 or e >= E for e in z):
                raise ValueError("reference cycle uses an unknown edge")
            if not is_edge_cycle(G, z):
                raise ValueError("reference cycle is not closed")
        dim = absolute_h1_dimension(G)
        if len(self.reference_cycles) != dim:
            raise ValueError(f"need {dim} reference cycles, got {len(self.reference_cycles)}")
        span = gf2.Eliminator()
        for c in _face_boundaries(G):
            span.add(c)
        for z in self.reference_cycles:
            if not span.add(gf2.from_bits(z)):
                raise ValueError("reference cycles are not independent in homology")

    def __repr__(self) -> str:
        return f"MarkedCubication({self.complex!r}, cycles={len(self.reference_cycles)})"


@dataclass(frozen=True)
class InvariantJ:
    j2: int
    j1_pairings: tuple[int, ...]
    j1_is_zero: bool
    boundary: BoundarySignature

    def __str__(self) -> str:
        bits = "".join(map(str, self.j1_pairings)) or "-"
        return (f"j2={self.j2} j1_zero={'true' if self.j1_is_zero else 'false'} "
                f"pairings={bits} boundary={self.boundary}")


def j1_is_zero(G: QuadGMap) -> bool:
    """Whether the mid-curve system bounds rel boundary (compiled route)."""
    return bool(_kernels.midcurve_bounds(G.alpha))


def j1_is_zero_subdivided(G: QuadGMap) -> bool:
    """Same question answered on an explicit subdivision; slower, kept as a cross-check."""
    S = subdivide(G)
    return S.face_span.contains(midcurve_chain(S))


def j_invariant(M: MarkedCubication | QuadGMap) -> InvariantJ:
    if isinstance(M, QuadGMap):
        M = MarkedCubication(M)
    G = M.complex
    pairings = tuple(len(z) % 2 for z in M.reference_cycles)
    zero = j1_is_zero(G)
    if zero and any(pairings):
        raise RuntimeError("mid-curve class is zero but pairs non-trivially")
    return InvariantJ(G.n_faces % 2, pairings, zero, boundary_signature(G))


@dataclass(frozen=True)
class FlipCertificate:
    """Evidence that a flip leaves j unchanged.

    ``chain`` is a set of small squares of the subdivided model cube whose
    boundary is the sum of the spokes of the removed and inserted patches;
    both patches sit in the cube, so their mid-curve arcs differ by a
    boundary supported in the union of the two disks.
    """

    ok: bool
    chain: tuple[int, ...]
    chain_bounds: bool
    before: InvariantJ
    after: InvariantJ

    def __bool__(self) -> bool:
        return self.ok


@lru_cache(maxsize=None)
def _local_certificate() -> tuple[tuple[int, ...], bool]:
    from .models import cube_sphere

    S = subdivide(cube_sphere())
    target = midcurve_chain(S)
    cols = [S.boundary2(1 << f, relative=False) for f in range(S.n_faces)]
    combo = gf2.solve(cols, target)
    if combo is None:
        return (), False
    return tuple(gf2.bits(combo)), S.boundary2(combo, relative=False) == target


def verify_flip_preserves_j(M: MarkedCubication | QuadGMap, site,
                            before: InvariantJ | None = None) -> FlipCertificate:
    """Apply the flip at ``site`` and compare j and the surface type.

    ``before`` may carry j of ``M`` when checking many sites of one complex.
    """
    from .flips import apply_flip

    if isinstance(M, QuadGMap):
        M = MarkedCubication(M)
    chain, bounds = _local_certificate()
    N = apply_flip(M, site)
    if before is None:
        before = j_invariant(M)
    after = j_invariant(N)
    same = before == after and classify_surface(M.complex) == classify_surface(N.complex)
    return FlipCertificate(bounds and same, chain, bounds, before, after)
