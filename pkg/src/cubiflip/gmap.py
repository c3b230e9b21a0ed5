"""Quadrangulated surfaces as 2-dimensional generalized maps.

A dart is a (vertex, edge, face) flag.  ``a0`` moves to the other vertex of
the same edge side, ``a1`` to the other edge at the same face corner, ``a2``
across the edge into the neighbouring face; ``a2(d) == d`` marks a dart on
the surface boundary.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from . import _kernels

A0, A1, A2 = 1, 2, 4


class InvalidComplex(ValueError):
    """Raised when a map fails validation; ``report`` lists the violations."""

    def __init__(self, report: "ValidationReport"):
        super().__init__("; ".join(report.violations))
        self.report = report


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class SurfaceClass:
    euler: int
    orientable: bool
    boundary_count: int
    genus: int

    @property
    def name(self) -> str:
        g, b = self.genus, self.boundary_count
        if self.orientable:
            known = {(0, 0): "sphere", (1, 0): "torus", (0, 1): "disk", (0, 2): "annulus"}
            if (g, b) in known:
                return known[g, b]
            base = f"orientable genus-{g} surface"
        else:
            known = {(1, 0): "projective plane", (2, 0): "Klein bottle", (1, 1): "Moebius strip"}
            if (g, b) in known:
                return known[g, b]
            base = f"non-orientable genus-{g} surface"
        return base if b == 0 else f"{base} with {b} boundary components"

    def __str__(self) -> str:
        kind = "orientable" if self.orientable else "non-orientable"
        return f"{self.name} {kind} χ={self.euler} b={self.boundary_count}"


@dataclass(frozen=True)
class BoundarySignature:
    """Edge counts of the boundary polygons, sorted.

    ``cycles`` holds the boundary edge ids of each polygon in traversal order;
    it is kept for inspection and is not part of equality.
    """

    edge_counts: tuple[int, ...] = ()
    cycles: tuple[tuple[int, ...], ...] = field(default=(), compare=False)

    def __str__(self) -> str:
        return ",".join(map(str, self.edge_counts)) if self.edge_counts else "none"

    @classmethod
    def parse(cls, text: str) -> "BoundarySignature":
        text = text.strip()
        if text in ("", "none"):
            return cls()
        return cls(tuple(sorted(int(t) for t in text.split(","))))


class QuadGMap:
    """A cubication of a compact surface, as three dart involutions.

    Instances are immutable.  Use :func:`validate` (or ``check=True``) to test
    the generalized-map axioms; most library functions assume a valid map.
    """

    def __init__(self, a0: Sequence[int], a1: Sequence[int], a2: Sequence[int], *, check: bool = True):
        alpha = np.array([a0, a1, a2], dtype=np.int32)
        if alpha.ndim != 2:
            raise ValueError("involutions must be flat sequences of equal length")
        self._init(alpha, check)

    @classmethod
    def from_alpha(cls, alpha: np.ndarray, *, check: bool = False) -> "QuadGMap":
        self = cls.__new__(cls)
        self._init(np.ascontiguousarray(alpha, dtype=np.int32), check)
        return self

    def _init(self, alpha: np.ndarray, check: bool) -> None:
        alpha.setflags(write=False)
        self.alpha = alpha
        if check:
            report = validate(self)
            if not report:
                raise InvalidComplex(report)

    @property
    def n_darts(self) -> int:
        return self.alpha.shape[1]

    @property
    def a0(self) -> np.ndarray:
        return self.alpha[0]

    @property
    def a1(self) -> np.ndarray:
        return self.alpha[1]

    @property
    def a2(self) -> np.ndarray:
        return self.alpha[2]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, QuadGMap) and np.array_equal(self.alpha, other.alpha)

    def __hash__(self) -> int:
        return hash(self.alpha.tobytes())

    def __repr__(self) -> str:
        v, e, f = self.counts
        return f"QuadGMap(darts={self.n_darts}, V={v}, E={e}, F={f})"

    @cached_property
    def vertex_of(self) -> np.ndarray:
        return _kernels.orbit_labels(self.alpha, A1 | A2)

    @cached_property
    def edge_of(self) -> np.ndarray:
        return _kernels.orbit_labels(self.alpha, A0 | A2)

    @cached_property
    def face_of(self) -> np.ndarray:
        return _kernels.orbit_labels(self.alpha, A0 | A1)

    @cached_property
    def counts(self) -> tuple[int, int, int]:
        return tuple(int(lab.max()) + 1 if self.n_darts else 0
                     for lab in (self.vertex_of, self.edge_of, self.face_of))

    @property
    def n_faces(self) -> int:
        return self.n_darts // 8

    @cached_property
    def boundary_darts(self) -> np.ndarray:
        return np.flatnonzero(self.a2 == np.arange(self.n_darts))

    @cached_property
    def vertex_degree(self) -> np.ndarray:
        """Degree of each vertex (edge ends), indexed by vertex id."""
        sizes = np.bincount(self.vertex_of)
        closed = np.ones(len(sizes), dtype=bool)
        closed[self.vertex_of[self.boundary_darts]] = False
        # closed orbit of 2k darts has degree k; an open one of 2k darts has k + 1
        return np.where(closed, sizes // 2, sizes // 2 + 1)

    def is_connected(self) -> bool:
        return self.n_darts > 0 and not _kernels.orbit_labels(self.alpha, A0 | A1 | A2).any()

    def face_cycle(self, d: int) -> list[int]:
        """The 8 darts of d's face, alternating a0, a1 from d."""
        out = [d]
        for k in range(7):
            out.append(int(self.alpha[k % 2, out[-1]]))
        return out

    def opposite(self, d: int) -> int:
        """Dart on the opposite side of the same face (a1 a0 a1 a0)."""
        a0, a1 = self.a0, self.a1
        return int(a1[a0[a1[a0[d]]]])

    def edge_endpoints(self) -> np.ndarray:
        """``(E, 2)`` array of vertex ids at the two ends of each edge."""
        ends = np.empty((self.counts[1], 2), dtype=np.int64)
        _, first = np.unique(self.edge_of, return_index=True)
        ends[:, 0] = self.vertex_of[first]
        ends[:, 1] = self.vertex_of[self.a0[first]]
        return ends

    @cached_property
    def boundary_edges(self) -> frozenset[int]:
        return frozenset(int(e) for e in self.edge_of[self.boundary_darts])


def validate(G: QuadGMap) -> ValidationReport:
    alpha = G.alpha
    n = alpha.shape[1]
    idx = np.arange(n)
    problems: list[str] = []
    if alpha.shape[0] != 3:
        return ValidationReport(("need exactly three involutions",))
    if n % 8:
        problems.append("dart count not a multiple of 8")
    if ((alpha < 0) | (alpha >= max(n, 1))).any():
        return ValidationReport(tuple(problems) + ("dart index out of range",))
    for i, name in enumerate(("a0", "a1", "a2")):
        if not np.array_equal(alpha[i][alpha[i]], idx):
            problems.append(f"{name} not an involution")
    if problems and any("involution" in p for p in problems):
        return ValidationReport(tuple(problems))
    if (alpha[0] == idx).any():
        problems.append("a0 not fixed-point-free")
    if (alpha[1] == idx).any():
        problems.append("a1 not fixed-point-free")
    if not np.array_equal(alpha[0][alpha[2]], alpha[2][alpha[0]]):
        problems.append("a0∘a2 not an involution")
    elif (alpha[2] == alpha[0]).any():
        problems.append("folded edge (a2 = a0 on an edge side)")
    if not any("fixed-point" in p for p in problems):
        sizes = np.bincount(_kernels.orbit_labels(alpha, A0 | A1))
        if (sizes != 8).any():
            problems.append("non-quad face")
    return ValidationReport(tuple(problems))


def cell_counts(G: QuadGMap) -> tuple[int, int, int]:
    return G.counts


def classify_surface(G: QuadGMap) -> SurfaceClass:
    if not G.is_connected():
        raise ValueError("complex is not connected")
    v, e, f = G.counts
    chi = v - e + f
    b = len(boundary_signature(G).edge_counts)
    orientable = is_orientable(G)
    genus = (2 - chi - b) // 2 if orientable else 2 - chi - b
    return SurfaceClass(chi, orientable, b, genus)


def is_orientable(G: QuadGMap) -> bool:
    """Darts 2-colourable so that every involution swaps colours (when it moves a dart)."""
    return bool(_kernels.two_colourable(G.alpha))


def boundary_signature(G: QuadGMap) -> BoundarySignature:
    a0, a1, a2 = (G.alpha[i] for i in range(3))
    seen: set[int] = set()
    cycles = []
    for d0 in G.boundary_darts:
        d0 = int(d0)
        if d0 in seen:
            continue
        cycle = []
        d = d0
        while True:
            seen.update((d, int(a0[d])))
            cycle.append(int(G.edge_of[d]))
            x = int(a1[a0[d]])
            while a2[x] != x:
                x = int(a1[a2[x]])
            d = x
            if d in seen:
                break
        cycles.append(tuple(cycle))
    counts = tuple(sorted(len(c) for c in cycles))
    return BoundarySignature(counts, tuple(cycles))


def relabel(G: QuadGMap, perm: Sequence[int]) -> QuadGMap:
    """Rename dart d to ``perm[d]``."""
    perm = np.asarray(perm, dtype=np.int32)
    inv = np.empty_like(perm)
    inv[perm] = np.arange(len(perm), dtype=np.int32)
    alpha = perm[G.alpha[:, inv]]
    return QuadGMap.from_alpha(alpha)


def corner_dart(square: int, side: int, corner: int) -> int:
    """Dart of ``square`` on ``side`` at ``corner`` (corner is side or side + 1 mod 4)."""
    if corner % 4 == side:
        return 8 * square + 2 * side
    if corner % 4 == (side + 1) % 4:
        return 8 * square + 2 * side + 1
    raise ValueError(f"corner {corner} is not on side {side}")


class SquareGluing:
    """Builds a map from squares glued side to side.

    Square q has corners 0..3 in cyclic order; side s joins corner s to
    corner s + 1.  ``glue(f, s, g, t)`` identifies side s of f with side t of
    g so that corner s of f meets corner t + 1 of g (the orientation-
    compatible gluing); ``twisted=True`` matches corner s with corner t.
    Sides never glued become boundary.
    """

    def __init__(self, n_squares: int):
        n = 8 * n_squares
        self.n_squares = n_squares
        d = np.arange(n)
        self.a0 = d ^ 1
        self.a1 = np.where(d % 2 == 1, 8 * (d // 8) + (d % 8 + 1) % 8, 8 * (d // 8) + (d % 8 - 1) % 8)
        self.a2 = d.copy()

    def glue(self, f: int, s: int, g: int, t: int, twisted: bool = False) -> "SquareGluing":
        s, t = s % 4, t % 4
        x0, x1 = corner_dart(f, s, s), corner_dart(f, s, s + 1)
        if twisted:
            y0, y1 = corner_dart(g, t, t), corner_dart(g, t, t + 1)
        else:
            y0, y1 = corner_dart(g, t, t + 1), corner_dart(g, t, t)
        self.join(x0, y0)
        self.join(x1, y1)
        return self

    def join(self, x: int, y: int) -> None:
        if self.a2[x] != x or self.a2[y] != y or x == y:
            raise ValueError(f"darts {x}, {y} cannot be glued")
        self.a2[x], self.a2[y] = y, x

    def build(self, check: bool = True) -> QuadGMap:
        return QuadGMap(self.a0, self.a1, self.a2, check=check)


def from_faces(faces: Iterable[Sequence[object]]) -> QuadGMap:
    """Glue squares given by corner vertex labels; shared label pairs are glued.

    Each unordered pair of distinct labels may occur on at most two sides.
    """
    faces = [tuple(f) for f in faces]
    builder = SquareGluing(len(faces))
    sides: dict[frozenset, list[tuple[int, int]]] = {}
    for q, f in enumerate(faces):
        if len(f) != 4:
            raise ValueError("faces must have four corners")
        for s in range(4):
            u, w = f[s], f[(s + 1) % 4]
            if u == w:
                raise ValueError("degenerate side; use SquareGluing")
            sides.setdefault(frozenset((u, w)), []).append((q, s))
    for key, occ in sides.items():
        if len(occ) > 2:
            raise ValueError(f"edge {sorted(key, key=str)} on more than two sides")
        if len(occ) == 2:
            (f, s), (g, t) = occ
            twisted = faces[f][s] == faces[g][t]
            builder.glue(f, s, g, t, twisted=twisted)
    return builder.build()
