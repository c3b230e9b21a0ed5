"""The curve system of a cubication and the dual construction.

Each square carries two arcs joining midpoints of opposite sides; together
they form a family of closed curves and proper arcs with one transverse
double point per square.  The arrangement of those curves, read as a cell
structure, is again a generalized map (vertices are the double points), and
dualizing it gives the cubication back.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import _kernels
from .gmap import A0, A1, A2, QuadGMap, classify_surface


def standardize(G: QuadGMap) -> tuple[QuadGMap, np.ndarray]:
    """Renumber darts so that face q owns darts 8q..8q+7 in cycle order.

    Returns the renumbered map and ``old_of_new``.  Faces keep the order of
    their smallest dart.
    """
    n = G.n_darts
    old_of_new = _kernels.face_order(G.alpha)
    new_of_old = np.empty(n, dtype=np.int64)
    new_of_old[old_of_new] = np.arange(n)
    alpha = new_of_old[G.alpha[:, old_of_new]]
    return QuadGMap.from_alpha(alpha.astype(np.int32)), old_of_new


@dataclass(frozen=True)
class Step:
    """One passage of a curve through a square.

    ``port`` is the dart offset (0..7) where the curve enters, so the side
    crossed on the way in is ``port // 2`` and the way out is the opposite
    side.  ``port`` is -1 only for an interval starting on the boundary, in
    which case the curve enters through side ``side``.
    """

    face: int
    side: int
    port: int

    @property
    def axis(self) -> int:
        return self.side % 2

    @property
    def exit_side(self) -> int:
        return (self.side + 2) % 4


@dataclass(frozen=True)
class Curve:
    kind: str  # "circle" or "interval"
    steps: tuple[Step, ...]

    def __len__(self) -> int:
        return len(self.steps)


class Arrangement:
    """Curves on a surface as a generalized map (b0, b1, b2).

    Vertices (orbits of b1, b2) are the double points, edges (orbits of b0,
    b2) are arcs between them, and faces (orbits of b0, b1) are the
    complementary regions.  A fixed point of b0 is an arc running into the
    boundary of the surface.  ``free_circles`` counts embedded circles with
    no double point at all, which the map cannot carry.
    """

    def __init__(self, b0, b1, b2, free_circles: int = 0):
        self.beta = np.array([b0, b1, b2], dtype=np.int32).reshape(3, -1)
        self.free_circles = int(free_circles)
        n = self.beta.shape[1]
        idx = np.arange(n)
        for i in range(3):
            if n and not np.array_equal(self.beta[i][self.beta[i]], idx):
                raise ValueError(f"b{i} is not an involution")
        if n and (np.any(self.beta[1] == idx) or np.any(self.beta[2] == idx)):
            raise ValueError("b1 and b2 must be fixed-point free")
        if n and not np.array_equal(self.beta[0][self.beta[2]], self.beta[2][self.beta[0]]):
            raise ValueError("b0 and b2 must commute")
        if n:
            sizes = np.bincount(_kernels.orbit_labels(self.beta, A1 | A2))
            if np.any(sizes != 8):
                raise ValueError("every double point must be 4-valent")

    @property
    def n_darts(self) -> int:
        return self.beta.shape[1]

    @property
    def vertex_of(self) -> np.ndarray:
        return _kernels.orbit_labels(self.beta, A1 | A2)

    @property
    def arc_of(self) -> np.ndarray:
        return _kernels.orbit_labels(self.beta, A0 | A2)

    @property
    def region_of(self) -> np.ndarray:
        return _kernels.orbit_labels(self.beta, A0 | A1)

    def endpoints(self) -> int:
        """Number of arc ends lying on the boundary."""
        n = self.n_darts
        return int(np.count_nonzero(self.beta[0] == np.arange(n))) // 2

    def is_connected(self) -> bool:
        return self.n_darts > 0 and not _kernels.orbit_labels(self.beta, A0 | A1 | A2).any()

    @classmethod
    def empty(cls, free_circles: int = 0) -> "Arrangement":
        e = np.empty(0, dtype=np.int32)
        return cls(e, e, e, free_circles)


@dataclass
class CurveSystem:
    components: list[Curve]
    double_point_count: int
    arrangement: Arrangement

    @property
    def circles(self) -> list[Curve]:
        return [c for c in self.components if c.kind == "circle"]

    @property
    def intervals(self) -> list[Curve]:
        return [c for c in self.components if c.kind == "interval"]

    def lines(self) -> list[str]:
        out = [f"{c.kind} len={len(c)}" for c in self.components]
        out.append(f"double_points={self.double_point_count}")
        return out

    def __str__(self) -> str:
        return "\n".join(self.lines())


def _trace(H: QuadGMap) -> list[Curve]:
    """Follow the arcs through a standardized map, intervals first."""
    a2 = H.a2
    F = H.n_faces
    used = np.zeros((F, 2), dtype=bool)
    comps = []

    def walk(face: int, side: int, port: int) -> tuple[list[Step], bool]:
        steps = []
        start = (face, side)
        while True:
            steps.append(Step(face, side, port))
            used[face, side % 2] = True
            out = 8 * face + 2 * ((side + 2) % 4)
            nxt = int(a2[out])
            if nxt == out:
                return steps, False
            face, port = nxt // 8, nxt % 8
            side = port // 2
            if (face, side) == start:
                # back where we began: record how the first step is entered
                steps[0] = Step(start[0], start[1], port)
                return steps, True

    for d in H.boundary_darts:
        d = int(d)
        if d % 2:
            continue
        face, side = d // 8, (d % 8) // 2
        if used[face, side % 2]:
            continue
        steps, closed = walk(face, side, -1)
        comps.append(Curve("interval", tuple(steps)))
    for face in range(F):
        for axis in (0, 1):
            if not used[face, axis]:
                steps, closed = walk(face, axis, 2 * axis)
                if not closed:
                    raise AssertionError("a curve through interior squares ran into the boundary")
                comps.append(Curve("circle", tuple(steps)))
    return comps


def arrangement_from_curves(components: Sequence[Curve], n_double_points: int) -> Arrangement:
    """Rebuild the arrangement from traversal data alone.

    Around each double point the eight darts sit in the usual cyclic order;
    each arc from the exit side of one step to the entry port of the next
    step fixes b0 on two darts.
    """
    n = 8 * n_double_points
    d = np.arange(n)
    b2 = d ^ 1
    r = d % 8
    b1 = np.where(r % 2 == 1, d - r + (r + 1) % 8, d - r + (r + 7) % 8)
    b0 = np.full(n, -1, dtype=np.int64)
    for c in components:
        m = len(c.steps)
        for i, s in enumerate(c.steps):
            out = 8 * s.face + 2 * s.exit_side
            if c.kind == "interval" and i == m - 1:
                b0[out], b0[out + 1] = out, out + 1
                continue
            t = c.steps[(i + 1) % m]
            into = 8 * t.face + t.port
            b0[out], b0[out ^ 1] = into, into ^ 1
            b0[into], b0[into ^ 1] = out, out ^ 1
        if c.kind == "interval":
            s = c.steps[0]
            start = 8 * s.face + 2 * s.side
            b0[start], b0[start + 1] = start, start + 1
    if np.any(b0 < 0):
        raise ValueError("curve data does not cover every square twice")
    return Arrangement(b0, b1, b2)


def extract_curves(G: QuadGMap) -> CurveSystem:
    """Trace the two mid-arcs of every square into curves.

    A curve crosses a square to the opposite side, then crosses the shared
    edge into the next square; it closes up into a circle or stops at the
    boundary as an interval.  Squares are numbered by their smallest dart.
    """
    H, _ = standardize(G)
    comps = _trace(H)
    arr = arrangement_from_curves(comps, H.n_faces)
    return CurveSystem(comps, double_points(arr), arr)


def double_points(A: Arrangement | CurveSystem) -> int:
    if isinstance(A, CurveSystem):
        A = A.arrangement
    if A.n_darts == 0:
        return 0
    return int(A.vertex_of.max()) + 1


def is_admissible(A: Arrangement | CurveSystem) -> bool:
    """Connected image with at least one double point.

    Complementary regions are disks by construction of the map, so the only
    thing left to check is connectedness of the union of curves.
    """
    if isinstance(A, CurveSystem):
        A = A.arrangement
    return A.free_circles == 0 and A.is_connected()


def dual_cubication(A: Arrangement | CurveSystem) -> QuadGMap:
    """One square per double point, glued across the arcs.

    An arc ending on the boundary becomes a boundary edge of the result.
    """
    if isinstance(A, CurveSystem):
        A = A.arrangement
    if not is_admissible(A):
        raise ValueError("arrangement is not admissible")
    b0, b1, b2 = A.beta
    return QuadGMap(b2, b1, b0)


def arrangement_surface(A: Arrangement):
    """Surface carrying the arrangement (same as that of its dual)."""
    return classify_surface(dual_cubication(A))


def arrangement_dot(A: Arrangement | CurveSystem, name: str = "arrangement") -> str:
    """DOT text of the arrangement graph: double points and boundary ends as nodes."""
    comps = None
    if isinstance(A, CurveSystem):
        comps = A.components
        A = A.arrangement
    vert = A.vertex_of
    arc = A.arc_of
    b0 = A.beta[0]
    label = {}
    if comps is not None:
        for k, c in enumerate(comps):
            for s in c.steps:
                label[8 * s.face + 2 * s.exit_side] = k
                label[8 * s.face + 2 * s.side] = k
    lines = [f"graph {name} {{"]
    for v in range(double_points(A)):
        lines.append(f"  p{v} [shape=point];")
    done = set()
    ends = 0
    for d in range(A.n_darts):
        a = int(arc[d])
        if a in done or d % 2:
            continue
        done.add(a)
        e = int(b0[d])
        tag = f" [label=\"c{label[d]}\"]" if d in label else ""
        if e == d:
            lines.append(f"  b{ends} [shape=box,label=\"\"];")
            lines.append(f"  p{vert[d]} -- b{ends}{tag};")
            ends += 1
        else:
            lines.append(f"  p{vert[d]} -- p{vert[e]}{tag};")
    lines.append("}")
    return "\n".join(lines)
