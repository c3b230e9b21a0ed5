"""Catalog of standard cubications."""

from __future__ import annotations

from .gmap import QuadGMap, SquareGluing, from_faces


def _grid(m: int, n: int, *, wrap_rows: bool = False, wrap_cols: bool = False,
          twist_cols: bool = False) -> QuadGMap:
    """m rows by n columns of squares; sides 0..3 are bottom, right, top, left."""
    if m < 1 or n < 1:
        raise ValueError("grid dimensions must be positive")
    b = SquareGluing(m * n)
    q = lambda i, j: i * n + j  # noqa: E731
    for i in range(m):
        for j in range(n):
            if j + 1 < n:
                b.glue(q(i, j), 1, q(i, j + 1), 3)
            if i + 1 < m:
                b.glue(q(i, j), 2, q(i + 1, j), 0)
        if wrap_cols:
            if twist_cols:
                b.glue(q(i, n - 1), 1, q(m - 1 - i, 0), 3, twisted=True)
            else:
                b.glue(q(i, n - 1), 1, q(i, 0), 3)
    if wrap_rows:
        for j in range(n):
            b.glue(q(m - 1, j), 2, q(0, j), 0)
    return b.build()


def cube_sphere() -> QuadGMap:
    """Boundary of the 3-cube; vertex labels are the binary coordinates xyz."""
    return from_faces(CUBE_FACES)


# bottom, top, front, back, left, right
CUBE_FACES = [(0, 1, 3, 2), (4, 6, 7, 5), (0, 4, 5, 1), (2, 3, 7, 6), (0, 2, 6, 4), (1, 5, 7, 3)]


def pillow_sphere() -> QuadGMap:
    return from_faces([(0, 1, 2, 3), (0, 3, 2, 1)])


def beak_sphere() -> QuadGMap:
    """One square whose sides are folded together in adjacent pairs (F = 1)."""
    return SquareGluing(1).glue(0, 0, 0, 1).glue(0, 2, 0, 3).build()


def grid_torus(m: int, n: int) -> QuadGMap:
    return _grid(m, n, wrap_rows=True, wrap_cols=True)


def klein_grid(m: int, n: int) -> QuadGMap:
    return _grid(m, n, wrap_rows=True, wrap_cols=True, twist_cols=True)


def rp2_min() -> QuadGMap:
    """One square with antipodal sides identified."""
    return SquareGluing(1).glue(0, 0, 0, 2, twisted=True).glue(0, 1, 0, 3, twisted=True).build()


def disk_grid(m: int, n: int) -> QuadGMap:
    return _grid(m, n)


def annulus_grid(m: int, n: int) -> QuadGMap:
    """m rows around a cylinder of circumference n."""
    return _grid(m, n, wrap_cols=True)


def moebius_strip(n: int) -> QuadGMap:
    return _grid(1, n, wrap_cols=True, twist_cols=True)


MODELS = {
    "cube_sphere": cube_sphere,
    "pillow_sphere": pillow_sphere,
    "beak_sphere": beak_sphere,
    "grid_torus": grid_torus,
    "klein_grid": klein_grid,
    "rp2_min": rp2_min,
    "disk_grid": disk_grid,
    "annulus_grid": annulus_grid,
    "moebius_strip": moebius_strip,
}


def standard_model(name: str, *params: int) -> QuadGMap:
    try:
        factory = MODELS[name]
    except KeyError:
        raise ValueError(f"unknown model {name!r}; choose from {sorted(MODELS)}") from None
    if any(p < 1 for p in params):
        raise ValueError("model parameters must be positive")
    return factory(*params)
