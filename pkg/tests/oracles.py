"""Slow, independent reference implementations used to pin expected values.

Nothing here calls into cubiflip beyond reading ``alpha`` arrays, so a bug in
the library cannot hide behind the same bug in its own check.
"""

from __future__ import annotations

from itertools import product


def naive_isomorphic(A, B) -> bool:
    """Try every image of dart 0 and propagate along the involutions."""
    a, b = [list(map(list, X)) for X in (A, B)]
    n = len(a[0])
    if n != len(b[0]):
        return False
    if n == 0:
        return True
    for h in range(n):
        img = {0: h}
        stack = [0]
        ok = True
        while stack and ok:
            d = stack.pop()
            for i in range(3):
                x, y = a[i][d], b[i][img[d]]
                if x in img:
                    if img[x] != y:
                        ok = False
                        break
                else:
                    img[x] = y
                    stack.append(x)
        if ok and len(img) == n and len(set(img.values())) == n:
            return True
    return False


def _orbits(alpha, gens) -> list[int]:
    n = len(alpha[0])
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i in gens:
        for d in range(n):
            ra, rb = find(d), find(alpha[i][d])
            if ra != rb:
                parent[ra] = rb
    return [find(d) for d in range(n)]


def surface_data(alpha) -> tuple[int, bool, int, bool]:
    """(euler, orientable, boundary component count, connected)."""
    alpha = [list(map(int, r)) for r in alpha]
    n = len(alpha[0])
    count = lambda gens: len(set(_orbits(alpha, gens)))  # noqa: E731
    chi = count((1, 2)) - count((0, 2)) + count((0, 1))
    connected = count((0, 1, 2)) == 1
    colour = [None] * n
    orientable = True
    for root in range(n):
        if colour[root] is not None:
            continue
        colour[root] = 0
        stack = [root]
        while stack:
            d = stack.pop()
            for i in range(3):
                x = alpha[i][d]
                if x == d:
                    continue
                if colour[x] is None:
                    colour[x] = 1 - colour[d]
                    stack.append(x)
                elif colour[x] == colour[d]:
                    orientable = False
    # boundary components: orbits of <a0, a1 a2-walk> on boundary darts,
    # found as connected components of the boundary graph
    bd = [d for d in range(n) if alpha[2][d] == d]
    comp = {d: d for d in bd}

    def find(x):
        while comp[x] != x:
            x = comp[x]
        return x

    for d in bd:
        x = alpha[1][alpha[0][d]]
        while alpha[2][x] != x:
            x = alpha[1][alpha[2][x]]
        for y in (alpha[0][d], x):
            r1, r2 = find(d), find(y)
            if r1 != r2:
                comp[r1] = r2
    b = len({find(d) for d in bd})
    return chi, orientable, b, connected


def _matchings(items):
    """All partial matchings of ``items`` as lists of pairs plus unmatched."""
    if not items:
        yield [], []
        return
    first, rest = items[0], items[1:]
    for m, free in _matchings(rest):
        yield m, [first] + free
    for k, other in enumerate(rest):
        for m, free in _matchings(rest[:k] + rest[k + 1:]):
            yield [(first, other)] + m, free


def all_gluings(n_squares: int, closed: bool):
    """Every side pairing of n squares in the standard dart layout.

    Square q owns darts 8q..8q+7; side s is the dart pair (8q+2s, 8q+2s+1).
    Each matched pair of sides is glued in one of two ways; folded edges
    (a side glued to itself) are excluded.
    """
    n = 8 * n_squares
    a0 = [d ^ 1 for d in range(n)]
    a1 = [8 * (d // 8) + ((d % 8 + 1) % 8 if d % 2 else (d % 8 - 1) % 8) for d in range(n)]
    sides = list(range(4 * n_squares))
    for pairs, free in _matchings(sides):
        if closed and free:
            continue
        for twist in product((0, 1), repeat=len(pairs)):
            a2 = list(range(n))
            for (s, t), w in zip(pairs, twist):
                x0, x1 = 2 * s, 2 * s + 1
                y0, y1 = (2 * t, 2 * t + 1) if w else (2 * t + 1, 2 * t)
                a2[x0], a2[y0] = y0, x0
                a2[x1], a2[y1] = y1, x1
            yield [a0, a1, a2]


def count_classes(n_squares: int, want, closed: bool = True) -> int:
    """Isomorphism classes among connected gluings whose surface data satisfy ``want``."""
    reps: list = []
    for alpha in all_gluings(n_squares, closed):
        chi, orientable, b, connected = surface_data(alpha)
        if not connected or not want(chi, orientable, b, alpha):
            continue
        if not any(naive_isomorphic(alpha, r) for r in reps):
            reps.append(alpha)
    return len(reps)
