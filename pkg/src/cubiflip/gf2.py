"""Linear algebra over GF(2) with Python ints as bit vectors.

Bit i of an int is coordinate i.  Sizes here are a few thousand cells at
most, so dense elimination on arbitrary-precision ints is plenty.
"""

from __future__ import annotations

from typing import Iterable, Sequence


def bits(v: int) -> list[int]:
    out = []
    while v:
        low = v & -v
        out.append(low.bit_length() - 1)
        v ^= low
    return out


def from_bits(idx: Iterable[int]) -> int:
    v = 0
    for i in idx:
        v ^= 1 << i
    return v


class Eliminator:
    """An incrementally built span that remembers how each vector was made.

    ``add(v)`` inserts v as generator number ``len(generators)``.  ``reduce``
    and ``solve`` express a vector in terms of the generators.
    """

    def __init__(self) -> None:
        self.pivots: dict[int, tuple[int, int]] = {}  # pivot bit -> (row, combination)
        self.generators: list[int] = []

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def _reduce(self, v: int, combo: int) -> tuple[int, int]:
        while v:
            top = v.bit_length() - 1
            hit = self.pivots.get(top)
            if hit is None:
                break
            v ^= hit[0]
            combo ^= hit[1]
        return v, combo

    def add(self, v: int) -> bool:
        """Append a generator; True when it enlarged the span."""
        k = len(self.generators)
        self.generators.append(v)
        r, combo = self._reduce(v, 1 << k)
        if r:
            self.pivots[r.bit_length() - 1] = (r, combo)
            return True
        return False

    def residue(self, v: int) -> int:
        """Canonical representative of v modulo the span (no pivot bits set)."""
        out = 0
        while v:
            top = v.bit_length() - 1
            hit = self.pivots.get(top)
            if hit is None:
                out ^= 1 << top
                v ^= 1 << top
            else:
                v ^= hit[0]
        return out

    def contains(self, v: int) -> bool:
        return self._reduce(v, 0)[0] == 0

    def solve(self, v: int) -> int | None:
        """Bit set of generators summing to v, or None if v is not in the span."""
        r, combo = self._reduce(v, 0)
        return combo if r == 0 else None


def rank(rows: Iterable[int]) -> int:
    e = Eliminator()
    for r in rows:
        e.add(r)
    return e.rank


def transpose(rows: Sequence[int], n_cols: int) -> list[int]:
    cols = [0] * n_cols
    for i, r in enumerate(rows):
        for j in bits(r):
            cols[j] |= 1 << i
    return cols


def kernel(columns: Sequence[int]) -> list[int]:
    """Basis of {x : sum of columns[i] over bits i of x = 0}."""
    e = Eliminator()
    basis = []
    for c in columns:
        k = len(e.generators)
        r, combo = e._reduce(c, 1 << k)
        e.generators.append(c)
        if r:
            e.pivots[r.bit_length() - 1] = (r, combo)
        else:
            basis.append(combo)
    return basis


def solve(columns: Sequence[int], target: int) -> int | None:
    """Some x with ``columns @ x == target``, or None."""
    e = Eliminator()
    for c in columns:
        e.add(c)
    return e.solve(target)
