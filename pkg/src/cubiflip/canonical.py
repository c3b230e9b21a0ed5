"""Relabeling-invariant codes for connected maps."""

from __future__ import annotations

import numpy as np

from . import _kernels
from .gmap import QuadGMap


def _start_darts(G: QuadGMap) -> np.ndarray:
    # any isomorphism-invariant dart statistic works; vertex size is cheap and selective
    key = np.bincount(G.vertex_of)[G.vertex_of] * 2 + (G.a2 != np.arange(G.n_darts))
    return np.flatnonzero(key == key.min()).astype(np.int32)


def canonical_code(G: QuadGMap) -> bytes:
    """Least breadth-first transcript over all start darts, as bytes.

    Two connected maps have equal codes exactly when they are isomorphic
    (dart bijections commuting with a0, a1, a2, orientation reversal
    included).
    """
    n = G.n_darts
    if n == 0:
        raise ValueError("empty complex")
    transcript = _kernels.canonical_transcript(G.alpha, _start_darts(G))
    if transcript.size == 0:
        raise ValueError("complex is not connected")
    dtype = np.uint8 if n <= 256 else np.uint16 if n <= 65536 else np.uint32
    return n.to_bytes(4, "little") + transcript.astype(dtype).tobytes()


def is_isomorphic(G: QuadGMap, H: QuadGMap) -> bool:
    if G.n_darts != H.n_darts:
        return False
    return canonical_code(G) == canonical_code(H)


def from_code(code: bytes) -> QuadGMap:
    """Rebuild the map whose darts are numbered as in the transcript."""
    n = int.from_bytes(code[:4], "little")
    dtype = np.uint8 if n <= 256 else np.uint16 if n <= 65536 else np.uint32
    t = np.frombuffer(code[4:], dtype=dtype).astype(np.int32).reshape(n, 3)
    return QuadGMap.from_alpha(np.ascontiguousarray(t.T))
