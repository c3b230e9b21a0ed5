"""
Flips and the invariant j
=========================

"""

from cubiflip.flips import FlipKind, all_flip_sites, apply_flip, flip_sites, stabilize
from cubiflip.homology import MarkedCubication, h1_rel, j_invariant, verify_flip_preserves_j
from cubiflip.models import cube_sphere, grid_torus

# sites of every kind on the cube
G = cube_sphere()
for kind in FlipKind:
    print(kind.value, len(flip_sites(G, kind)))

# expanding a square adds four, and j does not move
M = MarkedCubication(G)
site = flip_sites(G, FlipKind.B1_expand)[0]
N = apply_flip(M, site)
print(N.complex.n_faces, j_invariant(M), j_invariant(N), sep="\n")

# the three torus witnesses land in three different classes
for a, b in [(1, 1), (1, 2), (2, 2)]:
    print(f"T{a}{b}", j_invariant(grid_torus(a, b)))

# relative H1 of the torus is 2-dimensional, so there are two pairings
T = MarkedCubication(grid_torus(2, 2))
print(h1_rel(T.complex).dimension, len(T.reference_cycles))

# every flip of T keeps j, and each comes with a local bounding chain
j0 = j_invariant(T)
certs = [verify_flip_preserves_j(T, s, j0) for s in all_flip_sites(T.complex)]
print(len(certs), all(certs))

# a trivial stabilization adds a small circle: two squares, same j
S = stabilize(T, 0)
print(S.complex.n_faces, j_invariant(S))
