"""
Cubications and their curves
============================

"""

import numpy as np

from cubiflip.canonical import canonical_code, is_isomorphic
from cubiflip.curves import dual_cubication, extract_curves
from cubiflip.gmap import classify_surface, relabel, validate
from cubiflip.models import cube_sphere, grid_torus, moebius_strip

# the boundary of a cube: 48 darts, three involutions
G = cube_sphere()
print(G.n_darts, G.counts)
print(validate(G).ok, classify_surface(G))

# each square carries two mid-arcs; they close up into the three equators
cs = extract_curves(G)
print(cs)

# one double point per square, and the dual of the arrangement is G again
print(cs.double_point_count == G.n_faces)
print(is_isomorphic(dual_cubication(cs), G))

# shuffling the dart labels does not change the canonical code
H = relabel(G, np.random.default_rng(0).permutation(G.n_darts))
print(canonical_code(H) == canonical_code(G))

# a torus grid: two families of parallel circles
T = grid_torus(2, 3)
print(classify_surface(T))
print(extract_curves(T))

# with boundary the curves may end on it as intervals
M = moebius_strip(3)
print(classify_surface(M), M.counts)
print(extract_curves(M))
print(is_isomorphic(dual_cubication(extract_curves(M)), M))
