"""
Searching for flip paths
========================

"""

from cubiflip.flips import DualPath, stabilize
from cubiflip.models import beak_sphere, cube_sphere, grid_torus, pillow_sphere
from cubiflip.search import Budget, flip_path, realize_diagonal_as_flips, replay

# pillow (2 squares) to cube (6 squares)
res = flip_path(pillow_sphere(), cube_sphere(), Budget(14))
print(res)
for step in res.sequence:
    print(" ", step)
print(replay(pillow_sphere(), res.sequence).counts)

# the parity of the number of squares cannot change
try:
    flip_path(beak_sphere(), pillow_sphere())
except ValueError as ex:
    print("refused:", ex)

# neither can the class of the mid-curve
try:
    flip_path(grid_torus(1, 2), grid_torus(2, 2))
except ValueError as ex:
    print("refused:", ex)

# a complex and its stabilization are joined by flips
C = grid_torus(2, 2)
print(flip_path(C, stabilize(C, DualPath.trivial(0))))

# diagonal slide and rotation, both as flip sequences
for kind in ("slide", "rotation"):
    r = realize_diagonal_as_flips(kind)
    print(kind, r.result, r.matches)
