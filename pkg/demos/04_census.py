"""
A small census
==============

"""

from cubiflip.search import Budget, census, layer_codes

# how many sphere cubications there are with F squares
for F in range(1, 6):
    print(F, len(layer_codes("sphere", F)))

# they fall into two flip classes, one per parity
r = census("sphere", 5, Budget(13))
print(r)

# the torus splits further by the class of the mid-curve
r = census("torus", 4, Budget(12))
print(r)
print(r.components_by_invariant())

# a disk with a prescribed square boundary
r = census("disk", 5, Budget(13), prescribed_boundary="4")
print(r.lines()[:3])
