# %% [markdown]
# Orbit counts of commuting p-power tuples with fixed components, compared
# with a Burnside count.

# %%
from chromavar.battery import burnside_rank
from chromavar.equivariant import GComplex, hkr_rank
from chromavar.group_core import alternating_group, dihedral_group, quaternion_group, symmetric_group

for G in (symmetric_group(3), dihedral_group(4), quaternion_group(), alternating_group(4)):
    pt = GComplex.point(G)
    ranks = [hkr_rank(G, 2, n, pt) for n in range(3)]
    oracle = [burnside_rank(G, 2, n, pt) for n in range(3)]
    print(f"{G.name}: ranks {ranks}, Burnside {oracle}")
