# %% [markdown]
# Finite groups, elementary abelian subgroups and commuting tuples.

# %%
from chromavar.group_core import (
    centralizer,
    dihedral_group,
    elem_abelian_subgroups,
    enumerate_homs,
    load_group,
    quaternion_group,
    rep_orbits,
)

s3 = load_group({"name": "S3", "generators": [[2, 1, 3], [2, 3, 1]]})
print(s3, "elements:", s3.labels)

# %%
# centralizer of a transposition
t = s3.labels.index("(1 2)")
print("C(1 2) =", sorted(s3.labels[x] for x in centralizer(s3, {t})))

# %%
for G in (s3, dihedral_group(4), quaternion_group()):
    subs = elem_abelian_subgroups(G, 2)
    print(G.name, "ranks of elementary abelian 2-subgroups:", [E.rank for E in subs])

# %%
# homomorphisms F_2^2 -> S3 are commuting pairs of elements with x^2 = 1
homs = enumerate_homs(2, 2, s3)
print(len(homs), "homs;", rep_orbits(2, 2, s3).n_classes, "up to conjugacy")
