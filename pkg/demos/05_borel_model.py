# %% [markdown]
# G-complexes, the functor F_X and the Y_n model of the Borel construction.

# %%
from chromavar.equivariant import GComplex, fx_functor, hurewicz_model_check, subdivide_graph, yn_mod_g, yn_set
from chromavar.group_core import dihedral_group, symmetric_group

s3 = symmetric_group(3)
X = GComplex.from_permutation_action(s3)
F = fx_functor(s3, 2, X)
for E, labels in zip(F.base.objects, F.labels):
    print("X^E / C(E) for |E| =", len(E.elements), ":", labels)

# %%
Y = yn_set(s3, 2, 1, X)
print("|Y_1| =", len(Y), " |Y_1/G| =", yn_mod_g(s3, 2, 1, X).n_classes)

# %%
# D4 acting on a square; the edges are subdivided so no element flips an edge
d4 = dihedral_group(4)
square = subdivide_graph(d4, ["1", "2", "3", "4"], [(0, 1), (1, 2), (2, 3), (0, 3)], d4.permutations)
for n in range(3):
    print(f"n={n}: coend of F_X matches Y_n/G:", hurewicz_model_check(d4, 2, n, square))
