# %% [markdown]
# The Quillen category, coends over it, and Rep(-, G).

# %%
from chromavar.group_core import alternating_group
from chromavar.quillen import (
    build_quillen_category,
    coend_presheaf,
    constant_functor,
    quillen_iso_witness,
    rep_presheaf,
)

G = alternating_group(4)
C = build_quillen_category(G, 2)
print(C.name, "objects:", [len(E.elements) for E in C.objects], "morphisms:", C.n_morphisms())

# %%
P = coend_presheaf(constant_functor(C), 3)
print("coend of the point:", P.sizes)
print("Rep(-, A4):       ", rep_presheaf(G, 2, 3).sizes)

# %%
ok, phi = quillen_iso_witness(G, 2, 3)
print("isomorphic:", ok)
for k, comp in enumerate(phi.components):
    print(f"  level {k}:", comp.tolist())
