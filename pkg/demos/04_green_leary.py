# %% [markdown]
# Green-Leary categories A_n(G): the colimit of hom(-, W) over A_n(G)
# against beta_n Rep(-, G).

# %%
from chromavar.group_core import dihedral_group, symmetric_group
from chromavar.quillen import build_green_leary_category, build_quillen_category, compare_gl_beta, gl_colimit_presheaf

for G in (symmetric_group(3), dihedral_group(4)):
    Q = build_quillen_category(G, 2)
    for n in (1, 2):
        A = build_green_leary_category(G, 2, n)
        print(f"{G.name}: |A_p| = {Q.n_morphisms()}, |A_{n}| = {A.n_morphisms()}, "
              f"colimit {gl_colimit_presheaf(G, 2, n, 2).sizes}, agrees: {compare_gl_beta(G, 2, n, 2)}")
