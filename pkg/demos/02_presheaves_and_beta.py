# %% [markdown]
# Presheaves on F_p-vector spaces of dimension <= d, and the quotients beta_n.

# %%
from chromavar.linear import FpMatrix
from chromavar.presheaf_core import (
    beta_product_check,
    beta_quotient,
    check_functoriality,
    counit,
    e_d_evaluate,
    i_d_induce,
    id_beta_commute_check,
    representable,
    tower_surjection,
)
from chromavar.group_core import symmetric_group
from chromavar.quillen import rep_presheaf

R = representable(2, 2, 1)
print("hom(-, F_2):", R.sizes, "functorial:", check_functoriality(R).ok)

# %%
F = rep_presheaf(symmetric_group(3), 2, 2)
for n in (2, 1, 0):
    print(f"beta_{n} Rep(-,S3):", beta_quotient(F, n).presheaf.sizes)

# %%
# the tower beta_2 -> beta_1 -> beta_0 commutes with the projections
step = tower_surjection(F, 0)
print("triangle commutes:", beta_quotient(F, 1).projection.then(step) == beta_quotient(F, 0).projection)
print("beta_1 commutes with products:", beta_product_check(F, R, 1))

# %%
# evaluation at F^d and its left adjoint
S = e_d_evaluate(F)
print("carrier of e_d F:", S.carrier)
print("i_d e_d F sizes:", i_d_induce(S).sizes, "counit injective:", counit(F).is_injective())
print("i_d beta_1 = beta_1 i_d:", id_beta_commute_check(S, 1))

# %%
A = FpMatrix.from_rows(2, [[1, 1]])
print("restriction along", A, ":", F.restriction(A))
