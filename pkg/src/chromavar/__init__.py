"""Finite models of presheaf quotients, Quillen and Green-Leary categories,
coends and equivariant orbit counts, with a verification battery."""

from .battery import Caps, RunConfig, VerificationReport, verify_battery
from .equivariant import (
    GComplex,
    fixed_subcomplex,
    fx_functor,
    hkr_rank,
    hurewicz_model_check,
    pi0,
    yn_mod_g,
    yn_set,
)
from .errors import CapExceededError, ChromavarError, InputError, InternalConsistencyError
from .group_core import (
    ElemAbSubgroup,
    FiniteGroup,
    GroupHom,
    centralizer,
    commuting_p_power_tuples,
    elem_abelian_subgroups,
    enumerate_homs,
    load_group,
    rep_orbits,
)
from .linear import FpMatrix, enumerate_linear_maps
from .presheaf_core import (
    EndMSet,
    FinitePresheaf,
    PresheafMap,
    beta_product_check,
    beta_quotient,
    check_functoriality,
    e_d_evaluate,
    i_d_induce,
    id_beta_commute_check,
    presheaf_iso_check,
    product_presheaf,
    representable,
    tower_surjection,
)
from .quillen import (
    CategoryInstance,
    FiniteSetFunctor,
    build_green_leary_category,
    build_quillen_category,
    coend_evaluate,
    coend_presheaf,
    compare_gl_beta,
    gl_colimit_presheaf,
    rep_presheaf,
)
from .quotient import QuotientWitness

__version__ = "0.1.0"
