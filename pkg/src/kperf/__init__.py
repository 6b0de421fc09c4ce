"""Exact checks for localization along endomorphisms, Adams operations on
presented lambda-rings, and Frobenius perfection of truncated polynomial
algebras."""

__version__ = "0.1.0"

from .abelian import (
    FGAbelianGroup,
    GroupElement,
    GroupHom,
    IntMatrix,
    cokernel,
    cyclic_group,
    element_equal,
    free_group,
    group_from_relations,
    image,
    kernel,
    smith_normal_form,
    torsion_subgroup,
)
from .lambda_ring import (
    LambdaRing,
    adams,
    gamma,
    gamma_filtration,
    lambda_series,
    load_lambda_ring,
    verify_graded_adams,
    verify_prop_lambda,
)
from .localization import (
    DirectLimit,
    colim_equal,
    comparison_map,
    lemell_check,
    localize,
)
from .perfection import (
    KGroupDatum,
    TruncatedPolyAlgebra,
    units_group,
    verify_k0_splitting,
    verify_main_theorem_k1,
    verify_negative_k_scaling,
    verify_ptorsion_remark,
)
