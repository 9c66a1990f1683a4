"""Preimages under the spin double cover of small indefinite orthogonal groups.

The package inverts ``Phi: Spin+(p, q) -> SO+(p, q)`` for the signatures
(2,1), (2,2), (3,2) and (4,1) with concrete matrix models, and for any
signature with n <= 10 through a Clifford algebra blade engine.
"""

from .clifford_bases import OneVectorBasis, basis_for, representation_basis, verify_catalog
from .clifford_blades import Multivector, conjugation_matrix, matrix_rep
from .core_linalg import Quaternion, QuatMatrix, theta_h
from .covering_maps import SpinAlgebraElement41, SpinElement, generic_phi, phi, psi_41
from .errors import (
    BasisError,
    GenericityError,
    InvariantError,
    MembershipError,
    SpinCoverError,
    UnsupportedError,
)
from .indefinite_group import (
    GivensFactor,
    Signature,
    givens_decompose,
    givens_embed,
    givens_product,
    is_in_so_plus,
    polar_decompose_n1,
    random_givens_factors,
)
from .inversion import (
    PreimagePair,
    agnostic_invert,
    invert,
    shirokov_invert,
    supported_strategies,
)

__version__ = "0.1.0"

__all__ = [
    "BasisError",
    "GenericityError",
    "GivensFactor",
    "InvariantError",
    "MembershipError",
    "Multivector",
    "OneVectorBasis",
    "PreimagePair",
    "QuatMatrix",
    "Quaternion",
    "Signature",
    "SpinAlgebraElement41",
    "SpinCoverError",
    "SpinElement",
    "UnsupportedError",
    "agnostic_invert",
    "basis_for",
    "conjugation_matrix",
    "generic_phi",
    "givens_decompose",
    "givens_embed",
    "givens_product",
    "invert",
    "is_in_so_plus",
    "matrix_rep",
    "phi",
    "polar_decompose_n1",
    "psi_41",
    "random_givens_factors",
    "representation_basis",
    "shirokov_invert",
    "supported_strategies",
    "theta_h",
]
