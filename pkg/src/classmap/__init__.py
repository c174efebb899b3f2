"""classmap: class-group valued maps from elliptic curve Mordell-Weil groups.

Exact arithmetic on positive definite binary quadratic forms, elliptic curve
points and canonical heights with rigorous error bounds, the discriminant
family map Phi_{u,v} with its cube witnesses, effective class number lower
bounds, and square-free sieving over (u, v) boxes.
"""

__version__ = "0.1.0"

from .quadform import (  # noqa: F401
    QuadForm,
    BhargavaCube,
    ClassGroupTable,
    class_group_structure,
    class_number,
    compose,
    cube_associated_forms,
    is_fundamental_discriminant,
    kronecker_symbol,
    principal_form,
    reduce_form,
)
