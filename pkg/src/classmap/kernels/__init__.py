"""Kernel backend selection: compiled extension if available, else pure Python.

Set CLASSMAP_PURE_PYTHON=1 to force the fallback (used by the benchmark and
the backend-parity tests). The box/census wrappers below also route any call
whose intermediate values could overflow int64 to the pure backend.
"""

from __future__ import annotations

import os

from . import pykernels

_INT64_SAFE = 1 << 62

if os.environ.get("CLASSMAP_PURE_PYTHON"):
    _impl = pykernels
else:
    try:
        from . import _ckernels as _impl  # type: ignore[attr-defined]
    except ImportError:
        _impl = pykernels

BACKEND = _impl.BACKEND

class_number_counts = _impl.class_number_counts
dirichlet_class_number = _impl.dirichlet_class_number
dirichlet_class_numbers = _impl.dirichlet_class_numbers
poly_value = pykernels.poly_value


def box_value_bound(a4: int, a6: int, n: int, y_limit: int) -> int:
    """Upper bound for |G_n| over (0, Y]^2, in exact arithmetic."""
    u_max = y_limit + n * y_limit
    return y_limit * (u_max**3 + abs(a4) * u_max * y_limit**2 + abs(a6) * y_limit**3)


def squarefree_box_count_band(a4, a6, n, y_limit, m, a0, b0, b_start, b_end):
    if _impl is not pykernels and box_value_bound(a4, a6, n, y_limit) < _INT64_SAFE:
        return _impl.squarefree_box_count_band(a4, a6, n, y_limit, m, a0, b0,
                                               b_start, b_end)
    return pykernels.squarefree_box_count_band(a4, a6, n, y_limit, m, a0, b0,
                                               b_start, b_end)


def census_band(a4, a6, n, y_limit, y_start, y_end, a0_torsion, eps_prime,
                lower_const):
    safe = box_value_bound(a4, a6, n, y_limit) < _INT64_SAFE
    if a0_torsion is not None:
        safe = safe and abs(a0_torsion) * y_limit**2 < _INT64_SAFE
    if _impl is not pykernels and safe:
        return _impl.census_band(a4, a6, n, y_limit, y_start, y_end,
                                 a0_torsion, eps_prime, lower_const)
    return pykernels.census_band(a4, a6, n, y_limit, y_start, y_end,
                                 a0_torsion, eps_prime, lower_const)
